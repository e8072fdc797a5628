// Copyright 2026 The smplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smplab/smp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "smplab/errors.h"

namespace smplab {

MessageDistribution MessageDistribution::uniform(const std::vector<Message> &messages) {
    MessageDistribution d;
    double w = 1.0 / static_cast<double>(messages.size());
    for (Message m : messages) {
        d.outcomes.emplace_back(m, w);
    }
    return d;
}

std::uint64_t CoinSpace::sample(Rng &rng) const {
    if (weights.empty()) {
        return rng.below(size);
    }
    return rng.weighted(weights);
}

std::uint32_t FunctionTable::value(std::size_t i, std::size_t j) const {
    const auto &v = values[i * num_y() + j];
    if (!v.has_value()) {
        throw PromiseViolation(
            "function queried outside its domain at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return *v;
}

bool FunctionTable::total() const {
    return std::all_of(values.begin(), values.end(), [](const auto &v) {
        return v.has_value();
    });
}

void RelationTable::validate() const {
    if (num_outputs == 0 || num_outputs > 64) {
        throw InvalidArgument("relation: output count must be in [1, 64]");
    }
    if (valid.size() != num_x * num_y || mu_weights.size() != num_x * num_y) {
        throw InvalidArgument("relation: table size mismatch");
    }
    std::uint64_t full = num_outputs == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_outputs) - 1;
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < valid.size(); k++) {
        if ((valid[k] & ~full) != 0) {
            throw InvalidArgument("relation: valid set mentions an output beyond num_outputs");
        }
        if (mu_weights[k] > 0 && valid[k] == 0) {
            throw InvalidArgument("relation: empty valid set on the support of mu");
        }
        sum += mu_weights[k];
    }
    if (mu_denominator == 0 || sum != mu_denominator) {
        throw InvalidArgument("relation: mu does not sum to 1");
    }
}

RelationTable RelationTable::from_function(const FunctionTable &f) {
    RelationTable r;
    r.num_x = f.num_x();
    r.num_y = f.num_y();
    r.num_outputs = f.num_outputs;
    r.valid.assign(r.num_x * r.num_y, 0);
    r.mu_weights.assign(r.num_x * r.num_y, 0);
    r.mu_denominator = 0;
    for (std::size_t k = 0; k < f.values.size(); k++) {
        if (f.values[k].has_value()) {
            r.valid[k] = std::uint64_t{1} << *f.values[k];
            r.mu_weights[k] = 1;
            r.mu_denominator++;
        }
    }
    r.validate();
    return r;
}

void check_distribution(const MessageDistribution &d, unsigned bits, const Tolerances &tol, const char *who) {
    double sum = 0;
    for (const auto &[m, w] : d.outcomes) {
        if (w < 0) {
            throw InvalidArgument(std::string(who) + ": negative message probability");
        }
        if (bits < 64 && (m >> bits) != 0) {
            throw InvalidArgument(
                std::string(who) + ": message " + std::to_string(m) + " longer than declared " + std::to_string(bits) +
                " bits");
        }
        sum += w;
    }
    if (std::abs(sum - 1) > tol.distribution_sum) {
        throw InvalidArgument(std::string(who) + ": message distribution sums to " + std::to_string(sum));
    }
}

namespace {

void require_enumerable(const SmpProtocol &p) {
    if (!p.enumerable()) {
        throw InvalidArgument("protocol '" + p.name + "' has no explicit message distributions; use sampling");
    }
}

}  // namespace

double conditional_acceptance(
    const SmpProtocol &p, const Input &x, const Input &y, std::uint64_t coin, const Tolerances &tol) {
    require_enumerable(p);
    MessageDistribution bob = p.bob(y, coin);
    check_distribution(bob, p.bob_message_bits, tol, "bob");
    double acc = 0;
    if (p.is_quantum()) {
        DensityMatrix rho = p.alice_state(x, coin);
        for (const auto &[b, wb] : bob.outcomes) {
            if (wb == 0) {
                continue;
            }
            acc += wb * acceptance_probability(p.referee_measurement(coin, b), rho, tol);
        }
    } else {
        MessageDistribution alice = p.alice(x, coin);
        check_distribution(alice, p.alice_message_bits, tol, "alice");
        std::uint64_t terms = static_cast<std::uint64_t>(alice.outcomes.size()) * bob.outcomes.size();
        if (terms > tol.enumeration_cap) {
            throw CapExceeded("exact evaluation: " + std::to_string(terms) + " message pairs exceed the cap");
        }
        for (const auto &[a, wa] : alice.outcomes) {
            if (wa == 0) {
                continue;
            }
            for (const auto &[b, wb] : bob.outcomes) {
                if (wb == 0) {
                    continue;
                }
                double r = p.referee(coin, a, b);
                if (r < 0 || r > 1) {
                    throw InvalidArgument("referee acceptance probability outside [0, 1]");
                }
                acc += wa * wb * r;
            }
        }
    }
    return std::clamp(acc, 0.0, 1.0);
}

double exact_acceptance(const SmpProtocol &p, const Input &x, const Input &y, const Tolerances &tol) {
    require_enumerable(p);
    if (p.coins.size > tol.enumeration_cap) {
        throw CapExceeded(
            "exact evaluation: coin space of size " + std::to_string(p.coins.size) + " exceeds the enumeration cap");
    }
    double total = 0;
    std::uint64_t terms = 0;
    for (std::uint64_t coin = 0; coin < p.coins.size; coin++) {
        double w = p.coins.weight(coin);
        if (w == 0) {
            continue;
        }
        total += w * conditional_acceptance(p, x, y, coin, tol);
        terms++;
        if (terms > tol.enumeration_cap) {
            throw CapExceeded("exact evaluation: term count exceeds the enumeration cap");
        }
    }
    total = std::clamp(total, 0.0, 1.0);
    return std::pow(total, static_cast<double>(p.repetitions));
}

bool sample_trial(const SmpProtocol &p, const Input &x, const Input &y, Rng &rng, const Tolerances &tol) {
    if (p.trial) {
        return p.trial(x, y, rng);
    }
    require_enumerable(p);
    for (unsigned rep = 0; rep < p.repetitions; rep++) {
        std::uint64_t coin = p.coins.sample(rng);
        MessageDistribution bob = p.bob(y, coin);
        std::vector<double> bw;
        for (const auto &o : bob.outcomes) {
            bw.push_back(o.second);
        }
        Message b = bob.outcomes[rng.weighted(bw)].first;
        double prob;
        if (p.is_quantum()) {
            prob = acceptance_probability(p.referee_measurement(coin, b), p.alice_state(x, coin), tol);
        } else {
            MessageDistribution alice = p.alice(x, coin);
            std::vector<double> aw;
            for (const auto &o : alice.outcomes) {
                aw.push_back(o.second);
            }
            Message a = alice.outcomes[rng.weighted(aw)].first;
            prob = p.referee(coin, a, b);
        }
        if (!rng.bernoulli(prob)) {
            return false;
        }
    }
    return true;
}

SampledAcceptance sampled_acceptance(
    const SmpProtocol &p, const Input &x, const Input &y, std::uint64_t trials, std::uint64_t seed,
    const Tolerances &tol) {
    if (trials == 0) {
        throw InvalidArgument("sampled_acceptance: trials must be positive");
    }
    SampledAcceptance out;
    out.trials = trials;
    for (std::uint64_t t = 0; t < trials; t++) {
        Rng rng(seed, t);
        if (sample_trial(p, x, y, rng, tol)) {
            out.successes++;
        }
    }
    out.estimate = static_cast<double>(out.successes) / static_cast<double>(trials);
    out.interval = wilson_interval(out.successes, trials);
    return out;
}

double worst_case_error(const SmpProtocol &p, const FunctionTable &f, const Tolerances &tol) {
    if (f.num_outputs != 2) {
        throw InvalidArgument("worst_case_error: function must be Boolean");
    }
    double worst = 0;
    for (std::size_t i = 0; i < f.num_x(); i++) {
        for (std::size_t j = 0; j < f.num_y(); j++) {
            if (!f.in_domain(i, j)) {
                continue;
            }
            double acc = exact_acceptance(p, f.alice_inputs[i], f.bob_inputs[j], tol);
            worst = std::max(worst, std::abs(static_cast<double>(f.value(i, j)) - acc));
        }
    }
    return worst;
}

ProtocolCost protocol_cost(const SmpProtocol &p) {
    ProtocolCost c;
    c.alice_quantum = p.is_quantum() || p.alice_qubits > 0;
    c.alice = static_cast<std::uint64_t>(c.alice_quantum ? p.alice_qubits : p.alice_message_bits) * p.repetitions;
    c.bob = static_cast<std::uint64_t>(p.bob_message_bits) * p.repetitions;
    return c;
}

std::uint64_t bits_to_mask(const Input &bits) {
    if (bits.size() > 64) {
        throw InvalidArgument("bitstring longer than 64 bits");
    }
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < bits.size(); k++) {
        if (bits[k] > 1) {
            throw InvalidArgument("bitstring entry is not 0/1");
        }
        m |= static_cast<std::uint64_t>(bits[k]) << k;
    }
    return m;
}

Input mask_to_bits(std::uint64_t mask, unsigned n) {
    Input bits(n);
    for (unsigned k = 0; k < n; k++) {
        bits[k] = static_cast<std::uint32_t>((mask >> k) & 1);
    }
    return bits;
}

}  // namespace smplab
