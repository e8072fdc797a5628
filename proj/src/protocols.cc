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

#include "smplab/protocols.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>

#include "smplab/errors.h"

namespace smplab {

namespace {

std::uint32_t parity(std::uint64_t v) {
    return static_cast<std::uint32_t>(std::popcount(v) & 1);
}

void require_power_of_two(unsigned n, unsigned minimum, const char *what) {
    if (n < minimum || (n & (n - 1)) != 0) {
        throw InvalidArgument(std::string(what) + ": n must be a power of two >= " + std::to_string(minimum));
    }
}

// Smallest c with c^p >= v.
unsigned integer_root_ceil(std::uint64_t v, unsigned p) {
    unsigned c = 0;
    while (true) {
        std::uint64_t pw = 1;
        for (unsigned k = 0; k < p; k++) {
            pw *= c;
        }
        if (pw >= v) {
            return c;
        }
        c++;
    }
}

// Majority of agreements over recovered edges; ties (including no edges) go to a fair coin.
bool majority_vote(unsigned agree, unsigned disagree, Rng &rng) {
    if (agree != disagree) {
        return agree > disagree;
    }
    return rng.bernoulli(0.5);
}

}  // namespace

// ---------------------------------------------------------------------------
// Equality.

FunctionTable equality_function(unsigned n) {
    if (n == 0 || n > 10) {
        throw CapExceeded("equality_function: n must be in [1, 10]");
    }
    FunctionTable f;
    std::uint64_t size = std::uint64_t{1} << n;
    for (std::uint64_t v = 0; v < size; v++) {
        f.alice_inputs.push_back(mask_to_bits(v, n));
        f.bob_inputs.push_back(mask_to_bits(v, n));
    }
    f.values.resize(size * size);
    for (std::uint64_t i = 0; i < size; i++) {
        for (std::uint64_t j = 0; j < size; j++) {
            f.values[i * size + j] = i == j ? 1u : 0u;
        }
    }
    return f;
}

SmpProtocol equality_public(unsigned n, unsigned k) {
    if (n == 0 || n > 62 || k == 0) {
        throw InvalidArgument("equality_public: need 1 <= n <= 62 and k >= 1");
    }
    SmpProtocol p;
    p.name = "eq-public";
    p.coin_mode = CoinMode::kPublic;
    p.coins.size = std::uint64_t{1} << n;
    p.repetitions = k;
    p.alice_message_bits = 1;
    p.bob_message_bits = 1;
    auto inner = [n](const Input &v, std::uint64_t coin) {
        if (v.size() != n) {
            throw InvalidArgument("equality_public: input length mismatch");
        }
        return MessageDistribution::deterministic(parity(bits_to_mask(v) & coin));
    };
    p.alice = inner;
    p.bob = inner;
    p.referee = [](std::uint64_t, Message a, Message b) {
        return a == b ? 1.0 : 0.0;
    };
    return p;
}

SmpProtocol equality_code(unsigned n, const LinearCode &code, unsigned reps) {
    if (code.message_bits() != n) {
        throw InvalidArgument("equality_code: code message length differs from n");
    }
    if (reps == 0) {
        throw InvalidArgument("equality_code: reps must be positive");
    }
    const unsigned rows = code.grid().rows;
    const unsigned cols = code.grid().cols;
    if (static_cast<std::uint64_t>(rows) * cols != code.block_bits()) {
        throw InvalidArgument("equality_code: grid shape does not match the block length");
    }
    if (rows > 31 || cols > 31) {
        throw CapExceeded("equality_code: grid side longer than 31 bits");
    }

    SmpProtocol p;
    p.name = "eq-code";
    p.repetitions = reps;
    p.alice_message_bits = rows + ceil_log2(cols);
    p.bob_message_bits = cols + ceil_log2(rows);

    auto shared = std::make_shared<LinearCode>(code);
    p.alice = [shared, n, rows, cols](const Input &x, std::uint64_t) {
        if (x.size() != n) {
            throw InvalidArgument("equality_code: input length mismatch");
        }
        Codeword w = shared->encode(bits_to_mask(x));
        MessageDistribution d;
        for (unsigned c = 0; c < cols; c++) {
            Message column = 0;
            for (unsigned r = 0; r < rows; r++) {
                column |= static_cast<Message>(grid_cell(*shared, w, r, c)) << r;
            }
            d.outcomes.emplace_back(column | (static_cast<Message>(c) << rows), 1.0 / cols);
        }
        return d;
    };
    p.bob = [shared, n, rows, cols](const Input &y, std::uint64_t) {
        if (y.size() != n) {
            throw InvalidArgument("equality_code: input length mismatch");
        }
        Codeword w = shared->encode(bits_to_mask(y));
        MessageDistribution d;
        for (unsigned r = 0; r < rows; r++) {
            Message row = 0;
            for (unsigned c = 0; c < cols; c++) {
                row |= static_cast<Message>(grid_cell(*shared, w, r, c)) << c;
            }
            d.outcomes.emplace_back(row | (static_cast<Message>(r) << cols), 1.0 / rows);
        }
        return d;
    };
    p.referee = [rows, cols](std::uint64_t, Message a, Message b) {
        Message col = a >> rows;
        Message row = b >> cols;
        if (col >= cols || row >= rows) {
            return 0.0;
        }
        Message alice_bit = (a >> row) & 1;
        Message bob_bit = (b >> col) & 1;
        return alice_bit == bob_bit ? 1.0 : 0.0;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Matching promise problem.

void MatchingInstance::validate() const {
    if (n == 0 || n % 2 != 0) {
        throw InvalidArgument("matching instance: n must be even and positive");
    }
    if (x.size() != n || edges.size() != n / 2 || w.size() != n / 2) {
        throw InvalidArgument("matching instance: size mismatch");
    }
    std::vector<bool> seen(n, false);
    for (const auto &[i, j] : edges) {
        if (i >= n || j >= n || i == j || seen[i] || seen[j]) {
            throw InvalidArgument("matching instance: edges do not form a perfect matching");
        }
        seen[i] = true;
        seen[j] = true;
    }
}

Input MatchingInstance::mx() const {
    Input out(edges.size());
    for (std::size_t e = 0; e < edges.size(); e++) {
        out[e] = x[edges[e].first] ^ x[edges[e].second];
    }
    return out;
}

unsigned MatchingInstance::distance() const {
    Input m = mx();
    unsigned d = 0;
    for (std::size_t e = 0; e < m.size(); e++) {
        d += m[e] != w[e];
    }
    return d;
}

Input MatchingInstance::bob_input() const {
    Input y;
    y.reserve(edges.size() * 2 + w.size());
    for (const auto &[i, j] : edges) {
        y.push_back(i);
        y.push_back(j);
    }
    y.insert(y.end(), w.begin(), w.end());
    return y;
}

MatchingInstance MatchingInstance::from_inputs(unsigned n, const Input &x, const Input &y) {
    MatchingInstance inst;
    inst.n = n;
    inst.x = x;
    if (y.size() != n + n / 2) {
        throw InvalidArgument("matching instance: Bob input has the wrong length");
    }
    for (unsigned e = 0; e < n / 2; e++) {
        inst.edges.emplace_back(y[2 * e], y[2 * e + 1]);
    }
    inst.w.assign(y.begin() + n, y.end());
    inst.validate();
    return inst;
}

std::uint32_t matching_value(const MatchingInstance &inst) {
    inst.validate();
    unsigned d = inst.distance();
    if (6 * d <= inst.n) {
        return 1;
    }
    if (3 * d >= inst.n) {
        return 0;
    }
    throw PromiseViolation(
        "matching instance: distance " + std::to_string(d) + " lies strictly between n/6 and n/3");
}

MatchingInstance random_matching_instance(unsigned n, bool yes, Rng &rng) {
    if (n == 0 || n % 2 != 0) {
        throw InvalidArgument("random_matching_instance: n must be even");
    }
    MatchingInstance inst;
    inst.n = n;
    inst.x.resize(n);
    for (auto &b : inst.x) {
        b = static_cast<std::uint32_t>(rng.below(2));
    }
    std::vector<std::uint32_t> perm = rng.subset(n, n);
    for (unsigned e = 0; e < n / 2; e++) {
        std::uint32_t i = perm[2 * e];
        std::uint32_t j = perm[2 * e + 1];
        inst.edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(inst.edges.begin(), inst.edges.end());
    inst.w = inst.mx();

    unsigned lo = yes ? 0 : (n + 2) / 3;
    unsigned hi = yes ? n / 6 : n / 2;
    unsigned flips = lo + static_cast<unsigned>(rng.below(hi - lo + 1));
    for (std::uint32_t e : rng.subset(n / 2, flips)) {
        inst.w[e] ^= 1;
    }
    return inst;
}

MatchingQcParams default_matching_qc_params(unsigned n) {
    MatchingQcParams p;
    p.subset_size = integer_root_ceil(static_cast<std::uint64_t>(n) * n, 3);
    p.copies = integer_root_ceil(n, 3);
    p.edges_sent = integer_root_ceil(n, 3);
    return p;
}

MatchingTrialStats matching_qc_trial(const MatchingInstance &inst, const MatchingQcParams &params, Rng &rng) {
    const unsigned n = inst.n;
    std::vector<std::uint32_t> subset = rng.subset(n, params.subset_size);
    std::vector<int> position(n, -1);
    for (std::size_t k = 0; k < subset.size(); k++) {
        position[subset[k]] = static_cast<int>(k);
    }

    std::vector<std::uint32_t> inside;
    for (std::uint32_t e = 0; e < inst.edges.size(); e++) {
        if (position[inst.edges[e].first] >= 0 && position[inst.edges[e].second] >= 0) {
            inside.push_back(e);
        }
    }
    MatchingTrialStats stats;
    stats.edges_in_subset = static_cast<unsigned>(inside.size());
    rng.shuffle(inside);
    if (inside.size() > params.edges_sent) {
        inside.resize(params.edges_sent);
    }
    stats.edges_received = static_cast<unsigned>(inside.size());

    Vector psi = phase_state(inst.x, subset);
    std::vector<double> outcome_weights(inside.size() + 1);
    std::vector<int> recovered(inst.edges.size(), -1);
    for (unsigned copy = 0; copy < params.copies && !inside.empty(); copy++) {
        double rest = 1;
        for (std::size_t k = 0; k < inside.size(); k++) {
            const Edge &e = inst.edges[inside[k]];
            outcome_weights[k] = edge_projection_probability(
                psi, static_cast<std::uint32_t>(position[e.first]), static_cast<std::uint32_t>(position[e.second]));
            rest -= outcome_weights[k];
        }
        outcome_weights.back() = std::max(0.0, rest);
        std::size_t outcome = rng.weighted(outcome_weights);
        if (outcome == inside.size()) {
            continue;
        }
        const Edge &e = inst.edges[inside[outcome]];
        auto pi = static_cast<std::uint32_t>(position[e.first]);
        auto pj = static_cast<std::uint32_t>(position[e.second]);
        Vector post = project_onto_edge(psi, pi, pj);
        auto probs = parity_probabilities(post, pi, pj);
        recovered[inside[outcome]] = rng.bernoulli(probs[1]) ? 1 : 0;
    }

    unsigned agree = 0;
    unsigned disagree = 0;
    for (std::size_t e = 0; e < recovered.size(); e++) {
        if (recovered[e] < 0) {
            continue;
        }
        stats.recovered++;
        if (static_cast<std::uint32_t>(recovered[e]) == inst.w[e]) {
            agree++;
        } else {
            disagree++;
        }
    }
    stats.abstained = stats.recovered == 0;
    stats.output = majority_vote(agree, disagree, rng);
    return stats;
}

SmpProtocol matching_qc(unsigned n, const MatchingQcParams &params) {
    require_power_of_two(n, 2, "matching_qc");
    if (params.subset_size < 2 || params.subset_size > n || params.copies == 0) {
        throw InvalidArgument("matching_qc: need 2 <= subset_size <= n and copies >= 1");
    }
    SmpProtocol p;
    p.name = "matching-qc";
    p.coin_mode = CoinMode::kPublic;
    p.coins.size = 0;  // subsets of [n]; sampled inside `trial`
    unsigned index_bits = ceil_log2(params.subset_size);
    p.alice_qubits = params.copies * index_bits;
    p.bob_message_bits = params.edges_sent * (2 * index_bits + 1);
    p.trial = [n, params](const Input &x, const Input &y, Rng &rng) {
        return matching_qc_trial(MatchingInstance::from_inputs(n, x, y), params, rng).output;
    };
    return p;
}

unsigned default_matching_classical_subset(unsigned n, double factor) {
    return static_cast<unsigned>(std::ceil(factor * std::sqrt(static_cast<double>(n))));
}

MatchingTrialStats matching_classical_trial(const MatchingInstance &inst, unsigned subset_size, Rng &rng) {
    std::vector<std::uint32_t> subset = rng.subset(inst.n, subset_size);
    std::vector<bool> in_subset(inst.n, false);
    for (std::uint32_t i : subset) {
        in_subset[i] = true;
    }
    MatchingTrialStats stats;
    unsigned agree = 0;
    unsigned disagree = 0;
    for (std::size_t e = 0; e < inst.edges.size(); e++) {
        const auto &[i, j] = inst.edges[e];
        if (!in_subset[i] || !in_subset[j]) {
            continue;
        }
        stats.edges_in_subset++;
        if ((inst.x[i] ^ inst.x[j]) == inst.w[e]) {
            agree++;
        } else {
            disagree++;
        }
    }
    stats.edges_received = stats.edges_in_subset;
    stats.recovered = stats.edges_in_subset;
    stats.abstained = stats.recovered == 0;
    stats.output = majority_vote(agree, disagree, rng);
    return stats;
}

SmpProtocol matching_classical(unsigned n, unsigned subset_size) {
    if (n == 0 || n % 2 != 0 || subset_size < 2 || subset_size > n) {
        throw InvalidArgument("matching_classical: need even n and 2 <= subset_size <= n");
    }
    SmpProtocol p;
    p.name = "matching-classical";
    p.coin_mode = CoinMode::kPublic;
    p.coins.size = 0;
    unsigned index_bits = ceil_log2(subset_size);
    p.alice_message_bits = subset_size;
    p.bob_message_bits = (subset_size / 2) * (2 * index_bits + 1);
    p.trial = [n, subset_size](const Input &x, const Input &y, Rng &rng) {
        return matching_classical_trial(MatchingInstance::from_inputs(n, x, y), subset_size, rng).output;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Edge measurements.

Vector phase_state(const Input &x, const std::vector<std::uint32_t> &support) {
    Vector psi(static_cast<Eigen::Index>(support.size()));
    double amp = 1.0 / std::sqrt(static_cast<double>(support.size()));
    for (std::size_t k = 0; k < support.size(); k++) {
        psi[static_cast<Eigen::Index>(k)] = x.at(support[k]) ? -amp : amp;
    }
    return psi;
}

double edge_projection_probability(const Vector &psi, std::uint32_t i, std::uint32_t j) {
    return std::norm(psi[i]) + std::norm(psi[j]);
}

Vector project_onto_edge(const Vector &psi, std::uint32_t i, std::uint32_t j) {
    double p = edge_projection_probability(psi, i, j);
    if (p <= 0) {
        throw DegenerateProjection("edge projection has zero probability", 0);
    }
    Vector out = Vector::Zero(psi.size());
    out[i] = psi[i] / std::sqrt(p);
    out[j] = psi[j] / std::sqrt(p);
    return out;
}

std::array<double, 2> parity_probabilities(const Vector &psi, std::uint32_t i, std::uint32_t j) {
    double norm = edge_projection_probability(psi, i, j);
    double plus = std::norm(psi[i] + psi[j]) / 2;
    double minus = std::norm(psi[i] - psi[j]) / 2;
    return {plus / norm, minus / norm};
}

// ---------------------------------------------------------------------------
// Hidden matching.

std::vector<Edge> xor_matching(unsigned n, unsigned k) {
    require_power_of_two(n, 2, "xor_matching");
    if (k == 0 || k >= n) {
        throw InvalidArgument("xor_matching: k must be in [1, n)");
    }
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < n; i++) {
        std::uint32_t j = i ^ k;
        if (i < j) {
            edges.emplace_back(i, j);
        }
    }
    return edges;
}

HiddenMatchingProtocol::HiddenMatchingProtocol(unsigned n) : n_(n) {
    require_power_of_two(n, 4, "hidden_matching");
}

unsigned HiddenMatchingProtocol::alice_qubits() const {
    return static_cast<unsigned>(std::countr_zero(n_));
}

unsigned HiddenMatchingProtocol::bob_message_bits() const {
    return ceil_log2(n_);
}

Vector HiddenMatchingProtocol::alice_state(const Input &x) const {
    if (x.size() != n_) {
        throw InvalidArgument("hidden_matching: input length mismatch");
    }
    std::vector<std::uint32_t> all(n_);
    for (std::uint32_t i = 0; i < n_; i++) {
        all[i] = i;
    }
    return phase_state(x, all);
}

std::vector<std::pair<HiddenMatchingOutput, double>> HiddenMatchingProtocol::output_distribution(
    const Input &x, unsigned k) const {
    Vector psi = alice_state(x);
    std::vector<std::pair<HiddenMatchingOutput, double>> out;
    for (const auto &[i, j] : xor_matching(n_, k)) {
        double pe = edge_projection_probability(psi, i, j);
        if (pe <= 0) {
            continue;
        }
        auto probs = parity_probabilities(project_onto_edge(psi, i, j), i, j);
        for (std::uint32_t bit = 0; bit < 2; bit++) {
            if (probs[bit] > 0) {
                out.push_back({{i, j, bit}, pe * probs[bit]});
            }
        }
    }
    return out;
}

HiddenMatchingOutput HiddenMatchingProtocol::sample(const Input &x, unsigned k, Rng &rng) const {
    Vector psi = alice_state(x);
    std::vector<Edge> edges = xor_matching(n_, k);
    std::vector<double> weights;
    for (const auto &[i, j] : edges) {
        weights.push_back(edge_projection_probability(psi, i, j));
    }
    const Edge &e = edges[rng.weighted(weights)];
    auto probs = parity_probabilities(project_onto_edge(psi, e.first, e.second), e.first, e.second);
    return {e.first, e.second, rng.bernoulli(probs[1]) ? 1u : 0u};
}

bool HiddenMatchingProtocol::is_valid(const Input &x, unsigned k, const HiddenMatchingOutput &out) const {
    if (out.i >= n_ || out.j >= n_ || (out.i ^ out.j) != k) {
        return false;
    }
    return out.parity == (x[out.i] ^ x[out.j]);
}

std::uint32_t encode_hidden_matching_output(unsigned n, const HiddenMatchingOutput &out) {
    return (out.i * n + out.j) * 2 + out.parity;
}

RelationTable hidden_matching_relation_table(unsigned n, const std::vector<std::uint64_t> &xs) {
    require_power_of_two(n, 4, "hidden_matching_relation_table");
    if (2 * n * n > 64) {
        throw CapExceeded("hidden_matching_relation_table: output alphabet wider than 64");
    }
    RelationTable rel;
    rel.num_x = xs.size();
    rel.num_y = n - 1;
    rel.num_outputs = 2 * n * n;
    for (std::uint64_t xm : xs) {
        Input x = mask_to_bits(xm, n);
        for (unsigned k = 1; k < n; k++) {
            std::uint64_t mask = 0;
            for (const auto &[i, j] : xor_matching(n, k)) {
                mask |= std::uint64_t{1} << encode_hidden_matching_output(n, {i, j, x[i] ^ x[j]});
            }
            rel.valid.push_back(mask);
            rel.mu_weights.push_back(1);
        }
    }
    rel.mu_denominator = rel.valid.size();
    rel.validate();
    return rel;
}

QuantumFixture hidden_matching_verification(unsigned n) {
    require_power_of_two(n, 4, "hidden_matching_verification");
    if (n > 8) {
        throw CapExceeded("hidden_matching_verification: n must be at most 8");
    }
    const unsigned half = n / 2;
    const unsigned k_bits = ceil_log2(n - 1);
    HiddenMatchingProtocol hm(n);

    // One measurement operator per Bob message, built once.
    auto family = std::make_shared<std::vector<MeasurementOperator>>();
    const std::uint64_t num_b = std::uint64_t{1} << (k_bits + half);
    for (std::uint64_t b = 0; b < num_b; b++) {
        unsigned k = static_cast<unsigned>(b & ((std::uint64_t{1} << k_bits) - 1)) + 1;
        std::uint64_t wmask = b >> k_bits;
        Matrix e = Matrix::Zero(n, n);
        if (k < n) {
            auto edges = xor_matching(n, k);
            for (std::size_t idx = 0; idx < edges.size(); idx++) {
                Vector phi = Vector::Zero(n);
                phi[edges[idx].first] = 1 / std::sqrt(2.0);
                phi[edges[idx].second] = ((wmask >> idx) & 1) ? -1 / std::sqrt(2.0) : 1 / std::sqrt(2.0);
                e += phi * phi.adjoint();
            }
        }
        family->push_back(MeasurementOperator::from_matrix(e));
    }

    QuantumFixture fx;
    SmpProtocol &p = fx.protocol;
    p.name = "hidden-matching-verification";
    p.alice_qubits = hm.alice_qubits();
    p.bob_message_bits = k_bits + half;
    p.alice_state = [hm](const Input &x, std::uint64_t) {
        return DensityMatrix::pure(hm.alice_state(x));
    };
    p.bob = [k_bits, half](const Input &y, std::uint64_t) {
        if (y.size() != 1 + half) {
            throw InvalidArgument("hidden_matching_verification: Bob input is (k, w)");
        }
        Input w(y.begin() + 1, y.end());
        return MessageDistribution::deterministic((y[0] - 1) | (bits_to_mask(w) << k_bits));
    };
    p.referee_measurement = [family](std::uint64_t, Message b) {
        return family->at(b);
    };

    FunctionTable &f = fx.function;
    for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << n); xm++) {
        f.alice_inputs.push_back(mask_to_bits(xm, n));
    }
    for (unsigned k = 1; k < n; k++) {
        for (std::uint64_t wm = 0; wm < (std::uint64_t{1} << half); wm++) {
            Input y{k};
            Input w = mask_to_bits(wm, half);
            y.insert(y.end(), w.begin(), w.end());
            f.bob_inputs.push_back(y);
        }
    }
    for (const Input &x : f.alice_inputs) {
        for (const Input &y : f.bob_inputs) {
            auto edges = xor_matching(n, y[0]);
            bool match = true;
            for (std::size_t e = 0; e < edges.size(); e++) {
                match = match && (x[edges[e].first] ^ x[edges[e].second]) == y[1 + e];
            }
            f.values.push_back(match ? 1u : 0u);
        }
    }
    return fx;
}

// ---------------------------------------------------------------------------
// Small quantum-classical fixtures.

namespace {

Vector qubit_state(unsigned which) {
    const double h = 1 / std::sqrt(2.0);
    switch (which) {
        case 0:
            return Vector{{1, 0}};
        case 1:
            return Vector{{h, h}};
        case 2:
            return Vector{{0, 1}};
        default:
            return Vector{{h, -h}};
    }
}

Matrix coin_rotation(std::uint64_t coin) {
    if (coin == 0) {
        return Matrix::Identity(2, 2);
    }
    const double c = std::cos(std::numbers::pi / 8);
    const double s = std::sin(std::numbers::pi / 8);
    Matrix u(2, 2);
    u << c, -s, s, c;
    return u;
}

}  // namespace

QuantumFixture toy_quantum_equality() {
    QuantumFixture fx;
    SmpProtocol &p = fx.protocol;
    p.name = "toy-quantum-equality";
    p.alice_qubits = 1;
    p.bob_message_bits = 2;
    p.alice_state = [](const Input &x, std::uint64_t) {
        return DensityMatrix::pure(qubit_state(static_cast<unsigned>(bits_to_mask(x))));
    };
    p.bob = [](const Input &y, std::uint64_t) {
        return MessageDistribution::deterministic(bits_to_mask(y));
    };
    p.referee_measurement = [](std::uint64_t, Message b) {
        return MeasurementOperator::projector_onto(qubit_state(static_cast<unsigned>(b)));
    };
    fx.function = equality_function(2);
    return fx;
}

QuantumFixture toy_quantum_equality_public_coin() {
    QuantumFixture fx = toy_quantum_equality();
    SmpProtocol &p = fx.protocol;
    p.name = "toy-quantum-equality-public";
    p.coin_mode = CoinMode::kPublic;
    p.coins.size = 2;
    p.alice_state = [](const Input &x, std::uint64_t coin) {
        Matrix u = coin_rotation(coin);
        return DensityMatrix::pure(u * qubit_state(static_cast<unsigned>(bits_to_mask(x))));
    };
    p.referee_measurement = [](std::uint64_t coin, Message b) {
        Matrix u = coin_rotation(coin);
        return MeasurementOperator::projector_onto(u * qubit_state(static_cast<unsigned>(b)));
    };
    return fx;
}

QuantumFixture random_quantum_fixture(unsigned q, unsigned c_b, unsigned num_x, unsigned num_y, std::uint64_t seed) {
    if (q == 0 || q > 4 || c_b > 6 || num_x == 0 || num_y == 0) {
        throw InvalidArgument("random_quantum_fixture: need 1 <= q <= 4, c_b <= 6, nonempty inputs");
    }
    Rng rng(seed, 0);
    const std::size_t dim = std::size_t{1} << q;
    auto states = std::make_shared<std::vector<DensityMatrix>>();
    for (unsigned x = 0; x < num_x; x++) {
        states->push_back(random_density_matrix(dim, rng));
    }
    auto family = std::make_shared<std::vector<MeasurementOperator>>();
    const std::uint64_t num_b = std::uint64_t{1} << c_b;
    for (std::uint64_t b = 0; b < num_b; b++) {
        family->push_back(random_measurement_operator(dim, rng));
    }
    auto bob = std::make_shared<std::vector<MessageDistribution>>();
    for (unsigned y = 0; y < num_y; y++) {
        std::vector<double> w(num_b);
        double sum = 0;
        for (auto &v : w) {
            v = 0.05 + rng.uniform();
            sum += v;
        }
        MessageDistribution d;
        for (std::uint64_t b = 0; b < num_b; b++) {
            d.outcomes.emplace_back(b, w[b] / sum);
        }
        bob->push_back(std::move(d));
    }

    QuantumFixture fx;
    SmpProtocol &p = fx.protocol;
    p.name = "random-quantum";
    p.alice_qubits = q;
    p.bob_message_bits = c_b;
    p.alice_state = [states](const Input &x, std::uint64_t) {
        return states->at(x.at(0));
    };
    p.bob = [bob](const Input &y, std::uint64_t) {
        return bob->at(y.at(0));
    };
    p.referee_measurement = [family](std::uint64_t, Message b) {
        return family->at(b);
    };

    FunctionTable &f = fx.function;
    for (unsigned x = 0; x < num_x; x++) {
        f.alice_inputs.push_back({x});
    }
    for (unsigned y = 0; y < num_y; y++) {
        f.bob_inputs.push_back({y});
    }
    for (unsigned x = 0; x < num_x; x++) {
        for (unsigned y = 0; y < num_y; y++) {
            double acc = exact_acceptance(p, f.alice_inputs[x], f.bob_inputs[y]);
            f.values.push_back(acc >= 0.5 ? 1u : 0u);
        }
    }
    return fx;
}

}  // namespace smplab
