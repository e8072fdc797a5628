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

#ifndef SMPLAB_SMP_H
#define SMPLAB_SMP_H

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smplab/config.h"
#include "smplab/qcore.h"
#include "smplab/rng.h"

namespace smplab {

/// A party's input. Bitstrings are stored one bit per entry, x_1 first.
using Input = std::vector<std::uint32_t>;

/// A classical message, read as a bitstring of the sender's declared length (bit 0 = first bit).
using Message = std::uint64_t;

struct MessageDistribution {
    std::vector<std::pair<Message, double>> outcomes;

    static MessageDistribution deterministic(Message m) {
        return {{{m, 1.0}}};
    }
    static MessageDistribution uniform(const std::vector<Message> &messages);
};

enum class CoinMode { kPrivate, kPublic };

/// Public coin space: `size` values with the given weights (empty means uniform).
/// A private-coin protocol has the single coin value 0.
struct CoinSpace {
    std::uint64_t size = 1;
    std::vector<double> weights;

    double weight(std::uint64_t coin) const {
        return weights.empty() ? 1.0 / static_cast<double>(size) : weights[coin];
    }
    std::uint64_t sample(Rng &rng) const;
};

/// A simultaneous-message protocol.
///
/// Alice is either classical (`alice`) or quantum (`alice_state`, on `alice_qubits`
/// qubits). Bob is always classical. A classical referee maps (coin, a, b) to an
/// acceptance probability; a quantum referee is the family b -> E_b and accepts with
/// probability Tr(E_b rho_x). The whole protocol is run `repetitions` times with
/// independent coins and accepts iff every repetition accepts.
///
/// Protocols whose coin space or inputs are too large to enumerate provide `trial`,
/// which samples one complete run (coins, messages, referee) and returns its output.
struct SmpProtocol {
    std::string name;
    CoinMode coin_mode = CoinMode::kPrivate;
    CoinSpace coins;
    unsigned repetitions = 1;

    unsigned alice_message_bits = 0;
    unsigned alice_qubits = 0;
    unsigned bob_message_bits = 0;

    std::function<MessageDistribution(const Input &x, std::uint64_t coin)> alice;
    std::function<DensityMatrix(const Input &x, std::uint64_t coin)> alice_state;
    std::function<MessageDistribution(const Input &y, std::uint64_t coin)> bob;
    std::function<double(std::uint64_t coin, Message a, Message b)> referee;
    std::function<MeasurementOperator(std::uint64_t coin, Message b)> referee_measurement;

    std::function<bool(const Input &x, const Input &y, Rng &rng)> trial;

    bool is_quantum() const {
        return static_cast<bool>(alice_state);
    }
    bool enumerable() const {
        return static_cast<bool>(bob) && (alice || alice_state);
    }
};

struct ProtocolCost {
    std::uint64_t alice = 0;
    bool alice_quantum = false;
    std::uint64_t bob = 0;
    std::uint64_t total() const {
        return alice + bob;
    }
};

/// Boolean or k-ary function on a promise domain D (cells outside D hold nullopt).
struct FunctionTable {
    std::vector<Input> alice_inputs;
    std::vector<Input> bob_inputs;
    std::vector<std::optional<std::uint32_t>> values;  // row-major, |X| x |Y|
    std::uint32_t num_outputs = 2;

    std::size_t num_x() const {
        return alice_inputs.size();
    }
    std::size_t num_y() const {
        return bob_inputs.size();
    }
    bool in_domain(std::size_t i, std::size_t j) const {
        return values[i * num_y() + j].has_value();
    }
    /// Throws PromiseViolation outside D.
    std::uint32_t value(std::size_t i, std::size_t j) const;
    bool total() const;
};

/// Relation with an exact rational input distribution mu = weights / denominator.
///
/// Valid output sets are bitmasks over outputs [0, num_outputs), num_outputs <= 64.
struct RelationTable {
    std::size_t num_x = 0;
    std::size_t num_y = 0;
    std::uint32_t num_outputs = 2;
    std::vector<std::uint64_t> valid;  // row-major masks
    std::vector<std::uint64_t> mu_weights;
    std::uint64_t mu_denominator = 1;

    std::uint64_t valid_mask(std::size_t i, std::size_t j) const {
        return valid[i * num_y + j];
    }
    bool is_valid(std::size_t i, std::size_t j, std::uint32_t z) const {
        return z < 64 && ((valid_mask(i, j) >> z) & 1) != 0;
    }
    std::uint64_t mu(std::size_t i, std::size_t j) const {
        return mu_weights[i * num_y + j];
    }
    /// Checks mask width, nonempty valid sets on supp(mu), and sum(mu) == denominator.
    void validate() const;

    /// Relation whose valid set is the singleton {f(x, y)} on D; mu uniform on D unless given.
    static RelationTable from_function(const FunctionTable &f);
};

/// Exact acceptance probability, summing over coins, messages and repetitions.
///
/// Throws CapExceeded when a repetition needs more than Tolerances::enumeration_cap terms.
double exact_acceptance(const SmpProtocol &p, const Input &x, const Input &y, const Tolerances &tol = default_tolerances());

/// Acceptance of one repetition with the public coin fixed to `coin`.
double conditional_acceptance(
    const SmpProtocol &p, const Input &x, const Input &y, std::uint64_t coin, const Tolerances &tol = default_tolerances());

struct SampledAcceptance {
    double estimate = 0;
    Interval interval{0, 1};
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double half_width() const {
        return interval.half_width();
    }
};

/// Monte-Carlo acceptance. Trial t draws all of its randomness from Rng(seed, t).
SampledAcceptance sampled_acceptance(
    const SmpProtocol &p, const Input &x, const Input &y, std::uint64_t trials, std::uint64_t seed,
    const Tolerances &tol = default_tolerances());

/// One sampled run of the protocol (used by sampled_acceptance).
bool sample_trial(const SmpProtocol &p, const Input &x, const Input &y, Rng &rng, const Tolerances &tol = default_tolerances());

/// max over (x, y) in D of |f(x, y) - Pr[accept]|, for Boolean f.
double worst_case_error(const SmpProtocol &p, const FunctionTable &f, const Tolerances &tol = default_tolerances());

/// Declared message lengths (times repetitions); quantum Alice reported in qubits.
ProtocolCost protocol_cost(const SmpProtocol &p);

/// Validates a message distribution against the declared bit length.
void check_distribution(const MessageDistribution &d, unsigned bits, const Tolerances &tol, const char *who);

/// Packs a little-endian bit vector (entry k = bit k) into an integer. Entries must be 0/1.
std::uint64_t bits_to_mask(const Input &bits);
Input mask_to_bits(std::uint64_t mask, unsigned n);

}  // namespace smplab

#endif
