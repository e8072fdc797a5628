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

#ifndef SMPLAB_TRANSFORMS_H
#define SMPLAB_TRANSFORMS_H

#include <cstdint>
#include <string>
#include <vector>

#include "smplab/qcore.h"
#include "smplab/smp.h"

namespace smplab {

// ---------------------------------------------------------------------------
// Deterministic state-learning message.

struct LearnEntry {
    std::uint64_t b = 0;
    /// p_tilde = index * delta / 8.
    std::uint32_t index = 0;

    bool operator==(const LearnEntry &) const = default;
};

/// The ordered list of (bad index b, truncated estimate) pairs Alice sends.
struct LearnRecord {
    unsigned q = 0;
    unsigned c = 0;
    unsigned r = 0;
    double delta = 0;
    std::vector<LearnEntry> entries;

    double p_tilde(const LearnEntry &e) const {
        return e.index * (delta / 8);
    }
    /// ceil(log2(8 / delta)) + 3.
    unsigned index_bits() const;
    /// c + index_bits().
    unsigned entry_bits() const;
    /// |entries| * entry_bits(): the message length charged to Alice.
    std::uint64_t encoded_bits() const;

    /// Header (version, q, c, r, delta as mantissa * 2^exponent, count) followed by the
    /// entries bit-packed most significant bit first, zero-padded to a byte.
    std::vector<std::uint8_t> serialize() const;
    static LearnRecord deserialize(const std::vector<std::uint8_t> &bytes);
    std::string to_text() const;

    bool operator==(const LearnRecord &) const = default;
};

/// Nearest multiple of delta/8 to p, as an index clamped to [0, floor(8/delta)].
std::uint32_t truncate_estimate(double p, double delta);

/// The family {E_b} together with the spectral data of F_b = (1/r) sum_j E_b^{(j)}.
///
/// F_b is diagonal in U_b^{(x) r}, where U_b diagonalizes E_b, so only the single-copy
/// eigenbasis and the d^r product eigenvalues are stored.
class ObservableFamily {
   public:
    ObservableFamily(std::vector<MeasurementOperator> elements, unsigned r, const Tolerances &tol = default_tolerances());

    std::size_t size() const {
        return elements_.size();
    }
    /// c, with size() == 2^c.
    unsigned index_bits() const {
        return c_;
    }
    unsigned copies() const {
        return r_;
    }
    /// Qubits of a single copy.
    unsigned qubits() const {
        return q_;
    }
    const MeasurementOperator &element(std::size_t b) const {
        return elements_[b];
    }
    /// Eigenvectors of E_b, one per column.
    const Matrix &copy_basis(std::size_t b) const {
        return bases_[b];
    }
    /// Eigenvalue of F_b on each product basis vector, first copy most significant.
    const Eigen::VectorXd &product_eigenvalues(std::size_t b) const {
        return values_[b];
    }
    /// F_b as a dense Observable. Builds the full d^r x d^r operator.
    Observable observable(std::size_t b, const Tolerances &tol = default_tolerances()) const;

   private:
    std::vector<MeasurementOperator> elements_;
    std::vector<Matrix> bases_;
    std::vector<Eigen::VectorXd> values_;
    unsigned q_ = 0;
    unsigned c_ = 0;
    unsigned r_ = 0;
};

/// Per-b diagnostics of the learning pass.
struct LearnStep {
    std::uint64_t b = 0;
    /// Exact p_b = Tr(E_b rho).
    double p = 0;
    /// Tr(F_b rho_b) at the current hypothesis.
    double prediction = 0;
    bool bad = false;
    /// Tr(M_b rho_b) for bad steps, 1 otherwise.
    double projection_trace = 1;
    std::size_t band_rank = 0;
    bool near_edge = false;
};

struct LearnResult {
    LearnRecord record;
    std::vector<LearnStep> steps;
};

/// Builds the record by walking b = 0 .. 2^c - 1 from rho_1 = I / 2^{rq}.
///
/// b is good when |Tr(F_b rho_b) - p_b| <= delta; otherwise (b, p_tilde_b) is appended
/// and rho_{b+1} is the renormalized projection of rho_b onto the eigenspaces of F_b
/// with eigenvalue in [p_tilde_b - delta/2, p_tilde_b + delta/2]. A vanishing
/// projection throws DegenerateProjection carrying the step b.
LearnResult learn_state_message(
    const DensityMatrix &rho, const ObservableFamily &family, double delta, const Tolerances &tol = default_tolerances());

/// Bob's side: replays the rho_b sequence from the record and returns p'_b for all b.
///
/// Throws VerificationFailure when the record does not fit the family (mismatched
/// parameters, unordered entries, or a recorded b whose prediction lies within
/// 7 delta / 8 of its p_tilde, which no honest sender produces).
std::vector<double> reconstruct_estimates(
    const LearnRecord &record, const ObservableFamily &family, const Tolerances &tol = default_tolerances());

/// t = ceil((K + 1) / log2(1 / eta)) + 1 with eta = 1 - delta / 4.
std::uint64_t bad_count_bound(unsigned k, double delta);

/// max(2, ceil(8 ln(max(q, 2)) / delta^2)), reduced so that r * q stays within
/// Tolerances::learn_qubit_budget (and at least 1).
unsigned default_copies(unsigned q, double delta, const Tolerances &tol = default_tolerances());

// ---------------------------------------------------------------------------
// Protocol transforms.

/// A randomized classical Alice replaced by a deterministic multiset of her messages.
///
/// For each coin and each Alice input, `multisets[coin][x]` holds the s * c_B sampled
/// messages; Alice sends the index of her multiset in `books[coin]`.
struct DerandomizedProtocol {
    SmpProtocol protocol;
    std::vector<std::vector<std::vector<Message>>> multisets;
    /// max over coin, x, b of |empirical mean - p_b|.
    double max_deviation = 0;
    /// Sampling attempts summed over all (coin, x).
    std::uint64_t attempts = 0;
    /// Declared Alice length s * c_B * c_A.
    std::uint64_t declared_bits = 0;
};

/// Samples s * c_B messages from A_x per (coin, x), keeping a multiset only when its
/// empirical referee acceptance is within 1/10 of p_b for every b in {0,1}^{c_B}.
/// Throws VerificationFailure (naming x and the worst b) after max_attempts failures.
DerandomizedProtocol derandomize_alice(
    const SmpProtocol &p, const std::vector<Input> &alice_inputs, unsigned s, std::uint64_t seed,
    unsigned max_attempts = 2000, const Tolerances &tol = default_tolerances());

/// A quantum-classical protocol compiled to a classical one with a deterministic Alice.
struct CompiledProtocol {
    SmpProtocol protocol;
    /// results[coin][x]: Alice's learning pass for input x under that coin.
    std::vector<std::vector<LearnResult>> results;
    /// estimates[coin][x][b]: the referee's reconstructed p'_b.
    std::vector<std::vector<std::vector<double>>> estimates;
    unsigned copies = 0;
    /// max over records of encoded_bits().
    std::uint64_t max_encoded_bits = 0;
    std::size_t max_entries = 0;
};

/// Alice sends the LearnRecord of rho_x against {E_b} (one record per public coin value);
/// the referee decodes it, reconstructs p'_b and accepts with that probability.
/// r = 0 selects default_copies. Inputs compile concurrently.
CompiledProtocol compile_qc_to_cc(
    const SmpProtocol &p, const std::vector<Input> &alice_inputs, double delta, unsigned r = 0,
    const Tolerances &tol = default_tolerances());

}  // namespace smplab

#endif
