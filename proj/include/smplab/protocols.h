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

#ifndef SMPLAB_PROTOCOLS_H
#define SMPLAB_PROTOCOLS_H

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "smplab/codes.h"
#include "smplab/qcore.h"
#include "smplab/rng.h"
#include "smplab/smp.h"

namespace smplab {

// ---------------------------------------------------------------------------
// Equality.

/// Equality on n-bit strings as a total Boolean function (all 2^n x 2^n pairs).
FunctionTable equality_function(unsigned n);

/// Public-coin Equality: k shared random strings r_t; each party sends <input, r_t> mod 2
/// and the referee accepts iff all k pairs agree. Coin space {0,1}^n per repetition.
SmpProtocol equality_public(unsigned n, unsigned k);

/// Private-coin Equality through a code laid out as a rows x cols grid.
///
/// Alice sends a uniformly random column of C(x) with its index, Bob a random row of
/// C(y) with its index, and the referee accepts iff the two bits at their intersection
/// agree. Alice's message packs (column bits, then column index); Bob's likewise.
/// Repeated `reps` times, accepting iff every repetition accepts.
SmpProtocol equality_code(unsigned n, const LinearCode &code, unsigned reps);

// ---------------------------------------------------------------------------
// Matching promise problem.

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Alice holds x; Bob holds a perfect matching M of [n] and one w-bit per edge.
struct MatchingInstance {
    unsigned n = 0;
    Input x;
    std::vector<Edge> edges;  // n/2 disjoint pairs; w and Mx follow this order
    Input w;

    /// Throws InvalidArgument unless the edges form a perfect matching and sizes agree.
    void validate() const;
    /// Mx: for each edge (i, j) in order, x_i xor x_j.
    Input mx() const;
    unsigned distance() const;
    /// Bob's input vector: edge endpoints (2 per edge) followed by w.
    Input bob_input() const;
    static MatchingInstance from_inputs(unsigned n, const Input &x, const Input &y);
};

/// 1 iff Hamming(w, Mx) <= n/6; 0 iff >= n/3. Throws PromiseViolation in between.
std::uint32_t matching_value(const MatchingInstance &inst);

/// Random x and matching; w = Mx with d flips, d uniform in [0, n/6] (yes) or [n/3, n/2] (no).
MatchingInstance random_matching_instance(unsigned n, bool yes, Rng &rng);

struct MatchingQcParams {
    unsigned subset_size = 0;
    unsigned copies = 0;
    unsigned edges_sent = 0;
};

/// ceil(n^{2/3}), ceil(n^{1/3}), ceil(n^{1/3}), computed with integer roots.
MatchingQcParams default_matching_qc_params(unsigned n);

/// Quantum-classical public-coin protocol for the matching problem.
///
/// The coin picks S of size subset_size. Alice sends `copies` copies of
/// |S|^{-1/2} sum_{i in S} (-1)^{x_i} |i>; Bob sends up to edges_sent edges of M inside
/// S x S (a uniformly random selection) with their w-bits. The referee measures every
/// copy with the projective measurement {P_e = |i><i| + |j><j| : e received} plus the
/// complement; on outcome e he measures in the (|i> +- |j>)/sqrt2 basis to learn
/// x_i xor x_j. He outputs the majority of "recovered parity equals w_e" over the
/// distinct recovered edges, with a fair coin on ties and when nothing was recovered.
/// Sampling only.
SmpProtocol matching_qc(unsigned n, const MatchingQcParams &params);

/// Default subset size of the classical protocol: ceil(factor * sqrt(n)).
unsigned default_matching_classical_subset(unsigned n, double factor = 2.0);

/// Classical public-coin protocol: Alice sends x restricted to S, Bob all edges of M in
/// S x S with their w-bits; majority vote with the same tie rule. Sampling only.
SmpProtocol matching_classical(unsigned n, unsigned subset_size);

/// Diagnostics for the matching protocols.
struct MatchingTrialStats {
    unsigned edges_in_subset = 0;
    unsigned edges_received = 0;
    unsigned recovered = 0;
    bool abstained = false;
    bool output = false;
};
MatchingTrialStats matching_qc_trial(const MatchingInstance &inst, const MatchingQcParams &params, Rng &rng);
MatchingTrialStats matching_classical_trial(const MatchingInstance &inst, unsigned subset_size, Rng &rng);

// ---------------------------------------------------------------------------
// Edge measurements on phase states.

/// sum_{k} (-1)^{x_{support[k]}} |k> / sqrt(|support|), one amplitude per support element.
Vector phase_state(const Input &x, const std::vector<std::uint32_t> &support);

/// ||(|i><i| + |j><j|) psi||^2.
double edge_projection_probability(const Vector &psi, std::uint32_t i, std::uint32_t j);
/// Normalized projection onto span{|i>, |j>}.
Vector project_onto_edge(const Vector &psi, std::uint32_t i, std::uint32_t j);
/// Probabilities of parity 0 (outcome (|i>+|j>)/sqrt2) and parity 1 (outcome (|i>-|j>)/sqrt2).
std::array<double, 2> parity_probabilities(const Vector &psi, std::uint32_t i, std::uint32_t j);

// ---------------------------------------------------------------------------
// Hidden matching (relational problem).

/// M_k = {(i, i xor k) : i < i xor k}, edges ordered by smaller endpoint. n a power of 2, 1 <= k < n.
std::vector<Edge> xor_matching(unsigned n, unsigned k);

struct HiddenMatchingOutput {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    std::uint32_t parity = 0;

    bool operator==(const HiddenMatchingOutput &) const = default;
};

/// Alice sends n^{-1/2} sum_i (-1)^{x_i} |i>; Bob sends the matching index k; the
/// referee measures with the n/2 edge projectors of M_k, then in the +- basis of the
/// edge, and outputs (i, j, x_i xor x_j).
class HiddenMatchingProtocol {
   public:
    explicit HiddenMatchingProtocol(unsigned n);

    unsigned n() const {
        return n_;
    }
    unsigned alice_qubits() const;
    unsigned bob_message_bits() const;
    unsigned num_matchings() const {
        return n_ - 1;
    }

    Vector alice_state(const Input &x) const;
    /// Exact referee output distribution for input x and matching index k.
    std::vector<std::pair<HiddenMatchingOutput, double>> output_distribution(const Input &x, unsigned k) const;
    HiddenMatchingOutput sample(const Input &x, unsigned k, Rng &rng) const;
    bool is_valid(const Input &x, unsigned k, const HiddenMatchingOutput &out) const;

   private:
    unsigned n_;
};

/// Output code z = (i * n + j) * 2 + parity.
std::uint32_t encode_hidden_matching_output(unsigned n, const HiddenMatchingOutput &out);

/// Relation table over the given Alice strings (bit masks) and all n - 1 XOR matchings,
/// mu uniform. Requires 2 * n^2 <= 64.
RelationTable hidden_matching_relation_table(unsigned n, const std::vector<std::uint64_t> &xs);

/// Boolean verification version: Bob holds (k, w) with w in {0,1}^{n/2}; f = [w == M_k x].
///
/// Canonical quantum-classical form: Alice sends the phase state, Bob sends
/// b = (k - 1) | w << ceil(log2(n - 1)), and E_b projects, edge by edge, onto
/// (|i> + (-1)^{w_e} |j>)/sqrt2. Unused b values get E_b = 0.
struct QuantumFixture {
    SmpProtocol protocol;
    FunctionTable function;
};
QuantumFixture hidden_matching_verification(unsigned n);

// ---------------------------------------------------------------------------
// Small quantum-classical fixtures for the compiler.

/// One qubit: x in {0,1}^2 selects |0>, |+>, |1>, |->; Bob sends b = y; E_b = |psi_b><psi_b|.
QuantumFixture toy_quantum_equality();

/// toy_quantum_equality conjugated by a public-coin unitary (coin 0: identity, coin 1: a fixed rotation).
QuantumFixture toy_quantum_equality_public_coin();

/// Random states, random Bob distributions over {0,1}^{c_B} and random measurement
/// operators on q qubits; f(x, y) = [acceptance >= 1/2].
QuantumFixture random_quantum_fixture(unsigned q, unsigned c_b, unsigned num_x, unsigned num_y, std::uint64_t seed);

}  // namespace smplab

#endif
