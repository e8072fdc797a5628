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

#ifndef SMPLAB_ORACLE_H
#define SMPLAB_ORACLE_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smplab/codes.h"
#include "smplab/rng.h"
#include "smplab/smp.h"

namespace smplab {

/// Exhaustive relation search limits: |X| * |Y| cells and total message bits.
constexpr std::size_t kOracleMaxCells = 64;
constexpr unsigned kOracleMaxBits = 6;

/// Non-negative exact fraction num / den.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    std::string to_string() const;
    friend bool operator<=(const Rational &a, const Rational &b);
    friend bool operator==(const Rational &a, const Rational &b);
    friend Rational operator+(const Rational &a, const Rational &b);
};

/// Deterministic SMP protocol on indexed inputs: x -> a, y -> b, (a, b) -> output.
struct DeterministicSmpProtocol {
    unsigned c_a = 0;
    unsigned c_b = 0;
    std::vector<Message> alice_map;
    std::vector<Message> bob_map;
    /// referee[a * 2^c_b + b].
    std::vector<std::uint32_t> referee;

    std::size_t num_x() const {
        return alice_map.size();
    }
    std::size_t num_y() const {
        return bob_map.size();
    }
    unsigned cost() const {
        return c_a + c_b;
    }
    std::uint32_t output(std::size_t i, std::size_t j) const;
    /// Checks map ranges and the referee table size.
    void validate() const;
};

struct DetComplexity {
    unsigned c_a = 0;
    unsigned c_b = 0;
    std::size_t distinct_rows = 0;
    std::size_t distinct_cols = 0;
    unsigned total() const {
        return c_a + c_b;
    }
};

/// Minimal (c_A, c_B) for a total function: ceil(log2) of the distinct rows and columns of M_f.
/// Throws InvalidArgument for partial f and CapExceeded beyond 2^10 inputs per side.
DetComplexity det_complexity_function(const FunctionTable &f);

struct RelationSearchResult {
    /// Minimal c_A + c_B, or nullopt when every protocol within max_bits fails.
    std::optional<unsigned> cost;
    /// A protocol achieving `cost`.
    DeterministicSmpProtocol witness;
    std::uint64_t partitions_explored = 0;
};

/// Minimal total cost of a deterministic SMP protocol whose output is valid on every
/// (x, y) with mu(x, y) > 0, by exhaustive search over input partitions.
///
/// A protocol with (c_A, c_B) is a partition of X into at most 2^{c_A} classes and of Y
/// into at most 2^{c_B}, with a common valid output on every block. The smaller side's
/// partitions are enumerated; the larger side is assigned by backtracking.
/// Throws CapExceeded when |X| |Y| > kOracleMaxCells or max_bits > kOracleMaxBits.
RelationSearchResult det_complexity_relation(const RelationTable &rel, unsigned max_bits);

/// Exhaustive cost of a total function: det_complexity_relation on its singleton relation.
RelationSearchResult exhaustive_function_search(const FunctionTable &f, unsigned max_bits);

struct AlicePartitionCheck {
    std::uint64_t partitions_checked = 0;
    /// Partitions of X admitting a zero-error protocol when Bob sends y itself.
    std::uint64_t zero_error_partitions = 0;
    /// Every such partition separates all inputs.
    bool only_injective = true;
};

/// Enumerates every partition of X (every Alice map up to relabeling) and records which
/// admit a zero-error protocol. Requires |X| <= 10 and a total f.
AlicePartitionCheck check_zero_error_alice_maps(const FunctionTable &f);

struct ExtractedFunction {
    FunctionTable function;
    /// Pr_mu[p(x, y) not valid for P].
    Rational error;
};

/// f(x, y) := p's output, on indexed inputs, with its exact distributional error.
ExtractedFunction extract_function(const DeterministicSmpProtocol &p, const RelationTable &rel);

struct UnionBoundCheck {
    /// err_mu(p_a solves P).
    Rational solve_error;
    /// err_mu(p_a computes f).
    Rational compute_error;
    /// err_mu(f valid for P).
    Rational validity_error;
    /// solve_error <= compute_error + validity_error.
    bool holds = false;
    /// compute_error <= eps and validity_error <= eps imply solve_error <= 2 eps (vacuous otherwise).
    bool within_two_eps = false;
};

UnionBoundCheck union_bound_check(
    const DeterministicSmpProtocol &p_a, const FunctionTable &f, const RelationTable &rel, double eps);

/// f_j(x, y) = bit j of g(f(x, y)) for every codeword position j.
///
/// f's outputs must fit g's message length; g's brute-force relative distance must be at
/// least min_relative_distance, else VerificationFailure.
std::vector<FunctionTable> booleanize(const FunctionTable &f, const LinearCode &g, double min_relative_distance = 0.2);

/// Message whose codeword is nearest (ties to the smaller message) to the received bits.
std::uint64_t nearest_codeword(const LinearCode &g, const Codeword &received);

/// Decodes cell (i, j) from the Boolean tables.
std::uint64_t decode_booleanized(const std::vector<FunctionTable> &bits, const LinearCode &g, std::size_t i, std::size_t j);

/// Random toy relation on indexed inputs: nonempty valid sets of random density over
/// `outputs` values, mu with integer weights in [0, 3] (not all zero).
RelationTable random_toy_relation(std::size_t num_x, std::size_t num_y, std::uint32_t outputs, Rng &rng);

/// Random maps and referee table.
DeterministicSmpProtocol random_deterministic_protocol(
    std::size_t num_x, std::size_t num_y, unsigned c_a, unsigned c_b, std::uint32_t outputs, Rng &rng);

}  // namespace smplab

#endif
