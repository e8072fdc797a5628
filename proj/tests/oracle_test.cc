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

#include "smplab/oracle.h"

#include <set>

#include "doctest.h"
#include "smplab/errors.h"
#include "smplab/protocols.h"

using namespace smplab;

namespace {

FunctionTable indexed_function(std::size_t nx, std::size_t ny, std::uint32_t outputs,
                               const std::vector<std::uint32_t> &values) {
    FunctionTable f;
    for (std::uint32_t i = 0; i < nx; i++) {
        f.alice_inputs.push_back({i});
    }
    for (std::uint32_t j = 0; j < ny; j++) {
        f.bob_inputs.push_back({j});
    }
    f.num_outputs = outputs;
    for (std::uint32_t v : values) {
        f.values.emplace_back(v);
    }
    return f;
}

// A witness is correct when its output is valid on every cell of positive mass.
bool witness_valid(const DeterministicSmpProtocol &p, const RelationTable &rel) {
    for (std::size_t i = 0; i < rel.num_x; i++) {
        for (std::size_t j = 0; j < rel.num_y; j++) {
            if (rel.mu(i, j) > 0 && !rel.is_valid(i, j, p.output(i, j))) {
                return false;
            }
        }
    }
    return true;
}

// Independent count of distinct rows and columns by set insertion.
std::pair<std::size_t, std::size_t> distinct_lines(const FunctionTable &f) {
    std::set<std::vector<std::uint32_t>> rows;
    std::set<std::vector<std::uint32_t>> cols;
    for (std::size_t i = 0; i < f.num_x(); i++) {
        std::vector<std::uint32_t> row;
        for (std::size_t j = 0; j < f.num_y(); j++) {
            row.push_back(f.value(i, j));
        }
        rows.insert(row);
    }
    for (std::size_t j = 0; j < f.num_y(); j++) {
        std::vector<std::uint32_t> col;
        for (std::size_t i = 0; i < f.num_x(); i++) {
            col.push_back(f.value(i, j));
        }
        cols.insert(col);
    }
    return {rows.size(), cols.size()};
}

}  // namespace

TEST_CASE("rationals") {
    Rational a{1, 4};
    Rational b{1, 6};
    CHECK((a + b) == Rational{5, 12});
    CHECK(b <= a);
    CHECK_FALSE(a <= b);
    CHECK(Rational{2, 4} == Rational{1, 2});
    CHECK(Rational{3, 12}.to_string() == "1/4");
}

TEST_CASE("deterministic complexity of functions") {
    DetComplexity eq = det_complexity_function(equality_function(2));
    CHECK(eq.c_a == 2);
    CHECK(eq.c_b == 2);
    CHECK(eq.total() == 4);
    for (unsigned n = 1; n <= 3; n++) {
        CHECK(det_complexity_function(equality_function(n)).total() == 2 * n);
    }

    DetComplexity constant = det_complexity_function(indexed_function(3, 5, 2, std::vector<std::uint32_t>(15, 1)));
    CHECK(constant.total() == 0);

    // f(x, y) = x_1 over X = {0,1}^2 (masks 0..3, x_1 = bit 0) and Y = {0,1}.
    DetComplexity first_bit = det_complexity_function(indexed_function(4, 2, 2, {0, 0, 1, 1, 0, 0, 1, 1}));
    CHECK(first_bit.c_a == 1);
    CHECK(first_bit.c_b == 0);

    FunctionTable partial = equality_function(1);
    partial.values[1] = std::nullopt;
    CHECK_THROWS_AS(det_complexity_function(partial), InvalidArgument);
}

TEST_CASE("exhaustive search agrees with the row and column count") {
    for (unsigned t = 0; t < 60; t++) {
        Rng rng(31, t);
        std::size_t nx = 2 + rng.below(7);
        std::size_t ny = 2 + rng.below(7);
        std::uint32_t outputs = 2 + static_cast<std::uint32_t>(rng.below(2));
        std::vector<std::uint32_t> values;
        // Few distinct rows keep the minimal cost within the search limit.
        std::vector<std::vector<std::uint32_t>> patterns(1 + rng.below(3));
        for (auto &row : patterns) {
            for (std::size_t j = 0; j < ny; j++) {
                row.push_back(static_cast<std::uint32_t>(rng.below(outputs)));
            }
        }
        for (std::size_t i = 0; i < nx; i++) {
            const auto &row = patterns[rng.below(patterns.size())];
            values.insert(values.end(), row.begin(), row.end());
        }
        FunctionTable f = indexed_function(nx, ny, outputs, values);
        DetComplexity dc = det_complexity_function(f);
        auto [rows, cols] = distinct_lines(f);
        CHECK(dc.distinct_rows == rows);
        CHECK(dc.distinct_cols == cols);
        if (dc.total() > kOracleMaxBits) {
            continue;
        }
        RelationSearchResult ex = exhaustive_function_search(f, kOracleMaxBits);
        REQUIRE(ex.cost.has_value());
        CHECK(*ex.cost == dc.total());
        CHECK(witness_valid(ex.witness, RelationTable::from_function(f)));
    }
}

TEST_CASE("deterministic complexity of relations") {
    RelationTable all;
    all.num_x = 3;
    all.num_y = 3;
    all.num_outputs = 3;
    all.valid.assign(9, 0b111);
    all.mu_weights.assign(9, 1);
    all.mu_denominator = 9;
    RelationSearchResult trivial = det_complexity_relation(all, 4);
    CHECK(trivial.cost == 0u);

    RelationSearchResult eq1 = det_complexity_relation(RelationTable::from_function(equality_function(1)), 4);
    CHECK(eq1.cost == 2u);
    CHECK(witness_valid(eq1.witness, RelationTable::from_function(equality_function(1))));
    CHECK_FALSE(det_complexity_relation(RelationTable::from_function(equality_function(2)), 3).cost.has_value());

    RelationTable big;
    big.num_x = 9;
    big.num_y = 8;
    big.valid.assign(72, 1);
    big.mu_weights.assign(72, 1);
    big.mu_denominator = 72;
    CHECK_THROWS_AS(det_complexity_relation(big, 4), CapExceeded);
    CHECK_THROWS_AS(det_complexity_relation(all, kOracleMaxBits + 1), CapExceeded);
}

TEST_CASE("hidden matching relation at n = 4") {
    // For these strings both edges of every M_k carry the same parity, so a valid answer needs
    // the parity vector (p_1, p_2, p_3): (0,0,0), (0,1,1), (1,0,1), (0,0,0).
    const std::vector<std::uint64_t> xs = {0b0000, 0b0011, 0b0101, 0b1111};
    RelationTable rel = hidden_matching_relation_table(4, xs);

    // Hand protocol: Alice sends her parity class (3 classes, 2 bits), Bob sends k - 1 (2 bits),
    // and the referee answers with the first edge of M_k. No two matchings share an edge and no
    // two classes share a parity vector, so neither side can send fewer than 3 messages.
    const std::vector<Message> alice_class = {0, 1, 2, 0};
    const std::uint32_t parities[3][3] = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}};
    DeterministicSmpProtocol hand;
    hand.c_a = 2;
    hand.c_b = 2;
    hand.alice_map = alice_class;
    hand.bob_map = {0, 1, 2};
    hand.referee.assign(16, 0);
    for (Message a = 0; a < 3; a++) {
        for (Message b = 0; b < 3; b++) {
            Edge e = xor_matching(4, static_cast<unsigned>(b) + 1)[0];
            hand.referee[a * 4 + b] = encode_hidden_matching_output(4, {e.first, e.second, parities[a][b]});
        }
    }
    hand.validate();
    REQUIRE(witness_valid(hand, rel));

    RelationSearchResult res = det_complexity_relation(rel, 4);
    REQUIRE(res.cost.has_value());
    CHECK(*res.cost == hand.cost());
    CHECK(witness_valid(res.witness, rel));
    CHECK_FALSE(det_complexity_relation(rel, 3).cost.has_value());
}

TEST_CASE("zero-error Alice maps are injective for equality") {
    for (unsigned n = 1; n <= 3; n++) {
        AlicePartitionCheck chk = check_zero_error_alice_maps(equality_function(n));
        CHECK(chk.only_injective);
        CHECK(chk.zero_error_partitions == 1);
    }
    // Bell numbers: 2, 15 and 4140 partitions of 2, 4 and 8 inputs.
    CHECK(check_zero_error_alice_maps(equality_function(1)).partitions_checked == 2);
    CHECK(check_zero_error_alice_maps(equality_function(2)).partitions_checked == 15);
    CHECK(check_zero_error_alice_maps(equality_function(3)).partitions_checked == 4140);
    // A function with duplicate rows admits a non-injective zero-error map.
    AlicePartitionCheck dup = check_zero_error_alice_maps(indexed_function(3, 2, 2, {0, 1, 0, 1, 1, 0}));
    CHECK_FALSE(dup.only_injective);
}

TEST_CASE("extract function") {
    // Constant output 0 on a uniform 2x2 relation where 0 is valid on three cells.
    RelationTable rel;
    rel.num_x = 2;
    rel.num_y = 2;
    rel.num_outputs = 2;
    rel.valid = {0b01, 0b11, 0b01, 0b10};
    rel.mu_weights = {1, 1, 1, 1};
    rel.mu_denominator = 4;
    DeterministicSmpProtocol constant{0, 0, {0, 0}, {0, 0}, {0}};
    ExtractedFunction ex = extract_function(constant, rel);
    CHECK(ex.error == Rational{1, 4});
    CHECK(ex.function.value(1, 1) == 0);

    DeterministicSmpProtocol perfect{0, 1, {0, 0}, {0, 1}, {0, 1}};
    RelationTable rel2 = rel;
    rel2.valid = {0b01, 0b10, 0b01, 0b10};
    CHECK(extract_function(perfect, rel2).error == Rational{0, 1});

    // Extracted functions never cost more than the protocol they came from.
    for (unsigned t = 0; t < 40; t++) {
        Rng rng(33, t);
        std::size_t nx = 2 + rng.below(3);
        std::size_t ny = 2 + rng.below(3);
        RelationTable r = random_toy_relation(nx, ny, 3, rng);
        DeterministicSmpProtocol p = random_deterministic_protocol(nx, ny, 1, 1, 3, rng);
        ExtractedFunction e = extract_function(p, r);
        RelationSearchResult s = exhaustive_function_search(e.function, p.cost());
        REQUIRE(s.cost.has_value());
        CHECK(*s.cost <= p.cost());
    }
}

TEST_CASE("union bound check") {
    // Ten cells of mass 1/10. f is invalid on cell 0; p_a departs from f on cell 7.
    RelationTable rel;
    rel.num_x = 5;
    rel.num_y = 2;
    rel.num_outputs = 2;
    rel.valid.assign(10, 0b01);
    rel.valid[0] = 0b10;
    rel.mu_weights.assign(10, 1);
    rel.mu_denominator = 10;
    FunctionTable f = indexed_function(5, 2, 2, std::vector<std::uint32_t>(10, 0));
    DeterministicSmpProtocol pa;
    pa.c_a = 3;
    pa.c_b = 1;
    pa.alice_map = {0, 1, 2, 3, 4};
    pa.bob_map = {0, 1};
    pa.referee.assign(16, 0);
    pa.referee[3 * 2 + 1] = 1;  // cell (3, 1) is index 7
    UnionBoundCheck ub = union_bound_check(pa, f, rel, 0.1);
    CHECK(ub.compute_error == Rational{1, 10});
    CHECK(ub.validity_error == Rational{1, 10});
    CHECK(ub.solve_error == Rational{1, 5});
    CHECK(ub.holds);
    CHECK(ub.within_two_eps);

    DeterministicSmpProtocol exact = pa;
    exact.referee.assign(16, 0);
    rel.valid[0] = 0b01;
    UnionBoundCheck zero = union_bound_check(exact, f, rel, 0);
    CHECK(zero.solve_error == Rational{0, 1});
    CHECK(zero.compute_error == Rational{0, 1});
    CHECK(zero.holds);

    for (unsigned t = 0; t < 100; t++) {
        Rng rng(34, t);
        std::size_t nx = 2 + rng.below(3);
        std::size_t ny = 2 + rng.below(3);
        RelationTable r = random_toy_relation(nx, ny, 4, rng);
        DeterministicSmpProtocol pb = random_deterministic_protocol(nx, ny, 1, 2, 4, rng);
        ExtractedFunction e = extract_function(pb, r);
        DeterministicSmpProtocol p2 = random_deterministic_protocol(nx, ny, 2, 1, 4, rng);
        UnionBoundCheck u = union_bound_check(p2, e.function, r, 0.5);
        CHECK(u.holds);
        CHECK(u.solve_error <= u.compute_error + u.validity_error);
    }
}

TEST_CASE("booleanize") {
    FunctionTable f = indexed_function(3, 3, 2, {0, 1, 1, 0, 0, 1, 1, 1, 0});
    auto copies = booleanize(f, LinearCode::repetition(10));
    REQUIRE(copies.size() == 10);
    for (const FunctionTable &t : copies) {
        CHECK(t.values == f.values);
    }

    FunctionTable g = indexed_function(3, 3, 4, {0, 1, 2, 3, 2, 1, 0, 3, 3});
    LinearCode code = LinearCode::repeated(LinearCode::hadamard(2), 5);
    auto bits = booleanize(g, code);
    CHECK(bits.size() == 20);
    unsigned radius = (min_distance_bruteforce(code) - 1) / 2;
    Rng rng(35, 0);
    for (std::size_t i = 0; i < 3; i++) {
        for (std::size_t j = 0; j < 3; j++) {
            CHECK(decode_booleanized(bits, code, i, j) == g.value(i, j));
            auto flipped = bits;
            for (std::uint32_t pos : rng.subset(code.block_bits(), radius)) {
                auto &v = flipped[pos].values[i * 3 + j];
                v = 1 - *v;
            }
            CHECK(decode_booleanized(flipped, code, i, j) == g.value(i, j));
        }
    }
    CHECK(nearest_codeword(code, code.encode(2)) == 2);

    // A 1-bit code cannot carry four outputs; x = 3 has weight 2 of 10 under `weak`.
    CHECK_THROWS_AS(booleanize(g, LinearCode::repetition(1)), InvalidArgument);
    LinearCode weak(2, {1, 2, 3, 3, 3, 3, 3, 3, 3, 3});
    CHECK_THROWS_AS(booleanize(g, weak, 0.3), VerificationFailure);
}

TEST_CASE("random toy generators") {
    Rng rng(36, 0);
    for (int t = 0; t < 20; t++) {
        RelationTable rel = random_toy_relation(3, 4, 5, rng);
        rel.validate();
        DeterministicSmpProtocol p = random_deterministic_protocol(3, 4, 2, 1, 5, rng);
        p.validate();
        for (std::size_t i = 0; i < 3; i++) {
            for (std::size_t j = 0; j < 4; j++) {
                CHECK(p.output(i, j) < 5);
            }
        }
    }
}
