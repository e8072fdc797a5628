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

#include <cmath>
#include <map>

#include "doctest.h"
#include "smplab/errors.h"

using namespace smplab;

TEST_CASE("equality_public exact acceptance") {
    for (unsigned n = 1; n <= 4; n++) {
        FunctionTable f = equality_function(n);
        for (unsigned k : {1u, 2u, 3u}) {
            SmpProtocol p = equality_public(n, k);
            for (std::size_t i = 0; i < f.num_x(); i++) {
                for (std::size_t j = 0; j < f.num_y(); j++) {
                    double acc = exact_acceptance(p, f.alice_inputs[i], f.bob_inputs[j]);
                    CHECK(std::abs(acc - (i == j ? 1.0 : std::ldexp(1.0, -static_cast<int>(k)))) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("equality_public depends only on x xor y") {
    SmpProtocol p = equality_public(3, 2);
    FunctionTable f = equality_function(3);
    std::map<std::uint64_t, double> by_xor;
    for (std::size_t i = 0; i < 8; i++) {
        for (std::size_t j = 0; j < 8; j++) {
            double acc = exact_acceptance(p, f.alice_inputs[i], f.bob_inputs[j]);
            auto [it, fresh] = by_xor.emplace(i ^ j, acc);
            CHECK(it->second == acc);
        }
    }
}

TEST_CASE("equality_code exact acceptance") {
    for (unsigned n : {2u, 3u, 4u}) {
        LinearCode h = LinearCode::hadamard(n);
        SmpProtocol p = equality_code(n, h, 1);
        FunctionTable f = equality_function(n);
        const double m = h.block_bits();
        for (std::size_t i = 0; i < f.num_x(); i++) {
            for (std::size_t j = 0; j < f.num_y(); j++) {
                double acc = exact_acceptance(p, f.alice_inputs[i], f.bob_inputs[j]);
                double expected = 1 - hamming_distance(h.encode(i), h.encode(j)) / m;
                CHECK(std::abs(acc - expected) <= 1e-12);
                if (n == 4 && i != j) {
                    CHECK(std::abs(acc - 0.5) <= 1e-12);
                }
            }
        }
    }

    // A non-Hadamard code exercises distances other than m/2.
    Rng rng(9, 0);
    LinearCode c = LinearCode::random(3, 6, rng).with_grid({2, 3});
    SmpProtocol p = equality_code(3, c, 2);
    FunctionTable f = equality_function(3);
    for (std::size_t i = 0; i < 8; i++) {
        for (std::size_t j = 0; j < 8; j++) {
            double single = 1 - hamming_distance(c.encode(i), c.encode(j)) / 6.0;
            CHECK(std::abs(exact_acceptance(p, f.alice_inputs[i], f.bob_inputs[j]) - single * single) <= 1e-12);
        }
    }

    double worst = worst_case_error(equality_code(4, LinearCode::hadamard(4), 6), equality_function(4));
    CHECK(worst <= 1.0 / 3);
    CHECK(std::abs(worst - 1.0 / 64) <= 1e-12);
    CHECK_THROWS_AS(equality_code(3, LinearCode::hadamard(2), 1), InvalidArgument);
}

TEST_CASE("matching value") {
    Rng rng(21, 0);
    MatchingInstance inst = random_matching_instance(12, true, rng);
    inst.w = inst.mx();
    CHECK(matching_value(inst) == 1);
    for (auto &b : inst.w) {
        b ^= 1;
    }
    CHECK(matching_value(inst) == 0);
    inst.w = inst.mx();
    inst.w[0] ^= 1;
    inst.w[3] ^= 1;
    CHECK(inst.distance() == 2);
    CHECK(matching_value(inst) == 1);
    inst.w[4] ^= 1;
    CHECK_THROWS_AS(matching_value(inst), PromiseViolation);

    MatchingInstance broken = inst;
    broken.edges[0].second = broken.edges[1].first;
    CHECK_THROWS_AS(broken.validate(), InvalidArgument);
}

TEST_CASE("random matching instances respect the promise") {
    for (unsigned t = 0; t < 100; t++) {
        Rng rng(22, t);
        bool yes = t % 2 == 0;
        MatchingInstance inst = random_matching_instance(64, yes, rng);
        CHECK(matching_value(inst) == (yes ? 1u : 0u));
        MatchingInstance round = MatchingInstance::from_inputs(64, inst.x, inst.bob_input());
        CHECK(round.distance() == inst.distance());
    }
}

TEST_CASE("matching value is invariant under relabeling") {
    for (unsigned t = 0; t < 20; t++) {
        Rng rng(23, t);
        MatchingInstance inst = random_matching_instance(24, t % 2 == 0, rng);
        std::vector<std::uint32_t> perm = rng.subset(24, 24);
        MatchingInstance moved = inst;
        for (unsigned i = 0; i < 24; i++) {
            moved.x[perm[i]] = inst.x[i];
        }
        for (auto &[i, j] : moved.edges) {
            i = perm[i];
            j = perm[j];
        }
        CHECK(moved.distance() == inst.distance());
        CHECK(matching_value(moved) == matching_value(inst));
    }
}

TEST_CASE("edge measurements on phase states") {
    Input x{0, 1, 1, 0, 1, 0, 0, 1};
    std::vector<std::uint32_t> support{0, 1, 2, 3, 4, 5};
    Vector psi = phase_state(x, support);
    CHECK(std::abs(psi.norm() - 1) <= 1e-15);
    for (std::uint32_t i = 0; i < 6; i++) {
        for (std::uint32_t j = i + 1; j < 6; j++) {
            CHECK(std::abs(edge_projection_probability(psi, i, j) - 2.0 / 6) <= 1e-12);
            auto probs = parity_probabilities(project_onto_edge(psi, i, j), i, j);
            std::uint32_t parity = x[support[i]] ^ x[support[j]];
            CHECK(std::abs(probs[parity] - 1) <= 1e-12);
            CHECK(std::abs(probs[1 - parity]) <= 1e-12);
        }
    }
}

TEST_CASE("matching protocol statistics") {
    const unsigned n = 64;
    Rng inst_rng(24, 0);
    MatchingInstance inst = random_matching_instance(n, true, inst_rng);
    const unsigned s = 16;
    // Expected edges of M inside a uniform s-subset: (n/2) * s(s-1) / (n(n-1)).
    const double expected_edges = (n / 2.0) * s * (s - 1) / (n * (n - 1.0));
    double edges = 0;
    const unsigned trials = 4000;
    for (unsigned t = 0; t < trials; t++) {
        Rng rng(25, t);
        MatchingTrialStats st = matching_classical_trial(inst, s, rng);
        edges += st.edges_in_subset;
        CHECK(st.recovered == st.edges_in_subset);
    }
    CHECK(std::abs(edges / trials - expected_edges) <= 0.1);
    CHECK(std::abs(expected_edges - s * s / (2.0 * n)) <= 0.2);

    // A subset containing every index sees all edges and decides without error.
    for (unsigned t = 0; t < 20; t++) {
        Rng rng(26, t);
        MatchingInstance yes = random_matching_instance(n, true, rng);
        MatchingInstance no = random_matching_instance(n, false, rng);
        CHECK(matching_classical_trial(yes, n, rng).output);
        CHECK_FALSE(matching_classical_trial(no, n, rng).output);
    }

    MatchingQcParams qp = default_matching_qc_params(n);
    CHECK(qp.subset_size == 16);
    CHECK(qp.copies == 4);
    CHECK(qp.edges_sent == 4);
    CHECK(default_matching_qc_params(27).subset_size == 9);
    CHECK(default_matching_classical_subset(64) == 16);

    // Every recovered parity is exact, so on w = Mx the quantum referee only errs by abstaining.
    MatchingInstance exact = inst;
    exact.w = exact.mx();
    for (unsigned t = 0; t < 500; t++) {
        Rng rng(27, t);
        MatchingTrialStats st = matching_qc_trial(exact, qp, rng);
        CHECK(st.recovered <= st.edges_received);
        CHECK(st.edges_received <= qp.edges_sent);
        if (!st.abstained) {
            CHECK(st.output);
        }
    }

    SmpProtocol qc = matching_qc(n, qp);
    ProtocolCost c = protocol_cost(qc);
    CHECK(c.alice_quantum);
    CHECK(c.alice == 4 * 4);
    CHECK(c.bob == 4 * (2 * 4 + 1));
}

TEST_CASE("hidden matching at n = 4 is exact") {
    HiddenMatchingProtocol hm(4);
    CHECK(hm.alice_qubits() == 2);
    CHECK(hm.bob_message_bits() == 2);
    CHECK(hm.num_matchings() == 3);
    for (std::uint64_t mask = 0; mask < 16; mask++) {
        Input x = mask_to_bits(mask, 4);
        for (unsigned k = 1; k < 4; k++) {
            double total = 0;
            std::map<std::pair<std::uint32_t, std::uint32_t>, double> edge_mass;
            for (const auto &[out, prob] : hm.output_distribution(x, k)) {
                CHECK(hm.is_valid(x, k, out));
                CHECK((out.i ^ out.j) == k);
                total += prob;
                edge_mass[{out.i, out.j}] += prob;
            }
            CHECK(std::abs(total - 1) <= 1e-9);
            CHECK(edge_mass.size() == 2);
            for (const auto &[e, mass] : edge_mass) {
                CHECK(std::abs(mass - 0.5) <= 1e-9);
            }
        }
    }
}

TEST_CASE("hidden matching sampling at n = 8") {
    HiddenMatchingProtocol hm(8);
    unsigned invalid = 0;
    for (unsigned t = 0; t < 10000; t++) {
        Rng rng(28, t);
        Input x = mask_to_bits(rng.below(256), 8);
        unsigned k = 1 + static_cast<unsigned>(rng.below(7));
        invalid += !hm.is_valid(x, k, hm.sample(x, k, rng));
    }
    CHECK(invalid == 0);

    Input x = mask_to_bits(0b10110010, 8);
    HiddenMatchingOutput wrong{0, 1, 1 ^ (x[0] ^ x[1])};
    CHECK_FALSE(hm.is_valid(x, 1, wrong));
    HiddenMatchingOutput off_matching{0, 2, x[0] ^ x[2]};
    CHECK_FALSE(hm.is_valid(x, 1, off_matching));
}

TEST_CASE("xor matchings") {
    auto m = xor_matching(8, 3);
    REQUIRE(m.size() == 4);
    CHECK(m[0] == Edge{0, 3});
    CHECK(m[1] == Edge{1, 2});
    CHECK(m[2] == Edge{4, 7});
    CHECK(m[3] == Edge{5, 6});
    CHECK_THROWS_AS(xor_matching(8, 8), InvalidArgument);
    CHECK_THROWS_AS(xor_matching(6, 1), InvalidArgument);
    CHECK(encode_hidden_matching_output(4, {1, 2, 1}) == (1 * 4 + 2) * 2 + 1);
}

TEST_CASE("hidden matching relation table") {
    RelationTable rel = hidden_matching_relation_table(4, {0, 5, 9, 15});
    rel.validate();
    CHECK(rel.num_x == 4);
    CHECK(rel.num_y == 3);
    CHECK(rel.num_outputs == 32);
    // x = 0, k = 1: edges (0,1) and (2,3), both with parity 0.
    std::uint64_t expected = (std::uint64_t{1} << encode_hidden_matching_output(4, {0, 1, 0})) |
                             (std::uint64_t{1} << encode_hidden_matching_output(4, {2, 3, 0}));
    CHECK(rel.valid_mask(0, 0) == expected);
    CHECK_THROWS_AS(hidden_matching_relation_table(8, {0}), CapExceeded);
}

TEST_CASE("hidden matching verification fixture") {
    QuantumFixture fx = hidden_matching_verification(4);
    const FunctionTable &f = fx.function;
    CHECK(fx.protocol.alice_qubits == 2);
    for (std::size_t i = 0; i < f.num_x(); i++) {
        const Input &x = f.alice_inputs[i];
        for (std::size_t j = 0; j < f.num_y(); j++) {
            const Input &y = f.bob_inputs[j];
            unsigned k = y[0];
            auto edges = xor_matching(4, k);
            unsigned agree = 0;
            for (std::size_t e = 0; e < edges.size(); e++) {
                agree += (x[edges[e].first] ^ x[edges[e].second]) == y[1 + e];
            }
            // Oracle: each edge projector catches 2/n of the phase state, and only agreeing edges accept.
            double expected = agree * 2.0 / 4;
            CHECK(std::abs(exact_acceptance(fx.protocol, x, y) - expected) <= 1e-12);
            CHECK(f.value(i, j) == (agree == edges.size() ? 1u : 0u));
        }
    }
}

TEST_CASE("toy quantum fixtures") {
    QuantumFixture fx = toy_quantum_equality();
    const double overlap[4][4] = {
        {1, 0.5, 0, 0.5}, {0.5, 1, 0.5, 0}, {0, 0.5, 1, 0.5}, {0.5, 0, 0.5, 1}};
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t j = 0; j < 4; j++) {
            double acc = exact_acceptance(fx.protocol, fx.function.alice_inputs[i], fx.function.bob_inputs[j]);
            CHECK(std::abs(acc - overlap[i][j]) <= 1e-12);
        }
    }
    // A shared rotation of both state and measurement leaves every overlap unchanged.
    QuantumFixture pub = toy_quantum_equality_public_coin();
    CHECK(pub.protocol.coins.size == 2);
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t j = 0; j < 4; j++) {
            double acc = exact_acceptance(pub.protocol, pub.function.alice_inputs[i], pub.function.bob_inputs[j]);
            CHECK(std::abs(acc - overlap[i][j]) <= 1e-12);
        }
    }

    QuantumFixture a = random_quantum_fixture(2, 2, 3, 3, 99);
    QuantumFixture b = random_quantum_fixture(2, 2, 3, 3, 99);
    for (std::size_t i = 0; i < 3; i++) {
        for (std::size_t j = 0; j < 3; j++) {
            const Input &x = a.function.alice_inputs[i];
            const Input &y = a.function.bob_inputs[j];
            double acc = exact_acceptance(a.protocol, x, y);
            CHECK(acc == exact_acceptance(b.protocol, x, y));
            CHECK(a.function.value(i, j) == (acc >= 0.5 ? 1u : 0u));
        }
    }
}
