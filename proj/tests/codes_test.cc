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

#include "smplab/codes.h"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "smplab/errors.h"

using namespace smplab;

namespace {

// Independent weight scan: encodes by summing generator columns instead of row parities.
unsigned min_weight_by_columns(const LinearCode &code) {
    const auto &rows = code.generator_rows();
    unsigned best = code.block_bits();
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << code.message_bits()); x++) {
        std::vector<std::uint8_t> word(rows.size(), 0);
        for (unsigned col = 0; col < code.message_bits(); col++) {
            if ((x >> col) & 1) {
                for (std::size_t k = 0; k < rows.size(); k++) {
                    word[k] ^= static_cast<std::uint8_t>((rows[k] >> col) & 1);
                }
            }
        }
        best = std::min(best, static_cast<unsigned>(std::count(word.begin(), word.end(), 1)));
    }
    return best;
}

}  // namespace

TEST_CASE("encode") {
    LinearCode h2 = LinearCode::hadamard(2);
    CHECK(h2.encode(0) == Codeword{0, 0, 0, 0});
    // x = (1, 0) is mask 1; bit s is <x, s>.
    CHECK(h2.encode(1) == Codeword{0, 1, 0, 1});
    CHECK(h2.encode(2) == Codeword{0, 0, 1, 1});

    Rng rng(3, 0);
    LinearCode random = LinearCode::random(5, 12, rng);
    for (int t = 0; t < 50; t++) {
        std::uint64_t x = rng.below(32);
        std::uint64_t y = rng.below(32);
        Codeword cx = random.encode(x);
        Codeword cy = random.encode(y);
        Codeword cxy = random.encode(x ^ y);
        for (std::size_t k = 0; k < cx.size(); k++) {
            CHECK(cxy[k] == (cx[k] ^ cy[k]));
        }
    }
    CHECK_THROWS_AS(h2.encode(4), InvalidArgument);
}

TEST_CASE("minimum distance") {
    CHECK(min_distance_bruteforce(LinearCode::hadamard(3)) == 4);
    CHECK(min_distance_bruteforce(LinearCode::repetition(5)) == 5);
    for (unsigned n = 1; n <= 10; n++) {
        LinearCode h = LinearCode::hadamard(n);
        CHECK(h.block_bits() == (1u << n));
        CHECK(min_distance_bruteforce(h) == (1u << (n - 1)));
    }
    Rng rng(4, 0);
    for (int t = 0; t < 10; t++) {
        LinearCode c = LinearCode::random(4 + t % 3, 10 + t, rng);
        CHECK(min_distance_bruteforce(c) == min_weight_by_columns(c));
    }
    CHECK_THROWS_AS(min_distance_bruteforce(LinearCode::random(13, 20, rng)), CapExceeded);
}

TEST_CASE("grid view") {
    LinearCode h = LinearCode::hadamard(2);
    CHECK(h.grid().rows == 2);
    CHECK(h.grid().cols == 2);
    Codeword w{1, 0, 0, 1};
    CHECK(grid_cell(h, w, 0, 0) == 1);
    CHECK(grid_cell(h, w, 1, 1) == 1);
    CHECK(grid_cell(h, w, 0, 1) == 0);
    CHECK_THROWS_AS(grid_cell(h, w, 2, 0), InvalidArgument);

    LinearCode wide = LinearCode::hadamard(3);
    std::set<std::pair<unsigned, unsigned>> seen;
    Codeword unit(wide.block_bits(), 0);
    for (unsigned k = 0; k < wide.block_bits(); k++) {
        std::fill(unit.begin(), unit.end(), 0);
        unit[k] = 1;
        for (unsigned r = 0; r < wide.grid().rows; r++) {
            for (unsigned c = 0; c < wide.grid().cols; c++) {
                if (grid_cell(wide, unit, r, c)) {
                    seen.insert({r, c});
                }
            }
        }
    }
    CHECK(seen.size() == wide.block_bits());

    GridShape g = balanced_grid(12);
    CHECK(g.rows == 3);
    CHECK(g.cols == 4);
    CHECK(balanced_grid(7).rows == 1);
    CHECK_THROWS_AS(h.with_grid({3, 2}), InvalidArgument);
}

TEST_CASE("text form round trip") {
    Rng rng(5, 0);
    LinearCode c = LinearCode::random(4, 9, rng).with_grid({3, 3});
    LinearCode back = LinearCode::parse_text(c.to_text());
    CHECK(back.generator_rows() == c.generator_rows());
    CHECK(back.grid().rows == 3);
    CHECK(back.message_bits() == 4);

    LinearCode parsed = LinearCode::parse_text("# two-bit parity code\n10\n01\n11\n11\n");
    CHECK(parsed.block_bits() == 4);
    CHECK(parsed.encode(3) == Codeword{1, 1, 0, 0});
    CHECK_THROWS_AS(LinearCode::parse_text("10\n011\n"), InvalidArgument);
    CHECK_THROWS_AS(LinearCode::parse_text("1x\n"), InvalidArgument);
}

TEST_CASE("repeated code") {
    LinearCode r = LinearCode::repeated(LinearCode::hadamard(2), 3);
    CHECK(r.block_bits() == 12);
    CHECK(min_distance_bruteforce(r) == 6);
    CHECK(hamming_weight(r.encode(3)) == 6);
    CHECK(hamming_distance(r.encode(1), r.encode(2)) == 6);
}
