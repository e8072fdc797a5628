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

#ifndef SMPLAB_CODES_H
#define SMPLAB_CODES_H

#include <cstdint>
#include <string>
#include <vector>

#include "smplab/rng.h"

namespace smplab {

using Codeword = std::vector<std::uint8_t>;

/// Rows x cols view of a codeword, read row-major: cell (r, c) is bit r * cols + c.
struct GridShape {
    unsigned rows = 1;
    unsigned cols = 1;
};

/// Most balanced factorization rows * cols = m with rows <= cols.
GridShape balanced_grid(unsigned m);

/// Binary linear code C: {0,1}^n -> {0,1}^m given by an m x n generator over GF(2).
///
/// Row k of the generator is stored as an n-bit mask; codeword bit k is the parity of
/// (row_k & x). Messages are masks with x_1 in bit 0.
class LinearCode {
   public:
    LinearCode(unsigned message_bits, std::vector<std::uint64_t> rows, GridShape grid);
    LinearCode(unsigned message_bits, std::vector<std::uint64_t> rows);

    /// Codeword bit s = <x, s> for every s in [0, 2^n).
    static LinearCode hadamard(unsigned n);
    static LinearCode repetition(unsigned m);
    /// Generator rows drawn uniformly at random (nonzero rows).
    static LinearCode random(unsigned n, unsigned m, Rng &rng);
    /// Each codeword of `base` repeated `times` times back to back.
    static LinearCode repeated(const LinearCode &base, unsigned times);
    /// Text bit matrix: optional `grid R C` line, then m lines of n characters '0'/'1'. '#' starts a comment.
    static LinearCode parse_text(const std::string &text);
    static LinearCode load_text(const std::string &path);
    std::string to_text() const;

    unsigned message_bits() const {
        return n_;
    }
    unsigned block_bits() const {
        return static_cast<unsigned>(rows_.size());
    }
    const GridShape &grid() const {
        return grid_;
    }
    const std::vector<std::uint64_t> &generator_rows() const {
        return rows_;
    }
    LinearCode with_grid(GridShape grid) const;

    Codeword encode(std::uint64_t x) const;

   private:
    unsigned n_;
    std::vector<std::uint64_t> rows_;
    GridShape grid_;
};

/// min over nonzero x of weight(C(x)), by enumerating all 2^n - 1 messages. Requires n <= 12.
unsigned min_distance_bruteforce(const LinearCode &code);

/// Bit at (row, col) of the grid view. Throws InvalidArgument when out of range.
std::uint8_t grid_cell(const LinearCode &code, const Codeword &word, unsigned row, unsigned col);

unsigned hamming_weight(const Codeword &w);
unsigned hamming_distance(const Codeword &a, const Codeword &b);

}  // namespace smplab

#endif
