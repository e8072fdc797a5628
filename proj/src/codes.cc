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
#include <bit>
#include <fstream>
#include <sstream>

#include "smplab/errors.h"

namespace smplab {

GridShape balanced_grid(unsigned m) {
    if (m == 0) {
        throw InvalidArgument("grid of an empty code");
    }
    unsigned rows = 1;
    for (unsigned d = 1; d * d <= m; d++) {
        if (m % d == 0) {
            rows = d;
        }
    }
    return {rows, m / rows};
}

LinearCode::LinearCode(unsigned message_bits, std::vector<std::uint64_t> rows, GridShape grid)
    : n_(message_bits), rows_(std::move(rows)), grid_(grid) {
    if (n_ == 0 || n_ > 63) {
        throw InvalidArgument("linear code: message length must be in [1, 63]");
    }
    if (rows_.empty()) {
        throw InvalidArgument("linear code: empty generator");
    }
    std::uint64_t mask = (std::uint64_t{1} << n_) - 1;
    for (std::uint64_t r : rows_) {
        if ((r & ~mask) != 0) {
            throw InvalidArgument("linear code: generator row wider than the message");
        }
    }
    if (static_cast<std::uint64_t>(grid_.rows) * grid_.cols != rows_.size()) {
        throw InvalidArgument(
            "linear code: grid " + std::to_string(grid_.rows) + "x" + std::to_string(grid_.cols) +
            " does not cover " + std::to_string(rows_.size()) + " codeword bits");
    }
}

LinearCode::LinearCode(unsigned message_bits, std::vector<std::uint64_t> rows)
    : LinearCode(message_bits, rows, balanced_grid(static_cast<unsigned>(rows.size()))) {
}

LinearCode LinearCode::hadamard(unsigned n) {
    if (n == 0 || n > 12) {
        throw CapExceeded("hadamard code: n must be in [1, 12]");
    }
    std::vector<std::uint64_t> rows(std::size_t{1} << n);
    for (std::size_t s = 0; s < rows.size(); s++) {
        rows[s] = s;
    }
    return LinearCode(n, std::move(rows));
}

LinearCode LinearCode::repetition(unsigned m) {
    return LinearCode(1, std::vector<std::uint64_t>(m, 1));
}

LinearCode LinearCode::random(unsigned n, unsigned m, Rng &rng) {
    std::vector<std::uint64_t> rows(m);
    std::uint64_t limit = std::uint64_t{1} << n;
    for (auto &r : rows) {
        r = 1 + rng.below(limit - 1);
    }
    return LinearCode(n, std::move(rows));
}

LinearCode LinearCode::repeated(const LinearCode &base, unsigned times) {
    std::vector<std::uint64_t> rows;
    for (unsigned t = 0; t < times; t++) {
        rows.insert(rows.end(), base.rows_.begin(), base.rows_.end());
    }
    return LinearCode(base.n_, std::move(rows));
}

LinearCode LinearCode::with_grid(GridShape grid) const {
    return LinearCode(n_, rows_, grid);
}

Codeword LinearCode::encode(std::uint64_t x) const {
    if ((x >> n_) != 0) {
        throw InvalidArgument("encode: message longer than " + std::to_string(n_) + " bits");
    }
    Codeword w(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); k++) {
        w[k] = static_cast<std::uint8_t>(std::popcount(rows_[k] & x) & 1);
    }
    return w;
}

LinearCode LinearCode::parse_text(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::uint64_t> rows;
    unsigned width = 0;
    bool have_grid = false;
    GridShape grid;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string token;
        if (!(ls >> token)) {
            continue;
        }
        if (token == "grid") {
            if (!(ls >> grid.rows >> grid.cols)) {
                throw InvalidArgument("generator file: malformed grid line");
            }
            have_grid = true;
            continue;
        }
        std::string extra;
        if (ls >> extra) {
            throw InvalidArgument("generator file: unexpected text after row '" + token + "'");
        }
        if (width == 0) {
            width = static_cast<unsigned>(token.size());
        } else if (token.size() != width) {
            throw InvalidArgument("generator file: rows have different lengths");
        }
        std::uint64_t row = 0;
        for (std::size_t k = 0; k < token.size(); k++) {
            if (token[k] == '1') {
                row |= std::uint64_t{1} << k;
            } else if (token[k] != '0') {
                throw InvalidArgument("generator file: row characters must be 0 or 1");
            }
        }
        rows.push_back(row);
    }
    if (rows.empty()) {
        throw InvalidArgument("generator file: no rows");
    }
    if (have_grid) {
        return LinearCode(width, std::move(rows), grid);
    }
    return LinearCode(width, std::move(rows));
}

LinearCode LinearCode::load_text(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open generator file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

std::string LinearCode::to_text() const {
    std::ostringstream out;
    out << "grid " << grid_.rows << " " << grid_.cols << "\n";
    for (std::uint64_t r : rows_) {
        for (unsigned k = 0; k < n_; k++) {
            out << (((r >> k) & 1) ? '1' : '0');
        }
        out << "\n";
    }
    return out.str();
}

unsigned hamming_weight(const Codeword &w) {
    return static_cast<unsigned>(std::count(w.begin(), w.end(), std::uint8_t{1}));
}

unsigned hamming_distance(const Codeword &a, const Codeword &b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("hamming_distance: length mismatch");
    }
    unsigned d = 0;
    for (std::size_t k = 0; k < a.size(); k++) {
        d += a[k] != b[k];
    }
    return d;
}

unsigned min_distance_bruteforce(const LinearCode &code) {
    if (code.message_bits() > 12) {
        throw CapExceeded("min_distance_bruteforce: n must be at most 12");
    }
    unsigned best = code.block_bits();
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << code.message_bits()); x++) {
        best = std::min(best, hamming_weight(code.encode(x)));
    }
    return best;
}

std::uint8_t grid_cell(const LinearCode &code, const Codeword &word, unsigned row, unsigned col) {
    const GridShape &g = code.grid();
    if (row >= g.rows || col >= g.cols) {
        throw InvalidArgument(
            "grid_cell: (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
            std::to_string(g.rows) + "x" + std::to_string(g.cols));
    }
    if (word.size() != code.block_bits()) {
        throw InvalidArgument("grid_cell: codeword length mismatch");
    }
    return word[static_cast<std::size_t>(row) * g.cols + col];
}

}  // namespace smplab
