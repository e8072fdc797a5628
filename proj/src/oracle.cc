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

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "smplab/errors.h"
#include "smplab/qcore.h"

namespace smplab {

// ---------------------------------------------------------------------------
// Rational.

std::string Rational::to_string() const {
    std::uint64_t g = std::gcd(num, den);
    if (g == 0) {
        g = 1;
    }
    return std::to_string(num / g) + "/" + std::to_string(den / g);
}

bool operator<=(const Rational &a, const Rational &b) {
    return static_cast<unsigned __int128>(a.num) * b.den <= static_cast<unsigned __int128>(b.num) * a.den;
}

bool operator==(const Rational &a, const Rational &b) {
    return static_cast<unsigned __int128>(a.num) * b.den == static_cast<unsigned __int128>(b.num) * a.den;
}

Rational operator+(const Rational &a, const Rational &b) {
    if (a.den == b.den) {
        return {a.num + b.num, a.den};
    }
    unsigned __int128 num = static_cast<unsigned __int128>(a.num) * b.den + static_cast<unsigned __int128>(b.num) * a.den;
    unsigned __int128 den = static_cast<unsigned __int128>(a.den) * b.den;
    unsigned __int128 x = num;
    unsigned __int128 y = den;
    while (y != 0) {
        unsigned __int128 t = x % y;
        x = y;
        y = t;
    }
    if (x > 1) {
        num /= x;
        den /= x;
    }
    if (den > UINT64_MAX || num > UINT64_MAX) {
        throw CapExceeded("rational overflow");
    }
    return {static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

// ---------------------------------------------------------------------------
// Deterministic protocols.

std::uint32_t DeterministicSmpProtocol::output(std::size_t i, std::size_t j) const {
    return referee.at((alice_map.at(i) << c_b) | bob_map.at(j));
}

void DeterministicSmpProtocol::validate() const {
    if (c_a + c_b > 30) {
        throw CapExceeded("deterministic protocol: referee table too large");
    }
    for (Message a : alice_map) {
        if ((a >> c_a) != 0) {
            throw InvalidArgument("deterministic protocol: Alice message wider than c_A");
        }
    }
    for (Message b : bob_map) {
        if ((b >> c_b) != 0) {
            throw InvalidArgument("deterministic protocol: Bob message wider than c_B");
        }
    }
    if (referee.size() != (std::size_t{1} << (c_a + c_b))) {
        throw InvalidArgument("deterministic protocol: referee table has the wrong size");
    }
}

DetComplexity det_complexity_function(const FunctionTable &f) {
    if (!f.total()) {
        throw InvalidArgument("det_complexity_function: f is partial; use det_complexity_relation");
    }
    if (f.num_x() > 1024 || f.num_y() > 1024) {
        throw CapExceeded("det_complexity_function: more than 2^10 inputs on a side");
    }
    std::set<std::vector<std::uint32_t>> rows;
    std::set<std::vector<std::uint32_t>> cols;
    for (std::size_t i = 0; i < f.num_x(); i++) {
        std::vector<std::uint32_t> row;
        for (std::size_t j = 0; j < f.num_y(); j++) {
            row.push_back(f.value(i, j));
        }
        rows.insert(std::move(row));
    }
    for (std::size_t j = 0; j < f.num_y(); j++) {
        std::vector<std::uint32_t> col;
        for (std::size_t i = 0; i < f.num_x(); i++) {
            col.push_back(f.value(i, j));
        }
        cols.insert(std::move(col));
    }
    DetComplexity out;
    out.distinct_rows = rows.size();
    out.distinct_cols = cols.size();
    out.c_a = ceil_log2(std::max<std::size_t>(rows.size(), 1));
    out.c_b = ceil_log2(std::max<std::size_t>(cols.size(), 1));
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive relation search.

namespace {

using MaskMatrix = std::vector<std::vector<std::uint64_t>>;

// Groups identical rows; returns representatives and the class of every original row.
MaskMatrix dedupe_rows(const MaskMatrix &m, std::vector<std::size_t> &class_of) {
    std::map<std::vector<std::uint64_t>, std::size_t> seen;
    MaskMatrix out;
    class_of.assign(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); i++) {
        auto [it, inserted] = seen.emplace(m[i], out.size());
        if (inserted) {
            out.push_back(m[i]);
        }
        class_of[i] = it->second;
    }
    return out;
}

MaskMatrix transpose(const MaskMatrix &m, std::size_t cols) {
    MaskMatrix t(cols, std::vector<std::uint64_t>(m.size()));
    for (std::size_t i = 0; i < m.size(); i++) {
        for (std::size_t j = 0; j < cols; j++) {
            t[j][i] = m[i][j];
        }
    }
    return t;
}

// Searches partitions of the rows of `m` (at most max_row_classes classes) and of its
// columns (at most max_col_classes) with a common valid output on every block.
class BlockSearch {
   public:
    BlockSearch(const MaskMatrix &m, std::size_t max_row_classes, std::size_t max_col_classes)
        : m_(m), rows_(m.size()), cols_(m.empty() ? 0 : m[0].size()),
          max_rows_(std::min(max_row_classes, m.size())), max_cols_(max_col_classes) {
    }

    bool run() {
        row_class_.assign(rows_, 0);
        return enumerate_rows(0, 0);
    }

    std::uint64_t explored = 0;
    std::vector<std::size_t> row_class_;
    std::vector<std::size_t> col_class_;
    std::vector<std::vector<std::uint64_t>> block_masks_;  // [col class][row class]

   private:
    bool enumerate_rows(std::size_t i, std::size_t used) {
        if (i == rows_) {
            explored++;
            return assign_columns(used);
        }
        for (std::size_t k = 0; k <= used && k < max_rows_; k++) {
            row_class_[i] = k;
            if (enumerate_rows(i + 1, std::max(used, k + 1))) {
                return true;
            }
        }
        return false;
    }

    bool assign_columns(std::size_t row_classes) {
        column_vectors_.assign(cols_, std::vector<std::uint64_t>(row_classes, ~std::uint64_t{0}));
        for (std::size_t j = 0; j < cols_; j++) {
            for (std::size_t i = 0; i < rows_; i++) {
                column_vectors_[j][row_class_[i]] &= m_[i][j];
            }
            for (std::uint64_t v : column_vectors_[j]) {
                if (v == 0) {
                    return false;
                }
            }
        }
        col_class_.assign(cols_, 0);
        block_masks_.clear();
        return backtrack(0);
    }

    bool backtrack(std::size_t j) {
        if (j == cols_) {
            return true;
        }
        const auto &vec = column_vectors_[j];
        for (std::size_t k = 0; k < block_masks_.size(); k++) {
            std::vector<std::uint64_t> saved = block_masks_[k];
            bool ok = true;
            for (std::size_t r = 0; r < vec.size() && ok; r++) {
                block_masks_[k][r] &= vec[r];
                ok = block_masks_[k][r] != 0;
            }
            if (ok) {
                col_class_[j] = k;
                if (backtrack(j + 1)) {
                    return true;
                }
            }
            block_masks_[k] = std::move(saved);
        }
        if (block_masks_.size() < max_cols_) {
            block_masks_.push_back(vec);
            col_class_[j] = block_masks_.size() - 1;
            if (backtrack(j + 1)) {
                return true;
            }
            block_masks_.pop_back();
        }
        return false;
    }

    const MaskMatrix &m_;
    std::size_t rows_;
    std::size_t cols_;
    std::size_t max_rows_;
    std::size_t max_cols_;
    std::vector<std::vector<std::uint64_t>> column_vectors_;
};

std::uint32_t lowest_output(std::uint64_t mask) {
    return mask == 0 ? 0u : static_cast<std::uint32_t>(std::countr_zero(mask));
}

}  // namespace

RelationSearchResult det_complexity_relation(const RelationTable &rel, unsigned max_bits) {
    rel.validate();
    if (rel.num_x * rel.num_y > kOracleMaxCells) {
        throw CapExceeded(
            "det_complexity_relation: " + std::to_string(rel.num_x * rel.num_y) + " cells exceed the cap of " +
            std::to_string(kOracleMaxCells));
    }
    if (max_bits > kOracleMaxBits) {
        throw CapExceeded("det_complexity_relation: max_bits above " + std::to_string(kOracleMaxBits));
    }
    const std::uint64_t full = rel.num_outputs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rel.num_outputs) - 1;
    MaskMatrix cells(rel.num_x, std::vector<std::uint64_t>(rel.num_y));
    for (std::size_t i = 0; i < rel.num_x; i++) {
        for (std::size_t j = 0; j < rel.num_y; j++) {
            cells[i][j] = rel.mu(i, j) > 0 ? rel.valid_mask(i, j) : full;
        }
    }

    // Identical rows (columns) can always share a message, so search over distinct ones.
    std::vector<std::size_t> x_class;
    std::vector<std::size_t> y_class;
    MaskMatrix dx = dedupe_rows(cells, x_class);
    MaskMatrix dxt = transpose(dx, rel.num_y);
    MaskMatrix dyt = dedupe_rows(dxt, y_class);
    MaskMatrix reduced = transpose(dyt, dx.size());  // [distinct x][distinct y]
    const std::size_t nx = reduced.size();
    const std::size_t ny = dyt.size();
    const bool x_small = nx <= ny;
    MaskMatrix oriented = x_small ? reduced : dyt;

    RelationSearchResult out;
    for (unsigned total = 0; total <= max_bits; total++) {
        for (unsigned c_a = 0; c_a <= total; c_a++) {
            unsigned c_b = total - c_a;
            std::size_t ka = std::size_t{1} << c_a;
            std::size_t kb = std::size_t{1} << c_b;
            BlockSearch search(oriented, x_small ? ka : kb, x_small ? kb : ka);
            bool found = search.run();
            out.partitions_explored += search.explored;
            if (!found) {
                continue;
            }
            const auto &x_part = x_small ? search.row_class_ : search.col_class_;
            const auto &y_part = x_small ? search.col_class_ : search.row_class_;
            DeterministicSmpProtocol &w = out.witness;
            w.c_a = c_a;
            w.c_b = c_b;
            w.alice_map.resize(rel.num_x);
            w.bob_map.resize(rel.num_y);
            for (std::size_t i = 0; i < rel.num_x; i++) {
                w.alice_map[i] = x_part[x_class[i]];
            }
            for (std::size_t j = 0; j < rel.num_y; j++) {
                w.bob_map[j] = y_part[y_class[j]];
            }
            w.referee.assign(std::size_t{1} << total, 0);
            std::vector<std::uint64_t> block(std::size_t{1} << total, full);
            for (std::size_t i = 0; i < rel.num_x; i++) {
                for (std::size_t j = 0; j < rel.num_y; j++) {
                    block[(w.alice_map[i] << c_b) | w.bob_map[j]] &= cells[i][j];
                }
            }
            for (std::size_t z = 0; z < block.size(); z++) {
                w.referee[z] = lowest_output(block[z]);
            }
            out.cost = total;
            return out;
        }
    }
    return out;
}

RelationSearchResult exhaustive_function_search(const FunctionTable &f, unsigned max_bits) {
    return det_complexity_relation(RelationTable::from_function(f), max_bits);
}

AlicePartitionCheck check_zero_error_alice_maps(const FunctionTable &f) {
    if (!f.total()) {
        throw InvalidArgument("check_zero_error_alice_maps: f must be total");
    }
    if (f.num_x() > 10) {
        throw CapExceeded("check_zero_error_alice_maps: more than 10 Alice inputs");
    }
    AlicePartitionCheck out;
    const std::size_t n = f.num_x();
    std::vector<std::size_t> cls(n, 0);
    // Restricted growth strings enumerate each partition of X exactly once.
    auto visit = [&](auto &&self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            out.partitions_checked++;
            // With Bob sending y itself, zero error holds iff f(., y) is constant on every class.
            bool ok = true;
            for (std::size_t j = 0; j < f.num_y() && ok; j++) {
                std::vector<std::int64_t> seen(used, -1);
                for (std::size_t x = 0; x < n && ok; x++) {
                    auto v = static_cast<std::int64_t>(f.value(x, j));
                    if (seen[cls[x]] < 0) {
                        seen[cls[x]] = v;
                    } else {
                        ok = seen[cls[x]] == v;
                    }
                }
            }
            if (ok) {
                out.zero_error_partitions++;
                if (used != n) {
                    out.only_injective = false;
                }
            }
            return;
        }
        for (std::size_t k = 0; k <= used; k++) {
            cls[i] = k;
            self(self, i + 1, std::max(used, k + 1));
        }
    };
    visit(visit, 0, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Relation to function.

namespace {

FunctionTable indexed_table(std::size_t nx, std::size_t ny, std::uint32_t outputs) {
    FunctionTable f;
    for (std::size_t i = 0; i < nx; i++) {
        f.alice_inputs.push_back({static_cast<std::uint32_t>(i)});
    }
    for (std::size_t j = 0; j < ny; j++) {
        f.bob_inputs.push_back({static_cast<std::uint32_t>(j)});
    }
    f.values.assign(nx * ny, std::nullopt);
    f.num_outputs = outputs;
    return f;
}

void require_shape(const DeterministicSmpProtocol &p, const RelationTable &rel) {
    p.validate();
    rel.validate();
    if (p.num_x() != rel.num_x || p.num_y() != rel.num_y) {
        throw InvalidArgument("protocol and relation have different input sets");
    }
}

}  // namespace

ExtractedFunction extract_function(const DeterministicSmpProtocol &p, const RelationTable &rel) {
    require_shape(p, rel);
    ExtractedFunction out;
    out.function = indexed_table(rel.num_x, rel.num_y, rel.num_outputs);
    out.error.den = rel.mu_denominator;
    for (std::size_t i = 0; i < rel.num_x; i++) {
        for (std::size_t j = 0; j < rel.num_y; j++) {
            std::uint32_t z = p.output(i, j);
            if (z >= rel.num_outputs) {
                throw InvalidArgument("extract_function: protocol output outside the relation's alphabet");
            }
            out.function.values[i * rel.num_y + j] = z;
            if (!rel.is_valid(i, j, z)) {
                out.error.num += rel.mu(i, j);
            }
        }
    }
    return out;
}

UnionBoundCheck union_bound_check(
    const DeterministicSmpProtocol &p_a, const FunctionTable &f, const RelationTable &rel, double eps) {
    require_shape(p_a, rel);
    if (f.num_x() != rel.num_x || f.num_y() != rel.num_y) {
        throw InvalidArgument("union_bound_check: function and relation have different input sets");
    }
    UnionBoundCheck out;
    out.solve_error.den = out.compute_error.den = out.validity_error.den = rel.mu_denominator;
    for (std::size_t i = 0; i < rel.num_x; i++) {
        for (std::size_t j = 0; j < rel.num_y; j++) {
            std::uint64_t w = rel.mu(i, j);
            if (w == 0) {
                continue;
            }
            std::uint32_t z = p_a.output(i, j);
            std::uint32_t fz = f.value(i, j);
            if (!rel.is_valid(i, j, z)) {
                out.solve_error.num += w;
            }
            if (z != fz) {
                out.compute_error.num += w;
            }
            if (!rel.is_valid(i, j, fz)) {
                out.validity_error.num += w;
            }
        }
    }
    out.holds = out.solve_error <= out.compute_error + out.validity_error;
    bool premise = out.compute_error.value() <= eps && out.validity_error.value() <= eps;
    out.within_two_eps = !premise || out.solve_error.value() <= 2 * eps;
    return out;
}

// ---------------------------------------------------------------------------
// Booleanization.

std::vector<FunctionTable> booleanize(const FunctionTable &f, const LinearCode &g, double min_relative_distance) {
    const unsigned k = g.message_bits();
    if (k < 63 && f.num_outputs > (std::uint64_t{1} << k)) {
        throw InvalidArgument("booleanize: outputs do not fit the code's message length");
    }
    double rel = static_cast<double>(min_distance_bruteforce(g)) / g.block_bits();
    if (rel < min_relative_distance) {
        throw VerificationFailure(
            "booleanize: code relative distance " + std::to_string(rel) + " below " +
            std::to_string(min_relative_distance));
    }
    std::vector<FunctionTable> out(g.block_bits(), f);
    for (auto &t : out) {
        t.num_outputs = 2;
    }
    for (std::size_t cell = 0; cell < f.values.size(); cell++) {
        if (!f.values[cell]) {
            continue;
        }
        Codeword w = g.encode(*f.values[cell]);
        for (unsigned j = 0; j < g.block_bits(); j++) {
            out[j].values[cell] = w[j];
        }
    }
    return out;
}

std::uint64_t nearest_codeword(const LinearCode &g, const Codeword &received) {
    if (g.message_bits() > 16) {
        throw CapExceeded("nearest_codeword: message length above 16");
    }
    std::uint64_t best = 0;
    unsigned best_d = ~0u;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.message_bits()); m++) {
        unsigned d = hamming_distance(g.encode(m), received);
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

std::uint64_t decode_booleanized(const std::vector<FunctionTable> &bits, const LinearCode &g, std::size_t i, std::size_t j) {
    if (bits.size() != g.block_bits()) {
        throw InvalidArgument("decode_booleanized: one table per codeword bit expected");
    }
    Codeword w(bits.size());
    for (std::size_t k = 0; k < bits.size(); k++) {
        w[k] = static_cast<std::uint8_t>(bits[k].value(i, j));
    }
    return nearest_codeword(g, w);
}

// ---------------------------------------------------------------------------
// Random toy instances.

RelationTable random_toy_relation(std::size_t num_x, std::size_t num_y, std::uint32_t outputs, Rng &rng) {
    if (outputs == 0 || outputs > 16 || num_x == 0 || num_y == 0) {
        throw InvalidArgument("random_toy_relation: need 1 <= outputs <= 16 and nonempty inputs");
    }
    RelationTable rel;
    rel.num_x = num_x;
    rel.num_y = num_y;
    rel.num_outputs = outputs;
    const std::uint64_t full = (std::uint64_t{1} << outputs) - 1;
    rel.mu_denominator = 0;
    for (std::size_t c = 0; c < num_x * num_y; c++) {
        rel.valid.push_back(1 + rng.below(full));
        rel.mu_weights.push_back(rng.below(4));
        rel.mu_denominator += rel.mu_weights.back();
    }
    if (rel.mu_denominator == 0) {
        rel.mu_weights[rng.below(rel.mu_weights.size())] = 1;
        rel.mu_denominator = 1;
    }
    rel.validate();
    return rel;
}

DeterministicSmpProtocol random_deterministic_protocol(
    std::size_t num_x, std::size_t num_y, unsigned c_a, unsigned c_b, std::uint32_t outputs, Rng &rng) {
    DeterministicSmpProtocol p;
    p.c_a = c_a;
    p.c_b = c_b;
    for (std::size_t i = 0; i < num_x; i++) {
        p.alice_map.push_back(rng.below(std::uint64_t{1} << c_a));
    }
    for (std::size_t j = 0; j < num_y; j++) {
        p.bob_map.push_back(rng.below(std::uint64_t{1} << c_b));
    }
    for (std::size_t z = 0; z < (std::size_t{1} << (c_a + c_b)); z++) {
        p.referee.push_back(static_cast<std::uint32_t>(rng.below(outputs)));
    }
    p.validate();
    return p;
}

}  // namespace smplab
