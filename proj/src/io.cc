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

#include "smplab/io.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "smplab/errors.h"

namespace smplab {

namespace {

constexpr char kMagic[4] = {'S', 'M', 'P', 'M'};
constexpr std::uint32_t kMatrixVersion = 1;

void put_u64(std::vector<std::uint8_t> &out, std::uint64_t v, unsigned bytes) {
    for (unsigned k = 0; k < bytes; k++) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
}

std::uint64_t get_u64(const std::vector<std::uint8_t> &in, std::size_t &pos, unsigned bytes) {
    if (pos + bytes > in.size()) {
        throw InvalidArgument("matrix container: truncated");
    }
    std::uint64_t v = 0;
    for (unsigned k = 0; k < bytes; k++) {
        v |= static_cast<std::uint64_t>(in[pos + k]) << (8 * k);
    }
    pos += bytes;
    return v;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(std::string line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) {
        line.resize(hash);
    }
    return trim(line);
}

std::uint64_t parse_uint(const std::string &token, const char *what) {
    std::uint64_t v = 0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    int base = 10;
    if (token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
        first += 2;
        base = 16;
    }
    auto [ptr, ec] = std::from_chars(first, last, v, base);
    if (ec != std::errc() || ptr != last) {
        throw InvalidArgument(std::string(what) + ": cannot parse '" + token + "' as an unsigned integer");
    }
    return v;
}

std::pair<std::uint64_t, std::uint64_t> parse_rational(const std::string &token) {
    auto slash = token.find('/');
    if (slash == std::string::npos) {
        return {parse_uint(token, "mu"), 1};
    }
    std::uint64_t num = parse_uint(token.substr(0, slash), "mu");
    std::uint64_t den = parse_uint(token.substr(slash + 1), "mu");
    if (den == 0) {
        throw InvalidArgument("mu: zero denominator");
    }
    return {num, den};
}

}  // namespace

std::vector<std::uint8_t> matrix_to_binary(const Matrix &m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("matrix container: matrix must be square");
    }
    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    put_u64(out, kMatrixVersion, 4);
    put_u64(out, static_cast<std::uint64_t>(m.rows()), 8);
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            put_u64(out, std::bit_cast<std::uint64_t>(m(i, j).real()), 8);
            put_u64(out, std::bit_cast<std::uint64_t>(m(i, j).imag()), 8);
        }
    }
    return out;
}

Matrix matrix_from_binary(const std::vector<std::uint8_t> &bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw InvalidArgument("matrix container: bad magic");
    }
    std::size_t pos = 4;
    if (get_u64(bytes, pos, 4) != kMatrixVersion) {
        throw InvalidArgument("matrix container: unsupported version");
    }
    std::uint64_t dim = get_u64(bytes, pos, 8);
    if (dim > (std::uint64_t{1} << 16) || bytes.size() != pos + dim * dim * 16) {
        throw InvalidArgument("matrix container: size does not match the header");
    }
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            double re = std::bit_cast<double>(get_u64(bytes, pos, 8));
            double im = std::bit_cast<double>(get_u64(bytes, pos, 8));
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

std::string matrix_to_text(const Matrix &m) {
    std::ostringstream out;
    out.precision(17);
    out << "matrix " << m.rows() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            out << (j ? " " : "") << m(i, j).real() << "," << m(i, j).imag();
        }
        out << "\n";
    }
    return out.str();
}

Matrix matrix_from_text(const std::string &text) {
    std::istringstream in(text);
    std::string word;
    long long dim = -1;
    if (!(in >> word >> dim) || word != "matrix" || dim < 0 || dim > (1 << 16)) {
        throw InvalidArgument("matrix text: expected 'matrix <dim>' header");
    }
    Matrix m(dim, dim);
    for (long long i = 0; i < dim; i++) {
        for (long long j = 0; j < dim; j++) {
            std::string tok;
            if (!(in >> tok)) {
                throw InvalidArgument("matrix text: too few entries");
            }
            auto comma = tok.find(',');
            if (comma == std::string::npos) {
                throw InvalidArgument("matrix text: entry '" + tok + "' is not 're,im'");
            }
            try {
                m(i, j) = Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
            } catch (const std::exception &) {
                throw InvalidArgument("matrix text: entry '" + tok + "' is not numeric");
            }
        }
    }
    std::string extra;
    if (in >> extra) {
        throw InvalidArgument("matrix text: trailing data");
    }
    return m;
}

TableFile parse_table_text(const std::string &text) {
    std::istringstream in(text);
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_comment(line);
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) {
            tokens.push_back(tok);
        }
        lines.push_back(std::move(tokens));
    }
    if (lines.empty() || lines[0].size() != 4 || (lines[0][0] != "function" && lines[0][0] != "relation")) {
        throw InvalidArgument("table file: expected 'function|relation X Y k' header");
    }
    TableFile out;
    out.is_function = lines[0][0] == "function";
    std::size_t nx = parse_uint(lines[0][1], "table header");
    std::size_t ny = parse_uint(lines[0][2], "table header");
    auto k = static_cast<std::uint32_t>(parse_uint(lines[0][3], "table header"));
    if (nx == 0 || ny == 0 || k == 0 || nx * ny > (1u << 20)) {
        throw InvalidArgument("table file: empty or oversized table");
    }
    if (!out.is_function && k > 64) {
        throw InvalidArgument("table file: relations support at most 64 outputs");
    }
    if (lines.size() < 1 + nx) {
        throw InvalidArgument("table file: too few rows");
    }

    std::vector<std::optional<std::uint64_t>> cells;
    for (std::size_t i = 0; i < nx; i++) {
        const auto &row = lines[1 + i];
        if (row.size() != ny) {
            throw InvalidArgument("table file: row " + std::to_string(i) + " has the wrong number of entries");
        }
        for (const auto &tok : row) {
            if (tok == "*") {
                if (!out.is_function) {
                    throw InvalidArgument("table file: '*' only allowed in function tables");
                }
                cells.emplace_back(std::nullopt);
            } else {
                cells.emplace_back(parse_uint(tok, "table entry"));
            }
        }
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> mu;
    std::size_t next = 1 + nx;
    if (next < lines.size()) {
        if (lines[next].size() != 1 || lines[next][0] != "mu" || lines.size() != next + 1 + nx) {
            throw InvalidArgument("table file: expected an optional 'mu' block of |X| rows after the table");
        }
        for (std::size_t i = 0; i < nx; i++) {
            const auto &row = lines[next + 1 + i];
            if (row.size() != ny) {
                throw InvalidArgument("table file: mu row " + std::to_string(i) + " has the wrong number of entries");
            }
            for (const auto &tok : row) {
                mu.push_back(parse_rational(tok));
            }
        }
    }

    FunctionTable &f = out.function;
    for (std::size_t i = 0; i < nx; i++) {
        f.alice_inputs.push_back({static_cast<std::uint32_t>(i)});
    }
    for (std::size_t j = 0; j < ny; j++) {
        f.bob_inputs.push_back({static_cast<std::uint32_t>(j)});
    }
    f.num_outputs = k;
    RelationTable &rel = out.relation;
    if (out.is_function) {
        for (const auto &c : cells) {
            if (c && *c >= k) {
                throw InvalidArgument("table file: function value outside [0, k)");
            }
            f.values.push_back(c ? std::optional<std::uint32_t>(static_cast<std::uint32_t>(*c)) : std::nullopt);
        }
        if (k > 64) {
            if (!mu.empty()) {
                throw InvalidArgument("table file: mu needs k <= 64");
            }
            return out;
        }
        rel = RelationTable::from_function(f);
    } else {
        rel.num_x = nx;
        rel.num_y = ny;
        rel.num_outputs = k;
        for (const auto &c : cells) {
            rel.valid.push_back(*c);
        }
        rel.mu_weights.assign(nx * ny, 1);
        rel.mu_denominator = nx * ny;
    }

    if (!mu.empty()) {
        std::uint64_t lcm = 1;
        for (const auto &[num, den] : mu) {
            lcm = std::lcm(lcm, den);
            if (lcm > (std::uint64_t{1} << 40)) {
                throw InvalidArgument("table file: mu denominators too large");
            }
        }
        rel.mu_denominator = 0;
        for (std::size_t c = 0; c < mu.size(); c++) {
            rel.mu_weights[c] = mu[c].first * (lcm / mu[c].second);
            rel.mu_denominator += rel.mu_weights[c];
        }
        if (rel.mu_denominator != lcm) {
            throw InvalidArgument("table file: mu does not sum to 1");
        }
        if (out.is_function) {
            for (std::size_t c = 0; c < mu.size(); c++) {
                if (rel.mu_weights[c] > 0 && !f.values[c]) {
                    throw InvalidArgument("table file: mu puts weight outside the promise");
                }
            }
        }
    }
    rel.validate();
    return out;
}

namespace {

std::string mu_block(const RelationTable &rel) {
    std::ostringstream out;
    out << "mu\n";
    for (std::size_t i = 0; i < rel.num_x; i++) {
        for (std::size_t j = 0; j < rel.num_y; j++) {
            std::uint64_t w = rel.mu(i, j);
            std::uint64_t g = std::gcd(w, rel.mu_denominator);
            out << (j ? " " : "") << (w / g) << "/" << (rel.mu_denominator / g);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

std::string relation_to_text(const RelationTable &rel) {
    std::ostringstream out;
    out << "relation " << rel.num_x << " " << rel.num_y << " " << rel.num_outputs << "\n";
    for (std::size_t i = 0; i < rel.num_x; i++) {
        for (std::size_t j = 0; j < rel.num_y; j++) {
            out << (j ? " " : "") << rel.valid_mask(i, j);
        }
        out << "\n";
    }
    return out.str() + mu_block(rel);
}

std::string function_to_text(const FunctionTable &f) {
    std::ostringstream out;
    out << "function " << f.num_x() << " " << f.num_y() << " " << f.num_outputs << "\n";
    for (std::size_t i = 0; i < f.num_x(); i++) {
        for (std::size_t j = 0; j < f.num_y(); j++) {
            out << (j ? " " : "");
            if (f.in_domain(i, j)) {
                out << f.value(i, j);
            } else {
                out << "*";
            }
        }
        out << "\n";
    }
    return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string &text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        line = strip_comment(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": empty key");
        }
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write " + path);
    }
    out << content;
}

}  // namespace smplab
