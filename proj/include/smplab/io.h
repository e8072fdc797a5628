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

#ifndef SMPLAB_IO_H
#define SMPLAB_IO_H

#include <string>
#include <utility>
#include <vector>

#include "smplab/qcore.h"
#include "smplab/smp.h"

namespace smplab {

/// Binary matrix container: "SMPM", u32 version, u64 dim, then dim*dim (re, im) f64 pairs
/// row-major. All integers and doubles little-endian.
std::vector<std::uint8_t> matrix_to_binary(const Matrix &m);
Matrix matrix_from_binary(const std::vector<std::uint8_t> &bytes);

/// Text form: "matrix <dim>" then dim lines of dim "re,im" pairs. Round-trips exactly.
std::string matrix_to_text(const Matrix &m);
Matrix matrix_from_text(const std::string &text);

/// A function or relation table read from text.
///
///     function <|X|> <|Y|> <k>        relation <|X|> <|Y|> <k>
///     <|X| rows of |Y| entries>       <|X| rows of |Y| valid-set bitmasks>
///     mu                              mu
///     <|X| rows of |Y| rationals>     <|X| rows of |Y| rationals>
///
/// Function entries are outputs in [0, k) or '*' outside the promise. The mu block is
/// optional (uniform on the domain otherwise). Inputs are indexed {0}, {1}, ...
/// `relation` is always populated; `function` only for function files.
struct TableFile {
    bool is_function = false;
    FunctionTable function;
    RelationTable relation;
};
TableFile parse_table_text(const std::string &text);
std::string relation_to_text(const RelationTable &rel);
std::string function_to_text(const FunctionTable &f);

/// "key = value" lines; '#' starts a comment; blank lines ignored. Order preserved.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string &text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

}  // namespace smplab

#endif
