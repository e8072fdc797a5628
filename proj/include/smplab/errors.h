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

#ifndef SMPLAB_ERRORS_H
#define SMPLAB_ERRORS_H

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smplab {

struct SmplabError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, invalid matrices, bad parameters.
struct InvalidArgument : SmplabError {
    using SmplabError::SmplabError;
};

/// A configured size cap (dimension, enumeration, search space) would be exceeded.
struct CapExceeded : SmplabError {
    using SmplabError::SmplabError;
};

/// A projection whose trace vanished, so the state cannot be renormalized.
struct DegenerateProjection : SmplabError {
    DegenerateProjection(const std::string &what, std::uint64_t step) : SmplabError(what), step(step) {
    }
    std::uint64_t step;
};

/// A promise problem was queried outside its promise.
struct PromiseViolation : SmplabError {
    using SmplabError::SmplabError;
};

/// A construction could not be verified (search budget exhausted, replay divergence).
struct VerificationFailure : SmplabError {
    using SmplabError::SmplabError;
};

}  // namespace smplab

#endif
