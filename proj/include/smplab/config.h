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

#ifndef SMPLAB_CONFIG_H
#define SMPLAB_CONFIG_H

#include <cstddef>
#include <cstdint>

namespace smplab {

/// Every numerical tolerance and size cap used by the library.
///
/// Functions that need one of these take a `const Tolerances &` defaulting to
/// `default_tolerances()`, so an experiment can override any of them in one place.
struct Tolerances {
    // Density matrix / measurement operator validation.
    double hermitian = 1e-10;
    double trace = 1e-9;
    double psd = 1e-9;
    // Largest tolerated imaginary part of Tr(E rho).
    double imag_trace = 1e-9;

    // Eigenvalues closer than this are merged into one eigenspace.
    double eigen_group = 1e-9;
    // Padding added on both sides of a closed band [c - w, c + w].
    double band_pad = 1e-9;
    // Eigenvalues this close to a band edge are flagged in diagnostics.
    double band_edge_flag = 1e-6;
    // Tr(M rho M) at or below this is a vanishing projection.
    double zero_projection = 1e-12;

    // Message distributions and coin weights must sum to 1 within this.
    double distribution_sum = 1e-12;

    // Largest Hilbert space dimension any operation will materialize.
    std::size_t max_dim = std::size_t{1} << 12;
    // Largest number of (coin, message, message) terms exact evaluation will sum.
    std::uint64_t enumeration_cap = std::uint64_t{1} << 20;
    // Total qubits (copies * q) the default copies policy may spend in state learning.
    unsigned learn_qubit_budget = 10;
};

const Tolerances &default_tolerances();

}  // namespace smplab

#endif
