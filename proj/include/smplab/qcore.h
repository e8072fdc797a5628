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

#ifndef SMPLAB_QCORE_H
#define SMPLAB_QCORE_H

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "smplab/config.h"
#include "smplab/rng.h"

namespace smplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Hermitian, positive semidefinite, unit-trace matrix on 2^k dimensions.
///
/// Instances can only be obtained through validating factories (or the operations
/// below, which preserve validity), so holding a DensityMatrix means the three
/// invariants were checked against the active tolerances.
class DensityMatrix {
   public:
    /// Validates and wraps. Throws InvalidArgument naming the violated invariant.
    static DensityMatrix from_matrix(Matrix m, const Tolerances &tol = default_tolerances());
    /// |psi><psi| / <psi|psi>.
    static DensityMatrix pure(const Vector &psi, const Tolerances &tol = default_tolerances());

    std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    unsigned num_qubits() const;
    const Matrix &matrix() const {
        return m_;
    }

   private:
    friend DensityMatrix make_density_unchecked(Matrix m, const Tolerances &tol);
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    }
    Matrix m_;
};

/// Hermitian matrix with spectrum in [0, 1]; the accepting element E of a two-outcome measurement.
class MeasurementOperator {
   public:
    static MeasurementOperator from_matrix(Matrix m, const Tolerances &tol = default_tolerances());
    /// |psi><psi| for a normalized copy of psi.
    static MeasurementOperator projector_onto(const Vector &psi, const Tolerances &tol = default_tolerances());

    std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    const Matrix &matrix() const {
        return m_;
    }

   private:
    explicit MeasurementOperator(Matrix m) : m_(std::move(m)) {
    }
    Matrix m_;
};

/// A Hermitian operator together with its spectral decomposition.
///
/// Distinct eigenvalues are stored ascending. The eigenvectors of the i-th
/// eigenspace are columns [offset(i), offset(i) + multiplicity(i)) of
/// `eigenvectors()`, and the projector P_i onto that eigenspace is built on demand.
class Observable {
   public:
    Observable(Matrix op, std::vector<double> eigenvalues, std::vector<std::size_t> offsets, Matrix eigenvectors);

    std::size_t dim() const {
        return static_cast<std::size_t>(op_.rows());
    }
    std::size_t num_eigenspaces() const {
        return eigenvalues_.size();
    }
    double eigenvalue(std::size_t i) const {
        return eigenvalues_[i];
    }
    const std::vector<double> &eigenvalues() const {
        return eigenvalues_;
    }
    std::size_t offset(std::size_t i) const {
        return offsets_[i];
    }
    std::size_t multiplicity(std::size_t i) const {
        return offsets_[i + 1] - offsets_[i];
    }
    const Matrix &eigenvectors() const {
        return vectors_;
    }
    /// The operator itself, F = sum_i lambda_i P_i.
    const Matrix &matrix() const {
        return op_;
    }
    Matrix projector(std::size_t i) const;
    /// sum_i lambda_i P_i, rebuilt from the decomposition.
    Matrix reconstruct() const;
    /// Re Tr(F rho).
    double expectation(const Matrix &rho) const;

   private:
    Matrix op_;
    std::vector<double> eigenvalues_;
    std::vector<std::size_t> offsets_;
    Matrix vectors_;
};

/// Contiguous run of eigenspaces whose eigenvalue lies in a closed band.
struct BandSelection {
    std::size_t first_space = 0;
    std::size_t end_space = 0;
    std::size_t first_column = 0;
    std::size_t end_column = 0;
    /// Some eigenvalue (inside or outside) sits within Tolerances::band_edge_flag of an edge.
    bool near_edge = false;

    bool empty() const {
        return first_column == end_column;
    }
    std::size_t rank() const {
        return end_column - first_column;
    }
};

/// p = clamp(Re Tr(E rho), 0, 1).
double acceptance_probability(
    const MeasurementOperator &e, const DensityMatrix &rho, const Tolerances &tol = default_tolerances());

/// rho^{(x) r}.
DensityMatrix tensor_power(const DensityMatrix &rho, unsigned r, const Tolerances &tol = default_tolerances());

/// F = (1/r) sum_j E^{(j)} on r copies, with its exact spectral decomposition.
///
/// The spectrum is computed from E's own eigendecomposition: F is diagonal in the
/// product eigenbasis U^{(x) r}, with eigenvalue equal to the mean of the r factor
/// eigenvalues. No eigensolver runs on the d^r-dimensional space.
Observable average_observable(const MeasurementOperator &e, unsigned r, const Tolerances &tol = default_tolerances());

/// Spectral decomposition of a Hermitian matrix, merging eigenvalues within group_tol.
Observable spectral_decompose(const Matrix &h, double group_tol, const Tolerances &tol = default_tolerances());
inline Observable spectral_decompose(const Matrix &h, const Tolerances &tol = default_tolerances()) {
    return spectral_decompose(h, tol.eigen_group, tol);
}

/// Eigenspaces with center - halfwidth - pad <= lambda <= center + halfwidth + pad.
BandSelection select_band(
    const Observable &f, double center, double halfwidth, const Tolerances &tol = default_tolerances());

/// Projector onto the span of the selected band (possibly zero).
Matrix band_projector(const Observable &f, double center, double halfwidth, const Tolerances &tol = default_tolerances());

/// M rho M / Tr(M rho M). Throws DegenerateProjection when the trace vanishes.
DensityMatrix project_renormalize(
    const DensityMatrix &rho, const Matrix &projector, const Tolerances &tol = default_tolerances());

/// V X V^dag / Tr(X) with X = V^dag rho V, for a matrix V of orthonormal columns.
///
/// Same result as project_renormalize with M = V V^dag, at O(dim^2 rank) cost. The
/// trace Tr(M rho) is written to `trace_out` when non-null.
DensityMatrix project_renormalize_columns(
    const DensityMatrix &rho, const Matrix &columns, double *trace_out = nullptr,
    const Tolerances &tol = default_tolerances());

/// I / 2^k.
DensityMatrix maximally_mixed(unsigned num_qubits, const Tolerances &tol = default_tolerances());

/// Haar-random unitary (QR of a complex Ginibre matrix with phase correction).
Matrix haar_unitary(std::size_t dim, Rng &rng);
/// rho = G G^dag / Tr(G G^dag) for complex Gaussian G (full-rank almost surely).
DensityMatrix random_density_matrix(std::size_t dim, Rng &rng, const Tolerances &tol = default_tolerances());
/// U diag(u_1..u_d) U^dag with u_i uniform in [0, 1] and U Haar.
MeasurementOperator random_measurement_operator(std::size_t dim, Rng &rng, const Tolerances &tol = default_tolerances());

/// Kronecker product a (x) b.
Matrix kron(const Matrix &a, const Matrix &b);

/// Throws InvalidArgument unless m is square, Hermitian within tol.hermitian, and of power-of-two size.
void require_hermitian(const Matrix &m, const Tolerances &tol, const char *what);

/// Returns ceil(log2(n)) for n >= 1.
unsigned ceil_log2(std::uint64_t n);

}  // namespace smplab

#endif
