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

#include "smplab/qcore.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "smplab/errors.h"

namespace smplab {

const Tolerances &default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

unsigned ceil_log2(std::uint64_t n) {
    if (n <= 1) {
        return 0;
    }
    return static_cast<unsigned>(std::bit_width(n - 1));
}

namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

double hermitian_defect(const Matrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd eigenvalues_of(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw SmplabError("eigenvalue computation did not converge");
    }
    return solver.eigenvalues();
}

void require_square_power_of_two(const Matrix &m, const char *what) {
    if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows()))) {
        throw InvalidArgument(
            std::string(what) + ": expected a square matrix of power-of-two dimension, got " +
            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_dim_cap(std::size_t dim, const Tolerances &tol, const char *what) {
    if (dim > tol.max_dim) {
        throw CapExceeded(
            std::string(what) + ": dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(tol.max_dim));
    }
}

void validate_density(const Matrix &m, const Tolerances &tol) {
    require_hermitian(m, tol, "density matrix");
    Complex tr = m.trace();
    if (std::abs(tr - Complex(1, 0)) > tol.trace) {
        throw InvalidArgument("density matrix: trace " + std::to_string(tr.real()) + " is not 1");
    }
    double lowest = eigenvalues_of(m).minCoeff();
    if (lowest < -tol.psd) {
        throw InvalidArgument("density matrix: negative eigenvalue " + std::to_string(lowest));
    }
}

// Symmetrizes away rounding drift so downstream Hermitian solvers see exact input.
Matrix hermitian_part(const Matrix &m) {
    return (m + m.adjoint()) * 0.5;
}

// Sorts (value, column) pairs, merges runs closer than group_tol, and builds an Observable.
Observable group_spectrum(
    Matrix op, const Eigen::VectorXd &values, const Matrix &vectors, double group_tol) {
    std::size_t n = static_cast<std::size_t>(values.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });

    Matrix sorted(vectors.rows(), static_cast<Eigen::Index>(n));
    std::vector<double> distinct;
    std::vector<std::size_t> offsets;
    double run_sum = 0;
    std::size_t run_len = 0;
    for (std::size_t k = 0; k < n; k++) {
        double v = values[order[k]];
        sorted.col(k) = vectors.col(order[k]);
        if (k == 0 || v - values[order[k - 1]] > group_tol) {
            if (run_len > 0) {
                distinct.push_back(run_sum / static_cast<double>(run_len));
            }
            offsets.push_back(k);
            run_sum = 0;
            run_len = 0;
        }
        run_sum += v;
        run_len++;
    }
    if (run_len > 0) {
        distinct.push_back(run_sum / static_cast<double>(run_len));
    }
    offsets.push_back(n);
    return Observable(std::move(op), std::move(distinct), std::move(offsets), std::move(sorted));
}

}  // namespace

DensityMatrix make_density_unchecked(Matrix m, const Tolerances &tol) {
#ifndef NDEBUG
    validate_density(m, tol);
#else
    (void)tol;
#endif
    return DensityMatrix(std::move(m));
}

void require_hermitian(const Matrix &m, const Tolerances &tol, const char *what) {
    require_square_power_of_two(m, what);
    double defect = hermitian_defect(m);
    if (defect > tol.hermitian) {
        throw InvalidArgument(std::string(what) + ": not Hermitian (defect " + std::to_string(defect) + ")");
    }
}

DensityMatrix DensityMatrix::from_matrix(Matrix m, const Tolerances &tol) {
    validate_density(m, tol);
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector &psi, const Tolerances &tol) {
    double norm = psi.norm();
    if (norm == 0) {
        throw InvalidArgument("pure state: zero vector");
    }
    Vector v = psi / norm;
    return from_matrix(v * v.adjoint(), tol);
}

unsigned DensityMatrix::num_qubits() const {
    return static_cast<unsigned>(std::countr_zero(dim()));
}

MeasurementOperator MeasurementOperator::from_matrix(Matrix m, const Tolerances &tol) {
    require_hermitian(m, tol, "measurement operator");
    Eigen::VectorXd ev = eigenvalues_of(m);
    if (ev.minCoeff() < -tol.psd || ev.maxCoeff() > 1 + tol.psd) {
        throw InvalidArgument(
            "measurement operator: spectrum [" + std::to_string(ev.minCoeff()) + ", " +
            std::to_string(ev.maxCoeff()) + "] not inside [0, 1]");
    }
    return MeasurementOperator(std::move(m));
}

MeasurementOperator MeasurementOperator::projector_onto(const Vector &psi, const Tolerances &tol) {
    double norm = psi.norm();
    if (norm == 0) {
        throw InvalidArgument("projector onto zero vector");
    }
    Vector v = psi / norm;
    return from_matrix(v * v.adjoint(), tol);
}

Observable::Observable(Matrix op, std::vector<double> eigenvalues, std::vector<std::size_t> offsets, Matrix eigenvectors)
    : op_(std::move(op)),
      eigenvalues_(std::move(eigenvalues)),
      offsets_(std::move(offsets)),
      vectors_(std::move(eigenvectors)) {
    if (offsets_.size() != eigenvalues_.size() + 1 || offsets_.back() != static_cast<std::size_t>(vectors_.cols())) {
        throw InvalidArgument("observable: inconsistent eigenspace layout");
    }
}

Matrix Observable::projector(std::size_t i) const {
    auto block = vectors_.middleCols(static_cast<Eigen::Index>(offsets_[i]), static_cast<Eigen::Index>(multiplicity(i)));
    return block * block.adjoint();
}

Matrix Observable::reconstruct() const {
    Eigen::VectorXd diag(vectors_.cols());
    for (std::size_t i = 0; i < eigenvalues_.size(); i++) {
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; k++) {
            diag[static_cast<Eigen::Index>(k)] = eigenvalues_[i];
        }
    }
    return vectors_ * diag.asDiagonal() * vectors_.adjoint();
}

double Observable::expectation(const Matrix &rho) const {
    // Tr(F rho) = sum_ij F_ij rho_ji.
    return op_.cwiseProduct(rho.transpose()).sum().real();
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double acceptance_probability(const MeasurementOperator &e, const DensityMatrix &rho, const Tolerances &tol) {
    if (e.dim() != rho.dim()) {
        throw InvalidArgument(
            "acceptance_probability: operator dimension " + std::to_string(e.dim()) + " != state dimension " +
            std::to_string(rho.dim()));
    }
    Complex tr = e.matrix().cwiseProduct(rho.matrix().transpose()).sum();
    if (std::abs(tr.imag()) > tol.imag_trace) {
        throw InvalidArgument("acceptance_probability: imaginary trace " + std::to_string(tr.imag()));
    }
    return std::clamp(tr.real(), 0.0, 1.0);
}

DensityMatrix tensor_power(const DensityMatrix &rho, unsigned r, const Tolerances &tol) {
    if (r == 0) {
        throw InvalidArgument("tensor_power: r must be positive");
    }
    double total = std::pow(static_cast<double>(rho.dim()), r);
    if (total > static_cast<double>(tol.max_dim)) {
        throw CapExceeded(
            "tensor_power: dimension " + std::to_string(rho.dim()) + "^" + std::to_string(r) + " exceeds cap " +
            std::to_string(tol.max_dim));
    }
    Matrix out = rho.matrix();
    for (unsigned k = 1; k < r; k++) {
        out = kron(out, rho.matrix());
    }
    return make_density_unchecked(std::move(out), tol);
}

Observable average_observable(const MeasurementOperator &e, unsigned r, const Tolerances &tol) {
    if (r == 0) {
        throw InvalidArgument("average_observable: r must be positive");
    }
    std::size_t d = e.dim();
    double total = std::pow(static_cast<double>(d), r);
    if (total > static_cast<double>(tol.max_dim)) {
        throw CapExceeded(
            "average_observable: dimension " + std::to_string(d) + "^" + std::to_string(r) + " exceeds cap " +
            std::to_string(tol.max_dim));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(e.matrix());
    if (solver.info() != Eigen::Success) {
        throw SmplabError("average_observable: eigendecomposition failed");
    }
    const Eigen::VectorXd &w = solver.eigenvalues();
    const Matrix &u = solver.eigenvectors();

    // Index of a product basis vector is the base-d number (k_1 ... k_r), first copy most significant,
    // matching the Kronecker ordering used by tensor_power.
    std::size_t dim = static_cast<std::size_t>(total);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    Matrix basis = u;
    Eigen::VectorXd sums = w;
    for (unsigned k = 1; k < r; k++) {
        basis = kron(basis, u);
        Eigen::VectorXd next(sums.size() * static_cast<Eigen::Index>(d));
        for (Eigen::Index a = 0; a < sums.size(); a++) {
            for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(d); b++) {
                next[a * static_cast<Eigen::Index>(d) + b] = sums[a] + w[b];
            }
        }
        sums = std::move(next);
    }
    values = sums / static_cast<double>(r);

    Matrix op = basis * values.asDiagonal() * basis.adjoint();
    op = hermitian_part(op);
    return group_spectrum(std::move(op), values, basis, tol.eigen_group);
}

Observable spectral_decompose(const Matrix &h, double group_tol, const Tolerances &tol) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw InvalidArgument("spectral_decompose: expected a nonempty square matrix");
    }
    if (double defect = hermitian_defect(h); defect > tol.hermitian) {
        throw InvalidArgument("spectral_decompose: not Hermitian (defect " + std::to_string(defect) + ")");
    }
    Matrix sym = hermitian_part(h);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw SmplabError("spectral_decompose: eigensolver did not converge");
    }
    return group_spectrum(sym, solver.eigenvalues(), solver.eigenvectors(), group_tol);
}

BandSelection select_band(const Observable &f, double center, double halfwidth, const Tolerances &tol) {
    if (halfwidth < 0) {
        throw InvalidArgument("band: negative halfwidth");
    }
    double lo = center - halfwidth;
    double hi = center + halfwidth;
    BandSelection band;
    bool started = false;
    for (std::size_t i = 0; i < f.num_eigenspaces(); i++) {
        double lambda = f.eigenvalue(i);
        if (std::abs(lambda - lo) <= tol.band_edge_flag || std::abs(lambda - hi) <= tol.band_edge_flag) {
            band.near_edge = true;
        }
        bool inside = lambda >= lo - tol.band_pad && lambda <= hi + tol.band_pad;
        if (inside && !started) {
            started = true;
            band.first_space = i;
            band.first_column = f.offset(i);
        }
        if (inside) {
            band.end_space = i + 1;
            band.end_column = f.offset(i) + f.multiplicity(i);
        }
    }
    return band;
}

Matrix band_projector(const Observable &f, double center, double halfwidth, const Tolerances &tol) {
    BandSelection band = select_band(f, center, halfwidth, tol);
    if (band.empty()) {
        return Matrix::Zero(static_cast<Eigen::Index>(f.dim()), static_cast<Eigen::Index>(f.dim()));
    }
    auto cols = f.eigenvectors().middleCols(
        static_cast<Eigen::Index>(band.first_column), static_cast<Eigen::Index>(band.rank()));
    return cols * cols.adjoint();
}

DensityMatrix project_renormalize(const DensityMatrix &rho, const Matrix &projector, const Tolerances &tol) {
    if (static_cast<std::size_t>(projector.rows()) != rho.dim() || projector.rows() != projector.cols()) {
        throw InvalidArgument("project_renormalize: projector dimension mismatch");
    }
    Matrix projected = projector * rho.matrix() * projector;
    double tr = projected.trace().real();
    if (tr <= tol.zero_projection) {
        throw DegenerateProjection(
            "project_renormalize: projection has vanishing trace " + std::to_string(tr), 0);
    }
    return make_density_unchecked(hermitian_part(projected / tr), tol);
}

DensityMatrix project_renormalize_columns(
    const DensityMatrix &rho, const Matrix &columns, double *trace_out, const Tolerances &tol) {
    if (static_cast<std::size_t>(columns.rows()) != rho.dim()) {
        throw InvalidArgument("project_renormalize_columns: column dimension mismatch");
    }
    Matrix x = columns.adjoint() * rho.matrix() * columns;
    double tr = x.trace().real();
    if (trace_out != nullptr) {
        *trace_out = tr;
    }
    if (tr <= tol.zero_projection) {
        throw DegenerateProjection(
            "project_renormalize: projection has vanishing trace " + std::to_string(tr), 0);
    }
    Matrix out = columns * (x / tr) * columns.adjoint();
    return make_density_unchecked(hermitian_part(out), tol);
}

DensityMatrix maximally_mixed(unsigned num_qubits, const Tolerances &tol) {
    if (num_qubits >= 63) {
        throw CapExceeded("maximally_mixed: too many qubits");
    }
    std::size_t dim = std::size_t{1} << num_qubits;
    require_dim_cap(dim, tol, "maximally_mixed");
    Matrix m = Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) /
               static_cast<double>(dim);
    return make_density_unchecked(std::move(m), tol);
}

}  // namespace smplab

namespace smplab {

Matrix haar_unitary(std::size_t dim, Rng &rng) {
    auto d = static_cast<Eigen::Index>(dim);
    Matrix z(d, d);
    for (Eigen::Index i = 0; i < d; i++) {
        for (Eigen::Index j = 0; j < d; j++) {
            double re = rng.normal();
            double im = rng.normal();
            z(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < d; k++) {
        Complex diag = r(k, k);
        double mag = std::abs(diag);
        if (mag > 0) {
            q.col(k) *= diag / mag;
        }
    }
    return q;
}

DensityMatrix random_density_matrix(std::size_t dim, Rng &rng, const Tolerances &tol) {
    auto d = static_cast<Eigen::Index>(dim);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; i++) {
        for (Eigen::Index j = 0; j < d; j++) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = Complex(re, im);
        }
    }
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix::from_matrix(hermitian_part(m), tol);
}

MeasurementOperator random_measurement_operator(std::size_t dim, Rng &rng, const Tolerances &tol) {
    Matrix u = haar_unitary(dim, rng);
    Eigen::VectorXd spectrum(static_cast<Eigen::Index>(dim));
    for (auto &v : spectrum) {
        v = rng.uniform();
    }
    Matrix e = u * spectrum.asDiagonal() * u.adjoint();
    return MeasurementOperator::from_matrix(hermitian_part(e), tol);
}

}  // namespace smplab
