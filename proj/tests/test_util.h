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

#ifndef SMPLAB_TEST_UTIL_H
#define SMPLAB_TEST_UTIL_H

#include <complex>

#include "smplab/qcore.h"

namespace smplab::testing {

inline double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix diag(std::initializer_list<double> values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (double v : values) {
        m(k, k) = v;
        k++;
    }
    return m;
}

inline Vector ket(std::initializer_list<Complex> amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index k = 0;
    for (Complex a : amps) {
        v(k++) = a;
    }
    return v;
}

// Tr(A B) by explicit double summation, independent of Eigen's products.
inline Complex trace_of_product(const Matrix &a, const Matrix &b) {
    Complex s = 0;
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            s += a(i, j) * b(j, i);
        }
    }
    return s;
}

// Kronecker product by explicit index arithmetic.
inline Matrix kron_naive(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < out.rows(); i++) {
        for (Eigen::Index j = 0; j < out.cols(); j++) {
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
        }
    }
    return out;
}

}  // namespace smplab::testing

#endif
