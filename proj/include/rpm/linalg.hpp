// Copyright 2026 The rpm-dilation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RPM_LINALG_HPP_
#define RPM_LINALG_HPP_

// Dense complex linear algebra used by every other module. Everything here
// is a pure function on Eigen values and is templated on the real scalar.
// Tolerances are Frobenius-norm based.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "rpm/error.hpp"

namespace rpm {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;
using cdouble = std::complex<double>;

/// Relative Hermiticity tolerance: ||m - m^dag||_F <= tol * max(1, ||m||_F).
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues of a PSD input in [-kClampTol, 0) are treated as zero.
inline constexpr double kClampTol = 1e-12;

template <typename Real>
struct HermitianEigen {
  RVector<Real> values;    // ascending
  CMatrix<Real> vectors;   // columns are eigenvectors
};

template <typename Real>
bool all_finite(const CMatrix<Real>& m) {
  return m.allFinite();
}

template <typename Real>
void require_square(const CMatrix<Real>& m, const char* where) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSquare,
                std::string(where) + ": matrix is " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
}

template <typename Real>
Real hermiticity_defect(const CMatrix<Real>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Real>
void require_hermitian(const CMatrix<Real>& m, const char* where) {
  require_square(m, where);
  const Real scale = std::max<Real>(Real(1), m.norm());
  const Real defect = hermiticity_defect(m);
  if (!(defect <= Real(kHermitianTol) * scale)) {
    throw Error(ErrorKind::NotHermitian,
                std::string(where) + ": ||m - m^dag||_F = " +
                    std::to_string(static_cast<double>(defect)));
  }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
template <typename Real>
HermitianEigen<Real> hermitian_eigendecompose(const CMatrix<Real>& m) {
  require_hermitian(m, "hermitian_eigendecompose");
  // Only the lower triangle is read; symmetrize first so small
  // anti-Hermitian noise is averaged rather than dropped.
  const CMatrix<Real> sym = (m + m.adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-12, 0) are clamped to zero; anything lower throws
/// NegativeEigenvalue.
template <typename Real>
CMatrix<Real> psd_sqrt(const CMatrix<Real>& m) {
  auto eig = hermitian_eigendecompose(m);
  if (eig.values.size() > 0 && eig.values(0) < -Real(kClampTol)) {
    throw Error(ErrorKind::NegativeEigenvalue,
                "psd_sqrt: minimum eigenvalue " +
                    std::to_string(static_cast<double>(eig.values(0))));
  }
  RVector<Real> roots = eig.values.unaryExpr(
      [](Real x) { return x > Real(0) ? std::sqrt(x) : Real(0); });
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

/// exp(-i * scale * h) for Hermitian h, via V diag(exp(-i scale lambda)) V^dag.
template <typename Real>
CMatrix<Real> unitary_exp(const CMatrix<Real>& h, Real scale) {
  auto eig = hermitian_eigendecompose(h);
  CVector<Real> phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    phases(i) = std::polar(Real(1), -scale * eig.values(i));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

template <typename Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// General matrix exponential by Taylor series with scaling and squaring.
/// Works for non-normal input (Liouvillians); no eigen- or Schur
/// decomposition is involved.
template <typename Real>
CMatrix<Real> expm_taylor(const CMatrix<Real>& a) {
  require_square(a, "expm_taylor");
  const Eigen::Index n = a.rows();
  // Induced 1-norm: max column sum.
  const Real norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > Real(0.5)) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / Real(0.5))));
  }
  const CMatrix<Real> scaled = a / std::ldexp(Real(1), squarings);

  CMatrix<Real> result = CMatrix<Real>::Identity(n, n);
  CMatrix<Real> term = CMatrix<Real>::Identity(n, n);
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / Real(k);
    result += term;
    if (term.norm() <= eps * result.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace rpm

#endif  // RPM_LINALG_HPP_
