// Copyright 2026 The schurstate Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "schurstate/errors.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

namespace detail {

template <typename Derived>
using Plain = typename Derived::PlainObject;

template <typename Derived>
std::string shape_of(const Eigen::MatrixBase<Derived>& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         shape_of(a));
  }
}

}  // namespace detail

/// Largest entry modulus; zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  return static_cast<double>(a.cwiseAbs().maxCoeff());
}

/// Schur (entrywise) product. The all-ones matrix is its unit.
template <typename DerivedA, typename DerivedB>
detail::Plain<DerivedA> hadamard(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hadamard: shape mismatch " + detail::shape_of(a) +
                         " vs " + detail::shape_of(b));
  }
  return a.cwiseProduct(b);
}

/// Entrywise |A - A*| against tol * max(1, max|A_ij|).
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol) {
  detail::require_square(a, "is_hermitian");
  const double defect = max_abs(a - a.adjoint());
  return defect <= tol * std::max(1.0, max_abs(a));
}

struct PsdReport {
  bool psd = false;
  bool hermitian = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Positive-semidefiniteness verdict. The matrix must be Hermitian within
/// tol (relative to max(1, max|A_ij|)) and its smallest eigenvalue must be
/// at least -tol * max(1, lambda_max). Eigenvalues are those of the
/// Hermitian part.
template <typename Derived>
PsdReport is_psd(const Eigen::MatrixBase<Derived>& a,
                 double tol = kDefaultPsdTol) {
  detail::require_square(a, "is_psd");
  PsdReport report;
  if (a.size() == 0) {
    report.psd = report.hermitian = true;
    return report;
  }
  using Plain = detail::Plain<Derived>;
  const Plain herm = (a + a.adjoint()) / 2.0;
  report.hermitian = is_hermitian(a, tol);
  Eigen::SelfAdjointEigenSolver<Plain> solver(herm, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  report.min_eigenvalue = ev.minCoeff();
  report.max_eigenvalue = ev.maxCoeff();
  const double scale = std::max(1.0, std::abs(report.max_eigenvalue));
  report.psd = report.hermitian && report.min_eigenvalue >= -tol * scale;
  return report;
}

/// Spectral calculus for Hermitian matrices: U* diag(f(lambda)) U.
/// Every matrix function in the library goes through this.
template <typename Derived, typename F>
detail::Plain<Derived> hermitian_function(const Eigen::MatrixBase<Derived>& a,
                                          F&& f, double herm_tol = 1e-10) {
  detail::require_square(a, "hermitian_function");
  if (!is_hermitian(a, herm_tol)) {
    throw DomainError("hermitian_function: argument is not Hermitian");
  }
  using Plain = detail::Plain<Derived>;
  const Plain herm = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(herm);
  const auto& ev = solver.eigenvalues();
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> fev(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) fev(k) = f(ev(k));
  const auto& v = solver.eigenvectors();
  return v * fev.asDiagonal() * v.adjoint();
}

/// Relative eigenvalue floor below which the logarithm is refused.
inline constexpr double kLogEigenvalueFloor = 1e-14;

template <typename Derived>
detail::Plain<Derived> hermitian_log(const Eigen::MatrixBase<Derived>& a,
                                     double herm_tol = 1e-10) {
  detail::require_square(a, "hermitian_log");
  if (a.size() > 0) {
    using Plain = detail::Plain<Derived>;
    const Plain herm = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Plain> solver(herm, Eigen::EigenvaluesOnly);
    const double lmax = solver.eigenvalues().cwiseAbs().maxCoeff();
    const double lmin = solver.eigenvalues().minCoeff();
    if (lmin <= kLogEigenvalueFloor * lmax || lmax == 0.0) {
      std::ostringstream os;
      os << "hermitian_log: eigenvalue " << lmin
         << " is at or below the floor " << kLogEigenvalueFloor * lmax;
      throw DomainError(os.str());
    }
  }
  return hermitian_function(a, [](double x) { return std::log(x); },
                            herm_tol);
}

template <typename Derived>
detail::Plain<Derived> hermitian_exp(const Eigen::MatrixBase<Derived>& a,
                                     double herm_tol = 1e-10) {
  return hermitian_function(a, [](double x) { return std::exp(x); },
                            herm_tol);
}

/// max|A - B| / max(1, max|B|).
template <typename DerivedA, typename DerivedB>
double relative_difference(const Eigen::MatrixBase<DerivedA>& a,
                           const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("relative_difference: shape mismatch");
  }
  return max_abs(a - b) / std::max(1.0, max_abs(b));
}

inline double relative_difference(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

/// Integer power by repeated squaring; exact for n = 0 and 1.
inline Complex ipow(Complex z, long n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

}  // namespace schurstate
