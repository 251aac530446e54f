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

#include "schurstate/random.hpp"

#include <cmath>
#include <numbers>

namespace schurstate {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

std::size_t Rng::index(std::size_t n) {
  if (n <= 1) return 0;
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t u;
  do {
    u = engine_();
  } while (u >= limit);
  return static_cast<std::size_t>(u % bound);
}

Rng Rng::split(std::uint64_t stream) {
  const std::uint64_t base = engine_();
  return Rng(base ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

CMatrix random_complex_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

CMatrix random_unitary(Rng& rng, int n) {
  const CMatrix g = random_complex_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

CMatrix random_positive_definite(Rng& rng, int n, double shift) {
  const CMatrix m = random_complex_matrix(rng, n, n);
  return m * m.adjoint() + shift * CMatrix::Identity(n, n);
}

CMatrix random_hermitian(Rng& rng, int n) {
  const CMatrix g = random_complex_matrix(rng, n, n);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace schurstate
