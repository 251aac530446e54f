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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"
#include "schurstate/kernel.hpp"
#include "support.hpp"

using namespace schurstate;
using namespace testsupport;

namespace {

FiberFamily single_site(const CMatrix& vectors) {
  return FiberFamily::from_sites(Lattice::graph({Site{0}}),
                                 static_cast<int>(vectors.rows()),
                                 static_cast<int>(vectors.cols()),
                                 {{Site{0}, vectors}});
}

CMatrix tilted_pair() {
  CMatrix v(2, 2);
  v << 1, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  return v;
}

CMatrix unit(int d, int p, int q) {
  CMatrix e = CMatrix::Zero(d, d);
  e(p, q) = 1.0;
  return e;
}

}  // namespace

TEST_CASE("kernel_eval: identity gives the inner product") {
  Rng rng(1);
  const FiberFamily fam = random_chain(rng, 3, 2, 1);
  const CVector h0 = fam.vector(Site{0}, 0);
  const CVector h1 = fam.vector(Site{0}, 1);
  CHECK(rel(kernel_eval(fam, Site{0}, 0, 1, CMatrix::Identity(3, 3)), h1.dot(h0)) <
        1e-14);
}

TEST_CASE("kernel_eval: scalar fibers") {
  CMatrix z(1, 2);
  z << Complex(0.5, 1.0), Complex(-2.0, 0.25);
  const FiberFamily fam = single_site(z);
  CMatrix w(1, 1);
  w << Complex(0.3, -0.7);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(rel(kernel_eval(fam, Site{0}, i, j, w),
                z(0, i) * std::conj(z(0, j)) * w(0, 0)) < 1e-15);
    }
  }
}

TEST_CASE("kernel_eval: orthonormal vectors against rank-one projectors") {
  const FiberFamily fam = single_site(orthonormal_vectors(3, 3));
  for (int k = 0; k < 3; ++k) {
    const CMatrix proj = unit(3, k, k);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(kernel_eval(fam, Site{0}, i, j, proj) ==
              Complex((i == k && j == k) ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("kernel_eval: bad index or operator shape") {
  const FiberFamily fam = single_site(orthonormal_vectors(2, 2));
  CHECK_THROWS_AS(kernel_eval(fam, Site{0}, 2, 0, CMatrix::Identity(2, 2)),
                  DimensionError);
  CHECK_THROWS_AS(kernel_eval(fam, Site{0}, 0, 0, CMatrix::Identity(3, 3)),
                  DimensionError);
}

TEST_CASE("e_hat: examples") {
  const FiberFamily ortho = single_site(orthonormal_vectors(3, 2));
  CHECK(max_entry(e_hat(ortho, Site{0}, CMatrix::Identity(3, 3)) -
                  CMatrix::Identity(2, 2)) == 0.0);
  CHECK(max_entry(e_hat(ortho, Site{0}, CMatrix::Zero(3, 3))) == 0.0);
  const FiberFamily tilted = single_site(tilted_pair());
  CMatrix want(2, 2);
  want << 1, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1;
  CHECK(max_entry(e_hat(tilted, Site{0}, CMatrix::Identity(2, 2)) - want) < 1e-15);
}

TEST_CASE("e_hat: linear, Hermitian covariant, 1-positive") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const FiberFamily fam = random_chain(rng, 3, 3, 1);
    const CMatrix b = random_complex_matrix(rng, 3, 3);
    const CMatrix c = random_complex_matrix(rng, 3, 3);
    const Complex alpha(0.4, -1.3);
    const CMatrix lhs = e_hat(fam, Site{0}, alpha * b + c);
    const CMatrix rhs = alpha * e_hat(fam, Site{0}, b) + e_hat(fam, Site{0}, c);
    CHECK(max_entry(lhs - rhs) / std::max(1.0, max_entry(rhs)) <= 1e-12);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(kernel_eval(fam, Site{0}, i, j, b.adjoint()) -
                       std::conj(kernel_eval(fam, Site{0}, j, i, b))) <= 1e-12);
      }
    }
    CHECK(min_eig_ratio(e_hat(fam, Site{0}, CMatrix(b.adjoint() * b))) >= -1e-10);
  }
}

TEST_CASE("SchurKernelMap: operators and adjoints") {
  Rng rng(4);
  const FiberFamily fam = random_chain(rng, 2, 3, 1);
  const SchurKernelMap map(fam, Site{0});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(max_entry(map.op(j, i) - map.op(i, j).adjoint()) < 1e-15);
      const CMatrix b = random_complex_matrix(rng, 2, 2);
      CHECK(std::abs(map.eval(i, j, b) - (map.op(i, j) * b).trace()) < 1e-12);
    }
  }
}

TEST_CASE("certify_cp: scalar fibers give a rank-one Choi matrix") {
  CMatrix z(1, 3);
  z << Complex(1.0, 0.5), Complex(-0.2, 0.0), Complex(0.0, 2.0);
  const FiberFamily fam = single_site(z);
  const CMatrix choi = choi_matrix(fam, Site{0});
  const CVector zc = z.row(0).adjoint();
  CHECK(max_entry(choi - zc * zc.adjoint()) < 1e-15);
  CHECK(certify_cp(fam, Site{0}).completely_positive);
}

TEST_CASE("certify_cp: blocks are images of matrix units") {
  Rng rng(5);
  const FiberFamily fam = random_chain(rng, 3, 2, 1);
  const CMatrix choi = choi_matrix(fam, Site{0});
  const CMatrix v = fam.vectors(Site{0});
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      // V* e_p e_q* V, computed from the vectors directly.
      CMatrix want(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) want(i, j) = std::conj(v(p, i)) * v(q, j);
      CHECK(max_entry(choi.block(p * 2, q * 2, 2, 2) - want) < 1e-15);
    }
  }
}

TEST_CASE("certify_cp: orthonormal and random families are completely positive") {
  for (int d = 1; d <= 4; ++d) {
    CHECK(certify_cp(single_site(orthonormal_vectors(d, d)), Site{0}).completely_positive);
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const int d = 2 + static_cast<int>(rng.index(2));
    const int d_i = 2 + static_cast<int>(rng.index(2));
    const FiberFamily fam = random_chain(rng, d, d_i, 1);
    const CpCertificate c = certify_cp(fam, Site{0});
    CHECK(c.completely_positive);
    CHECK(c.choi_dim == d * d_i);
    CHECK(min_eig_ratio(choi_matrix(fam, Site{0})) >= -1e-10);
  }
}

TEST_CASE("complete positivity on random tuples") {
  // sum_{k,l} <xi_k, Phi(a_k* a_l) xi_l> >= 0 for Phi(b) = V* b V.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int d = 2 + static_cast<int>(rng.index(2));
    const int d_i = 2 + static_cast<int>(rng.index(2));
    const int n = 1 + static_cast<int>(rng.index(4));
    const FiberFamily fam = random_chain(rng, d, d_i, 1);
    const SchurKernelMap phi(fam, Site{0});
    std::vector<CMatrix> a;
    std::vector<CVector> xi;
    double scale = 0.0;
    for (int k = 0; k < n; ++k) {
      a.push_back(random_complex_matrix(rng, d, d));
      xi.push_back(random_complex_matrix(rng, d_i, 1).col(0));
      scale += a.back().squaredNorm() * xi.back().squaredNorm();
    }
    Complex total = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        total += xi[k].dot(phi.cp_orientation(a[k].adjoint() * a[l]) * xi[l]);
    scale *= fam.vectors(Site{0}).squaredNorm();
    CHECK(total.real() >= -1e-10 * scale);
    CHECK(std::abs(total.imag()) <= 1e-10 * scale);
  }
}

TEST_CASE("certify_cp: the transposed orientation is not completely positive") {
  // Assembling the Choi matrix from (i,j) -> h_j* b h_i instead of its
  // transpose gives the swap operator for orthonormal fibers.
  const FiberFamily fam = single_site(orthonormal_vectors(2, 2));
  CMatrix transposed(4, 4);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      transposed.block(p * 2, q * 2, 2, 2) = e_hat(fam, Site{0}, unit(2, p, q));
  CHECK(eigenvalues(transposed).minCoeff() == Catch::Approx(-1.0));
  CHECK(certify_cp(fam, Site{0}).min_eigenvalue >= -1e-15);
}

TEST_CASE("property_s_matrix: examples") {
  Rng rng(6);
  const FiberFamily fam = random_chain(rng, 3, 2, 1);
  const std::vector<CMatrix> id = {CMatrix::Identity(3, 3)};
  // Rows carry j and columns i, so this is G_x transposed, i.e. V* V.
  const CMatrix v = fam.vectors(Site{0});
  CHECK(max_entry(property_s_matrix(fam, Site{0}, id) - fam.gram(Site{0}).transpose()) <
        1e-14);
  CHECK(max_entry(property_s_matrix(fam, Site{0}, id) - v.adjoint() * v) < 1e-14);
  const std::vector<CMatrix> zero = {CMatrix::Zero(3, 3)};
  CHECK(max_entry(property_s_matrix(fam, Site{0}, zero)) == 0.0);
  CHECK_THROWS_AS(property_s_matrix(fam, Site{0}, std::vector<CMatrix>{}),
                  DimensionError);
}

TEST_CASE("property_s_matrix: equals the Gram matrix of the vectors b_k h_i") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const int d = 2 + static_cast<int>(rng.index(2));
    const int d_i = 2 + static_cast<int>(rng.index(2));
    const int n = 1 + static_cast<int>(rng.index(4));
    const FiberFamily fam = random_chain(rng, d, d_i, 1);
    std::vector<CMatrix> bs;
    for (int k = 0; k < n; ++k) bs.push_back(random_complex_matrix(rng, d, d));
    const CMatrix v = fam.vectors(Site{0});
    CMatrix w(d, d_i * n);
    for (int i = 0; i < d_i; ++i)
      for (int k = 0; k < n; ++k) w.col(i * n + k) = bs[k] * v.col(i);
    const CMatrix gram = w.adjoint() * w;
    const CMatrix k = property_s_matrix(fam, Site{0}, bs);
    CHECK(max_entry(k - gram) <= 1e-12 * std::max(1.0, max_entry(gram)));
    CHECK(min_eig_ratio(k) >= -1e-10);
  }
}

TEST_CASE("tensor_kernel: examples and errors") {
  Rng rng(7);
  const FiberFamily fam = random_chain(rng, 2, 3, 3);
  const CMatrix b = random_complex_matrix(rng, 2, 2);
  const std::vector<Site> one = {Site{1}};
  CHECK(max_entry(tensor_kernel(fam, one, std::vector<CMatrix>{b}) -
                  e_hat(fam, Site{1}, b)) == 0.0);
  const std::vector<Site> two = {Site{0}, Site{2}};
  const std::vector<CMatrix> ids(2, CMatrix::Identity(2, 2));
  CMatrix want = fam.gram(Site{0}).cwiseProduct(fam.gram(Site{2}));
  CHECK(max_entry(tensor_kernel(fam, two, ids) - want) < 1e-14);
  const std::vector<Site> dup = {Site{0}, Site{0}};
  CHECK_THROWS_AS(tensor_kernel(fam, dup, ids), ValidationError);
  CHECK_THROWS_AS(tensor_kernel(fam, two, std::vector<CMatrix>{b}), DimensionError);
}

TEST_CASE("tensor products of kernels: Choi and Property S over pairs and triples") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const int d = 2;
    const int d_i = 2 + static_cast<int>(rng.index(2));
    const int m = 2 + static_cast<int>(rng.index(2));
    const FiberFamily fam = random_chain(rng, d, d_i, m);
    const Region xs = chain_region(m);
    CHECK(certify_cp(fam, std::span<const Site>(xs)).completely_positive);
    const int n = 1 + static_cast<int>(rng.index(4));
    std::vector<std::vector<CMatrix>> bs(n);
    for (auto& row : bs)
      for (int k = 0; k < m; ++k) row.push_back(random_complex_matrix(rng, d, d));
    CHECK(min_eig_ratio(tensor_property_s_matrix(fam, xs, bs)) >= -1e-10);
  }
}

TEST_CASE("tensor Choi matrix matches the Kronecker construction") {
  Rng rng(21);
  const FiberFamily fam = random_chain(rng, 2, 2, 2);
  const Region xs = chain_region(2);
  // Completely positive orientation on the pair: b -> W* b W, where column
  // i of W is h_{0,i} (x) h_{1,i}.
  CMatrix w(4, 2);
  for (int i = 0; i < 2; ++i)
    w.col(i) = kron(CMatrix(fam.vector(Site{0}, i)), CMatrix(fam.vector(Site{1}, i)));
  CMatrix want(8, 8);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      want.block(p * 2, q * 2, 2, 2) = w.adjoint() * unit(4, p, q) * w;
  CHECK(max_entry(choi_matrix(fam, std::span<const Site>(xs)) - want) < 1e-14);
}
