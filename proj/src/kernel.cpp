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

#include "schurstate/kernel.hpp"

#include <set>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"

namespace schurstate {

namespace {

void require_fiber_matrix(const FiberFamily& family, const CMatrix& b,
                          const char* what) {
  const int d = family.fiber_dim();
  if (b.rows() != d || b.cols() != d) {
    std::ostringstream os;
    os << what << ": operator is " << b.rows() << "x" << b.cols()
       << ", fiber dimension is " << d;
    throw DimensionError(os.str());
  }
}

void require_index(const FiberFamily& family, int i, const char* what) {
  if (i < 0 || i >= family.index_size()) {
    std::ostringstream os;
    os << what << ": index " << i << " outside [0," << family.index_size()
       << ")";
    throw DimensionError(os.str());
  }
}

CMatrix matrix_unit(int d, int p, int q) {
  CMatrix e = CMatrix::Zero(d, d);
  e(p, q) = 1.0;
  return e;
}

}  // namespace

Complex kernel_eval(const FiberFamily& family, const Site& x, int i, int j,
                    const CMatrix& b) {
  require_index(family, i, "kernel_eval");
  require_index(family, j, "kernel_eval");
  require_fiber_matrix(family, b, "kernel_eval");
  const CMatrix h = family.vectors(x);
  return h.col(j).dot(b * h.col(i));
}

CMatrix e_hat(const FiberFamily& family, const Site& x, const CMatrix& b) {
  require_fiber_matrix(family, b, "e_hat");
  return SchurKernelMap(family, x)(b);
}

SchurKernelMap::SchurKernelMap(const FiberFamily& family, Site x)
    : site_(std::move(x)), vectors_(family.vectors(site_)) {}

CMatrix SchurKernelMap::op(int i, int j) const {
  return vectors_.col(i) * vectors_.col(j).adjoint();
}

Complex SchurKernelMap::eval(int i, int j, const CMatrix& b) const {
  return vectors_.col(j).dot(b * vectors_.col(i));
}

CMatrix SchurKernelMap::operator()(const CMatrix& b) const {
  // (i,j) -> h_j* b h_i is the transpose of V* b V.
  return (vectors_.adjoint() * b * vectors_).transpose();
}

CMatrix SchurKernelMap::cp_orientation(const CMatrix& b) const {
  return vectors_.adjoint() * b * vectors_;
}

CMatrix choi_matrix(const FiberFamily& family, const Site& x) {
  const SchurKernelMap map(family, x);
  const int d = family.fiber_dim();
  const int n = family.index_size();
  CMatrix choi(d * n, d * n);
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) {
      choi.block(p * n, q * n, n, n) = map.cp_orientation(matrix_unit(d, p, q));
    }
  }
  return choi;
}

CMatrix choi_matrix(const FiberFamily& family, std::span<const Site> xs) {
  if (xs.empty()) throw DimensionError("choi_matrix: no sites");
  const int d = family.fiber_dim();
  const int n = family.index_size();
  const int m = static_cast<int>(xs.size());
  int total = 1;
  for (int k = 0; k < m; ++k) total *= d;

  std::vector<SchurKernelMap> maps;
  for (const Site& x : xs) maps.emplace_back(family, x);

  CMatrix choi(total * n, total * n);
  std::vector<int> p_digits(m), q_digits(m);
  auto unpack = [d, m](int idx, std::vector<int>& digits) {
    for (int k = m - 1; k >= 0; --k) {
      digits[k] = idx % d;
      idx /= d;
    }
  };
  for (int p = 0; p < total; ++p) {
    unpack(p, p_digits);
    for (int q = 0; q < total; ++q) {
      unpack(q, q_digits);
      CMatrix block = CMatrix::Ones(n, n);
      for (int k = 0; k < m; ++k) {
        block = hadamard(block, maps[k](matrix_unit(d, p_digits[k],
                                                    q_digits[k])));
      }
      // Hadamard products commute with transposition, so this is the
      // product of the completely positive orientations.
      choi.block(p * n, q * n, n, n) = block.transpose();
    }
  }
  return choi;
}

namespace {

CpCertificate certify(const CMatrix& choi, double tol) {
  const PsdReport r = is_psd(choi, tol);
  CpCertificate c;
  c.completely_positive = r.psd;
  c.min_eigenvalue = r.min_eigenvalue;
  c.max_eigenvalue = r.max_eigenvalue;
  c.choi_dim = static_cast<int>(choi.rows());
  return c;
}

void require_distinct_sites(std::span<const Site> xs, const char* what) {
  std::set<Site> seen;
  for (const Site& x : xs) {
    if (!seen.insert(x).second) {
      throw ValidationError(std::string(what) + ": duplicate site " +
                            to_string(x));
    }
  }
}

}  // namespace

CpCertificate certify_cp(const FiberFamily& family, const Site& x,
                         double tol) {
  return certify(choi_matrix(family, x), tol);
}

CpCertificate certify_cp(const FiberFamily& family, std::span<const Site> xs,
                         double tol) {
  require_distinct_sites(xs, "certify_cp");
  return certify(choi_matrix(family, xs), tol);
}

CMatrix property_s_matrix(const FiberFamily& family, const Site& x,
                          std::span<const CMatrix> bs) {
  if (bs.empty()) throw DimensionError("property_s_matrix: empty list");
  for (const CMatrix& b : bs) require_fiber_matrix(family, b, "property_s_matrix");
  const SchurKernelMap map(family, x);
  const int n = static_cast<int>(bs.size());
  const int di = family.index_size();
  CMatrix k(di * n, di * n);
  for (int h = 0; h < n; ++h) {
    for (int kk = 0; kk < n; ++kk) {
      const CMatrix e = map(bs[h].adjoint() * bs[kk]);
      for (int j = 0; j < di; ++j)
        for (int i = 0; i < di; ++i) k(j * n + h, i * n + kk) = e(i, j);
    }
  }
  return k;
}

CMatrix tensor_kernel(const FiberFamily& family, std::span<const Site> xs,
                      std::span<const CMatrix> bs) {
  if (xs.empty()) throw DimensionError("tensor_kernel: no sites");
  if (xs.size() != bs.size()) {
    throw DimensionError("tensor_kernel: " + std::to_string(xs.size()) +
                         " sites but " + std::to_string(bs.size()) +
                         " operators");
  }
  require_distinct_sites(xs, "tensor_kernel");
  CMatrix acc = e_hat(family, xs[0], bs[0]);
  for (std::size_t m = 1; m < xs.size(); ++m) {
    acc = hadamard(acc, e_hat(family, xs[m], bs[m]));
  }
  return acc;
}

CMatrix tensor_property_s_matrix(
    const FiberFamily& family, std::span<const Site> xs,
    const std::vector<std::vector<CMatrix>>& bs) {
  if (bs.empty()) throw DimensionError("tensor_property_s_matrix: empty list");
  const int n = static_cast<int>(bs.size());
  const int di = family.index_size();
  CMatrix k(di * n, di * n);
  std::vector<CMatrix> products(xs.size());
  for (int h = 0; h < n; ++h) {
    for (int kk = 0; kk < n; ++kk) {
      if (bs[h].size() != xs.size() || bs[kk].size() != xs.size()) {
        throw DimensionError("tensor_property_s_matrix: factor count mismatch");
      }
      for (std::size_t m = 0; m < xs.size(); ++m) {
        products[m] = bs[h][m].adjoint() * bs[kk][m];
      }
      const CMatrix e = tensor_kernel(family, xs, products);
      for (int j = 0; j < di; ++j)
        for (int i = 0; i < di; ++i) k(j * n + h, i * n + kk) = e(i, j);
    }
  }
  return k;
}

}  // namespace schurstate
