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

#include <span>
#include <vector>

#include "schurstate/family.hpp"
#include "schurstate/site.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// Tr(h_{x,i} h_{x,j}* b) = <h_{x,j}, b h_{x,i}>.
Complex kernel_eval(const FiberFamily& family, const Site& x, int i, int j,
                    const CMatrix& b);

/// Matrix with (i,j) entry kernel_eval(x, i, j, b). Linear in b; the
/// identity goes to the Gram matrix G_x(i,j) = <h_{x,j}, h_{x,i}>.
CMatrix e_hat(const FiberFamily& family, const Site& x, const CMatrix& b);

/// The kernel at one site in operator form: the d_I^2 rank-one operators
/// h_{x,i} h_{x,j}*, kept implicitly through the vector block.
class SchurKernelMap {
 public:
  SchurKernelMap(const FiberFamily& family, Site x);

  const Site& site() const { return site_; }
  int index_size() const { return static_cast<int>(vectors_.cols()); }
  int fiber_dim() const { return static_cast<int>(vectors_.rows()); }

  /// h_{x,i} h_{x,j}*; op(j,i) is the adjoint of op(i,j).
  CMatrix op(int i, int j) const;
  Complex eval(int i, int j, const CMatrix& b) const;
  /// Same as e_hat(family, x, b).
  CMatrix operator()(const CMatrix& b) const;
  /// b -> (E_{x;i,j}(b))_{i,j} = e_hat(b)^T, i.e. V* b V with V = [h_1..h_dI].
  /// This is the orientation whose complete positivity the Choi test
  /// certifies.
  CMatrix cp_orientation(const CMatrix& b) const;

 private:
  Site site_;
  CMatrix vectors_;
};

/// Choi matrix of the completely positive orientation b -> V* b V at x:
/// (d*d_I) x (d*d_I), block (p,q) is the image of e_p e_q*. Rows and
/// columns are indexed p*d_I + i.
CMatrix choi_matrix(const FiberFamily& family, const Site& x);

/// Choi matrix of the tensor-product kernel on the algebra of `xs`,
/// assembled from Hadamard products of single-site images of matrix units
/// (multi-index P over the fiber indices of xs, site-major).
CMatrix choi_matrix(const FiberFamily& family, std::span<const Site> xs);

struct CpCertificate {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  int choi_dim = 0;
};

CpCertificate certify_cp(const FiberFamily& family, const Site& x,
                         double tol = kDefaultPsdTol);
CpCertificate certify_cp(const FiberFamily& family, std::span<const Site> xs,
                         double tol = kDefaultPsdTol);

/// K((j,h),(i,k)) = kernel_eval(x, i, j, b_h* b_k), composite index
/// (i,k) -> i*n + k.
CMatrix property_s_matrix(const FiberFamily& family, const Site& x,
                          std::span<const CMatrix> bs);

/// Hadamard product over sites of e_hat(x, b_x).
CMatrix tensor_kernel(const FiberFamily& family, std::span<const Site> xs,
                      std::span<const CMatrix> bs);

/// Property-(S) matrix of the tensor-product kernel for elementary tensors:
/// bs[h][m] is the factor of the h-th observable at site xs[m]. Entries
/// come from tensor_kernel over the products b_h* b_k, same index layout
/// as property_s_matrix.
CMatrix tensor_property_s_matrix(
    const FiberFamily& family, std::span<const Site> xs,
    const std::vector<std::vector<CMatrix>>& bs);

}  // namespace schurstate
