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

#include <utility>
#include <vector>

#include "schurstate/family.hpp"
#include "schurstate/site.hpp"
#include "schurstate/state.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// Reference vectors h_j in one fiber, copied to every site.
struct HomogeneousModel {
  /// d x d_I, column j is h_j.
  CMatrix vectors;

  int fiber_dim() const { return static_cast<int>(vectors.rows()); }
  int index_size() const { return static_cast<int>(vectors.cols()); }

  /// Throws ValidationError naming every zero or non-finite vector.
  void validate() const;

  FiberFamily family(const Lattice& lattice) const;
};

inline constexpr double kArgmaxRelTol = 1e-9;

struct OverlapMatrix {
  CMatrix beta;  // beta(i,j) = <h_j, h_i>
  double beta_max = 0.0;
  std::vector<int> argmax;  // {i : beta_ii = beta_max within reltol}
  double reltol = kArgmaxRelTol;
};

OverlapMatrix overlaps(const HomogeneousModel& model,
                       double reltol = kArgmaxRelTol);

/// |beta_ij| < sqrt(beta_ii beta_jj) - 1e-12 beta_max for all i != j.
bool check_generic(const OverlapMatrix& beta);

/// Pairs (i,j) with beta_ij = beta_max within reltol (real part; the
/// imaginary part must vanish within the same tolerance).
std::vector<std::pair<int, int>> maximizer_pairs(const OverlapMatrix& beta);

/// max |beta_ij| / beta_max over the pairs that are not argmax diagonal
/// entries; 0 when there are none. Governs how fast finite volumes reach
/// the generic limit.
double generic_decay_rate(const OverlapMatrix& beta);

/// psi_{Lambda1}(b_Lambda) / psi_{Lambda1}(1) for a region Lambda1 with
/// `outer_size` sites containing obs.region. Every power is taken of
/// beta / beta_max, so large volumes neither overflow nor underflow.
Complex finite_normalized(const HomogeneousModel& model,
                          std::size_t outer_size, const LocalObservable& obs);
Complex finite_normalized(const HomogeneousModel& model, const Region& outer,
                          const LocalObservable& obs);

/// Product component omega_i(b) = prod_x <h_i, b_x h_i> / beta_ii.
Complex product_component(const HomogeneousModel& model, int i,
                          const LocalObservable& obs);

/// Uniform mixture of the product components over the argmax set. Throws
/// PreconditionError when the generic condition fails.
Complex generic_limit(const HomogeneousModel& model, const LocalObservable& obs,
                      double reltol = kArgmaxRelTol);

/// Average over the maximizer pairs of prod_x Tr(h_i h_j* b_x) / beta_max.
/// Requires real overlaps (|Im beta_ij| <= 1e-12 beta_max) and no pair with
/// beta_ij = -beta_max, whose powers oscillate.
Complex real_beta_limit(const HomogeneousModel& model,
                        const LocalObservable& obs,
                        double reltol = kArgmaxRelTol);

/// h_1 = e_1, h_j = alpha_1 e_1 + ... + alpha_{j-1} e_{j-1} + e_j with
/// alpha_1 = c, alpha_j = c - (alpha_1^2 + ... + alpha_{j-1}^2). Pairwise
/// overlaps all equal c. `fiber_dim` 0 means p.
CMatrix equal_offdiag_family(int p, double c, int fiber_dim = 0);

/// True iff every entry of beta equals one constant c > 0 within tol * c.
bool detect_product(const OverlapMatrix& beta, double tol);

}  // namespace schurstate
