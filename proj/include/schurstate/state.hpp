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

#include <vector>

#include "schurstate/family.hpp"
#include "schurstate/site.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// Elementary tensor b_Lambda = (x) b_x over a finite region.
struct LocalObservable {
  Region region;
  std::vector<CMatrix> factors;

  /// Identity factors on every site of `region`.
  static LocalObservable identity(const Region& region, int fiber_dim);

  /// Throws on duplicate sites, factor count mismatch or wrong shapes.
  void validate(int fiber_dim) const;

  /// Factor at `s`, or the identity when `s` is not in the region.
  CMatrix factor_at(const Site& s, int fiber_dim) const;

  /// Concatenation on disjoint regions; throws GeometryError on overlap.
  LocalObservable tensor(const LocalObservable& other) const;
};

/// Largest region for which dense vectors are materialized.
inline constexpr int kDefaultDenseCap = 8;

/// Amplitudes of Psi_Lambda. Sites are ordered as in `region`; the fiber
/// index of the last site runs fastest.
struct DenseState {
  Region region;
  int fiber_dim = 0;
  CVector amplitudes;
};

/// Psi_Lambda = sum_i (x)_{x in Lambda} h_{x,i}.
DenseState build_psi(const FiberFamily& family, const Region& region,
                     int dense_cap = kDefaultDenseCap);

/// Psi Psi* as a dense matrix.
CMatrix density_operator(const DenseState& state);

/// <Psi_{Lambda1}, (b_Lambda (x) 1) Psi_{Lambda1}> by explicit contraction
/// on the dense vector. Exponential in |Lambda1|; the reference oracle.
Complex eval_dense(const FiberFamily& family, const Region& outer,
                   const LocalObservable& obs,
                   int dense_cap = kDefaultDenseCap);

/// psi_Lambda(b) = <e, (Hadamard_x e_hat(x, b_x)) e> with e the all-ones
/// vector; linear in |Lambda|.
Complex eval_schur(const FiberFamily& family, const LocalObservable& obs);

/// psi_{Lambda1}(b_Lambda (x) 1): products of kernel values on Lambda and
/// of plain overlaps on Lambda1 \ Lambda; linear in |Lambda1|.
Complex eval_extended(const FiberFamily& family, const Region& outer,
                      const LocalObservable& obs);

/// eval_schur(obs) / eval_schur(identities on obs.region). Throws
/// DomainError when the normalization is at or below 1e-14.
Complex eval_normalized(const FiberFamily& family, const LocalObservable& obs);

/// Sum of all entries, accumulated in row-major (i,j) order.
Complex sum_entries(const CMatrix& m);

}  // namespace schurstate
