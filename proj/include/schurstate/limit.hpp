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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "schurstate/family.hpp"
#include "schurstate/site.hpp"
#include "schurstate/state.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// Deterministic enumeration x_1, x_2, ... of the vertex set, consumed in
/// stages. On Z^nu stage r is the sphere |x| = r (so after stage r every
/// site of the ball D_r has been enumerated); on a finite graph stage k is
/// the k-th declared site.
class Exhaustion {
 public:
  /// Spheres in increasing radius, lexicographic inside each sphere.
  static Exhaustion balls(int nu);
  /// Spheres in increasing radius, seeded shuffle inside each sphere.
  static Exhaustion shuffled_balls(int nu, std::uint64_t seed);
  /// Declared order of a finite site list.
  static Exhaustion enumerated(Region sites);
  /// The canonical exhaustion of a lattice.
  static Exhaustion canonical(const Lattice& lattice);

  bool finite() const { return nu_ == 0; }
  /// Number of stages of a finite exhaustion.
  std::size_t stage_count() const { return sites_.size(); }
  std::vector<Site> stage(std::size_t k) const;
  /// Radius r such that all sites with |x| <= r are enumerated once stage
  /// k is done (Z^nu only).
  int completed_radius(std::size_t k) const { return static_cast<int>(k); }
  /// Lambda_n: the first n enumerated sites.
  Region first(std::size_t n) const;

 private:
  int nu_ = 0;
  std::optional<std::uint64_t> shuffle_seed_;
  Region sites_;
};

/// Entrywise principal logarithms of the overlaps at one site; entries
/// whose overlap vanishes carry no value.
struct InteractionMatrix {
  Site site;
  CMatrix values;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
};

/// |G(i,j)| <= 1e-14 sqrt(G(i,i) G(j,j)) counts as a vanishing overlap.
InteractionMatrix interaction_matrix(const FiberFamily& family,
                                     const Site& x);

inline constexpr std::size_t kDefaultSiteCap = 1000000;
inline constexpr double kDefaultTailTol = 1e-12;

/// beta_{Lambda^c}: the limit of products of overlaps outside Lambda.
struct BoundaryMatrix {
  Region region;
  CMatrix values;
  /// Certified bound on max_{i,j} |values(i,j) - limit(i,j)|.
  double tail_bound = 0.0;
  std::size_t sites_used = 0;
};

/// Direct partial products along the exhaustion, stopped once the
/// envelope-certified error of every entry is at most tail_tol. Throws
/// ConvergenceError when `max_sites` factors did not suffice.
BoundaryMatrix boundary_matrix(const FiberFamily& family, const Region& region,
                               const Exhaustion& exhaustion,
                               double tail_tol = kDefaultTailTol,
                               std::size_t max_sites = kDefaultSiteCap);

/// beta_{Lambda,Lambda0}: product of overlaps over Lambda \ Lambda0.
CMatrix transfer_matrix(const FiberFamily& family, const Region& outer,
                        const Region& inner);

/// hat psi_Lambda(b) = sum_{i,j} prod_{x in Lambda} Tr(h_{x,i}h_{x,j}* b_x)
///                     * beta_{Lambda^c; i,j}.
Complex limit_state_eval(const FiberFamily& family, const LocalObservable& obs,
                         const Exhaustion& exhaustion,
                         double tail_tol = kDefaultTailTol);

/// Same, with a precomputed boundary matrix for obs.region.
Complex limit_state_eval(const FiberFamily& family, const LocalObservable& obs,
                         const BoundaryMatrix& boundary);

struct ProjectivityReport {
  Complex larger;   // hat psi_Lambda(b_{Lambda0} (x) 1)
  Complex smaller;  // hat psi_{Lambda0}(b_{Lambda0})
  double gap = 0.0;
  double scale = 1.0;
  bool pass = false;
};

/// Compares the limit functional on `outer` (observable padded with
/// identities) with the one on obs.region. Passes iff gap <= tol * scale,
/// scale = max(1, |smaller|).
ProjectivityReport check_projectivity(const FiberFamily& family,
                                      const Region& outer,
                                      const LocalObservable& obs,
                                      const Exhaustion& exhaustion,
                                      double tail_tol = kDefaultTailTol,
                                      double tol = 1e-9);

/// Limit functional bound to one family and exhaustion. The normalization
/// Z = sum_{i,j} beta_{V;i,j} is computed once at construction.
class LimitState {
 public:
  LimitState(FiberFamily family, Exhaustion exhaustion,
             double tail_tol = kDefaultTailTol);

  const FiberFamily& family() const { return family_; }
  const Exhaustion& exhaustion() const { return exhaustion_; }
  double tail_tol() const { return tail_tol_; }

  BoundaryMatrix boundary(const Region& region) const;
  Complex eval(const LocalObservable& obs) const;
  /// eval(obs) / Z.
  Complex eval_normalized(const LocalObservable& obs) const;
  Complex normalization() const { return normalization_; }
  const BoundaryMatrix& full_boundary() const { return full_; }

 private:
  FiberFamily family_;
  Exhaustion exhaustion_;
  double tail_tol_;
  BoundaryMatrix full_;
  Complex normalization_;
};

/// h = exp(H/2) W* with H = log T, so that h h* = T.
struct RightSqrt {
  CMatrix h;
  CMatrix log;              // H
  RVector log_eigenvalues;  // diagonal of D_H
  double trace_abs_log = 0.0;  // Tr|D_H|
};

RightSqrt right_sqrt(const CMatrix& t, const CMatrix& w);

/// Fiber vectors of a right square root: vector i has components h(i,m),
/// i.e. row i of h read as a column. Then <h_j, h_i> = T(i,j).
CMatrix fiber_vectors_from_root(const CMatrix& h);

struct GeneratorSite {
  Site site;
  RVector d_h;  // diagonal of D_{H_x}
  CMatrix u;    // unitary U_x
  CMatrix w;    // isometry W_x
};

/// Per-site (D_H, U, W) triples on a lattice; every site not listed (in
/// particular every site beyond `beyond_radius` on Z^nu) has D_H = 0 and
/// U = W = identity.
struct GeneratorSpec {
  Lattice lattice = Lattice::zd(1);
  int dim = 0;
  std::vector<GeneratorSite> sites;
  int beyond_radius = 0;
};

struct GeneratedFamily {
  FiberFamily family;
  /// sum_x Tr|D_{H_x}|.
  double summability = 0.0;
};

/// T_x = U_x* exp(D_{H_x}) U_x, h_x = right_sqrt(T_x, W_x), fiber vectors
/// from the rows of h_x. Envelope: reference identity, t_x =
/// exp(Tr|D_{H_x}|) - 1.
GeneratedFamily build_from_generators(const GeneratorSpec& spec);

}  // namespace schurstate
