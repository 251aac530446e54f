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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "schurstate/site.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// Vertex set carrying the fibers: either all of Z^nu or a finite,
/// explicitly enumerated graph.
class Lattice {
 public:
  static Lattice zd(int nu);
  static Lattice graph(Region sites);

  bool is_zd() const { return nu_ > 0; }
  int nu() const { return nu_; }
  /// Declared sites of a finite graph in declaration order; empty on Z^nu.
  const Region& sites() const { return sites_; }
  bool contains(const Site& s) const;

 private:
  int nu_ = 0;
  Region sites_;
  std::shared_ptr<const std::set<Site>> lookup_;
};

/// Asymptotic control over the fibers far from the origin of Z^nu.
///
/// Promise: for every site x with |x| > r,
///   max_{i,j} |G_x(i,j) - reference(i,j)|  =: t_x
/// and sum_{|x| > r} t_x <= tail_sum(r). Here G_x(i,j) = <h_{x,j}, h_{x,i}>.
/// Boundary products use this to stop with a certified error bound.
struct TailEnvelope {
  CMatrix reference;
  std::function<double(int)> tail_sum;
};

/// Gram matrix in the kernel orientation: G(i,j) = <h_j, h_i> where
/// h_i is column i of `vectors`.
CMatrix gram_of(const CMatrix& vectors);

/// Per-site fiber vectors (h_{x,i})_{i in I} in a d-dimensional fiber.
///
/// The family is a value: copies share the immutable vector source, which
/// may generate vectors lazily for infinitely many sites.
class FiberFamily {
 public:
  /// Returns the d x d_I matrix whose column i is h_{x,i}.
  using Source = std::function<CMatrix(const Site&)>;

  FiberFamily(Lattice lattice, int fiber_dim, int index_size, Source source,
              std::optional<TailEnvelope> envelope = std::nullopt,
              Region declared = {});

  /// Explicit vectors per site. `far`, when given, supplies the vectors of
  /// every undeclared site.
  static FiberFamily from_sites(Lattice lattice, int fiber_dim,
                                int index_size,
                                const std::map<Site, CMatrix>& per_site,
                                std::optional<CMatrix> far = std::nullopt);

  /// The same reference vectors at every site.
  static FiberFamily homogeneous(Lattice lattice, const CMatrix& vectors);

  /// h_{x,i} = (base + q^{|x|} v_i) / ||base + q^{|x|} v_i|| on Z^nu, with
  /// ||base|| = 1, 0 < q < 1 and ||v_i|| < 1. Its overlaps tend to 1 fast
  /// enough for the boundary products to converge.
  static FiberFamily perturbed(int nu, const CVector& base,
                               const CMatrix& directions, double decay);

  const Lattice& lattice() const { return lattice_; }
  int fiber_dim() const { return fiber_dim_; }
  int index_size() const { return index_size_; }
  const std::optional<TailEnvelope>& envelope() const { return envelope_; }
  /// Sites with explicitly declared data (may be empty for generated
  /// families).
  const Region& declared_sites() const { return declared_; }

  /// Validated vectors at x: shape d x d_I, finite, every column non-zero.
  CMatrix vectors(const Site& x) const;
  CVector vector(const Site& x, int i) const { return vectors(x).col(i); }
  CMatrix gram(const Site& x) const { return gram_of(vectors(x)); }

 private:
  Lattice lattice_;
  int fiber_dim_;
  int index_size_;
  Source source_;
  std::optional<TailEnvelope> envelope_;
  Region declared_;
};

/// Number of points of Z^nu with 1-norm exactly r.
double sphere_size(int nu, int r);

}  // namespace schurstate
