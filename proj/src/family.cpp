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

#include "schurstate/family.hpp"

#include <cmath>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"

namespace schurstate {

namespace {

constexpr double kZeroVectorNorm = 1e-14;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

}  // namespace

Lattice Lattice::zd(int nu) {
  if (nu < 1) throw ValidationError("lattice: nu must be >= 1");
  Lattice l;
  l.nu_ = nu;
  return l;
}

Lattice Lattice::graph(Region sites) {
  if (sites.empty()) throw ValidationError("lattice: graph has no sites");
  require_distinct(sites, "lattice");
  Lattice l;
  l.nu_ = 0;
  l.lookup_ = std::make_shared<const std::set<Site>>(sites.begin(), sites.end());
  l.sites_ = std::move(sites);
  return l;
}

bool Lattice::contains(const Site& s) const {
  if (is_zd()) return static_cast<int>(s.dim()) == nu_;
  return lookup_->count(s) > 0;
}

CMatrix gram_of(const CMatrix& vectors) {
  return (vectors.adjoint() * vectors).transpose();
}

double sphere_size(int nu, int r) {
  if (r == 0) return 1.0;
  double n = 0.0;
  for (int k = 1; k <= std::min(nu, r); ++k) {
    n += std::ldexp(1.0, k) * binomial(nu, k) * binomial(r - 1, k - 1);
  }
  return n;
}

FiberFamily::FiberFamily(Lattice lattice, int fiber_dim, int index_size,
                         Source source, std::optional<TailEnvelope> envelope,
                         Region declared)
    : lattice_(std::move(lattice)),
      fiber_dim_(fiber_dim),
      index_size_(index_size),
      source_(std::move(source)),
      envelope_(std::move(envelope)),
      declared_(std::move(declared)) {
  if (fiber_dim_ < 1 || index_size_ < 1) {
    throw ValidationError("fiber family: d and d_I must be positive");
  }
  if (envelope_ && (envelope_->reference.rows() != index_size_ ||
                    envelope_->reference.cols() != index_size_)) {
    throw DimensionError("fiber family: envelope reference must be d_I x d_I");
  }
}

CMatrix FiberFamily::vectors(const Site& x) const {
  if (!lattice_.contains(x)) {
    throw ValidationError("fiber family: site " + to_string(x) +
                          " is not a vertex of the lattice");
  }
  CMatrix h = source_(x);
  if (h.rows() != fiber_dim_ || h.cols() != index_size_) {
    std::ostringstream os;
    os << "fiber family: site " << to_string(x) << " supplies a " << h.rows()
       << "x" << h.cols() << " block, expected " << fiber_dim_ << "x"
       << index_size_;
    throw DimensionError(os.str());
  }
  if (!h.allFinite()) {
    throw ValidationError("fiber family: non-finite vector at site " +
                          to_string(x));
  }
  for (int i = 0; i < index_size_; ++i) {
    if (h.col(i).norm() <= kZeroVectorNorm) {
      std::ostringstream os;
      os << "fiber family: vector h[" << to_string(x) << "," << i
         << "] is zero";
      throw ValidationError(os.str());
    }
  }
  return h;
}

FiberFamily FiberFamily::from_sites(Lattice lattice, int fiber_dim,
                                    int index_size,
                                    const std::map<Site, CMatrix>& per_site,
                                    std::optional<CMatrix> far) {
  Region declared;
  for (const auto& [site, h] : per_site) {
    if (!lattice.contains(site)) {
      throw ValidationError("fiber family: declared site " + to_string(site) +
                            " is not a vertex of the lattice");
    }
    declared.push_back(site);
  }
  if (!lattice.is_zd() && !far) {
    for (const Site& s : lattice.sites()) {
      if (!per_site.count(s)) {
        throw ValidationError("fiber family: no vectors for site " +
                              to_string(s));
      }
    }
  }

  auto table = std::make_shared<const std::map<Site, CMatrix>>(per_site);
  std::shared_ptr<const CMatrix> far_ptr;
  if (far) far_ptr = std::make_shared<const CMatrix>(*far);

  std::optional<TailEnvelope> envelope;
  if (lattice.is_zd() && far_ptr) {
    // Beyond the declared radius every site carries the far vectors, so the
    // deviation from their Gram matrix is a finite, exactly known sum.
    const CMatrix reference = gram_of(*far_ptr);
    std::vector<std::pair<int, double>> deviations;
    for (const auto& [site, h] : per_site) {
      if (h.rows() == fiber_dim && h.cols() == index_size) {
        deviations.emplace_back(norm1(site), max_abs(gram_of(h) - reference));
      }
    }
    envelope = TailEnvelope{
        reference, [deviations](int r) {
          double s = 0.0;
          for (const auto& [radius, dev] : deviations) {
            if (radius > r) s += dev;
          }
          return s;
        }};
  }

  Source source = [table, far_ptr](const Site& x) -> CMatrix {
    auto it = table->find(x);
    if (it != table->end()) return it->second;
    if (far_ptr) return *far_ptr;
    throw ValidationError("fiber family: no vectors declared for site " +
                          to_string(x));
  };
  return FiberFamily(std::move(lattice), fiber_dim, index_size,
                     std::move(source), std::move(envelope),
                     std::move(declared));
}

FiberFamily FiberFamily::homogeneous(Lattice lattice, const CMatrix& vectors) {
  auto h = std::make_shared<const CMatrix>(vectors);
  std::optional<TailEnvelope> envelope;
  if (lattice.is_zd()) {
    envelope = TailEnvelope{gram_of(vectors), [](int) { return 0.0; }};
  }
  return FiberFamily(
      std::move(lattice), static_cast<int>(vectors.rows()),
      static_cast<int>(vectors.cols()), [h](const Site&) { return *h; },
      std::move(envelope));
}

FiberFamily FiberFamily::perturbed(int nu, const CVector& base,
                                   const CMatrix& directions, double decay) {
  if (std::abs(base.norm() - 1.0) > 1e-12) {
    throw ValidationError("perturbed family: base vector must have unit norm");
  }
  if (directions.rows() != base.size()) {
    throw DimensionError("perturbed family: directions must match the fiber");
  }
  if (!(decay > 0.0 && decay < 1.0)) {
    throw ValidationError("perturbed family: decay must lie in (0,1)");
  }
  double vmax = 0.0;
  for (int i = 0; i < directions.cols(); ++i) {
    vmax = std::max(vmax, directions.col(i).norm());
  }
  if (!(vmax < 1.0)) {
    throw ValidationError(
        "perturbed family: direction vectors must have norm < 1");
  }
  const int d_i = static_cast<int>(directions.cols());

  auto b = std::make_shared<const CVector>(base);
  auto v = std::make_shared<const CMatrix>(directions);
  Source source = [b, v, decay](const Site& x) -> CMatrix {
    const double eps = std::pow(decay, norm1(x));
    CMatrix h(b->size(), v->cols());
    for (int i = 0; i < v->cols(); ++i) {
      CVector col = *b + eps * v->col(i);
      h.col(i) = col / col.norm();
    }
    return h;
  };

  // |<u_j,u_i> - 1| <= ||u_i - b|| + ||u_j - b|| <= 4 eps V / (1 - eps V)
  // for u = (b + eps v)/||b + eps v||, ||v|| <= V.
  auto tail = [nu, decay, vmax](int r) {
    double sum = 0.0;
    for (int s = std::max(r + 1, 0);; ++s) {
      const double eps = std::pow(decay, s);
      const double term = sphere_size(nu, s) * 4.0 * eps * vmax /
                          (1.0 - eps * vmax);
      sum += term;
      if (term <= 1e-30 * std::max(sum, 1e-300) || term < 1e-300) break;
    }
    return sum;
  };
  TailEnvelope envelope{CMatrix::Ones(d_i, d_i), tail};
  return FiberFamily(Lattice::zd(nu), static_cast<int>(base.size()), d_i,
                     std::move(source), std::move(envelope));
}

}  // namespace schurstate
