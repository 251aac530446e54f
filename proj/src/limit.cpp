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

#include "schurstate/limit.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"
#include "schurstate/kernel.hpp"

namespace schurstate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVanishingOverlap = 1e-14;
constexpr double kUnitaryTol = 1e-12;

// Certified distance between a partial product p and its limit, given the
// reference factor `ref` of the remaining sites and the summed deviation s
// of those sites from it.
double entry_bound(Complex p, Complex ref, double s) {
  const double ap = std::abs(p);
  if (ap == 0.0) return 0.0;
  if (!std::isfinite(s)) return kInf;
  if (std::abs(ref - 1.0) <= 1e-14) {
    // |prod a_x - 1| <= prod (1 + t_x) - 1 <= exp(sum t_x) - 1.
    return ap * std::expm1(s);
  }
  if (std::abs(ref) < 1.0 - 1e-14) {
    // Remaining factors are eventually bounded by some rho < 1: the limit
    // is 0 and the error of the partial product is the product itself.
    return ap;
  }
  return kInf;
}

double max_deviation_from_isometry(const CMatrix& w) {
  return max_abs(w.adjoint() * w -
                 CMatrix::Identity(w.cols(), w.cols()));
}

}  // namespace

InteractionMatrix interaction_matrix(const FiberFamily& family,
                                     const Site& x) {
  const CMatrix g = family.gram(x);
  const int n = family.index_size();
  InteractionMatrix im;
  im.site = x;
  im.values = CMatrix::Zero(n, n);
  im.valid.setConstant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double scale = std::sqrt(std::abs(g(i, i) * g(j, j)));
      if (std::abs(g(i, j)) <= kVanishingOverlap * scale) continue;
      im.values(i, j) = std::log(g(i, j));
      im.valid(i, j) = true;
    }
  }
  return im;
}

BoundaryMatrix boundary_matrix(const FiberFamily& family, const Region& region,
                               const Exhaustion& exhaustion, double tail_tol,
                               std::size_t max_sites) {
  require_distinct(region, "boundary_matrix");
  const std::set<Site> excluded(region.begin(), region.end());
  const int n = family.index_size();
  const auto& envelope = family.envelope();
  if (!exhaustion.finite() && !family.lattice().is_zd()) {
    throw ValidationError(
        "boundary_matrix: lattice exhaustion used on a finite graph");
  }

  BoundaryMatrix out;
  out.region = region;
  out.values = CMatrix::Ones(n, n);
  double bound = kInf;

  for (std::size_t k = 0;; ++k) {
    if (exhaustion.finite() && k >= exhaustion.stage_count()) {
      bound = 0.0;
      break;
    }
    for (const Site& x : exhaustion.stage(k)) {
      if (excluded.count(x)) continue;
      if (out.sites_used == max_sites) {
        std::ostringstream os;
        os << "boundary_matrix: no convergence within " << max_sites
           << " sites; last certified tail bound " << bound;
        throw ConvergenceError(os.str(), max_abs(out.values), bound);
      }
      out.values = hadamard(out.values, family.gram(x));
      ++out.sites_used;
    }
    if (exhaustion.finite()) continue;

    const double s = envelope ? envelope->tail_sum(exhaustion.completed_radius(k))
                              : kInf;
    bound = 0.0;
    for (int i = 0; i < n && std::isfinite(bound); ++i) {
      for (int j = 0; j < n; ++j) {
        const Complex ref = envelope ? envelope->reference(i, j) : Complex(1.0);
        bound = std::max(bound, entry_bound(out.values(i, j), ref, s));
      }
    }
    if (bound <= tail_tol) break;
  }
  out.tail_bound = bound;
  return out;
}

CMatrix transfer_matrix(const FiberFamily& family, const Region& outer,
                        const Region& inner) {
  require_distinct(outer, "transfer_matrix");
  require_subset(inner, outer, "transfer_matrix");
  const int n = family.index_size();
  CMatrix acc = CMatrix::Ones(n, n);
  for (const Site& x : difference(outer, inner)) {
    acc = hadamard(acc, family.gram(x));
  }
  return acc;
}

Complex limit_state_eval(const FiberFamily& family, const LocalObservable& obs,
                         const BoundaryMatrix& boundary) {
  obs.validate(family.fiber_dim());
  if (std::set<Site>(obs.region.begin(), obs.region.end()) !=
      std::set<Site>(boundary.region.begin(), boundary.region.end())) {
    throw GeometryError(
        "limit_state_eval: boundary matrix belongs to a different region");
  }
  const int n = family.index_size();
  CMatrix acc = boundary.values;
  for (std::size_t k = 0; k < obs.region.size(); ++k) {
    acc = hadamard(acc, e_hat(family, obs.region[k], obs.factors[k]));
  }
  if (acc.rows() != n) throw DimensionError("limit_state_eval: bad boundary");
  return sum_entries(acc);
}

Complex limit_state_eval(const FiberFamily& family, const LocalObservable& obs,
                         const Exhaustion& exhaustion, double tail_tol) {
  return limit_state_eval(
      family, obs, boundary_matrix(family, obs.region, exhaustion, tail_tol));
}

ProjectivityReport check_projectivity(const FiberFamily& family,
                                      const Region& outer,
                                      const LocalObservable& obs,
                                      const Exhaustion& exhaustion,
                                      double tail_tol, double tol) {
  require_subset(obs.region, outer, "check_projectivity");
  LocalObservable padded = obs;
  for (const Site& s : difference(outer, obs.region)) {
    padded.region.push_back(s);
    padded.factors.push_back(
        CMatrix::Identity(family.fiber_dim(), family.fiber_dim()));
  }
  ProjectivityReport r;
  r.larger = limit_state_eval(family, padded, exhaustion, tail_tol);
  r.smaller = limit_state_eval(family, obs, exhaustion, tail_tol);
  r.gap = std::abs(r.larger - r.smaller);
  r.scale = std::max(1.0, std::abs(r.smaller));
  r.pass = r.gap <= tol * r.scale;
  return r;
}

LimitState::LimitState(FiberFamily family, Exhaustion exhaustion,
                       double tail_tol)
    : family_(std::move(family)),
      exhaustion_(std::move(exhaustion)),
      tail_tol_(tail_tol),
      full_(boundary_matrix(family_, {}, exhaustion_, tail_tol_)),
      normalization_(sum_entries(full_.values)) {}

BoundaryMatrix LimitState::boundary(const Region& region) const {
  return boundary_matrix(family_, region, exhaustion_, tail_tol_);
}

Complex LimitState::eval(const LocalObservable& obs) const {
  return limit_state_eval(family_, obs, boundary(obs.region));
}

Complex LimitState::eval_normalized(const LocalObservable& obs) const {
  if (!(std::abs(normalization_) > 1e-14)) {
    throw DomainError("limit state: normalization vanishes");
  }
  return eval(obs) / normalization_;
}

RightSqrt right_sqrt(const CMatrix& t, const CMatrix& w) {
  if (t.rows() != t.cols()) throw DimensionError("right_sqrt: T not square");
  if (w.rows() != t.rows()) {
    throw DimensionError("right_sqrt: W must act on the space of T");
  }
  if (max_deviation_from_isometry(w) > kUnitaryTol) {
    throw DomainError("right_sqrt: W is not an isometry");
  }
  const PsdReport psd = is_psd(t, 1e-10);
  if (!psd.hermitian || !(psd.min_eigenvalue > 1e-12 * psd.max_eigenvalue)) {
    std::ostringstream os;
    os << "right_sqrt: T is not Hermitian positive definite (min eigenvalue "
       << psd.min_eigenvalue << ")";
    throw DomainError(os.str());
  }
  RightSqrt r;
  r.log = hermitian_log(t);
  r.h = hermitian_exp(CMatrix(r.log / 2.0)) * w.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(
      CMatrix((r.log + r.log.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
  r.log_eigenvalues = solver.eigenvalues();
  r.trace_abs_log = r.log_eigenvalues.cwiseAbs().sum();
  return r;
}

CMatrix fiber_vectors_from_root(const CMatrix& h) { return h.transpose(); }

GeneratedFamily build_from_generators(const GeneratorSpec& spec) {
  std::vector<std::string> problems;
  const int d = spec.dim;
  if (d < 1) throw ValidationError("generators: dimension must be >= 1");
  std::set<Site> seen;
  for (const GeneratorSite& g : spec.sites) {
    const std::string where = "generators: site " + to_string(g.site);
    if (!spec.lattice.contains(g.site)) problems.push_back(where + ": not a vertex");
    if (!seen.insert(g.site).second) problems.push_back(where + ": duplicate");
    if (spec.lattice.is_zd() && norm1(g.site) > spec.beyond_radius) {
      problems.push_back(where + ": lies beyond the declared radius " +
                         std::to_string(spec.beyond_radius));
    }
    if (g.d_h.size() != d || !g.d_h.allFinite()) {
      problems.push_back(where + ": D_H must have " + std::to_string(d) +
                         " finite entries");
    }
    if (g.u.rows() != d || g.u.cols() != d) {
      problems.push_back(where + ": U must be " + std::to_string(d) + "x" +
                         std::to_string(d));
    } else if (max_abs(g.u.adjoint() * g.u - CMatrix::Identity(d, d)) >
               kUnitaryTol) {
      problems.push_back(where + ": U is not unitary");
    }
    if (g.w.rows() != d || g.w.cols() != d) {
      problems.push_back(where + ": W must be " + std::to_string(d) + "x" +
                         std::to_string(d));
    } else if (max_deviation_from_isometry(g.w) > kUnitaryTol) {
      problems.push_back(where + ": W is not an isometry");
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw ValidationError(msg);
  }

  std::map<Site, CMatrix> per_site;
  std::vector<std::pair<int, double>> deviations;
  double summability = 0.0;
  for (const GeneratorSite& g : spec.sites) {
    const CMatrix expd = g.d_h.array().exp().matrix().cast<Complex>().asDiagonal();
    const CMatrix t = g.u.adjoint() * expd * g.u;
    const RightSqrt root = right_sqrt(t, g.w);
    per_site[g.site] = fiber_vectors_from_root(root.h);
    const double trace_abs = g.d_h.cwiseAbs().sum();
    summability += trace_abs;
    deviations.emplace_back(spec.lattice.is_zd() ? norm1(g.site) : 0,
                            std::expm1(trace_abs));
  }

  auto table = std::make_shared<const std::map<Site, CMatrix>>(std::move(per_site));
  FiberFamily::Source source = [table, d](const Site& x) -> CMatrix {
    auto it = table->find(x);
    if (it != table->end()) return it->second;
    return CMatrix::Identity(d, d);
  };
  std::optional<TailEnvelope> envelope;
  if (spec.lattice.is_zd()) {
    envelope = TailEnvelope{CMatrix::Identity(d, d), [deviations](int r) {
                              double s = 0.0;
                              for (const auto& [radius, dev] : deviations) {
                                if (radius > r) s += dev;
                              }
                              return s;
                            }};
  }
  Region declared;
  for (const GeneratorSite& g : spec.sites) declared.push_back(g.site);
  return GeneratedFamily{FiberFamily(spec.lattice, d, d, std::move(source),
                                     std::move(envelope), std::move(declared)),
                         summability};
}

}  // namespace schurstate
