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

#include "schurstate/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"

namespace schurstate {

namespace {

// (i,j) entry h_j* b h_i.
CMatrix local_kernel(const CMatrix& v, const CMatrix& b) {
  if (b.rows() != v.rows() || b.cols() != v.rows()) {
    throw DimensionError("homogeneous: observable factor has the wrong shape");
  }
  return (v.adjoint() * b * v).transpose();
}

// Hadamard product of the local kernels over the region, each divided by
// beta_max.
CMatrix scaled_kernel(const HomogeneousModel& model, const LocalObservable& obs,
                      double beta_max) {
  obs.validate(model.fiber_dim());
  const int n = model.index_size();
  CMatrix acc = CMatrix::Ones(n, n);
  for (const CMatrix& b : obs.factors) {
    acc = hadamard(acc, local_kernel(model.vectors, b) / beta_max);
  }
  return acc;
}

}  // namespace

void HomogeneousModel::validate() const {
  std::vector<std::string> problems;
  if (vectors.rows() < 1 || vectors.cols() < 1) {
    throw ValidationError("homogeneous model: no vectors");
  }
  for (int j = 0; j < vectors.cols(); ++j) {
    if (!vectors.col(j).allFinite()) {
      problems.push_back("vector " + std::to_string(j) + " is not finite");
    } else if (vectors.col(j).norm() <= 1e-14) {
      problems.push_back("vector " + std::to_string(j) + " is zero");
    }
  }
  if (!problems.empty()) {
    std::string msg = "homogeneous model:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ValidationError(msg);
  }
}

FiberFamily HomogeneousModel::family(const Lattice& lattice) const {
  validate();
  return FiberFamily::homogeneous(lattice, vectors);
}

OverlapMatrix overlaps(const HomogeneousModel& model, double reltol) {
  model.validate();
  OverlapMatrix o;
  o.reltol = reltol;
  o.beta = gram_of(model.vectors);
  for (int i = 0; i < o.beta.rows(); ++i) {
    o.beta_max = std::max(o.beta_max, o.beta(i, i).real());
  }
  for (int i = 0; i < o.beta.rows(); ++i) {
    if (o.beta(i, i).real() >= o.beta_max * (1.0 - reltol)) o.argmax.push_back(i);
  }
  return o;
}

bool check_generic(const OverlapMatrix& beta) {
  const double margin = 1e-12 * beta.beta_max;
  for (int i = 0; i < beta.beta.rows(); ++i) {
    for (int j = 0; j < beta.beta.cols(); ++j) {
      if (i == j) continue;
      const double bound =
          std::sqrt(beta.beta(i, i).real() * beta.beta(j, j).real());
      if (!(std::abs(beta.beta(i, j)) < bound - margin)) return false;
    }
  }
  return true;
}

std::vector<std::pair<int, int>> maximizer_pairs(const OverlapMatrix& beta) {
  std::vector<std::pair<int, int>> out;
  const double tol = beta.reltol * beta.beta_max;
  for (int i = 0; i < beta.beta.rows(); ++i) {
    for (int j = 0; j < beta.beta.cols(); ++j) {
      if (std::abs(beta.beta(i, j) - beta.beta_max) <= tol) out.emplace_back(i, j);
    }
  }
  return out;
}

double generic_decay_rate(const OverlapMatrix& beta) {
  double rate = 0.0;
  for (int i = 0; i < beta.beta.rows(); ++i) {
    for (int j = 0; j < beta.beta.cols(); ++j) {
      const bool top = i == j && std::find(beta.argmax.begin(), beta.argmax.end(),
                                           i) != beta.argmax.end();
      if (!top) rate = std::max(rate, std::abs(beta.beta(i, j)) / beta.beta_max);
    }
  }
  return rate;
}

Complex finite_normalized(const HomogeneousModel& model,
                          std::size_t outer_size, const LocalObservable& obs) {
  if (outer_size < obs.region.size()) {
    throw GeometryError("finite_normalized: outer region smaller than observable");
  }
  const OverlapMatrix o = overlaps(model);
  const CMatrix ratio = o.beta / o.beta_max;
  const CMatrix local = scaled_kernel(model, obs, o.beta_max);
  const long rest = static_cast<long>(outer_size - obs.region.size());
  const long all = static_cast<long>(outer_size);
  Complex num = 0.0;
  Complex den = 0.0;
  for (int i = 0; i < ratio.rows(); ++i) {
    for (int j = 0; j < ratio.cols(); ++j) {
      num += local(i, j) * ipow(ratio(i, j), rest);
      den += ipow(ratio(i, j), all);
    }
  }
  if (!(std::abs(den) > 1e-14)) {
    std::ostringstream os;
    os << "finite_normalized: normalization " << std::abs(den)
       << " (relative to beta_max^|Lambda1|) is degenerate";
    throw DomainError(os.str());
  }
  return num / den;
}

Complex finite_normalized(const HomogeneousModel& model, const Region& outer,
                          const LocalObservable& obs) {
  require_distinct(outer, "finite_normalized");
  require_subset(obs.region, outer, "finite_normalized");
  return finite_normalized(model, outer.size(), obs);
}

Complex product_component(const HomogeneousModel& model, int i,
                          const LocalObservable& obs) {
  obs.validate(model.fiber_dim());
  if (i < 0 || i >= model.index_size()) {
    throw DimensionError("product_component: index out of range");
  }
  const CVector h = model.vectors.col(i);
  const double norm2 = h.squaredNorm();
  Complex acc = 1.0;
  for (const CMatrix& b : obs.factors) {
    acc *= h.dot(b * h) / norm2;
  }
  return acc;
}

Complex generic_limit(const HomogeneousModel& model, const LocalObservable& obs,
                      double reltol) {
  const OverlapMatrix o = overlaps(model, reltol);
  if (!check_generic(o)) {
    throw PreconditionError(
        "generic_limit: overlaps violate the generic condition "
        "|beta_ij| < sqrt(beta_ii beta_jj); use real_beta_limit");
  }
  Complex acc = 0.0;
  for (int i : o.argmax) acc += product_component(model, i, obs);
  return acc / static_cast<double>(o.argmax.size());
}

Complex real_beta_limit(const HomogeneousModel& model,
                        const LocalObservable& obs, double reltol) {
  const OverlapMatrix o = overlaps(model, reltol);
  const double imag_tol = 1e-12 * o.beta_max;
  for (int i = 0; i < o.beta.rows(); ++i) {
    for (int j = 0; j < o.beta.cols(); ++j) {
      if (std::abs(o.beta(i, j).imag()) > imag_tol) {
        throw PreconditionError("real_beta_limit: overlap (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ") is not real");
      }
      if (std::abs(o.beta(i, j) + o.beta_max) <= reltol * o.beta_max) {
        throw PreconditionError("real_beta_limit: overlap (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ") equals -beta_max; the finite volumes oscillate");
      }
    }
  }
  const CMatrix local = scaled_kernel(model, obs, o.beta_max);
  const auto pairs = maximizer_pairs(o);
  Complex acc = 0.0;
  for (const auto& [i, j] : pairs) acc += local(i, j);
  return acc / static_cast<double>(pairs.size());
}

CMatrix equal_offdiag_family(int p, double c, int fiber_dim) {
  if (fiber_dim == 0) fiber_dim = p;
  if (p < 2) throw ValidationError("equal_offdiag_family: need p >= 2");
  if (p > fiber_dim) {
    throw DimensionError("equal_offdiag_family: p = " + std::to_string(p) +
                         " exceeds the fiber dimension " +
                         std::to_string(fiber_dim));
  }
  if (!(c > 0.0 && c <= 1.0)) {
    throw ValidationError("equal_offdiag_family: c must lie in (0,1]");
  }
  std::vector<double> alpha;
  double squares = 0.0;
  for (int k = 0; k + 1 < p; ++k) {
    alpha.push_back(c - squares);
    squares += alpha.back() * alpha.back();
  }
  CMatrix h = CMatrix::Zero(fiber_dim, p);
  for (int j = 0; j < p; ++j) {
    for (int k = 0; k < j; ++k) h(k, j) = alpha[k];
    h(j, j) = 1.0;
  }
  return h;
}

bool detect_product(const OverlapMatrix& beta, double tol) {
  const Complex c = beta.beta(0, 0);
  if (!(c.real() > 0.0)) return false;
  for (int i = 0; i < beta.beta.rows(); ++i) {
    for (int j = 0; j < beta.beta.cols(); ++j) {
      if (std::abs(beta.beta(i, j) - c) > tol * c.real()) return false;
    }
  }
  return true;
}

}  // namespace schurstate
