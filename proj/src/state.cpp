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

#include "schurstate/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"
#include "schurstate/kernel.hpp"

namespace schurstate {

LocalObservable LocalObservable::identity(const Region& region,
                                          int fiber_dim) {
  LocalObservable obs;
  obs.region = region;
  obs.factors.assign(region.size(), CMatrix::Identity(fiber_dim, fiber_dim));
  return obs;
}

void LocalObservable::validate(int fiber_dim) const {
  require_distinct(region, "observable");
  if (factors.size() != region.size()) {
    std::ostringstream os;
    os << "observable: " << region.size() << " sites but " << factors.size()
       << " factors";
    throw DimensionError(os.str());
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].rows() != fiber_dim || factors[k].cols() != fiber_dim) {
      std::ostringstream os;
      os << "observable: factor at " << to_string(region[k]) << " is "
         << factors[k].rows() << "x" << factors[k].cols() << ", expected "
         << fiber_dim << "x" << fiber_dim;
      throw DimensionError(os.str());
    }
  }
}

CMatrix LocalObservable::factor_at(const Site& s, int fiber_dim) const {
  for (std::size_t k = 0; k < region.size(); ++k) {
    if (region[k] == s) return factors[k];
  }
  return CMatrix::Identity(fiber_dim, fiber_dim);
}

LocalObservable LocalObservable::tensor(const LocalObservable& other) const {
  for (const Site& s : other.region) {
    if (contains(region, s)) {
      throw GeometryError("observable product: regions overlap at " +
                          to_string(s));
    }
  }
  LocalObservable out = *this;
  out.region.insert(out.region.end(), other.region.begin(),
                    other.region.end());
  out.factors.insert(out.factors.end(), other.factors.begin(),
                     other.factors.end());
  return out;
}

namespace {

void require_cap(const FiberFamily& family, const Region& region,
                 int dense_cap) {
  if (static_cast<int>(region.size()) > dense_cap) {
    std::ostringstream os;
    os << "dense evaluation needs a vector of dimension "
       << family.fiber_dim() << "^" << region.size() << " = "
       << std::pow(static_cast<double>(family.fiber_dim()),
                   static_cast<double>(region.size()))
       << ", beyond the cap of " << dense_cap << " sites";
    throw ResourceError(os.str());
  }
}

Eigen::Index ipow_index(int base, std::size_t exp) {
  Eigen::Index r = 1;
  for (std::size_t k = 0; k < exp; ++k) r *= base;
  return r;
}

// Applies `op` to tensor slot `slot` of a vector of `n` slots of size d.
CVector apply_local(const CVector& v, const CMatrix& op, int d, std::size_t n,
                    std::size_t slot) {
  const Eigen::Index right = ipow_index(d, n - slot - 1);
  const Eigen::Index left = ipow_index(d, slot);
  CVector out = CVector::Zero(v.size());
  for (Eigen::Index l = 0; l < left; ++l) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const Complex w = op(a, b);
        if (w == Complex(0.0)) continue;
        const Eigen::Index src = (l * d + b) * right;
        const Eigen::Index dst = (l * d + a) * right;
        out.segment(dst, right) += w * v.segment(src, right);
      }
    }
  }
  return out;
}

}  // namespace

DenseState build_psi(const FiberFamily& family, const Region& region,
                     int dense_cap) {
  require_distinct(region, "build_psi");
  require_cap(family, region, dense_cap);
  const int d = family.fiber_dim();
  std::vector<CMatrix> blocks;
  blocks.reserve(region.size());
  for (const Site& x : region) blocks.push_back(family.vectors(x));

  DenseState state;
  state.region = region;
  state.fiber_dim = d;
  state.amplitudes = CVector::Zero(ipow_index(d, region.size()));
  for (int i = 0; i < family.index_size(); ++i) {
    CVector term = CVector::Ones(1);
    for (const CMatrix& h : blocks) {
      const CVector col = h.col(i);
      CVector next(term.size() * d);
      for (Eigen::Index a = 0; a < term.size(); ++a) {
        next.segment(a * d, d) = term(a) * col;
      }
      term = std::move(next);
    }
    state.amplitudes += term;
  }
  return state;
}

CMatrix density_operator(const DenseState& state) {
  return state.amplitudes * state.amplitudes.adjoint();
}

Complex eval_dense(const FiberFamily& family, const Region& outer,
                   const LocalObservable& obs, int dense_cap) {
  obs.validate(family.fiber_dim());
  require_subset(obs.region, outer, "eval_dense");
  const DenseState psi = build_psi(family, outer, dense_cap);
  CVector v = psi.amplitudes;
  for (std::size_t k = 0; k < obs.region.size(); ++k) {
    const auto pos = static_cast<std::size_t>(
        std::find(outer.begin(), outer.end(), obs.region[k]) - outer.begin());
    v = apply_local(v, obs.factors[k], family.fiber_dim(), outer.size(), pos);
  }
  return psi.amplitudes.dot(v);
}

Complex sum_entries(const CMatrix& m) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j);
  return s;
}

Complex eval_schur(const FiberFamily& family, const LocalObservable& obs) {
  obs.validate(family.fiber_dim());
  const int n = family.index_size();
  CMatrix acc = CMatrix::Ones(n, n);
  for (std::size_t k = 0; k < obs.region.size(); ++k) {
    acc = hadamard(acc, e_hat(family, obs.region[k], obs.factors[k]));
  }
  return sum_entries(acc);
}

Complex eval_extended(const FiberFamily& family, const Region& outer,
                      const LocalObservable& obs) {
  obs.validate(family.fiber_dim());
  require_distinct(outer, "eval_extended");
  require_subset(obs.region, outer, "eval_extended");
  const int n = family.index_size();
  CMatrix acc = CMatrix::Ones(n, n);
  for (std::size_t k = 0; k < obs.region.size(); ++k) {
    acc = hadamard(acc, e_hat(family, obs.region[k], obs.factors[k]));
  }
  for (const Site& y : difference(outer, obs.region)) {
    acc = hadamard(acc, family.gram(y));
  }
  return sum_entries(acc);
}

Complex eval_normalized(const FiberFamily& family,
                        const LocalObservable& obs) {
  const Complex z = eval_schur(
      family, LocalObservable::identity(obs.region, family.fiber_dim()));
  if (!(z.real() > 1e-14)) {
    std::ostringstream os;
    os << "eval_normalized: normalization " << z.real()
       << " is at or below 1e-14";
    throw DomainError(os.str());
  }
  return eval_schur(family, obs) / z.real();
}

}  // namespace schurstate
