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

// Shared generators and brute-force oracles for the unit tests. The
// oracles build tensor products explicitly and never call the evaluation
// paths they are used to check.
#pragma once

#include <map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "schurstate/family.hpp"
#include "schurstate/limit.hpp"
#include "schurstate/random.hpp"
#include "schurstate/site.hpp"
#include "schurstate/state.hpp"
#include "schurstate/types.hpp"

namespace testsupport {

using namespace schurstate;

// Declared sites 0..declared-1 on Z, random vectors there and beyond.
inline FiberFamily random_chain(Rng& rng, int d, int d_i, int declared) {
  std::map<Site, CMatrix> per_site;
  for (int x = 0; x < declared; ++x) {
    per_site[Site{x}] = random_complex_matrix(rng, d, d_i);
  }
  return FiberFamily::from_sites(Lattice::zd(1), d, d_i, per_site,
                                 random_complex_matrix(rng, d, d_i));
}

// Generator model on Z with Tr|D_{H_x}| = 2^{-x} for 0 <= x <= radius and
// random U_x, W_x.
inline GeneratorSpec geometric_generators(Rng& rng, int d, int radius) {
  GeneratorSpec spec;
  spec.lattice = Lattice::zd(1);
  spec.dim = d;
  spec.beyond_radius = radius;
  for (int x = 0; x <= radius; ++x) {
    RVector dh(d);
    for (int m = 0; m < d; ++m) dh(m) = rng.uniform(-1.0, 1.0);
    dh *= std::ldexp(1.0, -x) / dh.cwiseAbs().sum();
    spec.sites.push_back({Site{x}, dh, random_unitary(rng, d), random_unitary(rng, d)});
  }
  return spec;
}

inline Region chain_region(int n, int offset = 0) {
  Region r;
  for (int x = 0; x < n; ++x) r.push_back(Site{x + offset});
  return r;
}

inline CMatrix orthonormal_vectors(int d, int d_i) {
  return CMatrix::Identity(d, d_i);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// sum_i (x)_x h_{x,i}, first site most significant.
inline CVector oracle_psi(const FiberFamily& fam, const Region& region) {
  const int d_i = fam.index_size();
  CVector psi;
  for (int i = 0; i < d_i; ++i) {
    CMatrix term = CMatrix::Ones(1, 1);
    for (const Site& x : region) term = kron(term, CMatrix(fam.vector(x, i)));
    if (psi.size() == 0) psi = term.col(0);
    else psi += term.col(0);
  }
  return psi;
}

// <Psi, (b (x) 1) Psi> with the operator assembled as a Kronecker product.
inline Complex oracle_expectation(const FiberFamily& fam, const Region& outer,
                                  const LocalObservable& obs) {
  const int d = fam.fiber_dim();
  CMatrix op = CMatrix::Ones(1, 1);
  for (const Site& x : outer) {
    CMatrix f = CMatrix::Identity(d, d);
    for (std::size_t k = 0; k < obs.region.size(); ++k) {
      if (obs.region[k] == x) f = obs.factors[k];
    }
    op = kron(op, f);
  }
  const CVector psi = oracle_psi(fam, outer);
  return psi.dot(op * psi);
}

inline Eigen::VectorXd eigenvalues(const CMatrix& a) {
  const CMatrix h = (a + a.adjoint()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

// min eigenvalue / max(1, |max eigenvalue|): >= -1e-10 means PSD at the
// library-wide tolerance.
inline double min_eig_ratio(const CMatrix& a) {
  const Eigen::VectorXd ev = eigenvalues(a);
  return ev.minCoeff() / std::max(1.0, std::abs(ev.maxCoeff()));
}

inline double rel(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

inline double max_entry(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
