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

#include "schurstate/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"
#include "schurstate/kernel.hpp"
#include "schurstate/random.hpp"

namespace schurstate {

namespace {

void require_zd(const FiberFamily& family, const char* what) {
  if (!family.lattice().is_zd()) {
    throw ValidationError(std::string(what) + ": mixing is defined on Z^nu only");
  }
}

}  // namespace

Region ball(int nu, int r) {
  if (nu < 1 || r < 0) throw ValidationError("ball: need nu >= 1 and r >= 0");
  Region out;
  for (int s = 0; s <= r; ++s) {
    for (Site& x : sphere(nu, s)) out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string EmbeddingStrategy::name() const {
  if (kind == Kind::translate) return "translate";
  return "random:" + std::to_string(seed);
}

Embedding embed(const Region& source, int t, const EmbeddingStrategy& strategy) {
  require_distinct(source, "embed");
  if (t < 0) throw ValidationError("embed: clearance t must be >= 0");
  Embedding e;
  e.source = source;
  e.clearance = t;
  if (source.empty()) return e;
  const int nu = static_cast<int>(source.front().dim());
  for (const Site& y : source) {
    if (static_cast<int>(y.dim()) != nu || nu < 1) {
      throw DimensionError("embed: sites of mixed dimension");
    }
  }

  if (strategy.kind == EmbeddingStrategy::Kind::translate) {
    int radius = 0;
    for (const Site& y : source) radius = std::max(radius, norm1(y));
    for (const Site& y : source) {
      Site z = y;
      z.coords[0] += t + 1 + radius;
      e.image.push_back(std::move(z));
    }
  } else {
    Rng rng(strategy.seed ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(t) + 1)));
    std::vector<Site> pool;
    for (int r = t + 1; pool.size() < source.size(); ++r) {
      for (Site& x : sphere(nu, r)) pool.push_back(std::move(x));
    }
    for (std::size_t k = 0; k < source.size(); ++k) {
      std::swap(pool[k], pool[k + rng.index(pool.size() - k)]);
      e.image.push_back(pool[k]);
    }
  }

  for (const Site& z : e.image) {
    if (norm1(z) <= t) {
      throw GeometryError("embed: image site " + to_string(z) +
                          " lies inside D_" + std::to_string(t));
    }
  }
  require_distinct(e.image, "embed");
  return e;
}

LocalObservable transport(const LocalObservable& b, const Embedding& j) {
  if (b.region != j.source) {
    throw GeometryError("transport: observable region differs from the source");
  }
  return LocalObservable{j.image, b.factors};
}

AlphaLimit alpha_limit(const FiberFamily& family, const LocalObservable& b,
                       const std::vector<int>& t_sequence, double tol,
                       const EmbeddingStrategy& strategy) {
  require_zd(family, "alpha_limit");
  b.validate(family.fiber_dim());
  if (t_sequence.size() < 2) {
    throw ValidationError("alpha_limit: need at least two values of t");
  }
  CMatrix prev;
  CMatrix last;
  for (int t : t_sequence) {
    const Embedding j = embed(b.region, t, strategy);
    prev = std::move(last);
    last = tensor_kernel(family, j.image, b.factors);
  }
  const double change = max_abs(last - prev);
  if (change > tol * std::max(1.0, max_abs(last))) {
    std::ostringstream os;
    os << "alpha_limit: embedded kernel not Cauchy at t = " << t_sequence.back()
       << " (last change " << change << ")";
    throw ConvergenceError(os.str(), max_abs(last), change);
  }
  AlphaLimit out;
  out.values = last;
  out.alpha = last(0, 0);
  out.spread = max_abs(last - CMatrix::Constant(last.rows(), last.cols(), last(0, 0)));
  out.independent = out.spread <= tol;
  return out;
}

double mixing_gap(const LimitState& state, const LocalObservable& a,
                  const LocalObservable& b, int t,
                  const EmbeddingStrategy& strategy) {
  require_zd(state.family(), "mixing_gap");
  const LocalObservable moved = transport(b, embed(b.region, t, strategy));
  const LocalObservable joint = a.tensor(moved);
  const FiberFamily& fam = state.family();
  const int n = fam.index_size();
  const CMatrix one = CMatrix::Identity(fam.fiber_dim(), fam.fiber_dim());

  // All three values share w = beta over the complement of Lambda u J.
  // Writing the moved kernel as G_J o r and s = r - r(0,0), the constant
  // part of r cancels exactly:
  //   gap = |sum(p o s) - sum(p) sum(q o s)|,
  //   p = A o w o G_J / Z,  q = G_Lambda o w o G_J / Z,  Z = sum(G_Lambda o w o G_J).
  // Far out r is nearly constant, and this keeps the digits a direct
  // difference of O(1) values loses.
  CMatrix g_j = CMatrix::Ones(n, n);
  CMatrix r = CMatrix::Ones(n, n);
  bool separable = true;
  for (std::size_t k = 0; k < moved.region.size() && separable; ++k) {
    const CMatrix g = e_hat(fam, moved.region[k], one);
    const CMatrix e = e_hat(fam, moved.region[k], moved.factors[k]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(g(i, j)) <= 1e-14 * std::sqrt(std::abs(g(i, i) * g(j, j)))) {
          separable = false;
        } else {
          r(i, j) *= e(i, j) / g(i, j);
        }
      }
    }
    g_j = hadamard(g_j, g);
  }
  if (separable) {
    CMatrix kern = CMatrix::Ones(n, n);
    CMatrix g_l = CMatrix::Ones(n, n);
    for (std::size_t k = 0; k < a.region.size(); ++k) {
      kern = hadamard(kern, e_hat(fam, a.region[k], a.factors[k]));
      g_l = hadamard(g_l, e_hat(fam, a.region[k], one));
    }
    const CMatrix base = hadamard(state.boundary(joint.region).values, g_j);
    const Complex z = sum_entries(hadamard(base, g_l));
    if (std::abs(z) > 1e-14) {
      const CMatrix s = r - CMatrix::Constant(n, n, r(0, 0));
      const CMatrix p = hadamard(base, kern);
      const Complex pa = sum_entries(p) / z;
      const Complex ps = sum_entries(hadamard(p, s)) / z;
      const Complex qs = sum_entries(hadamard(hadamard(base, g_l), s)) / z;
      return std::abs(ps - pa * qs);
    }
  }
  // Vanishing overlaps at J or a degenerate local normalization.
  const Complex ab = state.eval_normalized(joint);
  const Complex pa = state.eval_normalized(a);
  const Complex pb = state.eval_normalized(moved);
  return std::abs(ab - pa * pb);
}

double alpha_mixing_gap(const LimitState& state, const LocalObservable& a,
                        const LocalObservable& b, int t,
                        const AlphaLimit& alpha,
                        const EmbeddingStrategy& strategy) {
  require_zd(state.family(), "alpha_mixing_gap");
  if (!alpha.independent) {
    throw PreconditionError(
        "alpha_mixing_gap: the far-site limits depend on (i,j) (spread " +
        std::to_string(alpha.spread) +
        "), so no tail state alpha exists and the alpha-mixing property need "
        "not hold");
  }
  const LocalObservable moved = transport(b, embed(b.region, t, strategy));
  const Complex ab = state.eval_normalized(a.tensor(moved));
  const Complex pa = state.eval_normalized(a);
  return std::abs(ab - pa * alpha.alpha);
}

MixingScan mixing_scan(const LimitState& state, const LocalObservable& a,
                       const LocalObservable& b, const std::vector<int>& t_list,
                       const std::vector<EmbeddingStrategy>& strategies,
                       const std::vector<int>& alpha_ts, double alpha_tol,
                       int threads) {
  require_zd(state.family(), "mixing_scan");
  if (t_list.empty() || strategies.empty()) {
    throw ValidationError("mixing_scan: empty t list or strategy list");
  }
  MixingScan scan;
  scan.alpha = alpha_limit(state.family(), b, alpha_ts, alpha_tol);

  struct Cell {
    int t;
    const EmbeddingStrategy* strategy;
  };
  std::vector<Cell> cells;
  for (int t : t_list) {
    for (const auto& s : strategies) cells.push_back({t, &s});
  }
  scan.rows.resize(cells.size());
  auto run = [&](std::size_t k) {
    const Cell& c = cells[k];
    ScanRow row;
    row.t = c.t;
    row.strategy = c.strategy->name();
    row.mixing_gap = mixing_gap(state, a, b, c.t, *c.strategy);
    row.alpha_mixing_gap =
        scan.alpha.independent
            ? alpha_mixing_gap(state, a, b, c.t, scan.alpha, *c.strategy)
            : std::numeric_limits<double>::quiet_NaN();
    scan.rows[k] = std::move(row);
  };
  const std::size_t width = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < cells.size(); start += width) {
    std::vector<std::future<void>> batch;
    const std::size_t stop = std::min(cells.size(), start + width);
    for (std::size_t k = start; k < stop; ++k) {
      batch.push_back(std::async(width == 1 ? std::launch::deferred
                                            : std::launch::async,
                                 run, k));
    }
    for (auto& f : batch) f.get();
  }

  for (std::size_t s = 0; s < strategies.size(); ++s) {
    int drops = 0;
    int steps = 0;
    for (std::size_t k = 1; k < t_list.size(); ++k) {
      const double before = scan.rows[(k - 1) * strategies.size() + s].mixing_gap;
      const double after = scan.rows[k * strategies.size() + s].mixing_gap;
      ++steps;
      if (after < before) ++drops;
    }
    scan.decreasing_fraction.emplace_back(
        strategies[s].name(), steps ? static_cast<double>(drops) / steps : 0.0);
  }
  return scan;
}

void write_scan_csv(std::ostream& out, const MixingScan& scan) {
  auto number = [](double v) {
    if (std::isnan(v)) return std::string("nan");
    std::ostringstream os;
    os << std::showpoint << std::setprecision(17) << v;
    return os.str();
  };
  out << "t,strategy,mixing_gap,alpha_mixing_gap\n";
  for (const ScanRow& r : scan.rows) {
    out << r.t << ',' << r.strategy << ',' << number(r.mixing_gap) << ','
        << number(r.alpha_mixing_gap) << '\n';
  }
}

}  // namespace schurstate
