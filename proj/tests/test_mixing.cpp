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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "schurstate/errors.hpp"
#include "schurstate/mixing.hpp"
#include "support.hpp"

using namespace schurstate;
using namespace testsupport;

namespace {

// The epsilon family on Z^2: (e_1 + 2^{-|x|} v_i) / norm.
FiberFamily eps_family(int d_i = 2) {
  CVector base = CVector::Zero(2);
  base(0) = 1.0;
  CMatrix dirs(2, d_i);
  if (d_i == 1) {
    dirs << 0.3, Complex(0.0, 0.4);
  } else {
    dirs << 0.0, 0.2, 0.5, Complex(0.0, -0.4);
  }
  return FiberFamily::perturbed(2, base, dirs, 0.5);
}

LocalObservable obs_at(Rng& rng, const Region& region, int d) {
  LocalObservable obs{region, {}};
  for (std::size_t k = 0; k < region.size(); ++k) obs.factors.push_back(random_hermitian(rng, d));
  return obs;
}

int min_norm(const Region& r) {
  int m = 1 << 30;
  for (const Site& s : r) m = std::min(m, norm1(s));
  return m;
}

const std::vector<EmbeddingStrategy> kBoth = {EmbeddingStrategy::translate(),
                                              EmbeddingStrategy::random(11)};

}  // namespace

TEST_CASE("ball: examples") {
  CHECK(ball(2, 0) == Region{Site{0, 0}});
  const Region b = ball(2, 1);
  CHECK(b.size() == 5);
  CHECK(std::is_sorted(b.begin(), b.end()));
  CHECK_THROWS_AS(ball(2, -1), ValidationError);
}

TEST_CASE("ball: sizes match brute-force enumeration") {
  for (int nu = 1; nu <= 3; ++nu) {
    for (int r = 0; r <= 6; ++r) {
      std::size_t count = 0;
      std::vector<int> z(nu, -r);
      while (true) {
        int n = 0;
        for (int c : z) n += std::abs(c);
        if (n <= r) ++count;
        int k = nu - 1;
        while (k >= 0 && z[k] == r) z[k--] = -r;
        if (k < 0) break;
        ++z[k];
      }
      const Region b = ball(nu, r);
      CHECK(b.size() == count);
      CHECK(std::set<Site>(b.begin(), b.end()).size() == count);
      for (const Site& s : b) CHECK(norm1(s) <= r);
    }
  }
}

TEST_CASE("embed: translate example") {
  const Embedding e = embed({Site{0, 0}}, 3, EmbeddingStrategy::translate());
  CHECK(e.image == Region{Site{4, 0}});
  CHECK(e.clearance == 3);
}

TEST_CASE("embed: images are injective and clear of D_t") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const int nu = 1 + static_cast<int>(rng.index(3));
    const Region pool = ball(nu, 3);
    std::set<Site> pick;
    const std::size_t n = 1 + rng.index(4);
    while (pick.size() < n) pick.insert(pool[rng.index(pool.size())]);
    const Region source(pick.begin(), pick.end());
    const int t = static_cast<int>(rng.index(30));
    for (const EmbeddingStrategy& s : {EmbeddingStrategy::translate(),
                                       EmbeddingStrategy::random(seed)}) {
      const Embedding e = embed(source, t, s);
      CHECK(e.image.size() == source.size());
      CHECK(std::set<Site>(e.image.begin(), e.image.end()).size() == source.size());
      CHECK(min_norm(e.image) > t);
    }
  }
}

TEST_CASE("embed: random strategy is reproducible") {
  const Region src = {Site{0, 0}, Site{1, 0}, Site{0, 1}};
  const Embedding a = embed(src, 7, EmbeddingStrategy::random(5));
  const Embedding b = embed(src, 7, EmbeddingStrategy::random(5));
  CHECK(a.image == b.image);
  CHECK(EmbeddingStrategy::random(5).name() == "random:5");
  CHECK(EmbeddingStrategy::translate().name() == "translate");
}

TEST_CASE("transport moves factors to the image") {
  Rng rng(1);
  const LocalObservable b = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
  const Embedding e = embed(b.region, 4, EmbeddingStrategy::translate());
  const LocalObservable moved = transport(b, e);
  CHECK(moved.region == e.image);
  CHECK(max_entry(moved.factors[1] - b.factors[1]) == 0.0);
  CHECK_THROWS_AS(transport(obs_at(rng, {Site{2, 2}}, 2), e), GeometryError);
}

TEST_CASE("alpha_limit: common far vector") {
  Rng rng(2);
  CVector h = random_complex_matrix(rng, 3, 1).col(0);
  h.normalize();
  CMatrix v(3, 2);
  v.col(0) = h;
  v.col(1) = h;
  const FiberFamily fam = FiberFamily::homogeneous(Lattice::zd(2), v);
  const LocalObservable b = obs_at(rng, {Site{0, 0}, Site{0, 1}}, 3);
  const AlphaLimit a = alpha_limit(fam, b);
  CHECK(a.independent);
  const Complex want = h.dot(b.factors[0] * h) * h.dot(b.factors[1] * h);
  CHECK(rel(a.alpha, want) < 1e-14);
  CHECK(max_entry(a.values - CMatrix::Constant(2, 2, want)) < 1e-14);
}

TEST_CASE("alpha_limit: identities give one") {
  const AlphaLimit a =
      alpha_limit(eps_family(), LocalObservable::identity({Site{0, 0}, Site{1, 1}}, 2));
  CHECK(a.independent);
  CHECK(std::abs(a.alpha - 1.0) < 1e-12);
}

TEST_CASE("alpha_limit: positive on positive observables") {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const CMatrix x = random_complex_matrix(rng, 2, 2);
    const LocalObservable b{{Site{0, 0}}, {x * x.adjoint()}};
    const AlphaLimit a = alpha_limit(eps_family(), b);
    CHECK(a.independent);
    CHECK(a.alpha.real() >= 0.0);
    CHECK(std::abs(a.alpha.imag()) < 1e-12 * std::max(1.0, a.alpha.real()));
  }
}

TEST_CASE("alpha_limit: orthonormal vectors are not independent") {
  const FiberFamily fam = FiberFamily::homogeneous(Lattice::zd(2), orthonormal_vectors(2, 2));
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const AlphaLimit a = alpha_limit(fam, LocalObservable{{Site{0, 0}}, {p}});
  CHECK_FALSE(a.independent);
  CHECK(std::abs(a.values(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(a.values(1, 1)) < 1e-15);
  CHECK(std::abs(a.values(0, 1)) < 1e-15);
}

TEST_CASE("alpha_limit: needs two points") {
  CHECK_THROWS_AS(alpha_limit(eps_family(), LocalObservable::identity({Site{0, 0}}, 2), {10}),
                  ValidationError);
}

namespace {

FiberFamily unit_vector_family(Rng& rng) {
  CMatrix h = random_complex_matrix(rng, 2, 1);
  h /= h.norm();
  return FiberFamily::homogeneous(Lattice::zd(2), h);
}

}  // namespace

TEST_CASE("mixing_gap: product state") {
  Rng rng(4);
  const LimitState state(unit_vector_family(rng), Exhaustion::balls(2));
  const LocalObservable a = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
  const LocalObservable b = obs_at(rng, {Site{0, 0}}, 2);
  const AlphaLimit al = alpha_limit(state.family(), b);
  REQUIRE(al.independent);
  for (int t : {2, 5, 10, 20}) {
    for (const auto& s : kBoth) {
      CHECK(mixing_gap(state, a, b, t, s) <= 1e-12);
      CHECK(alpha_mixing_gap(state, a, b, t, al, s) <= 1e-12);
    }
  }
}

TEST_CASE("mixing_gap: single index, site-dependent vectors") {
  // The state still factorizes; only the alpha gap feels the
  // site dependence, through psi(J_t(b)) - alpha(b).
  Rng rng(12);
  const LimitState state(eps_family(1), Exhaustion::balls(2));
  const LocalObservable a = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
  const LocalObservable b = obs_at(rng, {Site{0, 0}}, 2);
  const AlphaLimit al = alpha_limit(state.family(), b);
  REQUIRE(al.independent);
  double last = 1.0;
  for (int t : kDefaultScanTs) {
    CHECK(mixing_gap(state, a, b, t, EmbeddingStrategy::translate()) <= 1e-12);
    const double g = alpha_mixing_gap(state, a, b, t, al);
    CHECK(g < last);
    last = g;
  }
  CHECK(last < 1e-9);
}

TEST_CASE("mixing_gap: identities") {
  Rng rng(5);
  const LimitState state(eps_family(), Exhaustion::balls(2));
  const LocalObservable a = obs_at(rng, {Site{0, 0}}, 2);
  const LocalObservable b = obs_at(rng, {Site{0, 0}, Site{0, 1}}, 2);
  const LocalObservable one_b = LocalObservable::identity(b.region, 2);
  const AlphaLimit al = alpha_limit(state.family(), one_b);
  for (int t : {3, 8}) {
    CHECK(mixing_gap(state, LocalObservable::identity(a.region, 2), b, t,
                     EmbeddingStrategy::translate()) <= 1e-12);
    CHECK(mixing_gap(state, a, one_b, t, EmbeddingStrategy::translate()) <= 1e-12);
    CHECK(alpha_mixing_gap(state, a, one_b, t, al) <= 1e-12);
  }
}

TEST_CASE("mixing_gap: epsilon family decays") {
  Rng rng(6);
  const LimitState state(eps_family(), Exhaustion::balls(2));
  const LocalObservable a = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
  const LocalObservable b = obs_at(rng, {Site{0, 0}}, 2);
  const AlphaLimit al = alpha_limit(state.family(), b);
  REQUIRE(al.independent);
  std::vector<double> gaps;
  for (int t : kDefaultScanTs) gaps.push_back(mixing_gap(state, a, b, t, EmbeddingStrategy::translate()));
  for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] < gaps[k - 1]);
  CHECK(gaps.back() < 1e-6);
  CHECK(gaps.back() <= 1e-3 * gaps.front());
  const double alpha40 = alpha_mixing_gap(state, a, b, 40, al);
  const double alpha5 = alpha_mixing_gap(state, a, b, 5, al);
  CHECK(alpha40 < 1e-6);
  CHECK(alpha40 <= 1e-3 * alpha5);
}

TEST_CASE("mixing_gap: agrees with the direct difference of limit values") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const LimitState state(eps_family(), Exhaustion::balls(2));
    const LocalObservable a = obs_at(rng, {Site{0, 0}, Site{0, 1}}, 2);
    const LocalObservable b = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
    for (int t : {0, 1, 3, 6}) {
      for (const auto& s : kBoth) {
        const LocalObservable moved = transport(b, embed(b.region, t, s));
        const double direct = std::abs(state.eval_normalized(a.tensor(moved)) -
                                       state.eval_normalized(a) * state.eval_normalized(moved));
        // Each boundary in the direct path is certified to the tail
        // tolerance only.
        CHECK(std::abs(mixing_gap(state, a, b, t, s) - direct) <= 10 * state.tail_tol());
      }
    }
  }
}

TEST_CASE("mixing_gap: resolved below the rounding level of the values") {
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  Rng rng(13);
  const LimitState state(eps_family(), Exhaustion::balls(2));
  const LocalObservable a = obs_at(rng, {Site{0, 0}}, 2);
  const LocalObservable b{{Site{0, 0}}, {p}};
  double last = 1.0;
  for (int t : {5, 10, 20, 30, 40}) {
    const double g = mixing_gap(state, a, b, t, EmbeddingStrategy::translate());
    CHECK(g > 0.0);
    CHECK(g < last);
    last = g;
  }
  CHECK(last < 1e-20);
}

TEST_CASE("alpha_mixing_gap: precondition") {
  const FiberFamily fam = FiberFamily::homogeneous(Lattice::zd(2), orthonormal_vectors(2, 2));
  const LimitState state(fam, Exhaustion::balls(2));
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const LocalObservable b{{Site{0, 0}}, {p}};
  const AlphaLimit al = alpha_limit(fam, b);
  CHECK_THROWS_AS(alpha_mixing_gap(state, b, b, 5, al), PreconditionError);
}

TEST_CASE("mixing_gap: overlapping regions") {
  Rng rng(7);
  const LimitState state(eps_family(), Exhaustion::balls(2));
  const LocalObservable b = obs_at(rng, {Site{0, 0}}, 2);
  const LocalObservable a = obs_at(rng, {Site{4, 0}}, 2);
  CHECK_THROWS_AS(mixing_gap(state, a, b, 3, EmbeddingStrategy::translate()), GeometryError);
}

TEST_CASE("mixing_gap: graphs are rejected") {
  const FiberFamily fam = FiberFamily::homogeneous(Lattice::graph({Site{0}, Site{1}}),
                                                   orthonormal_vectors(2, 2));
  CHECK_THROWS_AS(alpha_limit(fam, LocalObservable::identity({Site{0}}, 2)), ValidationError);
}

TEST_CASE("mixing gaps obey the triangle inequality") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const LimitState state(eps_family(), Exhaustion::balls(2));
    const LocalObservable a = obs_at(rng, {Site{0, 0}}, 2);
    const LocalObservable b = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
    const AlphaLimit al = alpha_limit(state.family(), b);
    for (int t : {2, 5, 10}) {
      for (const auto& s : kBoth) {
        const double m = mixing_gap(state, a, b, t, s);
        const double g = alpha_mixing_gap(state, a, b, t, al, s);
        const LocalObservable moved = transport(b, embed(b.region, t, s));
        const double bound = std::abs(state.eval_normalized(a)) *
                             std::abs(state.eval_normalized(moved) - al.alpha);
        CHECK(std::abs(m - g) <= bound + 1e-13);
      }
    }
  }
}

TEST_CASE("mixing gaps do not depend on the embedding at large t") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const LimitState state(eps_family(), Exhaustion::balls(2));
    const LocalObservable a = obs_at(rng, {Site{0, 0}, Site{0, 1}}, 2);
    const LocalObservable b = obs_at(rng, {Site{0, 0}, Site{1, 0}}, 2);
    const AlphaLimit al = alpha_limit(state.family(), b);
    const double m0 = mixing_gap(state, a, b, 40, EmbeddingStrategy::translate());
    const double g0 = alpha_mixing_gap(state, a, b, 40, al);
    for (std::uint64_t s = 1; s <= 3; ++s) {
      CHECK(std::abs(mixing_gap(state, a, b, 40, EmbeddingStrategy::random(s)) - m0) <= 1e-8);
      CHECK(std::abs(alpha_mixing_gap(state, a, b, 40, al, EmbeddingStrategy::random(s)) - g0) <=
            1e-8);
    }
  }
}

TEST_CASE("boundary factors converge as the embedded region moves out") {
  const LimitState state(eps_family(), Exhaustion::balls(2));
  const Region lam = {Site{0, 0}, Site{1, 0}};
  const Region lam2 = {Site{0, 0}, Site{0, 1}};
  for (const auto& s : kBoth) {
    const Embedding e = embed(lam2, 40, s);
    Region joint = lam;
    joint.insert(joint.end(), e.image.begin(), e.image.end());
    CHECK(max_entry(state.boundary(joint).values - state.boundary(lam).values) <= 1e-8);
    CHECK(max_entry(state.boundary(e.image).values - state.full_boundary().values) <= 1e-8);
  }
}

TEST_CASE("mixing_scan: product state") {
  Rng rng(8);
  const LimitState state(unit_vector_family(rng), Exhaustion::balls(2));
  const MixingScan scan = mixing_scan(state, obs_at(rng, {Site{0, 0}}, 2),
                                      obs_at(rng, {Site{0, 0}}, 2), kDefaultScanTs, kBoth);
  CHECK(scan.rows.size() == 8);
  for (const ScanRow& r : scan.rows) {
    CHECK(r.mixing_gap <= 1e-12);
    CHECK(r.alpha_mixing_gap <= 1e-12);
  }
}

TEST_CASE("mixing_scan: epsilon family and orthonormal witness") {
  Rng rng(9);
  const LocalObservable a = obs_at(rng, {Site{0, 0}}, 2);
  const LocalObservable b = obs_at(rng, {Site{0, 0}}, 2);
  const LimitState eps(eps_family(), Exhaustion::balls(2));
  const MixingScan s = mixing_scan(eps, a, b, kDefaultScanTs, kBoth, kDefaultAlphaTs,
                                   kDefaultAlphaTol, 3);
  REQUIRE(s.rows.size() == 8);
  CHECK(s.rows[0].t == 5);
  CHECK(s.rows[1].strategy == "random:11");
  CHECK(s.rows[6].mixing_gap <= 1e-3 * s.rows[0].mixing_gap);
  CHECK(s.decreasing_fraction[0].second == 1.0);

  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const LocalObservable proj{{Site{0, 0}}, {p}};
  const LimitState ortho(FiberFamily::homogeneous(Lattice::zd(2), orthonormal_vectors(2, 2)),
                         Exhaustion::balls(2));
  const MixingScan o = mixing_scan(ortho, proj, proj, kDefaultScanTs, kBoth);
  CHECK_FALSE(o.alpha.independent);
  for (const ScanRow& r : o.rows) {
    CHECK(r.mixing_gap == Catch::Approx(0.25).epsilon(1e-12));
    CHECK(std::isnan(r.alpha_mixing_gap));
  }
}

TEST_CASE("mixing_scan: thread count does not change the table") {
  Rng rng(10);
  const LocalObservable a = obs_at(rng, {Site{0, 0}}, 2);
  const LocalObservable b = obs_at(rng, {Site{1, 0}}, 2);
  const LimitState eps(eps_family(), Exhaustion::balls(2));
  std::ostringstream one, four;
  write_scan_csv(one, mixing_scan(eps, a, b, kDefaultScanTs, kBoth));
  write_scan_csv(four, mixing_scan(eps, a, b, kDefaultScanTs, kBoth, kDefaultAlphaTs,
                                   kDefaultAlphaTol, 4));
  CHECK(one.str() == four.str());
}

TEST_CASE("write_scan_csv: format") {
  MixingScan scan;
  scan.rows.push_back({5, "translate", 0.1, std::nan("")});
  scan.rows.push_back({10, "random:3", 1.0 / 3.0, 2e-20});
  std::ostringstream out;
  write_scan_csv(out, scan);
  CHECK(out.str() ==
        "t,strategy,mixing_gap,alpha_mixing_gap\n"
        "5,translate,0.10000000000000001,nan\n"
        "10,random:3,0.33333333333333331,1.9999999999999999e-20\n");
}
