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

#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <string>

#include "commands.hpp"
#include "schurstate/algebra.hpp"
#include "schurstate/homogeneous.hpp"
#include "schurstate/kernel.hpp"
#include "schurstate/limit.hpp"
#include "schurstate/mixing.hpp"
#include "schurstate/random.hpp"
#include "schurstate/state.hpp"

namespace schurstate::cli {

using nlohmann::json;

namespace {

constexpr double kNoValue = -std::numeric_limits<double>::infinity();

// One named check: the worst value seen and whether it stayed in bounds.
struct Check {
  std::string name;
  double worst = 0.0;
  double limit = 0.0;
  bool pass() const { return worst <= limit; }
};

json section(const std::string& name, const std::vector<Check>& checks) {
  json list = json::array();
  bool pass = true;
  for (const Check& c : checks) {
    list.push_back({{"name", c.name}, {"worst", c.worst}, {"limit", c.limit},
                    {"pass", c.pass()}});
    pass = pass && c.pass();
  }
  return {{"name", name}, {"checks", list}, {"pass", pass}};
}

FiberFamily random_chain(Rng& rng, int d, int d_i, int declared) {
  std::map<Site, CMatrix> per_site;
  for (int x = 0; x < declared; ++x) {
    per_site[Site{x}] = random_complex_matrix(rng, d, d_i);
  }
  return FiberFamily::from_sites(Lattice::zd(1), d, d_i, per_site,
                                 random_complex_matrix(rng, d, d_i));
}

double neg_ratio(const PsdReport& r) {
  return -r.min_eigenvalue / std::max(1.0, std::abs(r.max_eigenvalue));
}

json algebra_section(Rng rng) {
  Check schur{"hadamard of PSD matrices is PSD", kNoValue, 1e-10};
  Check roundtrip{"exp(log T) = T", 0.0, 1e-10};
  for (int k = 0; k < 20; ++k) {
    const CMatrix a = random_positive_definite(rng, 3);
    const CMatrix b = random_positive_definite(rng, 3);
    schur.worst = std::max(schur.worst, neg_ratio(is_psd(hadamard(a, b))));
    roundtrip.worst = std::max(
        roundtrip.worst, relative_difference(hermitian_exp(hermitian_log(a)), a));
  }
  return section("algebra", {schur, roundtrip});
}

json kernel_section(Rng rng) {
  Check cp{"Choi matrix PSD", kNoValue, 1e-10};
  Check prop_s{"Property-S matrix PSD", kNoValue, 1e-10};
  Check tensor{"tensor Choi matrix PSD", kNoValue, 1e-10};
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + static_cast<int>(rng.index(2));
    const int d_i = 2 + static_cast<int>(rng.index(2));
    const FiberFamily fam = random_chain(rng, d, d_i, 2);
    const CpCertificate c = certify_cp(fam, Site{0});
    cp.worst = std::max(cp.worst, -c.min_eigenvalue / std::max(1.0, c.max_eigenvalue));
    std::vector<CMatrix> bs;
    for (int h = 0; h < 4; ++h) bs.push_back(random_complex_matrix(rng, d, d));
    prop_s.worst = std::max(prop_s.worst,
                            neg_ratio(is_psd(property_s_matrix(fam, Site{1}, bs))));
    const std::vector<Site> pair = {Site{0}, Site{1}};
    const CpCertificate t = certify_cp(fam, std::span<const Site>(pair));
    tensor.worst =
        std::max(tensor.worst, -t.min_eigenvalue / std::max(1.0, t.max_eigenvalue));
  }
  return section("kernel", {cp, prop_s, tensor});
}

json state_section(Rng rng) {
  Check schur{"Schur evaluation matches dense contraction", 0.0, 1e-10};
  Check extended{"extended evaluation matches dense contraction", 0.0, 1e-10};
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + static_cast<int>(rng.index(2));
    const int d_i = 2 + static_cast<int>(rng.index(2));
    const FiberFamily fam = random_chain(rng, d, d_i, 4);
    const Region inner = {Site{0}, Site{2}};
    const Region outer = {Site{0}, Site{1}, Site{2}, Site{3}};
    LocalObservable obs{inner, {random_complex_matrix(rng, d, d),
                                random_complex_matrix(rng, d, d)}};
    schur.worst = std::max(schur.worst,
                           relative_difference(eval_schur(fam, obs),
                                               eval_dense(fam, inner, obs)));
    extended.worst = std::max(
        extended.worst, relative_difference(eval_extended(fam, outer, obs),
                                            eval_dense(fam, outer, obs)));
  }
  return section("state", {schur, extended});
}

json limit_section(Rng rng) {
  const int d = 2;
  GeneratorSpec spec;
  spec.lattice = Lattice::zd(1);
  spec.dim = d;
  spec.beyond_radius = 60;
  for (int x = 0; x <= 60; ++x) {
    const double share = rng.uniform(0.2, 0.8);
    const double tr = std::ldexp(1.0, -x);
    RVector dh(d);
    dh << share * tr, -(1.0 - share) * tr;
    spec.sites.push_back({Site{x}, dh, random_unitary(rng, d), random_unitary(rng, d)});
  }
  const FiberFamily fam = build_from_generators(spec).family;
  const Exhaustion ex = Exhaustion::balls(1);

  Check tail{"boundary tail bound", 0.0, 1e-12};
  Check proj{"projectivity gap", 0.0, 1e-9};
  Check root{"right square root reproduces T", 0.0, 1e-10};
  Check log_bound{"|H_ij| - Tr|D_H|", kNoValue, 1e-12};
  tail.worst = boundary_matrix(fam, {Site{0}}, ex).tail_bound;
  for (int k = 0; k < 5; ++k) {
    const LocalObservable obs{{Site{0}}, {random_complex_matrix(rng, d, d)}};
    const Region outer = {Site{0}, Site{1}, Site{-1}};
    const ProjectivityReport r = check_projectivity(fam, outer, obs, ex);
    proj.worst = std::max(proj.worst, r.gap / r.scale);
  }
  for (int k = 0; k < 10; ++k) {
    const CMatrix t = random_positive_definite(rng, 3);
    const RightSqrt r = right_sqrt(t, random_unitary(rng, 3));
    root.worst = std::max(root.worst, relative_difference(CMatrix(r.h * r.h.adjoint()), t));
    log_bound.worst = std::max(log_bound.worst, max_abs(r.log) - r.trace_abs_log);
  }
  return section("limit", {tail, proj, root, log_bound});
}

json homogeneous_section(Rng rng) {
  Check conv{"finite volumes reach the generic limit", 0.0, 1e-9};
  Check unit{"normalized value at the identity", 0.0, 1e-12};
  for (int k = 0; k < 5; ++k) {
    const HomogeneousModel model{random_complex_matrix(rng, 3, 3)};
    const OverlapMatrix beta = overlaps(model);
    const LocalObservable obs{{Site{0}, Site{1}},
                              {random_hermitian(rng, 3), random_hermitian(rng, 3)}};
    const double rho = generic_decay_rate(beta);
    const double n = std::min(1e5, std::ceil(std::log(1e-13) / std::log(rho)));
    const Complex limit = generic_limit(model, obs);
    const Complex finite = finite_normalized(model, static_cast<std::size_t>(n), obs);
    conv.worst = std::max(conv.worst,
                          std::abs(finite - limit) / std::max(1.0, std::abs(limit)));
    const LocalObservable id = LocalObservable::identity(obs.region, 3);
    unit.worst = std::max(unit.worst, std::abs(finite_normalized(model, 7, id) - 1.0));
  }
  return section("homogeneous", {conv, unit});
}

json mixing_section(Rng rng) {
  CVector base(2);
  base << 1.0, 0.0;
  CMatrix dirs = random_complex_matrix(rng, 2, 2);
  dirs /= 2.0 * dirs.colwise().norm().maxCoeff();
  const FiberFamily fam = FiberFamily::perturbed(2, base, dirs, 0.5);
  const LimitState state(fam, Exhaustion::balls(2));
  const LocalObservable a{{Site{0, 0}}, {random_hermitian(rng, 2)}};
  const LocalObservable b{{Site{0, 0}}, {random_hermitian(rng, 2)}};
  const auto translate = EmbeddingStrategy::translate();
  const double near = mixing_gap(state, a, b, 5, translate);
  const double far = mixing_gap(state, a, b, 20, translate);
  const AlphaLimit alpha = alpha_limit(fam, b);
  Check decay{"mixing gap ratio t=20 over t=5", far / near, 1e-2};
  Check indep{"alpha limit spread", alpha.spread, 1e-8};
  Check alpha_gap{"alpha mixing gap at t=20",
                  alpha_mixing_gap(state, a, b, 20, alpha), 1e-4};
  return section("mixing", {decay, indep, alpha_gap});
}

}  // namespace

json run_selftest(std::uint64_t seed, int threads) {
  using Section = std::function<json(Rng)>;
  const std::vector<Section> sections = {algebra_section, kernel_section,
                                         state_section,   limit_section,
                                         homogeneous_section, mixing_section};
  const std::vector<std::string> names = {"algebra", "kernel", "state",
                                          "limit", "homogeneous", "mixing"};
  // Streams are split off in a fixed order before anything runs.
  Rng root(seed);
  std::vector<Rng> streams;
  for (std::size_t k = 0; k < sections.size(); ++k) streams.push_back(root.split(k));

  std::vector<json> results(sections.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < sections.size(); start += width) {
    std::vector<std::future<json>> batch;
    const std::size_t stop = std::min(sections.size(), start + width);
    for (std::size_t k = start; k < stop; ++k) {
      batch.push_back(std::async(
          width == 1 ? std::launch::deferred : std::launch::async,
          [&sections, &names, &streams, k] {
            try {
              return sections[k](streams[k]);
            } catch (const std::exception& e) {
              return json{{"name", names[k]},
                          {"checks", json::array()},
                          {"error", e.what()},
                          {"pass", false}};
            }
          }));
    }
    for (std::size_t k = start; k < stop; ++k) results[k] = batch[k - start].get();
  }

  bool pass = true;
  json list = json::array();
  for (json& r : results) {
    pass = pass && r["pass"].get<bool>();
    list.push_back(std::move(r));
  }
  return {{"command", "selftest"}, {"seed", seed}, {"sections", list}, {"pass", pass}};
}

}  // namespace schurstate::cli
