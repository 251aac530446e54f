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

#include "commands.hpp"

#include <cmath>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"
#include "schurstate/homogeneous.hpp"
#include "schurstate/kernel.hpp"
#include "schurstate/limit.hpp"
#include "schurstate/mixing.hpp"
#include "schurstate/model_io.hpp"
#include "schurstate/random.hpp"
#include "schurstate/state.hpp"

namespace schurstate::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxChoiDim = 4096;

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void require_json(const Options& o, const char* command) {
  if (o.format != "json") {
    throw ValidationError(std::string(command) + ": only --format json is supported");
  }
}

ModelSpec model_of(const Options& o) {
  if (o.model.empty()) throw ValidationError("--model is required");
  return load_model(o.model);
}

// --observable wins; otherwise identities on --region.
LocalObservable observable_of(const Options& o, const ModelSpec& m) {
  LocalObservable obs;
  if (!o.observable.empty()) {
    obs = load_observable(o.observable, m.fiber_dim);
  } else if (o.region) {
    obs = LocalObservable::identity(parse_region(*o.region), m.fiber_dim);
  } else {
    throw ValidationError("give --observable or --region");
  }
  obs.validate(m.fiber_dim);
  return obs;
}

json psd_json(const PsdReport& r) {
  return {{"psd", r.psd},
          {"min_eigenvalue", r.min_eigenvalue},
          {"max_eigenvalue", r.max_eigenvalue}};
}

json cp_json(const CpCertificate& c) {
  return {{"completely_positive", c.completely_positive},
          {"min_eigenvalue", c.min_eigenvalue},
          {"max_eigenvalue", c.max_eigenvalue},
          {"dim", c.choi_dim}};
}

json value_or_null(const std::optional<Complex>& z) {
  return z ? to_json(*z) : json(nullptr);
}

std::vector<EmbeddingStrategy> parse_strategies(const std::string& text,
                                                std::uint64_t seed) {
  std::vector<EmbeddingStrategy> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "translate") {
      out.push_back(EmbeddingStrategy::translate());
    } else if (item == "random") {
      out.push_back(EmbeddingStrategy::random(seed));
    } else if (item.rfind("random:", 0) == 0) {
      try {
        out.push_back(EmbeddingStrategy::random(std::stoull(item.substr(7))));
      } catch (const std::logic_error&) {
        throw ValidationError("--strategies: bad seed in \"" + item + "\"");
      }
    } else {
      throw ValidationError("--strategies: unknown strategy \"" + item + "\"");
    }
  }
  if (out.empty()) throw ValidationError("--strategies: empty list");
  return out;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError(std::string(what) + ": bad integer \"" + item + "\"");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

int check_kernel(const Options& o, std::ostream& out) {
  require_json(o, "check-kernel");
  const ModelSpec m = model_of(o);
  const FiberFamily& fam = m.family;
  const Region sites = o.region ? parse_region(*o.region)
                                : Exhaustion::canonical(fam.lattice()).first(3);
  if (sites.empty()) throw ValidationError("check-kernel: empty region");
  require_distinct(sites, "check-kernel");
  if (o.samples < 1 || o.samples > 4) {
    throw ValidationError("--samples must lie in 1..4");
  }
  const double tol = o.tol.value_or(kDefaultPsdTol);
  const int d = m.fiber_dim;
  Rng rng(o.seed);
  bool pass = true;

  json per_site = json::array();
  for (const Site& x : sites) {
    const CpCertificate cp = certify_cp(fam, x, tol);
    std::vector<CMatrix> bs;
    for (int h = 0; h < o.samples; ++h) bs.push_back(random_complex_matrix(rng, d, d));
    const PsdReport s = is_psd(property_s_matrix(fam, x, bs), tol);
    pass = pass && cp.completely_positive && s.psd;
    json ps = psd_json(s);
    ps["samples"] = o.samples;
    per_site.push_back({{"site", to_json(x)}, {"choi", cp_json(cp)}, {"property_s", ps}});
  }

  json tensor = nullptr;
  if (sites.size() >= 2) {
    double choi_dim = static_cast<double>(m.index_size);
    for (std::size_t k = 0; k < sites.size(); ++k) choi_dim *= d;
    if (choi_dim > static_cast<double>(kMaxChoiDim)) {
      throw ResourceError("check-kernel: tensor Choi matrix would have dimension " +
                          std::to_string(static_cast<long long>(choi_dim)) +
                          " (limit " + std::to_string(kMaxChoiDim) + ")");
    }
    const CpCertificate cp = certify_cp(fam, std::span<const Site>(sites), tol);
    std::vector<std::vector<CMatrix>> bs(o.samples);
    for (auto& row : bs) {
      for (std::size_t k = 0; k < sites.size(); ++k) {
        row.push_back(random_complex_matrix(rng, d, d));
      }
    }
    const PsdReport s = is_psd(tensor_property_s_matrix(fam, sites, bs), tol);
    pass = pass && cp.completely_positive && s.psd;
    json ps = psd_json(s);
    ps["samples"] = o.samples;
    tensor = {{"sites", to_json(sites)}, {"choi", cp_json(cp)}, {"property_s", ps}};
  }

  emit(out, {{"command", "check-kernel"},
             {"seed", o.seed},
             {"tol", tol},
             {"sites", per_site},
             {"tensor", tensor},
             {"pass", pass}});
  return 0;
}

int eval(const Options& o, std::ostream& out) {
  require_json(o, "eval");
  const ModelSpec m = model_of(o);
  const LocalObservable obs = observable_of(o, m);
  const Region outer = o.outer ? parse_region(*o.outer) : obs.region;
  require_subset(obs.region, outer, "eval");
  const double tol = o.tol.value_or(1e-10);

  const Complex schur = eval_extended(m.family, outer, obs);
  std::optional<Complex> dense;
  json skipped = nullptr;
  try {
    dense = eval_dense(m.family, outer, obs);
  } catch (const ResourceError& e) {
    skipped = e.what();
  }
  const Complex z = eval_extended(m.family, outer,
                                  LocalObservable::identity(outer, m.fiber_dim));
  std::optional<Complex> normalized;
  if (std::abs(z) > 1e-14) normalized = schur / z;

  json diff = nullptr;
  bool agree = true;
  if (dense) {
    const double r = relative_difference(schur, *dense);
    diff = r;
    agree = r <= tol;
  }
  emit(out, {{"command", "eval"},
             {"region", to_json(obs.region)},
             {"outer", to_json(outer)},
             {"schur", to_json(schur)},
             {"dense", value_or_null(dense)},
             {"dense_skipped", skipped},
             {"relative_difference", diff},
             {"tol", tol},
             {"agree", agree},
             {"normalization", to_json(z)},
             {"normalized", value_or_null(normalized)}});
  return 0;
}

int limit(const Options& o, std::ostream& out) {
  require_json(o, "limit");
  const ModelSpec m = model_of(o);
  const LocalObservable obs = observable_of(o, m);
  const Exhaustion ex = Exhaustion::canonical(m.family.lattice());
  const LimitState state(m.family, ex, o.tail_tol);
  const BoundaryMatrix b = state.boundary(obs.region);
  const Complex value = limit_state_eval(m.family, obs, b);
  const Complex z = state.normalization();
  std::optional<Complex> normalized;
  if (std::abs(z) > 1e-14) normalized = value / z;

  json report = {{"command", "limit"},
                 {"region", to_json(obs.region)},
                 {"boundary",
                  {{"values", to_json(b.values)},
                   {"tail_bound", b.tail_bound},
                   {"sites_used", b.sites_used}}},
                 {"tail_tol", o.tail_tol},
                 {"value", to_json(value)},
                 {"normalization", to_json(z)},
                 {"normalized", value_or_null(normalized)},
                 {"projectivity", nullptr}};
  bool pass = true;
  if (o.check_projectivity) {
    Region outer;
    if (o.outer) {
      outer = parse_region(*o.outer);
    } else {
      outer = obs.region;
      int added = 0;
      for (const Site& s : ex.first(obs.region.size() + 2)) {
        if (added < 2 && !contains(outer, s)) {
          outer.push_back(s);
          ++added;
        }
      }
    }
    const double tol = o.tol.value_or(1e-9);
    const ProjectivityReport r =
        check_projectivity(m.family, outer, obs, ex, o.tail_tol, tol);
    pass = r.pass;
    report["projectivity"] = {{"outer", to_json(outer)},
                              {"larger", to_json(r.larger)},
                              {"smaller", to_json(r.smaller)},
                              {"gap", r.gap},
                              {"scale", r.scale},
                              {"tol", tol},
                              {"pass", r.pass}};
  }
  emit(out, report);
  if (!pass) {
    throw ConvergenceError("limit: projectivity gap exceeds the tolerance",
                           std::abs(value), 0.0);
  }
  return 0;
}

int homog(const Options& o, std::ostream& out) {
  require_json(o, "homog");
  const ModelSpec m = model_of(o);
  if (!m.homogeneous) {
    throw PreconditionError("homog: the model must use vector mode \"homogeneous\"");
  }
  const HomogeneousModel& hm = *m.homogeneous;
  const LocalObservable obs = observable_of(o, m);
  const OverlapMatrix beta = overlaps(hm);
  const bool generic = check_generic(beta);

  std::optional<Complex> g_limit;
  std::optional<Complex> r_limit;
  json r_reason = nullptr;
  if (generic) g_limit = generic_limit(hm, obs);
  try {
    r_limit = real_beta_limit(hm, obs);
  } catch (const PreconditionError& e) {
    r_reason = e.what();
  }
  const std::optional<Complex> target = g_limit ? g_limit : r_limit;

  json finite = json::array();
  for (int n : parse_int_list(o.sizes, "--sizes")) {
    if (n < static_cast<int>(obs.region.size())) continue;
    std::optional<Complex> v;
    try {
      v = finite_normalized(hm, static_cast<std::size_t>(n), obs);
    } catch (const DomainError&) {
      // Vanishing norm of Psi at this size; reported as null.
    }
    finite.push_back({{"size", n},
                      {"value", value_or_null(v)},
                      {"gap", v && target ? json(std::abs(*v - *target)) : json(nullptr)}});
  }
  json argmax = beta.argmax;
  emit(out, {{"command", "homog"},
             {"region", to_json(obs.region)},
             {"beta", to_json(beta.beta)},
             {"beta_max", beta.beta_max},
             {"argmax", argmax},
             {"generic", generic},
             {"product", detect_product(beta, o.tol.value_or(1e-10))},
             {"decay_rate", generic_decay_rate(beta)},
             {"generic_limit", value_or_null(g_limit)},
             {"real_beta_limit", value_or_null(r_limit)},
             {"real_beta_unavailable", r_reason},
             {"finite", finite}});
  if (!target) {
    throw PreconditionError(
        "homog: neither the generic condition nor real overlaps hold; no "
        "limit formula applies");
  }
  return 0;
}

int mixing_scan(const Options& o, std::ostream& out) {
  if (o.format != "json" && o.format != "csv") {
    throw ValidationError("--format must be json or csv");
  }
  const ModelSpec m = model_of(o);
  if (o.observable.empty() || o.observable_b.empty()) {
    throw ValidationError("mixing-scan needs --observable and --observable-b");
  }
  const LocalObservable a = load_observable(o.observable, m.fiber_dim);
  const LocalObservable b = load_observable(o.observable_b, m.fiber_dim);

  std::vector<int> ts;
  if (o.t_list) {
    ts = parse_int_list(*o.t_list, "--t-list");
  } else if (o.tmax) {
    for (int t = 5; t <= *o.tmax; t *= 2) ts.push_back(t);
    if (ts.empty()) throw ValidationError("--tmax must be at least 5");
  } else {
    ts = kDefaultScanTs;
  }
  for (int t : ts) {
    if (t < 0) throw ValidationError("--t-list: t must be >= 0");
  }
  const auto strategies = parse_strategies(o.strategies, o.seed);
  const LimitState state(m.family, Exhaustion::canonical(m.family.lattice()),
                         o.tail_tol);
  const double tol = o.tol.value_or(kDefaultAlphaTol);
  const MixingScan scan = mixing_scan(state, a, b, ts, strategies,
                                      kDefaultAlphaTs, tol, o.threads);
  if (o.format == "csv") {
    write_scan_csv(out, scan);
    return 0;
  }
  json rows = json::array();
  for (const ScanRow& r : scan.rows) {
    rows.push_back({{"t", r.t},
                    {"strategy", r.strategy},
                    {"mixing_gap", r.mixing_gap},
                    {"alpha_mixing_gap", std::isnan(r.alpha_mixing_gap)
                                             ? json(nullptr)
                                             : json(r.alpha_mixing_gap)}});
  }
  json fractions = json::object();
  for (const auto& [name, f] : scan.decreasing_fraction) fractions[name] = f;
  emit(out, {{"command", "mixing-scan"},
             {"t_list", ts},
             {"alpha",
              {{"independent", scan.alpha.independent},
               {"spread", scan.alpha.spread},
               {"value", scan.alpha.independent ? to_json(scan.alpha.alpha)
                                                : json(nullptr)},
               {"values", to_json(scan.alpha.values)}}},
             {"rows", rows},
             {"decreasing_fraction", fractions}});
  return 0;
}

int selftest(const Options& o, std::ostream& out) {
  require_json(o, "selftest");
  if (o.threads < 1) throw ValidationError("--threads must be >= 1");
  json report = run_selftest(o.seed, o.threads);
  emit(out, report);
  return report["pass"].get<bool>() ? 0 : 1;
}

}  // namespace schurstate::cli
