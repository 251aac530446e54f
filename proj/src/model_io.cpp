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

#include "schurstate/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "schurstate/algebra.hpp"
#include "schurstate/errors.hpp"
#include "schurstate/limit.hpp"

namespace schurstate {

using nlohmann::json;

namespace {

// Collects every violation instead of stopping at the first one.
struct Problems {
  std::vector<std::string> items;

  void add(const std::string& where, const std::string& what) {
    items.push_back(where + ": " + what);
  }
  void raise(const std::string& what) const {
    if (items.empty()) return;
    std::string msg = what + " is invalid:";
    for (const auto& s : items) msg += "\n  " + s;
    throw ValidationError(msg);
  }
};

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offsets are 1-based and point just past the offending character.
    std::size_t line = 1;
    std::size_t column = 0;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 0;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << what << ": parse error at line " << line << ", column "
       << std::max<std::size_t>(column, 1) << ": " << e.what();
    throw ValidationError(os.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::optional<Complex> get_complex(const json& j, const std::string& where,
                                   Problems& p) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  p.add(where, "expected a number or [re, im]");
  return std::nullopt;
}

std::optional<CVector> get_vector(const json& j, int n, const std::string& where,
                                  Problems& p) {
  if (!j.is_array()) {
    p.add(where, "expected a list of complex numbers");
    return std::nullopt;
  }
  if (static_cast<int>(j.size()) != n) {
    p.add(where, "expected length " + std::to_string(n) + ", got " +
                     std::to_string(j.size()));
    return std::nullopt;
  }
  CVector v(n);
  bool ok = true;
  for (int k = 0; k < n; ++k) {
    auto z = get_complex(j[k], where + "[" + std::to_string(k) + "]", p);
    if (z) v(k) = *z; else ok = false;
  }
  if (!ok) return std::nullopt;
  return v;
}

std::optional<CMatrix> get_matrix(const json& j, int n, const std::string& where,
                                  Problems& p) {
  if (j.is_string() && j.get<std::string>() == "identity") {
    return CMatrix::Identity(n, n);
  }
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    p.add(where, "expected \"identity\" or " + std::to_string(n) + " rows");
    return std::nullopt;
  }
  CMatrix m(n, n);
  bool ok = true;
  for (int r = 0; r < n; ++r) {
    auto row = get_vector(j[r], n, where + "[" + std::to_string(r) + "]", p);
    if (row) m.row(r) = row->transpose(); else ok = false;
  }
  if (!ok) return std::nullopt;
  return m;
}

// d_I vectors of length d as the columns of a d x d_I matrix; zero
// vectors are reported with their index.
std::optional<CMatrix> get_vector_list(const json& j, int d, int d_i,
                                       const std::string& where, Problems& p) {
  if (!j.is_array()) {
    p.add(where, "expected a list of " + std::to_string(d_i) + " vectors");
    return std::nullopt;
  }
  bool ok = true;
  if (static_cast<int>(j.size()) != d_i) {
    p.add(where, "expected a list of " + std::to_string(d_i) + " vectors, got " +
                     std::to_string(j.size()));
    ok = false;
  }
  // Keep going so that every malformed entry is reported.
  const int n = static_cast<int>(j.size());
  CMatrix m(d, std::max(n, d_i));
  for (int i = 0; i < n; ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    auto v = get_vector(j[i], d, at, p);
    if (!v) {
      ok = false;
      continue;
    }
    if (!v->allFinite() || v->norm() <= 1e-14) {
      p.add(at, "fiber vector h_{x," + std::to_string(i + 1) + "} is zero or not finite");
      ok = false;
    }
    m.col(i) = *v;
  }
  if (!ok) return std::nullopt;
  return m.leftCols(d_i).eval();
}

std::optional<Site> get_site(const json& j, int nu, const std::string& where,
                             Problems& p) {
  if (!j.is_array() || j.empty()) {
    p.add(where, "expected a site as a list of integers");
    return std::nullopt;
  }
  std::vector<int> c;
  for (const auto& e : j) {
    if (!e.is_number_integer()) {
      p.add(where, "site coordinates must be integers");
      return std::nullopt;
    }
    c.push_back(e.get<int>());
  }
  if (nu > 0 && static_cast<int>(c.size()) != nu) {
    p.add(where, "site must have " + std::to_string(nu) + " coordinates");
    return std::nullopt;
  }
  return Site(std::move(c));
}

std::optional<int> get_int(const json& obj, const char* key,
                           const std::string& where, Problems& p, int min) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    p.add(where + "." + key, "expected an integer");
    return std::nullopt;
  }
  const int v = obj[key].get<int>();
  if (v < min) {
    p.add(where + "." + key, "must be >= " + std::to_string(min));
    return std::nullopt;
  }
  return v;
}

std::optional<Lattice> get_lattice(const json& j, Problems& p) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    p.add("lattice", "expected {\"type\": \"zd\" | \"graph\", ...}");
    return std::nullopt;
  }
  const std::string type = j["type"];
  if (type == "zd") {
    auto nu = get_int(j, "nu", "lattice", p, 1);
    if (!nu) return std::nullopt;
    return Lattice::zd(*nu);
  }
  if (type == "graph") {
    if (!j.contains("sites") || !j["sites"].is_array() || j["sites"].empty()) {
      p.add("lattice.sites", "expected a non-empty list of sites");
      return std::nullopt;
    }
    Region sites;
    std::set<Site> seen;
    bool ok = true;
    for (std::size_t k = 0; k < j["sites"].size(); ++k) {
      const std::string at = "lattice.sites[" + std::to_string(k) + "]";
      auto s = get_site(j["sites"][k], 0, at, p);
      if (!s) {
        ok = false;
      } else if (!seen.insert(*s).second) {
        p.add(at, "duplicate site " + to_string(*s));
        ok = false;
      } else {
        sites.push_back(*s);
      }
    }
    if (!ok) return std::nullopt;
    return Lattice::graph(std::move(sites));
  }
  p.add("lattice.type", "unknown lattice type \"" + type + "\"");
  return std::nullopt;
}

struct Built {
  std::optional<FiberFamily> family;
  std::optional<HomogeneousModel> homogeneous;
  std::optional<double> summability;
};

void build_explicit(const json& v, const Lattice& lattice, int d, int d_i,
                    Problems& p, Built& out) {
  std::map<Site, CMatrix> per_site;
  std::set<Site> mentioned;
  if (!v.contains("sites") || !v["sites"].is_array()) {
    p.add("vectors.sites", "expected a list of {\"site\", \"vectors\"} entries");
    return;
  }
  bool ok = true;
  for (std::size_t k = 0; k < v["sites"].size(); ++k) {
    const json& e = v["sites"][k];
    const std::string at = "vectors.sites[" + std::to_string(k) + "]";
    if (!e.is_object() || !e.contains("site") || !e.contains("vectors")) {
      p.add(at, "expected {\"site\", \"vectors\"}");
      ok = false;
      continue;
    }
    auto s = get_site(e["site"], lattice.nu(), at + ".site", p);
    if (!s) {
      ok = false;
      continue;
    }
    const std::string named = at + " (site " + to_string(*s) + ")";
    if (!lattice.contains(*s)) {
      p.add(named, "not a vertex of the lattice");
      ok = false;
    }
    if (!mentioned.insert(*s).second) {
      p.add(named, "declared twice");
      ok = false;
    }
    auto m = get_vector_list(e["vectors"], d, d_i, named + ".vectors", p);
    if (m) per_site[*s] = *m; else ok = false;
  }
  std::optional<CMatrix> far;
  if (v.contains("far")) {
    far = get_vector_list(v["far"], d, d_i, "vectors.far", p);
    if (!far) ok = false;
  } else if (lattice.is_zd()) {
    p.add("vectors.far", "required on Z^nu: vectors for undeclared sites");
    ok = false;
  } else {
    for (const Site& s : lattice.sites()) {
      if (!mentioned.count(s)) {
        p.add("vectors.sites", "site " + to_string(s) + " has no vectors");
        ok = false;
      }
    }
  }
  if (ok) out.family = FiberFamily::from_sites(lattice, d, d_i, per_site, far);
}

void build_homogeneous(const json& v, const Lattice& lattice, int d, int d_i,
                       Problems& p, Built& out) {
  if (!v.contains("vectors")) {
    p.add("vectors.vectors", "missing");
    return;
  }
  auto m = get_vector_list(v["vectors"], d, d_i, "vectors.vectors", p);
  if (!m) return;
  out.homogeneous = HomogeneousModel{*m};
  out.family = out.homogeneous->family(lattice);
}

void build_generators(const json& v, const Lattice& lattice, int d, int d_i,
                      Problems& p, Built& out) {
  if (d != d_i) {
    p.add("index_size", "generator models need index_size = fiber_dim");
    return;
  }
  GeneratorSpec spec;
  spec.lattice = lattice;
  spec.dim = d;
  if (lattice.is_zd()) {
    const json tail = v.value("tail", json());
    if (!tail.is_object()) {
      p.add("vectors.tail", "expected {\"beyond_radius\": r, \"D_H\": \"zero\"}");
      return;
    }
    if (tail.value("D_H", json("zero")) != json("zero")) {
      p.add("vectors.tail.D_H", "the only tail rule is \"zero\"");
    }
    auto r = get_int(tail, "beyond_radius", "vectors.tail", p, 0);
    if (!r) return;
    spec.beyond_radius = *r;
  }
  if (!v.contains("sites") || !v["sites"].is_array()) {
    p.add("vectors.sites", "expected a list of generator entries");
    return;
  }
  bool ok = true;
  for (std::size_t k = 0; k < v["sites"].size(); ++k) {
    const json& e = v["sites"][k];
    const std::string at = "vectors.sites[" + std::to_string(k) + "]";
    if (!e.is_object() || !e.contains("site") || !e.contains("D_H")) {
      p.add(at, "expected {\"site\", \"D_H\", \"U\", \"W\"}");
      ok = false;
      continue;
    }
    GeneratorSite g;
    auto s = get_site(e["site"], lattice.nu(), at + ".site", p);
    if (!s) {
      ok = false;
      continue;
    }
    g.site = *s;
    const std::string named = at + " (site " + to_string(*s) + ")";
    const json& dh = e["D_H"];
    bool site_ok = true;
    if (!dh.is_array() || static_cast<int>(dh.size()) != d) {
      p.add(named + ".D_H", "expected " + std::to_string(d) + " real numbers");
      site_ok = false;
    } else {
      g.d_h.resize(d);
      for (int m = 0; m < d; ++m) {
        if (!dh[m].is_number()) {
          p.add(named + ".D_H", "entries must be real numbers");
          site_ok = false;
          break;
        }
        g.d_h(m) = dh[m].get<double>();
      }
    }
    auto u = get_matrix(e.value("U", json("identity")), d, named + ".U", p);
    auto w = get_matrix(e.value("W", json("identity")), d, named + ".W", p);
    if (!u || !w || !site_ok) {
      // Malformed entries are left out; the rest is still checked below.
      ok = false;
      continue;
    }
    g.u = *u;
    g.w = *w;
    spec.sites.push_back(std::move(g));
  }
  try {
    GeneratedFamily gen = build_from_generators(spec);
    if (!ok) return;
    out.summability = gen.summability;
    out.family = std::move(gen.family);
  } catch (const ValidationError& e) {
    std::istringstream lines(e.what());
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) p.add("vectors", line);
    }
  }
}

void build_perturbed(const json& v, const Lattice& lattice, int d, int d_i,
                     Problems& p, Built& out) {
  if (!lattice.is_zd()) {
    p.add("lattice", "perturbed models live on Z^nu");
    return;
  }
  if (!v.contains("base") || !v.contains("directions") || !v.contains("decay")) {
    p.add("vectors", "perturbed mode needs base, directions and decay");
    return;
  }
  auto base = get_vector(v["base"], d, "vectors.base", p);
  std::optional<CMatrix> dirs;
  if (!v["directions"].is_array() ||
      static_cast<int>(v["directions"].size()) != d_i) {
    p.add("vectors.directions", "expected " + std::to_string(d_i) + " vectors");
  } else {
    CMatrix m(d, d_i);
    bool ok = true;
    for (int i = 0; i < d_i; ++i) {
      auto col = get_vector(v["directions"][i], d,
                            "vectors.directions[" + std::to_string(i) + "]", p);
      if (col) m.col(i) = *col; else ok = false;
    }
    if (ok) dirs = m;
  }
  if (!v["decay"].is_number()) {
    p.add("vectors.decay", "expected a number in (0,1)");
    return;
  }
  if (!base || !dirs) return;
  try {
    out.family = FiberFamily::perturbed(lattice.nu(), *base, *dirs,
                                        v["decay"].get<double>());
  } catch (const Error& e) {
    p.add("vectors", e.what());
  }
}

}  // namespace

ModelSpec parse_model(const std::string& text) {
  const json j = parse_text(text, "model");
  Problems p;
  if (!j.is_object()) {
    p.add("model", "expected a JSON object");
    p.raise("model");
  }
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> known = {
        "lattice", "fiber_dim", "index_size", "normalized", "vectors"};
    if (!known.count(key)) p.add(key, "unknown field");
  }
  auto lattice = get_lattice(j.value("lattice", json()), p);
  auto d = get_int(j, "fiber_dim", "model", p, 1);
  auto d_i = get_int(j, "index_size", "model", p, 1);
  bool normalized = false;
  if (j.contains("normalized")) {
    if (j["normalized"].is_boolean()) normalized = j["normalized"];
    else p.add("normalized", "expected true or false");
  }
  std::string mode;
  const json v = j.value("vectors", json());
  if (!v.is_object() || !v.contains("mode") || !v["mode"].is_string()) {
    p.add("vectors.mode", "expected one of explicit, homogeneous, generators, perturbed");
  } else {
    mode = v["mode"];
  }
  Built built;
  if (lattice && d && d_i && !mode.empty()) {
    if (mode == "explicit") build_explicit(v, *lattice, *d, *d_i, p, built);
    else if (mode == "homogeneous") build_homogeneous(v, *lattice, *d, *d_i, p, built);
    else if (mode == "generators") build_generators(v, *lattice, *d, *d_i, p, built);
    else if (mode == "perturbed") build_perturbed(v, *lattice, *d, *d_i, p, built);
    else p.add("vectors.mode", "unknown mode \"" + mode + "\"");
  }
  p.raise("model");

  ModelSpec spec{mode, *d, *d_i, normalized, std::move(*built.family),
                 std::move(built.homogeneous), built.summability};
  if (normalized) {
    const LimitState state(spec.family, Exhaustion::canonical(spec.family.lattice()));
    const Complex z = state.normalization();
    if (std::abs(z - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "model is invalid:\n  normalized: sum of boundary entries is "
         << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag())
         << "i, not 1";
      throw ValidationError(os.str());
    }
  }
  return spec;
}

ModelSpec load_model(const std::string& path) { return parse_model(read_file(path)); }

LocalObservable parse_observable(const std::string& text, int fiber_dim) {
  const json j = parse_text(text, "observable");
  Problems p;
  LocalObservable obs;
  if (!j.is_object() || !j.contains("region") || !j.contains("factors") ||
      !j["region"].is_array() || !j["factors"].is_array()) {
    p.add("observable", "expected {\"region\": [...], \"factors\": [...]}");
    p.raise("observable");
  }
  if (j["region"].size() != j["factors"].size()) {
    p.add("observable", "region and factors differ in length");
  }
  std::set<Site> seen;
  for (std::size_t k = 0; k < j["region"].size(); ++k) {
    const std::string at = "region[" + std::to_string(k) + "]";
    auto s = get_site(j["region"][k], 0, at, p);
    if (s && !seen.insert(*s).second) p.add(at, "duplicate site " + to_string(*s));
    if (s) obs.region.push_back(*s);
  }
  for (std::size_t k = 0; k < j["factors"].size(); ++k) {
    auto m = get_matrix(j["factors"][k], fiber_dim,
                        "factors[" + std::to_string(k) + "]", p);
    if (m) obs.factors.push_back(*m);
  }
  p.raise("observable");
  return obs;
}

LocalObservable load_observable(const std::string& path, int fiber_dim) {
  return parse_observable(read_file(path), fiber_dim);
}

Region parse_region(const std::string& text) {
  Region out;
  if (text.empty()) return out;
  std::stringstream sites(text);
  std::string item;
  while (std::getline(sites, item, ';')) {
    std::vector<int> c;
    std::stringstream coords(item);
    std::string num;
    while (std::getline(coords, num, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stoi(num, &used));
        if (num.find_first_not_of(" \t", used) != std::string::npos) {
          throw std::invalid_argument(num);
        }
      } catch (const std::logic_error&) {
        throw ValidationError("region: bad coordinate \"" + num + "\" in \"" +
                              text + "\"");
      }
    }
    if (c.empty()) throw ValidationError("region: empty site in \"" + text + "\"");
    out.push_back(Site(std::move(c)));
  }
  require_distinct(out, "region");
  return out;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Site& s) { return json(s.coords); }

json to_json(const Region& r) {
  json out = json::array();
  for (const Site& s : r) out.push_back(to_json(s));
  return out;
}

}  // namespace schurstate
