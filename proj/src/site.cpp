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

#include "schurstate/site.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "schurstate/errors.hpp"

namespace schurstate {

int norm1(const Site& s) {
  int n = 0;
  for (int c : s.coords) n += std::abs(c);
  return n;
}

namespace {

void sphere_rec(int nu, int k, int remaining, std::vector<int>& prefix,
                std::vector<Site>& out) {
  if (k == nu - 1) {
    // Last coordinate absorbs what is left of the norm.
    if (remaining == 0) {
      prefix[k] = 0;
      out.emplace_back(prefix);
    } else {
      prefix[k] = -remaining;
      out.emplace_back(prefix);
      prefix[k] = remaining;
      out.emplace_back(prefix);
    }
    return;
  }
  for (int c = -remaining; c <= remaining; ++c) {
    prefix[k] = c;
    sphere_rec(nu, k + 1, remaining - std::abs(c), prefix, out);
  }
}

}  // namespace

std::vector<Site> sphere(int nu, int r) {
  if (nu < 1) throw DimensionError("sphere: lattice dimension must be >= 1");
  if (r < 0) return {};
  std::vector<Site> out;
  std::vector<int> prefix(static_cast<std::size_t>(nu), 0);
  sphere_rec(nu, 0, r, prefix, out);
  return out;
}

std::string to_string(const Site& s) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < s.coords.size(); ++k) {
    if (k) os << ",";
    os << s.coords[k];
  }
  os << ")";
  return os.str();
}

std::string to_string(const Region& r) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k) os << ";";
    os << to_string(r[k]);
  }
  os << "}";
  return os.str();
}

bool contains(const Region& region, const Site& s) {
  return std::find(region.begin(), region.end(), s) != region.end();
}

void require_distinct(const Region& region, const char* what) {
  std::set<Site> seen;
  for (const Site& s : region) {
    if (!seen.insert(s).second) {
      throw ValidationError(std::string(what) + ": site " + to_string(s) +
                            " appears more than once");
    }
  }
}

Region difference(const Region& outer, const Region& inner) {
  std::set<Site> drop(inner.begin(), inner.end());
  Region out;
  for (const Site& s : outer) {
    if (!drop.count(s)) out.push_back(s);
  }
  return out;
}

void require_subset(const Region& inner, const Region& outer,
                    const char* what) {
  std::set<Site> big(outer.begin(), outer.end());
  for (const Site& s : inner) {
    if (!big.count(s)) {
      throw GeometryError(std::string(what) + ": site " + to_string(s) +
                          " is not contained in " + to_string(outer));
    }
  }
}

std::size_t SiteHash::operator()(const Site& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int c : s.coords) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace schurstate
