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

#include <algorithm>

#include "schurstate/errors.hpp"
#include "schurstate/limit.hpp"
#include "schurstate/random.hpp"

namespace schurstate {

Exhaustion Exhaustion::balls(int nu) {
  if (nu < 1) throw ValidationError("exhaustion: nu must be >= 1");
  Exhaustion e;
  e.nu_ = nu;
  return e;
}

Exhaustion Exhaustion::shuffled_balls(int nu, std::uint64_t seed) {
  Exhaustion e = balls(nu);
  e.shuffle_seed_ = seed;
  return e;
}

Exhaustion Exhaustion::enumerated(Region sites) {
  require_distinct(sites, "exhaustion");
  Exhaustion e;
  e.nu_ = 0;
  e.sites_ = std::move(sites);
  return e;
}

Exhaustion Exhaustion::canonical(const Lattice& lattice) {
  if (lattice.is_zd()) return balls(lattice.nu());
  return enumerated(lattice.sites());
}

std::vector<Site> Exhaustion::stage(std::size_t k) const {
  if (finite()) {
    if (k >= sites_.size()) return {};
    return {sites_[k]};
  }
  std::vector<Site> shell = sphere(nu_, static_cast<int>(k));
  if (shuffle_seed_) {
    Rng rng(*shuffle_seed_ ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
    for (std::size_t m = shell.size(); m > 1; --m) {
      std::swap(shell[m - 1], shell[rng.index(m)]);
    }
  }
  return shell;
}

Region Exhaustion::first(std::size_t n) const {
  Region out;
  for (std::size_t k = 0; out.size() < n; ++k) {
    if (finite() && k >= sites_.size()) break;
    for (Site& s : stage(k)) {
      if (out.size() == n) break;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace schurstate
