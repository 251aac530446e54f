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

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace schurstate {

/// A vertex of the underlying graph. On Z^nu the coordinates are the
/// lattice point; on an enumerated graph a site is a single integer label.
struct Site {
  std::vector<int> coords;

  Site() = default;
  Site(std::initializer_list<int> c) : coords(c) {}
  explicit Site(std::vector<int> c) : coords(std::move(c)) {}

  std::size_t dim() const { return coords.size(); }
  int operator[](std::size_t k) const { return coords[k]; }

  friend auto operator<=>(const Site&, const Site&) = default;
  friend bool operator==(const Site&, const Site&) = default;
};

/// An ordered list of pairwise distinct sites.
using Region = std::vector<Site>;

/// 1-norm |z| = |z_1| + ... + |z_nu|.
int norm1(const Site& s);

/// All points of Z^nu with |z| = r, in lexicographic order.
std::vector<Site> sphere(int nu, int r);

/// "(x,y,...)" rendering used in error messages and reports.
std::string to_string(const Site& s);
std::string to_string(const Region& r);

bool contains(const Region& region, const Site& s);

/// Throws ValidationError when a site repeats.
void require_distinct(const Region& region, const char* what);

/// Sites of `outer` that are not in `inner`, in the order of `outer`.
Region difference(const Region& outer, const Region& inner);

/// Throws GeometryError unless every site of `inner` is in `outer`.
void require_subset(const Region& inner, const Region& outer,
                    const char* what);

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept;
};

}  // namespace schurstate
