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

#include <optional>
#include <string>

#include <json.hpp>

#include "schurstate/family.hpp"
#include "schurstate/homogeneous.hpp"
#include "schurstate/site.hpp"
#include "schurstate/state.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// A model file, parsed and validated.
///
/// {
///   "lattice": {"type": "zd", "nu": 2} | {"type": "graph", "sites": [[0], [1]]},
///   "fiber_dim": d, "index_size": d_I, "normalized": false,
///   "vectors": {"mode": "explicit", "sites": [{"site": [..], "vectors": [..]}],
///               "far": [..]}
///            | {"mode": "homogeneous", "vectors": [..]}
///            | {"mode": "generators",
///               "tail": {"beyond_radius": R, "D_H": "zero"},
///               "sites": [{"site": [..], "D_H": [..], "U": M, "W": M}]}
///            | {"mode": "perturbed", "base": v, "directions": [..], "decay": q}
/// }
///
/// A complex number is [re, im] or a plain real; a vector is a list of
/// complex numbers; a matrix is a list of rows, or the string "identity".
/// Vector lists hold d_I vectors of length d.
struct ModelSpec {
  std::string mode;
  int fiber_dim = 0;
  int index_size = 0;
  bool normalized = false;
  FiberFamily family;
  /// Set for mode "homogeneous".
  std::optional<HomogeneousModel> homogeneous;
  /// Sum of Tr|D_H| over declared sites, for mode "generators".
  std::optional<double> summability;
};

/// Throws ValidationError with line and column on malformed JSON, and a
/// ValidationError listing every violated field otherwise.
ModelSpec parse_model(const std::string& text);
ModelSpec load_model(const std::string& path);

/// {"region": [[..], ..], "factors": [M, ..]}
LocalObservable parse_observable(const std::string& text, int fiber_dim);
LocalObservable load_observable(const std::string& path, int fiber_dim);

/// "x1,y1;x2,y2;..." -> sites. The empty string is the empty region.
Region parse_region(const std::string& text);

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const CMatrix& m);
nlohmann::json to_json(const Site& s);
nlohmann::json to_json(const Region& r);

}  // namespace schurstate
