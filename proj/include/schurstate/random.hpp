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

#include <cstdint>
#include <random>
#include <vector>

#include "schurstate/types.hpp"

namespace schurstate {

/// Seedable generator used by every randomized routine (selftest, random
/// embeddings, test fixtures).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard distributions are not, so the conversions
/// are spelled out here:
///   uniform()  : (u >> 11) * 2^-53, a double in [0, 1)
///   normal()   : Box-Muller on two uniforms, cosine branch only
///   index(n)   : rejection sampling on the top bits
/// With these definitions a seed reproduces the same draws on every
/// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Complex complex_normal();
  std::size_t index(std::size_t n);

  /// Independent stream for a numbered sub-task.
  Rng split(std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts
/// N(0, 1/2)).
CMatrix random_complex_matrix(Rng& rng, int rows, int cols);

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
CMatrix random_unitary(Rng& rng, int n);

/// M M* + shift * I with M complex Gaussian.
CMatrix random_positive_definite(Rng& rng, int n, double shift = 0.1);

/// Random Hermitian matrix (G + G*) / 2.
CMatrix random_hermitian(Rng& rng, int n);

}  // namespace schurstate
