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
#include <iosfwd>
#include <string>
#include <vector>

#include "schurstate/limit.hpp"
#include "schurstate/site.hpp"
#include "schurstate/state.hpp"
#include "schurstate/types.hpp"

namespace schurstate {

/// D_r = {z in Z^nu : |z| <= r}, lexicographic.
Region ball(int nu, int r);

/// How a region is moved outside D_t.
struct EmbeddingStrategy {
  enum class Kind { translate, random };
  Kind kind = Kind::translate;
  std::uint64_t seed = 0;

  static EmbeddingStrategy translate() { return {}; }
  static EmbeddingStrategy random(std::uint64_t seed) {
    return {Kind::random, seed};
  }
  /// "translate" or "random:<seed>".
  std::string name() const;
};

/// J_t: source[k] is sent to image[k]; every image site has |x| > t.
struct Embedding {
  Region source;
  Region image;
  int clearance = 0;
};

/// translate: y -> y + (t + 1 + R) e_1 with R = max |y|.
/// random: distinct sites drawn from the shells |x| = t+1, t+2, ... by a
/// seeded partial shuffle (the stream depends on seed and t).
Embedding embed(const Region& source, int t, const EmbeddingStrategy& strategy);

/// b moved along the embedding: factor k now sits on image[k].
LocalObservable transport(const LocalObservable& b, const Embedding& j);

inline const std::vector<int> kDefaultAlphaTs = {10, 20, 40, 80};
inline const std::vector<int> kDefaultScanTs = {5, 10, 20, 40};
inline constexpr double kDefaultAlphaTol = 1e-8;

struct AlphaLimit {
  /// Limit over t of prod_y Tr(h_{J_t(y),i} h_{J_t(y),j}* b_y), per (i,j).
  CMatrix values;
  /// max_{i,j} |values(i,j) - values(0,0)|.
  double spread = 0.0;
  bool independent = false;
  /// alpha^{(|Lambda'|)}(b); meaningful only when independent.
  Complex alpha;
};

/// Evaluates the embedded kernel along t_sequence and accepts the last
/// value when the last two differ by at most tol * max(1, |last|) in every
/// entry; otherwise ConvergenceError.
AlphaLimit alpha_limit(const FiberFamily& family, const LocalObservable& b,
                       const std::vector<int>& t_sequence = kDefaultAlphaTs,
                       double tol = kDefaultAlphaTol,
                       const EmbeddingStrategy& strategy =
                           EmbeddingStrategy::translate());

/// |psi(a J_t(b)) - psi(a) psi(J_t(b))| for the normalized limit state.
double mixing_gap(const LimitState& state, const LocalObservable& a,
                  const LocalObservable& b, int t,
                  const EmbeddingStrategy& strategy);

/// |psi(a J_t(b)) - psi(a) alpha(b)|. Throws PreconditionError unless the
/// alpha limit is independent of (i,j).
double alpha_mixing_gap(const LimitState& state, const LocalObservable& a,
                        const LocalObservable& b, int t,
                        const AlphaLimit& alpha,
                        const EmbeddingStrategy& strategy =
                            EmbeddingStrategy::translate());

struct ScanRow {
  int t = 0;
  std::string strategy;
  double mixing_gap = 0.0;
  /// NaN when the alpha limit depends on (i,j).
  double alpha_mixing_gap = 0.0;
};

struct MixingScan {
  std::vector<ScanRow> rows;  // t_list order, strategies in given order
  AlphaLimit alpha;
  /// Per strategy: fraction of consecutive t steps where mixing_gap drops.
  std::vector<std::pair<std::string, double>> decreasing_fraction;
};

/// Evaluates every (t, strategy) cell; up to `threads` cells run at once
/// and the table order never depends on scheduling.
MixingScan mixing_scan(const LimitState& state, const LocalObservable& a,
                       const LocalObservable& b, const std::vector<int>& t_list,
                       const std::vector<EmbeddingStrategy>& strategies,
                       const std::vector<int>& alpha_ts = kDefaultAlphaTs,
                       double alpha_tol = kDefaultAlphaTol, int threads = 1);

/// Header t,strategy,mixing_gap,alpha_mixing_gap; 17 significant digits;
/// LF line endings.
void write_scan_csv(std::ostream& out, const MixingScan& scan);

}  // namespace schurstate
