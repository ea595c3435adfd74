// Copyright 2026 The subcarnot authors
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

#ifndef SUBCARNOT_CLASSIFY_HPP
#define SUBCARNOT_CLASSIFY_HPP

#include <string>
#include <utility>
#include <vector>

#include "subcarnot/extremals.hpp"

namespace subcarnot {

/// Orthonormal basis of the smallest first-layer subspace containing the
/// curve's node samples (SVD with relative tolerance tol).
struct SpanningSubspace {
  Mat W;  // n1 x dim
  int dim = 0;
};
SpanningSubspace spanning_subspace(const ControlGrid& grid, double tol = 1e-9);

enum class Rank2Type { step1, step2, engel_type, free_type };
struct Rank2Result {
  Rank2Type type = Rank2Type::step1;
  Vec direction;  // engel_type only: unit singular direction in V1
};
/// Classifies a rank-2 (n1 = 2) algebra of step <= 3. The engel-type
/// singular direction is ker(v -> ad(v): V2 -> V3), basis-independent.
Rank2Result rank2_classify(const AlgebraPtr& a);

/// Extends a subalgebra multiplier (mu on sub-V2, nu on sub-V3) to the
/// parent by zero on the orthogonal complements of the embedded layers.
/// Returns a parent covector with zero first-layer block.
Vec multiplier_extend(const AlgebraPtr& a, const GeneratedSubalgebra& sub, const Vec& mu,
                      const Vec& nu);

struct ReductionStage {
  AlgebraPtr algebra;
  std::vector<int> layer_dims;
  Mat W;  // spanning subspace at this stage, n1 x dim
  int corank = 0;
  std::string note;
};

struct ReductionChain {
  std::vector<ReductionStage> stages;
  /// terminal stage outcome: normal-by-line | normal-by-step2 |
  /// rank2-engel-type | rank2-free-type | regular | regular-in-subgroup |
  /// inconclusive
  std::string terminal;
  /// top-level call: normal | inconclusive
  std::string verdict;
  Vec multiplier;                     // extended to the top algebra (may be zero)
  double certificate_residual = -1.0;  // (4.2) residual of `multiplier` at the top
};

/// The full reduction pipeline for a curve based at the identity.
std::pair<ExtremalReport, ReductionChain> classify_curve(const AlgebraPtr& a,
                                                         const ControlGrid& grid);

}  // namespace subcarnot

#endif  // SUBCARNOT_CLASSIFY_HPP
