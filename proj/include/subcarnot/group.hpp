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

#ifndef SUBCARNOT_GROUP_HPP
#define SUBCARNOT_GROUP_HPP

#include "subcarnot/algebra.hpp"

namespace subcarnot {

/// Group element in exponential coordinates of the first kind. The identity
/// is the zero vector and inverse(p) = -p.
struct GroupPoint {
  AlgebraPtr algebra;
  Vec coords;

  static GroupPoint identity(const AlgebraPtr& a) { return {a, Vec::Zero(a->dim())}; }
};

GroupPoint inverse(const GroupPoint& p);

/// Truncated BCH product p*q = p + q + [p,q]/2 + [p,[p,q]]/12 + [q,[q,p]]/12.
/// Exact (associative) for step <= 3 by grading.
GroupPoint bch_product(const GroupPoint& p, const GroupPoint& q);

/// d exp(e) applied to w: w - sum_{m=2}^{r} ((-1)^m / m!) ad(e)^{m-1}(w).
Vec dexp_apply(const GradedAlgebra& a, const Vec& e, const Vec& w);

/// Left-invariant frame field X_i at p, for a first-layer basis index i
/// (0-based). X_i(p) = e_i + [p,e_i]/2 + [p,[p,e_i]]/12.
Vec left_frame(const GroupPoint& p, int i);

/// Frame matrix for all basis indices: column i is X_i(p). Unitriangular in
/// the graded basis, hence always invertible.
Mat left_frame_matrix(const GroupPoint& p);

/// First-layer block of exp^{-1}(p).
Vec project_P(const GroupPoint& p);

}  // namespace subcarnot

#endif  // SUBCARNOT_GROUP_HPP
