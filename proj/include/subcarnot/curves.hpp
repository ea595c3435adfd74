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

#ifndef SUBCARNOT_CURVES_HPP
#define SUBCARNOT_CURVES_HPP

#include "subcarnot/group.hpp"

namespace subcarnot {

/// First-layer curve on the uniform grid over [0,1]: piecewise-linear nodes,
/// piecewise-constant derivative u_j on segment j. gamma1(0) is the first
/// layer of the basepoint.
struct ControlGrid {
  AlgebraPtr algebra;
  Mat u;  // n1 x N
  GroupPoint basepoint;

  int segments() const { return static_cast<int>(u.cols()); }
  double dt() const { return 1.0 / segments(); }
  /// Node samples of gamma^1, n1 x (N+1).
  Mat gamma1_nodes() const;
};

ControlGrid make_grid(const AlgebraPtr& a, Mat u);
ControlGrid make_grid(const AlgebraPtr& a, Mat u, GroupPoint basepoint);
/// Builds the grid whose gamma^1 node samples are the given columns
/// (n1 x (N+1)); basepoint gets the first column as its first layer.
ControlGrid grid_from_nodes(const AlgebraPtr& a, const Mat& nodes);

/// A lifted curve: full exponential-coordinate samples at the grid nodes.
struct HorizontalPath {
  ControlGrid grid;
  Mat nodes;  // n x (N+1)

  Mat layer_nodes(int layer) const;  // n_layer x (N+1)
  GroupPoint endpoint() const { return {grid.algebra, nodes.col(nodes.cols() - 1)}; }
};

/// Horizontal lift by exact per-segment integration of the layer recursion;
/// cross-checked internally against the BCH node recursion.
HorizontalPath lift(const ControlGrid& grid);

/// Node recursion Upsilon_{j+1} = Upsilon_j * exp(dt u_j). Used as the
/// independent route in the lift cross-validation.
HorizontalPath lift_via_bch(const ControlGrid& grid);

/// Closed-form lift of the line gamma^1(t) = v t + v0 (v, v0 of length n1).
/// Higher layers start at the basepoint's blocks; the basepoint's first
/// layer is ignored in favour of v0.
HorizontalPath line_lift(const AlgebraPtr& a, const Vec& v, const Vec& v0,
                         const GroupPoint& basepoint, int N);

struct EnergyLength {
  double energy = 0.0;
  double length = 0.0;
};
EnergyLength energy_length(const ControlGrid& grid);

/// Max over segments and layers i >= 2 of the horizontality defect at the
/// segment midpoint. ~0 for lift outputs, positive for tampered paths.
double horizontality_residual(const HorizontalPath& path);

/// Arc-length resampling onto the same grid size: same endpoints and total
/// length, |u_j| constant across segments.
ControlGrid reparametrize_constant_speed(const ControlGrid& grid);

}  // namespace subcarnot

#endif  // SUBCARNOT_CURVES_HPP
