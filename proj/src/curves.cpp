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

#include "subcarnot/curves.hpp"

#include <cmath>

namespace subcarnot {

namespace {

void check_grid(const ControlGrid& grid) {
  if (!grid.algebra) throw UsageError("grid: no algebra");
  if (grid.u.cols() < 1) throw UsageError("grid: need at least one segment");
  if (grid.u.rows() != grid.algebra->layer_dim(1)) throw UsageError("grid: u must have n1 rows");
  if (grid.algebra->step() > 3) throw UnsupportedError("grid: step > 3 not supported");
}

Vec pad_layer(const GradedAlgebra& a, const Vec& block, int layer) {
  Vec out = Vec::Zero(a.dim());
  out.segment(a.layer_offset(layer), a.layer_dim(layer)) = block;
  return out;
}

}  // namespace

Mat ControlGrid::gamma1_nodes() const {
  const int n1 = algebra->layer_dim(1);
  const int N = segments();
  Mat nodes(n1, N + 1);
  nodes.col(0) = algebra->layer_block(basepoint.coords, 1);
  for (int j = 0; j < N; ++j) nodes.col(j + 1) = nodes.col(j) + dt() * u.col(j);
  return nodes;
}

ControlGrid make_grid(const AlgebraPtr& a, Mat u) {
  return make_grid(a, std::move(u), GroupPoint::identity(a));
}

ControlGrid make_grid(const AlgebraPtr& a, Mat u, GroupPoint basepoint) {
  ControlGrid g{a, std::move(u), std::move(basepoint)};
  check_grid(g);
  return g;
}

ControlGrid grid_from_nodes(const AlgebraPtr& a, const Mat& nodes) {
  if (nodes.cols() < 2) throw UsageError("grid_from_nodes: need at least two node columns");
  const int N = static_cast<int>(nodes.cols()) - 1;
  Mat u(nodes.rows(), N);
  for (int j = 0; j < N; ++j) u.col(j) = (nodes.col(j + 1) - nodes.col(j)) * N;
  GroupPoint base = GroupPoint::identity(a);
  base.coords.head(a->layer_dim(1)) = nodes.col(0);
  return make_grid(a, std::move(u), std::move(base));
}

Mat HorizontalPath::layer_nodes(int layer) const {
  const auto& a = *grid.algebra;
  return nodes.middleRows(a.layer_offset(layer), a.layer_dim(layer));
}

HorizontalPath lift_via_bch(const ControlGrid& grid) {
  check_grid(grid);
  const auto& a = *grid.algebra;
  const int N = grid.segments();
  const double dt = grid.dt();
  Mat nodes(a.dim(), N + 1);
  nodes.col(0) = grid.basepoint.coords;
  for (int j = 0; j < N; ++j) {
    GroupPoint cur{grid.algebra, nodes.col(j)};
    GroupPoint step{grid.algebra, pad_layer(a, dt * grid.u.col(j), 1)};
    nodes.col(j + 1) = bch_product(cur, step).coords;
  }
  return {grid, std::move(nodes)};
}

HorizontalPath lift(const ControlGrid& grid) {
  check_grid(grid);
  const auto& a = *grid.algebra;
  const int N = grid.segments();
  const double dt = grid.dt();
  Mat nodes(a.dim(), N + 1);
  nodes.col(0) = grid.basepoint.coords;
  for (int j = 0; j < N; ++j) {
    const Vec g1 = a.project_layer(nodes.col(j), 1);
    const Vec u1 = pad_layer(a, grid.u.col(j), 1);
    Vec next = nodes.col(j) + dt * u1;
    if (a.step() >= 2) {
      const Vec gu = a.bracket(g1, u1);  // in V^2
      next += 0.5 * dt * gu;
      if (a.step() >= 3) {
        const Vec h2 = a.project_layer(nodes.col(j), 2);
        next += dt * ((1.0 / 12.0) * a.bracket(g1, gu) + 0.5 * a.bracket(h2, u1)) -
                (dt * dt / 12.0) * a.bracket(u1, gu);
      }
    }
    nodes.col(j + 1) = next;
  }
  HorizontalPath path{grid, std::move(nodes)};

  // independent route: BCH node recursion
  const HorizontalPath check = lift_via_bch(grid);
  const double scale = std::max(1.0, path.nodes.cwiseAbs().maxCoeff());
  if ((path.nodes - check.nodes).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::runtime_error("lift: closed-form and BCH routes disagree");
  return path;
}

HorizontalPath line_lift(const AlgebraPtr& a, const Vec& v, const Vec& v0,
                         const GroupPoint& basepoint, int N) {
  if (!a) throw UsageError("line_lift: no algebra");
  if (a->step() > 3) throw UnsupportedError("line_lift: step > 3 not supported");
  const int n1 = a->layer_dim(1);
  if (v.size() != n1 || v0.size() != n1) throw UsageError("line_lift: v, v0 must have length n1");
  if (N < 1) throw UsageError("line_lift: need N >= 1");

  const Vec vf = pad_layer(*a, v, 1);
  const Vec v0f = pad_layer(*a, v0, 1);
  const Vec h0 = a->project_layer(basepoint.coords, 2);
  const Vec k0 = a->step() >= 3 ? a->project_layer(basepoint.coords, 3) : Vec::Zero(a->dim());

  // gamma2(t) = h0 + [v0,v]/2 t
  // gamma3(t) = k0 + ([v0,[v0,v]]/12 + [h0,v]/2) t + [v,[v,v0]]/12 t^2
  const Vec d2 = 0.5 * a->bracket(v0f, vf);
  Vec d3lin = Vec::Zero(a->dim()), d3quad = Vec::Zero(a->dim());
  if (a->step() >= 3) {
    d3lin = (1.0 / 12.0) * a->bracket(v0f, a->bracket(v0f, vf)) + 0.5 * a->bracket(h0, vf);
    d3quad = (1.0 / 12.0) * a->bracket(vf, a->bracket(vf, v0f));
  }

  Mat unodes(n1, N);
  for (int j = 0; j < N; ++j) unodes.col(j) = v;
  GroupPoint base = GroupPoint::identity(a);
  base.coords = v0f + h0 + k0;
  ControlGrid grid = make_grid(a, std::move(unodes), std::move(base));

  Mat nodes(a->dim(), N + 1);
  for (int j = 0; j <= N; ++j) {
    const double t = static_cast<double>(j) / N;
    nodes.col(j) = v0f + t * vf + h0 + t * d2 + k0 + t * d3lin + t * t * d3quad;
  }
  return {std::move(grid), std::move(nodes)};
}

EnergyLength energy_length(const ControlGrid& grid) {
  check_grid(grid);
  EnergyLength out;
  const double dt = grid.dt();
  for (int j = 0; j < grid.segments(); ++j) {
    const double s = grid.u.col(j).norm();
    out.energy += 0.5 * s * s * dt;
    out.length += s * dt;
  }
  return out;
}

double horizontality_residual(const HorizontalPath& path) {
  const auto& a = *path.grid.algebra;
  if (a.step() < 2) return 0.0;
  const int N = path.grid.segments();
  const double dt = path.grid.dt();
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const Vec mid = 0.5 * (path.nodes.col(j) + path.nodes.col(j + 1));
    const Vec xdot = (path.nodes.col(j + 1) - path.nodes.col(j)) / dt;
    Vec rhs = 0.5 * a.bracket(mid, xdot);
    if (a.step() >= 3) rhs -= (1.0 / 6.0) * a.bracket(mid, a.bracket(mid, xdot));
    const Vec defect = xdot - rhs;
    for (int layer = 2; layer <= a.step(); ++layer) {
      const double m = a.layer_block(defect, layer).cwiseAbs().maxCoeff();
      worst = std::max(worst, m);
    }
  }
  return worst;
}

ControlGrid reparametrize_constant_speed(const ControlGrid& grid) {
  check_grid(grid);
  const EnergyLength el = energy_length(grid);
  if (el.length <= 0.0) throw UsageError("reparametrize_constant_speed: zero-length curve");
  const int N = grid.segments();
  const Mat nodes = grid.gamma1_nodes();
  std::vector<double> cum(N + 1, 0.0);
  for (int j = 0; j < N; ++j) cum[j + 1] = cum[j] + grid.u.col(j).norm() * grid.dt();

  Mat out(nodes.rows(), N + 1);
  out.col(0) = nodes.col(0);
  int seg = 0;
  for (int j = 1; j <= N; ++j) {
    const double s = el.length * j / N;
    while (seg < N - 1 && cum[seg + 1] < s) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double w = span > 0.0 ? (s - cum[seg]) / span : 0.0;
    out.col(j) = (1.0 - w) * nodes.col(seg) + w * nodes.col(seg + 1);
  }
  out.col(N) = nodes.col(N);
  ControlGrid res = grid_from_nodes(grid.algebra, out);
  res.basepoint = grid.basepoint;
  return res;
}

}  // namespace subcarnot
