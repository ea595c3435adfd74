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

#include <doctest.h>

#include <cmath>
#include <random>

#include "subcarnot/curves.hpp"

using namespace subcarnot;

namespace {

constexpr double kPi = 3.14159265358979323846;

ControlGrid random_grid(const AlgebraPtr& a, int N, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Mat u(a->layer_dim(1), N);
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) u(i, j) = nd(rng);
  return make_grid(a, std::move(u));
}

ControlGrid circle_grid(const AlgebraPtr& a, double r, int N) {
  // gamma^1(t) = r (cos 2 pi t - 1, sin 2 pi t), sampled at the nodes
  Mat nodes(2, N + 1);
  for (int j = 0; j <= N; ++j) {
    const double t = static_cast<double>(j) / N;
    nodes(0, j) = r * (std::cos(2.0 * kPi * t) - 1.0);
    nodes(1, j) = r * std::sin(2.0 * kPi * t);
  }
  return grid_from_nodes(a, nodes);
}

}  // namespace

TEST_CASE("lines through the identity lift with vanishing higher layers") {
  for (const auto& a : {heisenberg(1), engel(), free_carnot(3, 3)}) {
    Vec v = Vec::Zero(a->layer_dim(1));
    v(0) = 1.5;
    if (v.size() > 1) v(1) = -0.5;
    const auto path = line_lift(a, v, Vec(Vec::Zero(v.size())), GroupPoint::identity(a), 16);
    for (int layer = 2; layer <= a->step(); ++layer)
      CHECK(path.layer_nodes(layer).cwiseAbs().maxCoeff() == 0.0);
    // first layer is exactly t v
    CHECK((path.layer_nodes(1).col(8) - 0.5 * v).norm() <= 1e-15);
  }
}

TEST_CASE("offset line on the engel group: worked higher-layer coefficients") {
  const auto a = engel();
  Vec v(2), v0(2);
  v << 0.0, 1.0;   // e2 direction
  v0 << 1.0, 0.0;  // starts at e1
  const int N = 10;
  const auto path = line_lift(a, v, v0, GroupPoint::identity(a), N);
  for (int j = 0; j <= N; ++j) {
    const double t = static_cast<double>(j) / N;
    // gamma^2(t) = [v0, v]/2 t = t/2 e3, gamma^3(t) = [e1,[e1,e2]]/12 t = t/12 e4
    CHECK(path.nodes(2, j) == doctest::Approx(0.5 * t).epsilon(1e-14));
    CHECK(path.nodes(3, j) == doctest::Approx(t / 12.0).epsilon(1e-14));
  }
  // the closed form agrees with the integrating lift at the shared nodes
  const auto num = lift(path.grid);
  CHECK((num.nodes - path.nodes).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("lift agrees with the bch node recursion on random controls") {
  for (const auto& a : {heisenberg(2), engel(), free_carnot(2, 3)}) {
    const auto grid = random_grid(a, 33, 101);
    const auto p1 = lift(grid);
    const auto p2 = lift_via_bch(grid);
    const double scale = std::max(1.0, p1.nodes.cwiseAbs().maxCoeff());
    CHECK((p1.nodes - p2.nodes).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK(horizontality_residual(p1) <= 1e-10 * scale);
  }
}

TEST_CASE("heisenberg vertical coordinate equals the discrete signed area") {
  // for piecewise-linear gamma^1, z(1) = sum_j cross(p_j, p_{j+1}) / 2 exactly
  const auto a = heisenberg(1);
  const int N = 40;
  const auto grid = circle_grid(a, 1.25, N);
  const auto path = lift(grid);
  const Mat nodes = grid.gamma1_nodes();
  double area = 0.0;
  for (int j = 0; j < N; ++j)
    area += 0.5 * (nodes(0, j) * nodes(1, j + 1) - nodes(1, j) * nodes(0, j + 1));
  CHECK(path.nodes(2, N) == doctest::Approx(area).epsilon(1e-13));
  // and the discrete area converges to pi r^2 at second order:
  // the inscribed N-gon misses pi r^2 by ~ (2/3) pi^3 r^2 / N^2
  CHECK(std::abs(area - kPi * 1.25 * 1.25) <= 2.0 * kPi * kPi * kPi * 1.25 * 1.25 / (N * N));
}

TEST_CASE("tampered paths have a positive horizontality residual") {
  const auto a = engel();
  const auto grid = random_grid(a, 12, 7);
  auto path = lift(grid);
  path.nodes(3, 6) += 0.1;
  CHECK(horizontality_residual(path) > 1e-3);
}

TEST_CASE("energy and length of simple grids") {
  const auto a = heisenberg(1);
  Vec v(2);
  v << 3.0, 4.0;  // speed 5
  Mat u(2, 8);
  for (int j = 0; j < 8; ++j) u.col(j) = v;
  const auto el = energy_length(make_grid(a, u));
  CHECK(el.length == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(el.energy == doctest::Approx(12.5).epsilon(1e-15));
  // cauchy-schwarz: energy >= length^2 / 2 with equality at constant speed
  const auto grid = random_grid(a, 20, 3);
  const auto el2 = energy_length(grid);
  CHECK(el2.energy >= 0.5 * el2.length * el2.length - 1e-12);
}

TEST_CASE("constant-speed reparametrization") {
  SUBCASE("straight segment with uneven speeds becomes exactly uniform") {
    const auto a = heisenberg(1);
    Vec v(2);
    v << 1.0, 3.0;
    Mat u(2, 2);
    u.col(0) = 0.5 * v;   // slow first half
    u.col(1) = 1.5 * v;   // fast second half
    const auto grid = make_grid(a, u);
    const auto flat = reparametrize_constant_speed(grid);
    const auto el0 = energy_length(grid);
    const auto el1 = energy_length(flat);
    // on a straight trace the resampled chords coincide with the trace, so
    // constant speed is achieved exactly at the original length
    CHECK(el1.length == doctest::Approx(el0.length).epsilon(1e-12));
    for (int j = 0; j < flat.segments(); ++j)
      CHECK(flat.u.col(j).norm() == doctest::Approx(el0.length).epsilon(1e-12));
    CHECK(el1.energy == doctest::Approx(0.5 * el0.length * el0.length).epsilon(1e-12));
  }
  SUBCASE("cornered polygon: endpoints kept, energy never increases") {
    const auto a = free_carnot(2, 3);
    auto grid = random_grid(a, 24, 13);
    for (int j = 0; j < grid.segments(); ++j) grid.u.col(j) *= (j % 3 == 0 ? 4.0 : 0.25);
    const auto flat = reparametrize_constant_speed(grid);
    const auto el0 = energy_length(grid);
    const auto el1 = energy_length(flat);
    // resampled chords can cut corners, so the length may only shrink and
    // the energy is bounded by N (L/N)^2 / 2 = L^2/2 <= original energy
    CHECK(el1.length <= el0.length + 1e-12);
    CHECK(el1.energy <= el0.energy + 1e-12);
    CHECK(el1.energy <= 0.5 * el0.length * el0.length + 1e-12);
    // endpoints preserved exactly
    CHECK((flat.gamma1_nodes().col(flat.segments()) -
           grid.gamma1_nodes().col(grid.segments()))
              .norm() <= 1e-12);
    // every chord is at most one arc-length spacing long
    const double spacing = el0.length / flat.segments();
    for (int j = 0; j < flat.segments(); ++j)
      CHECK(flat.u.col(j).norm() / flat.segments() <= spacing + 1e-12);
  }
}

TEST_CASE("grid_from_nodes round-trips gamma1_nodes") {
  const auto a = engel();
  const auto grid = random_grid(a, 9, 21);
  const Mat nodes = grid.gamma1_nodes();
  const auto back = grid_from_nodes(a, nodes);
  CHECK((back.gamma1_nodes() - nodes).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((back.u - grid.u).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("grid validation errors") {
  const auto a = engel();
  CHECK_THROWS_AS(make_grid(a, Mat(3, 4)), UsageError);           // wrong row count
  CHECK_THROWS_AS(make_grid(a, Mat(2, 0)), UsageError);           // no segments
  CHECK_THROWS_AS(grid_from_nodes(a, Mat(2, 1)), UsageError);     // single column
  CHECK_THROWS_AS(line_lift(a, Vec(Vec::Zero(3)), Vec(Vec::Zero(2)),
                            GroupPoint::identity(a), 4),
                  UsageError);
}
