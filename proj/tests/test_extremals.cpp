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

#include "subcarnot/extremals.hpp"

using namespace subcarnot;

namespace {

constexpr double kPi = 3.14159265358979323846;

ControlGrid line_grid(const AlgebraPtr& a, const Vec& v, int N) {
  Mat u(v.size(), N);
  for (int j = 0; j < N; ++j) u.col(j) = v;
  return make_grid(a, u);
}

ControlGrid circle_grid(const AlgebraPtr& a, double r, int N) {
  Mat nodes(2, N + 1);
  for (int j = 0; j <= N; ++j) {
    const double t = static_cast<double>(j) / N;
    nodes(0, j) = r * (std::cos(2.0 * kPi * t) - 1.0);
    nodes(1, j) = r * std::sin(2.0 * kPi * t);
  }
  return grid_from_nodes(a, nodes);
}

ControlGrid random_grid(const AlgebraPtr& a, int N, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Mat u(a->layer_dim(1), N);
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) u(i, j) = nd(rng);
  return make_grid(a, std::move(u));
}

}  // namespace

TEST_CASE("engel line along the second generator is a goh-legendre abnormal") {
  const auto a = engel();
  Vec v(2);
  v << 0.0, 1.0;
  const auto grid = line_grid(a, v, 24);
  auto jet = endpoint_jacobian(grid);

  const auto basis = find_abnormal(jet);
  REQUIRE(basis.size() == 1);
  // the multiplier is the top-layer covector, up to sign
  CHECK(std::abs(basis[0](3)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(basis[0].head(3).norm() <= 1e-9);

  const auto goh = goh_check(grid, basis[0]);
  CHECK(goh.pass);
  CHECK(goh.violation <= 1e-10);
  CHECK_FALSE(goh.nonconstant_speed);

  const auto leg = legendre_check(grid, basis[0]);
  CHECK(leg.pass);
  // with the sign applied, Q = diag(1, 0) on every segment
  CHECK(leg.profile.minCoeff() == doctest::Approx(0.0).epsilon(1e-12));

  const Vec good = static_cast<double>(leg.sign) * basis[0];
  CHECK(morse_index(jet, good) == 0);
  CHECK(morse_index(jet, Vec(-good)) >= 1);
}

TEST_CASE("goh fails for multipliers with a second-layer component") {
  const auto a = engel();
  Vec v(2);
  v << 0.0, 1.0;
  const auto grid = line_grid(a, v, 8);
  Vec lam = Vec::Zero(4);
  lam(2) = 1.0;  // pure V2 covector
  const auto goh = goh_check(grid, lam);
  CHECK_FALSE(goh.pass);
  CHECK(goh.violation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("goh subspace test on engel directions") {
  const auto a = engel();
  Vec e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  // [e2, V2] = 0, so every top-layer covector works
  CHECK(goh_subspace_test(a, {e2}).size() == 1);
  // [e1, e3] = e4 spans V3, so none survive
  CHECK(goh_subspace_test(a, {e1}).empty());
}

TEST_CASE("find_normal on straight lines gives a zero multiplier") {
  for (const auto& a : {heisenberg(1), engel(), free_carnot(2, 3)}) {
    Vec v = Vec::Zero(a->layer_dim(1));
    v(0) = 1.0;
    v(v.size() - 1) = -2.0;
    const auto fit = find_normal(line_grid(a, v, 16));
    CHECK(fit.residual <= 1e-10);
    CHECK(fit.lambda.norm() <= 1e-8);
  }
}

TEST_CASE("find_normal certifies the heisenberg circle") {
  const auto a = heisenberg(1);
  const auto coarse = circle_grid(a, 1.0, 32);
  const auto fine = circle_grid(a, 1.0, 128);
  const auto fit_c = find_normal(coarse);
  const auto fit_f = find_normal(fine);
  // the regular polygon is an exact discrete stationary point by symmetry:
  // the residual is machine-precision at every resolution
  CHECK(fit_c.residual <= 1e-10);
  CHECK(fit_f.residual <= 1e-10);
  // the control rotates once over [0,1], so the vertical multiplier has
  // magnitude 2 pi
  CHECK(std::abs(fit_f.lambda(2)) == doctest::Approx(2.0 * kPi).epsilon(1e-2));
  // normal_residual reproduces the fit residual and is minimal there
  CHECK(normal_residual(fine, fit_f.lambda) == doctest::Approx(fit_f.residual).epsilon(1e-12));
  Vec worse = fit_f.lambda;
  worse(2) += 1.0;
  CHECK(normal_residual(fine, worse) > fit_f.residual);
}

TEST_CASE("analyze_extremal summaries") {
  SUBCASE("random heisenberg curve is regular") {
    const auto rep = analyze_extremal(random_grid(heisenberg(2), 20, 15));
    CHECK(rep.corank == 0);
    CHECK_FALSE(rep.singular);
    CHECK(rep.abnormal_basis.empty());
  }
  SUBCASE("engel singular line") {
    const auto a = engel();
    Vec v(2);
    v << 0.0, 1.0;
    const auto rep = analyze_extremal(line_grid(a, v, 24));
    CHECK(rep.corank == 1);
    CHECK(rep.singular);
    CHECK(rep.goh_pass);
    CHECK(rep.legendre_pass);
    CHECK(rep.morse == 0);
    CHECK(rep.normal_residual <= 1e-10);
  }
}

TEST_CASE("hamiltonian flow basics") {
  SUBCASE("horizontal covectors give straight lines") {
    const auto a = free_carnot(2, 3);
    Vec lam = Vec::Zero(a->dim());
    lam(0) = 0.7;
    lam(1) = -0.3;
    const auto fr = hamiltonian_flow(a, GroupPoint::identity(a), lam, 1.0, 50);
    Vec expect = Vec::Zero(a->dim());
    expect.head(2) = lam.head(2);
    CHECK((fr.states.col(50) - expect).norm() <= 1e-10);
    CHECK(fr.energy_drift <= 1e-12);
  }
  SUBCASE("energy is conserved along random flows") {
    const auto a = free_carnot(3, 3);
    std::mt19937 rng(8);
    std::normal_distribution<double> nd;
    Vec lam(a->dim());
    for (int i = 0; i < lam.size(); ++i) lam(i) = nd(rng);
    const auto fr = hamiltonian_flow(a, GroupPoint::identity(a), lam, 1.0, 400);
    CHECK(fr.energy_drift <= 1e-10);
    // momenta stay consistent with the covectors through the frame
    for (int j : {0, 100, 400}) {
      const Mat M = left_frame_matrix(GroupPoint{a, Vec(fr.states.col(j))});
      CHECK((M.transpose() * fr.covectors.col(j) - fr.momenta.col(j)).norm() <=
            1e-9 * (1.0 + fr.momenta.col(j).norm()));
    }
  }
  SUBCASE("heisenberg flow closes a circle of area pi") {
    const auto a = heisenberg(1);
    Vec lam(3);
    lam << 1.0, 0.0, 1.0;
    const auto fr = hamiltonian_flow(a, GroupPoint::identity(a), lam, 2.0 * kPi, 2000);
    const Vec end = fr.states.col(2000);
    CHECK(end.head(2).norm() <= 1e-6);
    CHECK(std::abs(end(2)) == doctest::Approx(kPi).epsilon(1e-6));
  }
  SUBCASE("self-convergence of the integrator") {
    const auto a = engel();
    Vec lam(4);
    lam << 0.5, 1.0, -0.75, 0.25;
    const auto c = hamiltonian_flow(a, GroupPoint::identity(a), lam, 1.0, 100);
    const auto f = hamiltonian_flow(a, GroupPoint::identity(a), lam, 1.0, 400);
    CHECK((c.states.col(100) - f.states.col(400)).norm() <= 1e-8);
  }
}
