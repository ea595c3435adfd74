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

#include <random>

#include "subcarnot/group.hpp"

using namespace subcarnot;

namespace {

GroupPoint random_point(const AlgebraPtr& a, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Vec v(a->dim());
  for (int i = 0; i < v.size(); ++i) v(i) = nd(rng);
  return {a, v};
}

}  // namespace

TEST_CASE("bch product satisfies the group axioms") {
  for (const auto& a : {heisenberg(2), engel(), free_carnot(3, 3)}) {
    std::mt19937 rng(11);
    const GroupPoint e = GroupPoint::identity(a);
    for (int t = 0; t < 10; ++t) {
      const GroupPoint p = random_point(a, rng);
      const GroupPoint q = random_point(a, rng);
      const GroupPoint r = random_point(a, rng);
      const double scale = 1.0 + p.coords.norm() + q.coords.norm() + r.coords.norm();
      // identity and inverse
      CHECK((bch_product(p, e).coords - p.coords).norm() <= 1e-14 * scale);
      CHECK((bch_product(e, p).coords - p.coords).norm() <= 1e-14 * scale);
      CHECK(bch_product(p, inverse(p)).coords.norm() <= 1e-13 * scale * scale * scale);
      // associativity is exact at step <= 3
      const Vec lhs = bch_product(bch_product(p, q), r).coords;
      const Vec rhs = bch_product(p, bch_product(q, r)).coords;
      CHECK((lhs - rhs).norm() <= 1e-12 * scale * scale * scale);
    }
  }
}

TEST_CASE("heisenberg product closed form") {
  const auto h = heisenberg(1);
  GroupPoint p{h, Vec(3)}, q{h, Vec(3)};
  p.coords << 1.0, 2.0, 0.5;
  q.coords << -0.25, 3.0, 1.0;
  const Vec pq = bch_product(p, q).coords;
  CHECK(pq(0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(pq(1) == doctest::Approx(5.0).epsilon(1e-15));
  // z + z' + (x y' - y x')/2
  CHECK(pq(2) == doctest::Approx(0.5 + 1.0 + 0.5 * (1.0 * 3.0 - 2.0 * (-0.25))).epsilon(1e-14));
}

TEST_CASE("left frame matches a finite-difference curve oracle") {
  // X_i(p) is the derivative of t -> p * exp(t e_i) at t = 0; compare with a
  // central difference of the bch product.
  for (const auto& a : {engel(), free_carnot(2, 3), heisenberg(2)}) {
    std::mt19937 rng(5);
    const int n1 = a->layer_dim(1);
    for (int t = 0; t < 5; ++t) {
      const GroupPoint p = random_point(a, rng);
      for (int i = 0; i < n1; ++i) {
        const double h = 1e-6;
        Vec ei = Vec::Zero(a->dim());
        ei(i) = h;
        const Vec fwd = bch_product(p, {a, ei}).coords;
        const Vec bwd = bch_product(p, {a, Vec(-ei)}).coords;
        const Vec fd = (fwd - bwd) / (2.0 * h);
        CHECK((fd - left_frame(p, i)).norm() <= 1e-8 * (1.0 + p.coords.norm()));
      }
    }
  }
}

TEST_CASE("frame matrix is unitriangular and matches left_frame columns") {
  const auto a = free_carnot(3, 3);
  std::mt19937 rng(19);
  const GroupPoint p = random_point(a, rng);
  const Mat M = left_frame_matrix(p);
  CHECK(M.rows() == a->dim());
  CHECK(M.cols() == a->dim());
  for (int i = 0; i < a->layer_dim(1); ++i)
    CHECK((M.col(i) - left_frame(p, i)).norm() == 0.0);
  // unitriangular in the graded basis: ones on the diagonal, zeros above
  for (int i = 0; i < a->dim(); ++i) {
    CHECK(M(i, i) == 1.0);
    for (int j = 0; j < i; ++j) CHECK(M(j, i) == 0.0);
  }
}

TEST_CASE("dexp reproduces the derivative of exp through a moving argument") {
  // d/dt exp(e + t w)|_0 equals X(exp(e)) dexp-corrected w: check against
  // the group-side finite difference exp(-e) * exp(e + t w).
  const auto a = free_carnot(2, 3);
  std::mt19937 rng(23);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 8; ++t) {
    Vec e(a->dim()), w(a->dim());
    for (int i = 0; i < e.size(); ++i) {
      e(i) = nd(rng);
      w(i) = nd(rng);
    }
    const double h = 1e-6;
    const Vec plus = bch_product({a, Vec(-e)}, {a, Vec(e + h * w)}).coords;
    const Vec minus = bch_product({a, Vec(-e)}, {a, Vec(e - h * w)}).coords;
    const Vec fd = (plus - minus) / (2.0 * h);
    CHECK((fd - dexp_apply(*a, e, w)).norm() <=
          1e-7 * (1.0 + e.norm()) * (1.0 + w.norm()) * 10);
    // simpler identity: dexp(0) = id
    CHECK((dexp_apply(*a, Vec(Vec::Zero(a->dim())), w) - w).norm() == 0.0);
  }
}

TEST_CASE("project_P extracts the first layer") {
  const auto a = engel();
  GroupPoint p{a, Vec(4)};
  p.coords << 1.0, -2.0, 3.0, 4.0;
  const Vec v = project_P(p);
  CHECK(v.size() == 2);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == -2.0);
}
