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

#include "subcarnot/group.hpp"

namespace subcarnot {

GroupPoint inverse(const GroupPoint& p) { return {p.algebra, -p.coords}; }

GroupPoint bch_product(const GroupPoint& p, const GroupPoint& q) {
  if (p.algebra != q.algebra) throw UsageError("bch_product: points from different algebras");
  const auto& a = *p.algebra;
  const Vec pq = a.bracket(p.coords, q.coords);
  Vec out = p.coords + q.coords + 0.5 * pq;
  if (a.step() >= 3) {
    out += (1.0 / 12.0) * (a.bracket(p.coords, pq) - a.bracket(q.coords, pq));
  }
  return {p.algebra, std::move(out)};
}

Vec dexp_apply(const GradedAlgebra& a, const Vec& e, const Vec& w) {
  Vec out = w;
  Vec ad = w;
  double fact = 1.0;
  for (int m = 2; m <= a.step(); ++m) {
    ad = a.bracket(e, ad);  // ad(e)^{m-1} w
    fact *= m;
    const double coeff = (m % 2 == 0 ? 1.0 : -1.0) / fact;
    out -= coeff * ad;
  }
  return out;
}

namespace {

Vec frame_column(const GradedAlgebra& a, const Vec& p, int i) {
  Vec ei = Vec::Zero(a.dim());
  ei(i) = 1.0;
  const Vec pe = a.bracket(p, ei);
  Vec out = ei + 0.5 * pe;
  if (a.step() >= 3) out += (1.0 / 12.0) * a.bracket(p, pe);
  return out;
}

}  // namespace

Vec left_frame(const GroupPoint& p, int i) {
  const auto& a = *p.algebra;
  if (i < 0 || i >= a.layer_dim(1)) throw UsageError("left_frame: index not in the first layer");
  return frame_column(a, p.coords, i);
}

Mat left_frame_matrix(const GroupPoint& p) {
  const auto& a = *p.algebra;
  Mat m(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i) m.col(i) = frame_column(a, p.coords, i);
  return m;
}

Vec project_P(const GroupPoint& p) { return p.algebra->layer_block(p.coords, 1); }

}  // namespace subcarnot
