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

#include "subcarnot/algebra.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace subcarnot {

namespace {

constexpr double kStructTol = 1e-12;     // axiom tolerance for inexact tables
constexpr double kRankTol = 1e-9;        // relative singular value cutoff
constexpr std::int64_t kExactDenLimit = 1000000;

int numeric_rank(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * sv(0)) ++r;
  return r;
}

/// Orthonormal basis of the column span, relative cutoff kRankTol.
Mat column_span(const Mat& m) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(0) > 0 && sv(i) > kRankTol * sv(0)) ++r;
  return svd.matrixU().leftCols(r);
}

std::optional<Rational> snap_rational(double v) {
  static const std::int64_t dens[] = {1, 2, 3, 4, 6, 12, 24};
  for (std::int64_t q : dens) {
    const double scaled = v * static_cast<double>(q);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) < 1e-12 && std::abs(rounded) < 1e15)
      return Rational(static_cast<std::int64_t>(rounded), q);
  }
  return std::nullopt;
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << e.axiom << ": " << (e.pass ? "pass" : "FAIL");
    if (!e.pass)
      os << " (violation " << e.worst_violation << " at " << e.where[0] << "," << e.where[1] << ","
         << e.where[2] << (e.detail.empty() ? "" : "; " + e.detail) << ")";
    os << "\n";
  }
  return os.str();
}

GradedAlgebra::GradedAlgebra(AlgebraSpec spec) : spec_(std::move(spec)) {
  if (spec_.layer_dims.empty()) throw UsageError("algebra: no layers");
  if (spec_.step != static_cast<int>(spec_.layer_dims.size()))
    throw UsageError("algebra: step does not match layer_dims length");
  for (int d : spec_.layer_dims)
    if (d <= 0) throw UsageError("algebra: layer dimensions must be positive");
  n_ = std::accumulate(spec_.layer_dims.begin(), spec_.layer_dims.end(), 0);
  offsets_.resize(spec_.layer_dims.size());
  int off = 0;
  for (std::size_t l = 0; l < spec_.layer_dims.size(); ++l) {
    offsets_[l] = off;
    for (int i = 0; i < spec_.layer_dims[l]; ++i) layer_of_.push_back(static_cast<int>(l) + 1);
    off += spec_.layer_dims[l];
  }
  if (spec_.labels.empty()) {
    for (int i = 0; i < n_; ++i) spec_.labels.push_back("e" + std::to_string(i + 1));
  } else if (static_cast<int>(spec_.labels.size()) != n_) {
    throw UsageError("algebra: labels must have length n");
  }

  // Resolve the bracket table: explicit entries verbatim (summing duplicates),
  // missing orientations implied by antisymmetry.
  exact_ = true;
  std::map<std::pair<int, int>, std::vector<std::pair<int, Coeff>>> given;
  for (const auto& e : spec_.brackets) {
    if (e.i < 0 || e.i >= n_ || e.j < 0 || e.j >= n_)
      throw UsageError("algebra: bracket index out of range");
    auto& dst = given[{e.i, e.j}];
    for (const auto& [k, cf] : e.terms) {
      if (k < 0 || k >= n_) throw UsageError("algebra: bracket target index out of range");
      dst.emplace_back(k, cf);
      if (!cf.exact || cf.rat.den() > kExactDenLimit) exact_ = false;
    }
  }
  pair_terms_.resize(static_cast<std::size_t>(n_) * n_);
  if (exact_) pair_terms_exact_.resize(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      auto it = given.find({i, j});
      double sign = 1.0;
      if (it == given.end() && i != j) {
        it = given.find({j, i});
        sign = -1.0;
      }
      if (it == given.end()) continue;
      std::map<int, double> acc;
      std::map<int, Rational> acc_exact;
      for (const auto& [k, cf] : it->second) {
        acc[k] += sign * cf.val;
        if (exact_) acc_exact[k] += (sign < 0 ? -cf.rat : cf.rat);
      }
      auto& terms = pair_terms_[static_cast<std::size_t>(i) * n_ + j];
      for (const auto& [k, v] : acc)
        if (v != 0.0) terms.emplace_back(k, v);
      if (exact_) {
        auto& et = pair_terms_exact_[static_cast<std::size_t>(i) * n_ + j];
        for (const auto& [k, v] : acc_exact)
          if (!v.is_zero()) et.emplace_back(k, v);
      }
    }
  }
}

Vec GradedAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != n_ || y.size() != n_) throw UsageError("bracket: wrong coordinate length");
  Vec out = Vec::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < n_; ++j) {
      if (y(j) == 0.0) continue;
      for (const auto& [k, c] : basis_bracket(i, j)) out(k) += c * x(i) * y(j);
    }
  }
  return out;
}

Vec GradedAlgebra::iterated_bracket(const Vec& e, const Vec& f, int m) const {
  if (m < 0) throw UsageError("iterated_bracket: negative order");
  Vec out = f;
  for (int s = 0; s < m; ++s) out = bracket(e, out);
  return out;
}

Mat GradedAlgebra::ad_matrix(const Vec& y) const {
  Mat a = Mat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    if (y(i) == 0.0) continue;
    for (int j = 0; j < n_; ++j)
      for (const auto& [k, c] : basis_bracket(i, j)) a(k, j) += c * y(i);
  }
  return a;
}

double GradedAlgebra::c(int i, int j, int k) const {
  for (const auto& [kk, cc] : basis_bracket(i, j))
    if (kk == k) return cc;
  return 0.0;
}

Vec GradedAlgebra::project_layer(const Vec& x, int layer) const {
  Vec out = Vec::Zero(n_);
  if (layer < 1 || layer > num_layers()) return out;
  out.segment(layer_offset(layer), layer_dim(layer)) = x.segment(layer_offset(layer), layer_dim(layer));
  return out;
}

Vec GradedAlgebra::layer_block(const Vec& x, int layer) const {
  if (layer < 1 || layer > num_layers()) return Vec::Zero(0);
  return x.segment(layer_offset(layer), layer_dim(layer));
}

ValidationReport GradedAlgebra::validate() const {
  ValidationReport rep;

  // antisymmetry: c[i][j][.] + c[j][i][.] = 0, including the diagonal
  {
    AxiomResult r;
    r.axiom = "antisymmetry";
    for (int i = 0; i < n_ && true; ++i) {
      for (int j = i; j < n_; ++j) {
        std::map<int, double> sum;
        for (const auto& [k, c] : basis_bracket(i, j)) sum[k] += c;
        for (const auto& [k, c] : basis_bracket(j, i)) sum[k] += c;
        if (i == j) {  // [e_i, e_i] itself must vanish
          sum.clear();
          for (const auto& [k, c] : basis_bracket(i, i)) sum[k] += c;
        }
        for (const auto& [k, v] : sum) {
          const double mag = std::abs(v);
          if (mag > r.worst_violation) {
            r.worst_violation = mag;
            r.where = {i + 1, j + 1, k + 1};
          }
        }
      }
    }
    r.pass = exact_ ? r.worst_violation == 0.0 : r.worst_violation <= kStructTol;
    rep.entries.push_back(r);
  }

  // Jacobi identity on all basis triples
  {
    AxiomResult r;
    r.axiom = "jacobi";
    auto add_nested = [&](int a, int b, int c3, std::vector<double>& acc,
                          std::vector<Rational>* acc_exact) {
      // [e_a, [e_b, e_c3]]
      for (const auto& [m, cm] : basis_bracket(b, c3)) {
        for (const auto& [l, cl] : basis_bracket(a, m)) acc[l] += cm * cl;
      }
      if (acc_exact) {
        const auto& bc = pair_terms_exact_[static_cast<std::size_t>(b) * n_ + c3];
        for (const auto& [m, cm] : bc) {
          const auto& am = pair_terms_exact_[static_cast<std::size_t>(a) * n_ + m];
          for (const auto& [l, cl] : am) (*acc_exact)[l] += cm * cl;
        }
      }
    };
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        for (int k = j + 1; k < n_; ++k) {
          std::vector<double> acc(n_, 0.0);
          std::vector<Rational> acc_exact(exact_ ? n_ : 0);
          auto* ep = exact_ ? &acc_exact : nullptr;
          add_nested(i, j, k, acc, ep);
          add_nested(j, k, i, acc, ep);
          add_nested(k, i, j, acc, ep);
          for (int l = 0; l < n_; ++l) {
            const double mag = exact_ ? std::abs(acc_exact[l].to_double()) : std::abs(acc[l]);
            const bool bad = exact_ ? !acc_exact[l].is_zero() : mag > kStructTol;
            if (bad && mag >= r.worst_violation) {
              r.worst_violation = std::max(mag, r.worst_violation);
              r.where = {i + 1, j + 1, k + 1};
              r.pass = false;
            }
          }
        }
      }
    }
    rep.entries.push_back(r);
  }

  // grading: [V^a, V^b] subset V^{a+b}, zero past the step
  {
    AxiomResult r;
    r.axiom = "grading";
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const int target = layer_of(i) + layer_of(j);
        for (const auto& [k, c] : basis_bracket(i, j)) {
          const bool ok = target <= step() && layer_of(k) == target;
          if (!ok && std::abs(c) > r.worst_violation) {
            r.worst_violation = std::abs(c);
            r.where = {i + 1, j + 1, k + 1};
          }
        }
      }
    }
    r.pass = exact_ ? r.worst_violation == 0.0 : r.worst_violation <= kStructTol;
    rep.entries.push_back(r);
  }

  // generation: [V^1, V^{l-1}] spans V^l
  {
    AxiomResult r;
    r.axiom = "generation";
    for (int l = 2; l <= step(); ++l) {
      const int n1 = layer_dim(1);
      const int nprev = layer_dim(l - 1);
      Mat m(layer_dim(l), n1 * nprev);
      m.setZero();
      int col = 0;
      for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < nprev; ++b, ++col) {
          const int bi = layer_offset(l - 1) + b;
          for (const auto& [k, c] : basis_bracket(a, bi)) {
            if (layer_of(k) == l) m(k - layer_offset(l), col) = c;
          }
        }
      }
      const int rank = numeric_rank(m);
      if (rank < layer_dim(l)) {
        r.pass = false;
        r.worst_violation = std::max(r.worst_violation, double(layer_dim(l) - rank));
        r.where = {l, 0, 0};
        r.detail = "layer " + std::to_string(l) + " not generated (rank " + std::to_string(rank) +
                   " of " + std::to_string(layer_dim(l)) + ")";
      }
    }
    rep.entries.push_back(r);
  }

  return rep;
}

AlgebraPtr from_spec_unchecked(AlgebraSpec spec) {
  return std::make_shared<GradedAlgebra>(std::move(spec));
}

AlgebraPtr custom(AlgebraSpec spec) {
  auto a = std::make_shared<GradedAlgebra>(std::move(spec));
  auto rep = a->validate();
  if (!rep.all_pass()) throw ValidationError("algebra spec failed validation:\n" + rep.summary(), rep);
  a->set_name("custom");
  return a;
}

AlgebraPtr heisenberg(int m) {
  if (m < 1) throw UsageError("heisenberg: m must be >= 1");
  AlgebraSpec s;
  s.step = 2;
  s.layer_dims = {2 * m, 1};
  for (int i = 0; i < m; ++i) {
    s.brackets.push_back({i, m + i, {{2 * m, Coeff(Rational(1))}}});
    s.labels.push_back("e" + std::to_string(i + 1));
  }
  for (int i = 0; i < m; ++i) s.labels.push_back("f" + std::to_string(i + 1));
  s.labels.push_back("g");
  auto a = std::make_shared<GradedAlgebra>(std::move(s));
  a->set_name("heisenberg(" + std::to_string(m) + ")");
  return a;
}

AlgebraPtr engel() {
  AlgebraSpec s;
  s.step = 3;
  s.layer_dims = {2, 1, 1};
  s.brackets.push_back({0, 1, {{2, Coeff(Rational(1))}}});
  s.brackets.push_back({0, 2, {{3, Coeff(Rational(1))}}});
  auto a = std::make_shared<GradedAlgebra>(std::move(s));
  a->set_name("engel");
  return a;
}

AlgebraPtr free_carnot(int k, int r) {
  if (k < 2) throw UsageError("free_carnot: need k >= 2 generators");
  if (r < 1 || r > 3) throw UnsupportedError("free_carnot: step must be in {1,2,3}");

  AlgebraSpec s;
  s.step = r;
  s.layer_dims = {k};
  // layer-2 basis: pairs (p,q), p < q, lexicographic
  std::map<std::pair<int, int>, int> pair_index;
  if (r >= 2) {
    int idx = k;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) pair_index[{p, q}] = idx++;
    s.layer_dims.push_back(k * (k - 1) / 2);
  }
  // layer-3 basis: [e_a, [e_p, e_q]] with p < q and a >= p
  std::map<std::array<int, 3>, int> triple_index;
  if (r >= 3) {
    int idx = k + k * (k - 1) / 2;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q)
        for (int a = p; a < k; ++a) triple_index[{a, p, q}] = idx++;
    s.layer_dims.push_back((k * k * k - k) / 3);
  }

  if (r >= 2) {
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q)
        s.brackets.push_back({p, q, {{pair_index[{p, q}], Coeff(Rational(1))}}});
  }
  if (r >= 3) {
    for (const auto& [pq, e2] : pair_index) {
      const auto [p, q] = pq;
      for (int a = 0; a < k; ++a) {
        BracketEntry e{a, e2, {}};
        if (a >= p) {
          e.terms.emplace_back(triple_index[{a, p, q}], Coeff(Rational(1)));
        } else {
          // a < p < q: Jacobi rewrite [a,[p,q]] = [p,[a,q]] - [q,[a,p]]
          e.terms.emplace_back(triple_index[{p, a, q}], Coeff(Rational(1)));
          e.terms.emplace_back(triple_index[{q, a, p}], Coeff(Rational(-1)));
        }
        s.brackets.push_back(std::move(e));
      }
    }
  }
  auto a = std::make_shared<GradedAlgebra>(std::move(s));
  a->set_name("free(" + std::to_string(k) + "," + std::to_string(r) + ")");
  return a;
}

AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
  if (x.algebra != y.algebra) throw UsageError("bracket: operands from different algebras");
  return {x.algebra, x.algebra->bracket(x.coords, y.coords)};
}

AlgebraVector iterated_bracket(const AlgebraVector& e, const AlgebraVector& f, int m) {
  if (e.algebra != f.algebra) throw UsageError("iterated_bracket: operands from different algebras");
  return {e.algebra, e.algebra->iterated_bracket(e.coords, f.coords, m)};
}

GeneratedSubalgebra subalgebra_generated(const AlgebraPtr& a, const std::vector<Vec>& W) {
  if (W.empty()) throw UsageError("subalgebra_generated: empty generator set");
  const int n = a->dim();
  const int n1 = a->layer_dim(1);
  Mat w(n, static_cast<int>(W.size()));
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (W[i].size() != n) throw UsageError("subalgebra_generated: wrong coordinate length");
    const double tail = W[i].size() > n1 ? W[i].tail(n - n1).norm() : 0.0;
    if (tail > 1e-9 * std::max(1.0, W[i].norm()))
      throw UsageError("subalgebra_generated: generators must lie in V1");
    w.col(static_cast<int>(i)) = W[i];
  }

  std::vector<Mat> layers;
  layers.push_back(column_span(w));
  while (static_cast<int>(layers.size()) < a->step()) {
    const Mat& prev = layers.back();
    Mat cand(n, layers[0].cols() * prev.cols());
    int col = 0;
    for (int i = 0; i < layers[0].cols(); ++i)
      for (int j = 0; j < prev.cols(); ++j, ++col)
        cand.col(col) = a->bracket(layers[0].col(i), prev.col(j));
    Mat span = column_span(cand);
    if (span.cols() == 0) break;
    layers.push_back(span);
  }

  int nsub = 0;
  for (const auto& l : layers) nsub += static_cast<int>(l.cols());
  Mat embed(n, nsub);
  int off = 0;
  AlgebraSpec spec;
  spec.step = static_cast<int>(layers.size());
  for (const auto& l : layers) {
    spec.layer_dims.push_back(static_cast<int>(l.cols()));
    embed.middleCols(off, static_cast<int>(l.cols())) = l;
    off += static_cast<int>(l.cols());
  }

  // structure constants by orthogonal projection (the span is bracket-closed)
  for (int i = 0; i < nsub; ++i) {
    for (int j = i + 1; j < nsub; ++j) {
      const Vec br = a->bracket(embed.col(i), embed.col(j));
      const Vec coords = embed.transpose() * br;
      BracketEntry e{i, j, {}};
      for (int k = 0; k < nsub; ++k) {
        if (std::abs(coords(k)) > 1e-13) {
          if (auto rat = snap_rational(coords(k)))
            e.terms.emplace_back(k, Coeff(*rat));
          else
            e.terms.emplace_back(k, Coeff(coords(k)));
        }
      }
      if (!e.terms.empty()) spec.brackets.push_back(std::move(e));
    }
  }
  auto sub = std::make_shared<GradedAlgebra>(std::move(spec));
  sub->set_name("subalgebra of " + a->name());
  return {sub, embed};
}

}  // namespace subcarnot
