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

#include "subcarnot/classify.hpp"

#include <cmath>

namespace subcarnot {

SpanningSubspace spanning_subspace(const ControlGrid& grid, double tol) {
  const auto& a = *grid.algebra;
  const int n1 = a.layer_dim(1);
  const Mat nodes = grid.gamma1_nodes();
  SpanningSubspace out;
  const double maxabs = nodes.cwiseAbs().maxCoeff();
  if (maxabs == 0.0) {
    out.W = Mat(n1, 0);
    return out;
  }
  Eigen::BDCSVD<Mat> svd(nodes, Eigen::ComputeFullU);
  const Vec sv = svd.singularValues();
  const double smax = sv(0);
  int dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++dim;
  // safety: every sample must actually lie in span(W)
  for (; dim < n1; ++dim) {
    const Mat W = svd.matrixU().leftCols(dim);
    const double resid = (nodes - W * (W.transpose() * nodes)).cwiseAbs().maxCoeff();
    if (resid <= 1e-8 * maxabs) break;
  }
  out.dim = dim;
  out.W = svd.matrixU().leftCols(dim);
  return out;
}

Rank2Result rank2_classify(const AlgebraPtr& a) {
  if (!a) throw UsageError("rank2_classify: no algebra");
  if (a->layer_dim(1) != 2) throw UsageError("rank2_classify: needs a rank-2 algebra");
  Rank2Result out;
  if (a->step() <= 1) {
    out.type = Rank2Type::step1;
    return out;
  }
  if (a->step() == 2) {
    out.type = Rank2Type::step2;
    return out;
  }
  const int n2 = a->layer_dim(2), n3 = a->layer_dim(3);
  if (n3 >= 2) {
    out.type = Rank2Type::free_type;
    return out;
  }
  out.type = Rank2Type::engel_type;
  // singular direction: ker(v -> ad(v) : V2 -> V3)
  Mat M(n3 * n2, 2);
  for (int i = 0; i < 2; ++i) {
    Vec ei = Vec::Zero(a->dim());
    ei(i) = 1.0;
    for (int b = 0; b < n2; ++b) {
      Vec eb = Vec::Zero(a->dim());
      eb(a->layer_offset(2) + b) = 1.0;
      M.block(b * n3, i, n3, 1) = a->layer_block(a->bracket(ei, eb), 3);
    }
  }
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  Vec v = svd.matrixV().col(1);
  int imax = 0;
  if (std::abs(v(1)) > std::abs(v(0))) imax = 1;
  if (v(imax) < 0.0) v = -v;
  out.direction = v;
  return out;
}

Vec multiplier_extend(const AlgebraPtr& a, const GeneratedSubalgebra& sub, const Vec& mu,
                      const Vec& nu) {
  if (!a || !sub.algebra) throw UsageError("multiplier_extend: missing algebra");
  const auto& s = *sub.algebra;
  if (sub.embedding.rows() != a->dim() || sub.embedding.cols() != s.dim())
    throw UsageError("multiplier_extend: embedding shape mismatch");
  if (mu.size() != s.layer_dim(2) || nu.size() != s.layer_dim(3))
    throw UsageError("multiplier_extend: block sizes must match the subalgebra layers");
  Vec lam_sub = Vec::Zero(s.dim());
  if (s.step() >= 2) lam_sub.segment(s.layer_offset(2), s.layer_dim(2)) = mu;
  if (s.step() >= 3) lam_sub.segment(s.layer_offset(3), s.layer_dim(3)) = nu;
  return sub.embedding * lam_sub;
}

namespace {

std::vector<int> dims_of(const GradedAlgebra& a) {
  std::vector<int> d;
  for (int i = 1; i <= a.num_layers(); ++i) d.push_back(a.layer_dim(i));
  return d;
}

/// Goh => confinement invariant: a passing Goh multiplier must make W
/// isotropic for lambda3 [w, [a,b]].
void confinement_note(const AlgebraPtr& a, const ControlGrid& grid, const EndpointJet& jet,
                      const SpanningSubspace& sp, ReductionStage& stage) {
  if (a->step() < 3) return;
  const int n1 = a->layer_dim(1);
  for (const Vec& lam : find_abnormal(jet)) {
    GohResult g;
    try {
      g = goh_check(grid, lam);
    } catch (const UsageError&) {
      continue;
    }
    if (!g.pass || a->layer_block(lam, 3).norm() <= 1e-12) continue;
    double worst = 0.0;
    for (int c = 0; c < sp.dim; ++c) {
      Vec w = Vec::Zero(a->dim());
      w.head(n1) = sp.W.col(c);
      for (int p = 0; p < n1; ++p)
        for (int q = p + 1; q < n1; ++q) {
          Vec ep = Vec::Zero(a->dim()), eq = Vec::Zero(a->dim());
          ep(p) = 1.0;
          eq(q) = 1.0;
          worst = std::max(worst, std::abs(lam.dot(a->bracket(w, a->bracket(ep, eq)))) / lam.norm());
        }
    }
    if (worst > 1e-8) {
      stage.note = "goh-confinement violated (tolerance issue)";
    } else if (sp.dim == n1) {
      stage.note = "contradiction candidate: spanning curve with a passing Goh multiplier";
    }
  }
}

Vec classify_rec(const AlgebraPtr& a, const ControlGrid& grid, ReductionChain& chain, int depth) {
  EndpointJet jet = endpoint_jacobian(grid);
  const CorankInfo ci = corank(jet);
  const SpanningSubspace sp = spanning_subspace(grid);
  chain.stages.push_back(ReductionStage{a, dims_of(*a), sp.W, ci.corank, ""});
  const std::size_t stage_idx = chain.stages.size() - 1;
  const Vec zero = Vec::Zero(a->dim());

  if (ci.corank == 0) {
    chain.terminal = depth == 0 ? "regular" : "regular-in-subgroup";
    if (grid.segments() >= 2) return find_normal(grid).lambda;
    return zero;
  }

  confinement_note(a, grid, jet, sp, chain.stages[stage_idx]);

  if (sp.dim <= 1) {
    // line (or point) through the identity: zero multiplier certificate
    chain.terminal = "normal-by-line";
    return zero;
  }

  if (sp.dim < a->layer_dim(1)) {
    std::vector<Vec> W;
    for (int c = 0; c < sp.dim; ++c) {
      Vec w = Vec::Zero(a->dim());
      w.head(a->layer_dim(1)) = sp.W.col(c);
      W.push_back(std::move(w));
    }
    const GeneratedSubalgebra sub = subalgebra_generated(a, W);
    const auto& s = *sub.algebra;
    const Mat E1 = sub.embedding.block(0, 0, a->layer_dim(1), s.layer_dim(1));
    const ControlGrid gsub = make_grid(sub.algebra, Mat(E1.transpose() * grid.u));
    const Vec lam_sub = classify_rec(sub.algebra, gsub, chain, depth + 1);
    const Vec mu = s.step() >= 2 ? Vec(lam_sub.segment(s.layer_offset(2), s.layer_dim(2)))
                                 : Vec(Vec::Zero(0));
    const Vec nu = s.step() >= 3 ? Vec(lam_sub.segment(s.layer_offset(3), s.layer_dim(3)))
                                 : Vec(Vec::Zero(0));
    return multiplier_extend(a, sub, mu, nu);
  }

  // the curve spans V1 of the current algebra
  if (a->step() <= 2) {
    if (grid.segments() >= 2) {
      const NormalFit fit = find_normal(grid);
      if (fit.residual <= 1e-6) {
        chain.terminal = "normal-by-step2";
        return fit.lambda;
      }
    }
    chain.terminal = "inconclusive";
    return zero;
  }

  if (a->layer_dim(1) == 2) {
    const Rank2Result r2 = rank2_classify(a);
    chain.terminal =
        r2.type == Rank2Type::engel_type ? "rank2-engel-type" : "rank2-free-type";
    if (grid.segments() >= 2) {
      const NormalFit fit = find_normal(grid);
      if (fit.residual <= 1e-6) return fit.lambda;
    }
    return zero;
  }

  chain.terminal = "inconclusive";
  return zero;
}

}  // namespace

std::pair<ExtremalReport, ReductionChain> classify_curve(const AlgebraPtr& a,
                                                         const ControlGrid& grid) {
  if (!a) throw UsageError("classify_curve: no algebra");
  if (grid.algebra != a) throw UsageError("classify_curve: grid algebra mismatch");
  if (grid.basepoint.coords.norm() > 1e-12)
    throw UsageError("classify_curve: curve must be based at the identity");
  if (grid.segments() < 2) throw UsageError("classify_curve: need at least two segments");

  ControlGrid g = grid;
  if (energy_length(g).length > 0.0) g = reparametrize_constant_speed(g);

  ExtremalReport rep = analyze_extremal(g);
  ReductionChain chain;
  chain.multiplier = classify_rec(a, g, chain, 0);
  chain.certificate_residual = normal_residual(g, chain.multiplier);
  chain.verdict = chain.certificate_residual <= 1e-5 ? "normal" : "inconclusive";
  if (chain.terminal == "inconclusive") chain.verdict = "inconclusive";
  return {std::move(rep), std::move(chain)};
}

}  // namespace subcarnot
