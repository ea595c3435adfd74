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

#include "subcarnot/extremals.hpp"

#include <cmath>

namespace subcarnot {

namespace {

Vec pad1(const GradedAlgebra& a, const Vec& block) {
  Vec out = Vec::Zero(a.dim());
  out.head(a.layer_dim(1)) = block;
  return out;
}

Vec unit_or_throw(const Vec& lambda, const char* who) {
  const double n = lambda.norm();
  if (n <= 0.0) throw UsageError(std::string(who) + ": zero multiplier");
  return lambda / n;
}

}  // namespace

std::vector<Vec> find_abnormal(const EndpointJet& jet) {
  const int n = static_cast<int>(jet.jacobian.rows());
  Eigen::BDCSVD<Mat> svd(jet.jacobian, Eigen::ComputeFullU);
  const Vec sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kEpsRank * smax) ++rank;
  std::vector<Vec> out;
  for (int i = rank; i < n; ++i) out.push_back(svd.matrixU().col(i));
  return out;
}

namespace {

/// Discretized stationarity system against interior hat variations:
/// b + G lambda = 0 in the dual of H^1_0, measured in the K^{-1} norm with
/// K the hat stiffness Gram (tridiag(-1,2,-1)/dt per coordinate).
struct NormalSystem {
  int n1 = 0, N = 0, interior = 0, nmul = 0;
  Vec b;
  Mat G;
  Eigen::LLT<Mat> llt;  // of the scalar tridiagonal stiffness
  double speed = 0.0;

  explicit NormalSystem(const ControlGrid& grid) {
    const auto& a = *grid.algebra;
    n1 = a.layer_dim(1);
    N = grid.segments();
    if (N < 2) throw UsageError("find_normal: need at least two segments");
    interior = (N - 1) * n1;
    nmul = a.dim() - n1;  // V2 + V3 coordinates
    b = energy_gradient_row(grid).head(interior);
    G.resize(interior, nmul);
    for (int m = 0; m < nmul; ++m) {
      Vec nu = Vec::Zero(a.dim());
      nu(n1 + m) = 1.0;
      G.col(m) = differential_adjoint(grid, nu).head(interior);
    }
    Mat T = Mat::Zero(N - 1, N - 1);
    const double idt = static_cast<double>(N);
    for (int i = 0; i < N - 1; ++i) {
      T(i, i) = 2.0 * idt;
      if (i + 1 < N - 1) T(i, i + 1) = T(i + 1, i) = -idt;
    }
    llt.compute(T);
    speed = std::sqrt(2.0 * energy_length(grid).energy);
  }

  Vec weight_solve(const Vec& r) const {
    Mat rm(n1, N - 1);
    for (int k = 0; k < N - 1; ++k) rm.col(k) = r.segment(k * n1, n1);
    Mat sm = llt.solve(rm.transpose()).transpose();
    Vec out(interior);
    for (int k = 0; k < N - 1; ++k) out.segment(k * n1, n1) = sm.col(k);
    return out;
  }

  double residual_of(const Vec& lam) const {
    const Vec r = nmul > 0 ? Vec(b + G * lam) : b;
    const double dual2 = r.dot(weight_solve(r));
    const double d = std::sqrt(std::max(0.0, dual2));
    return speed > 0.0 ? d / speed : d;
  }
};

}  // namespace

NormalFit find_normal(const ControlGrid& grid) {
  const auto& a = *grid.algebra;
  const NormalSystem sys(grid);
  Vec lam = Vec::Zero(sys.nmul);
  if (sys.nmul > 0) {
    Mat KiG(sys.interior, sys.nmul);
    for (int m = 0; m < sys.nmul; ++m) KiG.col(m) = sys.weight_solve(sys.G.col(m));
    const Mat A = sys.G.transpose() * KiG;  // G^T K^{-1} G
    const Vec rhs = -sys.G.transpose() * sys.weight_solve(sys.b);
    Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    lam = svd.solve(rhs);
  }
  NormalFit fit;
  fit.lambda = Vec::Zero(a.dim());
  fit.lambda.tail(sys.nmul) = lam;
  fit.residual = sys.residual_of(lam);
  return fit;
}

double normal_residual(const ControlGrid& grid, const Vec& lambda) {
  const auto& a = *grid.algebra;
  if (lambda.size() != a.dim()) throw UsageError("normal_residual: lambda must have length n");
  const NormalSystem sys(grid);
  return sys.residual_of(lambda.tail(sys.nmul));
}

GohResult goh_check(const ControlGrid& grid, const Vec& lambda) {
  const auto& a = *grid.algebra;
  if (lambda.size() != a.dim()) throw UsageError("goh_check: multiplier must have length n");
  const Vec lam = unit_or_throw(lambda, "goh_check");
  const int n1 = a.layer_dim(1);
  GohResult res;
  if (a.step() >= 2) res.violation = a.layer_block(lam, 2).norm();
  if (a.step() >= 3) {
    const Mat nodes = grid.gamma1_nodes();
    for (int j = 0; j <= grid.segments(); ++j) {
      const Vec g = pad1(a, nodes.col(j));
      for (int p = 0; p < n1; ++p)
        for (int q = p + 1; q < n1; ++q) {
          Vec ep = Vec::Zero(a.dim()), eq = Vec::Zero(a.dim());
          ep(p) = 1.0;
          eq(q) = 1.0;
          const double v = std::abs(lam.dot(a.bracket(g, a.bracket(ep, eq))));
          res.violation = std::max(res.violation, v);
        }
    }
  }
  const Mat nodes = grid.gamma1_nodes();
  const double scale = std::max(1.0, nodes.colwise().norm().maxCoeff());
  res.pass = res.violation <= 1e-9 * scale;

  double smin = grid.u.col(0).norm(), smax = smin;
  for (int j = 1; j < grid.segments(); ++j) {
    const double s = grid.u.col(j).norm();
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  res.nonconstant_speed = (smax - smin) > 1e-6 * std::max(1.0, smax);
  return res;
}

std::vector<Vec> goh_subspace_test(const AlgebraPtr& a, const std::vector<Vec>& W) {
  if (!a) throw UsageError("goh_subspace_test: no algebra");
  if (a->step() != 3) throw UsageError("goh_subspace_test: needs a step-3 algebra");
  const int n1 = a->layer_dim(1), n2 = a->layer_dim(2), n3 = a->layer_dim(3);
  if (W.empty()) throw UsageError("goh_subspace_test: empty generating set");
  Mat cols(n3, static_cast<int>(W.size()) * n2);
  int c = 0;
  for (const Vec& w : W) {
    if (w.size() != n1) throw UsageError("goh_subspace_test: W vectors must have length n1");
    Vec wp = Vec::Zero(a->dim());
    wp.head(n1) = w;
    for (int b = 0; b < n2; ++b) {
      Vec eb = Vec::Zero(a->dim());
      eb(a->layer_offset(2) + b) = 1.0;
      cols.col(c++) = a->layer_block(a->bracket(wp, eb), 3);
    }
  }
  Eigen::BDCSVD<Mat> svd(cols, Eigen::ComputeFullU);
  const Vec sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * smax) ++rank;
  std::vector<Vec> out;
  for (int i = rank; i < n3; ++i) {
    Vec lam = Vec::Zero(a->dim());
    lam.tail(n3) = svd.matrixU().col(i);
    out.push_back(std::move(lam));
  }
  return out;
}

LegendreResult legendre_check(const ControlGrid& grid, const Vec& lambda) {
  const auto& a = *grid.algebra;
  if (lambda.size() != a.dim()) throw UsageError("legendre_check: multiplier must have length n");
  const Vec lam = unit_or_throw(lambda, "legendre_check");
  const int n1 = a.layer_dim(1);
  const int N = grid.segments();
  LegendreResult res;
  res.profile = Vec::Zero(N);
  if (a.step() < 3) {
    // the form vanishes identically below step 3
    res.pass = true;
    res.sign = +1;
    return res;
  }

  std::vector<Mat> forms(N);
  double scale = 1.0;
  for (int j = 0; j < N; ++j) {
    const Vec u = pad1(a, grid.u.col(j));
    Mat Q(n1, n1);
    for (int p = 0; p < n1; ++p)
      for (int q = p; q < n1; ++q) {
        Vec ep = Vec::Zero(a.dim()), eq = Vec::Zero(a.dim());
        ep(p) = 1.0;
        eq(q) = 1.0;
        const double v =
            0.5 * (lam.dot(a.bracket(ep, a.bracket(eq, u))) + lam.dot(a.bracket(eq, a.bracket(ep, u))));
        Q(p, q) = Q(q, p) = v;
      }
    scale = std::max(scale, Q.cwiseAbs().maxCoeff());
    forms[j] = std::move(Q);
  }

  const double tol = 1e-9 * scale;
  double best_min[2] = {0.0, 0.0};  // index 0: sign +1, 1: sign -1
  Vec profiles[2] = {Vec::Zero(N), Vec::Zero(N)};
  for (int s = 0; s < 2; ++s) {
    const double sgn = s == 0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (int j = 0; j < N; ++j) {
      Eigen::SelfAdjointEigenSolver<Mat> es(sgn * forms[j], Eigen::EigenvaluesOnly);
      profiles[s](j) = es.eigenvalues()(0);
      worst = std::min(worst, profiles[s](j));
    }
    best_min[s] = worst;
  }
  const int pick = best_min[0] >= best_min[1] ? 0 : 1;
  res.sign = pick == 0 ? +1 : -1;
  res.profile = profiles[pick];
  res.pass = best_min[pick] >= -tol;
  return res;
}

int morse_index(EndpointJet& jet, const Vec& lambda) {
  const Mat& K = endpoint_kernel(jet);
  if (K.cols() == 0) return 0;
  const Mat S = hessian_form_matrix(jet.base, lambda);
  const Mat M = K.transpose() * S * K;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  int idx = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) < -1e-9 * scale) ++idx;
  return idx;
}

ExtremalReport analyze_extremal(const ControlGrid& grid) {
  ExtremalReport rep;
  EndpointJet jet = endpoint_jacobian(grid);
  const CorankInfo ci = corank(jet);
  rep.corank = ci.corank;
  rep.corank_augmented = ci.corank_augmented;
  rep.singular = ci.corank > 0;
  if (jet.near_singular) rep.notes.push_back("near-singular: singular values in the warning band");

  const NormalFit fit = find_normal(grid);
  rep.normal_multiplier = fit.lambda;
  rep.normal_residual = fit.residual;

  rep.abnormal_basis = find_abnormal(jet);
  if (!rep.abnormal_basis.empty()) {
    const Vec* best = nullptr;
    GohResult best_goh;
    for (const Vec& lam : rep.abnormal_basis) {
      const GohResult g = goh_check(grid, lam);
      if (!best || g.violation < best_goh.violation) {
        best = &lam;
        best_goh = g;
      }
    }
    rep.goh_pass = best_goh.pass;
    rep.goh_violation = best_goh.violation;
    if (best_goh.nonconstant_speed)
      rep.notes.push_back("goh/legendre evaluated on a non-constant-speed curve");
    const LegendreResult leg = legendre_check(grid, *best);
    rep.legendre_pass = leg.pass;
    rep.legendre_sign = leg.sign;
    rep.legendre_profile = leg.profile;
    rep.morse = morse_index(jet, static_cast<double>(leg.sign) * (*best / best->norm()));
  }
  return rep;
}

FlowResult hamiltonian_flow(const AlgebraPtr& a, const GroupPoint& start, const Vec& lambda0,
                            double T, int steps) {
  if (!a) throw UsageError("hamiltonian_flow: no algebra");
  if (a->step() > 3) throw UnsupportedError("hamiltonian_flow: step > 3 not supported");
  if (lambda0.size() != a->dim()) throw UsageError("hamiltonian_flow: lambda0 must have length n");
  if (steps < 1) throw UsageError("hamiltonian_flow: need at least one step");
  if (!(T > 0.0)) throw UsageError("hamiltonian_flow: need T > 0");
  const int n = a->dim();
  const int n1 = a->layer_dim(1);

  // state: (x, h) with frame momenta h_k = lambda . X_k(x)
  auto deriv = [&](const Vec& x, const Vec& h, Vec& xdot, Vec& hdot) {
    xdot.setZero(n);
    hdot.setZero(n);
    GroupPoint p{a, x};
    for (int i = 0; i < n1; ++i) xdot += h(i) * left_frame(p, i);
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n1; ++i) {
        if (h(i) == 0.0) continue;
        for (const auto& [m, c] : a->basis_bracket(k, i)) acc += h(i) * c * h(m);
      }
      hdot(k) = acc;
    }
  };

  FlowResult res;
  res.states.resize(n, steps + 1);
  res.covectors.resize(n, steps + 1);
  res.momenta.resize(n, steps + 1);
  res.hamiltonian.resize(steps + 1);

  Vec x = start.coords;
  Vec h = left_frame_matrix(start).transpose() * lambda0;
  const double dt = T / steps;
  Vec k1x(n), k1h(n), k2x(n), k2h(n), k3x(n), k3h(n), k4x(n), k4h(n);
  for (int j = 0; j <= steps; ++j) {
    res.states.col(j) = x;
    res.momenta.col(j) = h;
    res.covectors.col(j) =
        left_frame_matrix(GroupPoint{a, x}).transpose().partialPivLu().solve(h);
    res.hamiltonian(j) = 0.5 * h.head(n1).squaredNorm();
    if (j == steps) break;
    deriv(x, h, k1x, k1h);
    deriv(x + 0.5 * dt * k1x, h + 0.5 * dt * k1h, k2x, k2h);
    deriv(x + 0.5 * dt * k2x, h + 0.5 * dt * k2h, k3x, k3h);
    deriv(x + dt * k3x, h + dt * k3h, k4x, k4h);
    x += (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    h += (dt / 6.0) * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
  }

  const double h0 = res.hamiltonian(0);
  for (int j = 0; j <= steps; ++j)
    res.energy_drift = std::max(res.energy_drift, std::abs(res.hamiltonian(j) - h0));
  res.energy_drift /= std::max(1.0, h0);

  // repackage as a horizontal path on [0,1]
  ControlGrid grid = grid_from_nodes(a, res.states.topRows(n1));
  grid.basepoint = start;
  res.path = HorizontalPath{std::move(grid), res.states};
  return res;
}

}  // namespace subcarnot
