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

#include "subcarnot/endpoint.hpp"

#include <cmath>

namespace subcarnot {

namespace {

void check_based(const ControlGrid& grid) {
  if (!grid.algebra) throw UsageError("endpoint: no algebra");
  if (grid.basepoint.coords.norm() > 1e-12)
    throw UsageError("endpoint: calculus requires a curve based at the identity");
}

void check_variation(const ControlGrid& grid, const Variation& phi) {
  const int n1 = grid.algebra->layer_dim(1);
  if (phi.phi.rows() != n1 || phi.phi.cols() != grid.segments() + 1)
    throw UsageError("variation: shape must be n1 x (N+1)");
  if (phi.phi.col(0).norm() > 1e-12) throw UsageError("variation: phi(0) must vanish");
}

Vec pad1(const GradedAlgebra& a, const Vec& block) {
  Vec out = Vec::Zero(a.dim());
  out.head(a.layer_dim(1)) = block;
  return out;
}

/// Per-curve data shared by the differential/Hessian assembly loops.
struct BaseData {
  const GradedAlgebra* a;
  int N;
  double dt;
  Mat g1;       // padded gamma1 nodes, n x (N+1)
  Mat u;        // padded controls, n x N
  Vec g_final;  // padded gamma1(1)
};

BaseData base_data(const ControlGrid& grid) {
  const auto& a = *grid.algebra;
  const int N = grid.segments();
  BaseData d{&a, N, grid.dt(), Mat::Zero(a.dim(), N + 1), Mat::Zero(a.dim(), N), Vec()};
  const Mat nodes = grid.gamma1_nodes();
  d.g1.topRows(a.layer_dim(1)) = nodes;
  d.u.topRows(a.layer_dim(1)) = grid.u;
  d.g_final = d.g1.col(N);
  return d;
}

}  // namespace

Vec variation_dofs(const Variation& v) {
  const int n1 = static_cast<int>(v.phi.rows());
  const int N = static_cast<int>(v.phi.cols()) - 1;
  Vec out(n1 * N);
  for (int k = 1; k <= N; ++k) out.segment((k - 1) * n1, n1) = v.phi.col(k);
  return out;
}

Variation variation_from_dofs(const ControlGrid& grid, const Vec& dofs) {
  const int n1 = grid.algebra->layer_dim(1);
  const int N = grid.segments();
  if (dofs.size() != static_cast<long>(n1) * N) throw UsageError("variation_from_dofs: bad size");
  Variation v{Mat::Zero(n1, N + 1)};
  for (int k = 1; k <= N; ++k) v.phi.col(k) = dofs.segment((k - 1) * n1, n1);
  return v;
}

Vec endpoint_value(const ControlGrid& grid) {
  check_based(grid);
  return lift(grid).endpoint().coords;
}

Vec apply_differential(const ControlGrid& grid, const Variation& phi) {
  check_based(grid);
  check_variation(grid, phi);
  const BaseData d = base_data(grid);
  const auto& a = *d.a;
  const double dt = d.dt;

  Vec I2 = Vec::Zero(a.dim()), I3 = Vec::Zero(a.dim()), J2 = Vec::Zero(a.dim());
  for (int j = 0; j < d.N; ++j) {
    const Vec f = pad1(a, phi.phi.col(j));
    const Vec w = pad1(a, (phi.phi.col(j + 1) - phi.phi.col(j)) / dt);
    const Vec u = d.u.col(j);
    const Vec g = d.g1.col(j);
    if (a.step() >= 2) {
      const Vec fu = a.bracket(f, u);
      const Vec wu = a.bracket(w, u);
      I2 += dt * fu + 0.5 * dt * dt * wu;
      if (a.step() >= 3) {
        I3 += dt * a.bracket(g, fu) +
              0.5 * dt * dt * (a.bracket(g, wu) + a.bracket(u, fu)) +
              (dt * dt * dt / 3.0) * a.bracket(u, wu);
        J2 += dt * a.bracket(g, u);
      }
    }
  }

  const Vec pN = pad1(a, phi.phi.col(d.N));
  Vec out = pN;
  if (a.step() >= 2) out += I2 + 0.5 * a.bracket(d.g_final, pN);
  if (a.step() >= 3) {
    out += I3 + 0.5 * a.bracket(I2, d.g_final) + 0.25 * a.bracket(J2, pN) +
           (1.0 / 12.0) * a.bracket(d.g_final, a.bracket(d.g_final, pN));
  }
  return out;
}

Vec differential_adjoint(const ControlGrid& grid, const Vec& nu) {
  check_based(grid);
  const auto& a = *grid.algebra;
  if (nu.size() != a.dim()) throw UsageError("differential_adjoint: covector must have length n");
  const BaseData d = base_data(grid);
  const int n1 = a.layer_dim(1);
  const double dt = d.dt;

  const Mat adGT = a.step() >= 2 ? a.ad_matrix(d.g_final).transpose() : Mat();
  // Effective covector pairing with I2 = int [phi, gdot]: direct V2 part plus
  // the [I2, gamma1(1)]/2 chain into V3.
  Vec mu2 = nu;
  if (a.step() >= 3) mu2 -= 0.5 * adGT * nu;

  Mat grads = Mat::Zero(n1, d.N + 1);
  Vec J2 = Vec::Zero(a.dim());
  for (int j = 0; j < d.N; ++j) {
    const Vec u = d.u.col(j);
    const Vec g = d.g1.col(j);
    if (a.step() >= 2) {
      const Mat adUT = a.ad_matrix(u).transpose();
      const Vec q = adUT * mu2;  // pairs with f and w in int [phi, gdot]
      grads.col(j) -= 0.5 * dt * q.head(n1);
      grads.col(j + 1) -= 0.5 * dt * q.head(n1);
      if (a.step() >= 3) {
        const Vec mg = adUT * (a.ad_matrix(g).transpose() * nu);
        const Vec mu = adUT * (adUT * nu);
        grads.col(j) -= (0.5 * dt * mg + dt * dt / 6.0 * mu).head(n1);
        grads.col(j + 1) -= (0.5 * dt * mg + dt * dt / 3.0 * mu).head(n1);
        J2 += dt * a.bracket(g, u);
      }
    }
  }

  // terminal-value terms
  Vec gN = nu;
  if (a.step() >= 2) gN += 0.5 * adGT * nu;
  if (a.step() >= 3) gN += 0.25 * a.ad_matrix(J2).transpose() * nu + (1.0 / 12.0) * adGT * (adGT * nu);
  grads.col(d.N) += gN.head(n1);

  return variation_dofs(Variation{grads});
}

Vec differential_terminal_zero(const ControlGrid& grid, const Variation& phi) {
  check_based(grid);
  check_variation(grid, phi);
  if (!phi.terminal_zero(1e-12 * std::max(1.0, phi.phi.norm())))
    throw UsageError("differential_terminal_zero: phi(1) must vanish");
  const BaseData d = base_data(grid);
  const auto& a = *d.a;
  const double dt = d.dt;

  Vec out = Vec::Zero(a.dim());
  for (int j = 0; j < d.N; ++j) {
    const Vec f = pad1(a, phi.phi.col(j));
    const Vec w = pad1(a, (phi.phi.col(j + 1) - phi.phi.col(j)) / dt);
    const Vec u = d.u.col(j);
    if (a.step() < 2) continue;
    const Vec fu = a.bracket(f, u);
    const Vec wu = a.bracket(w, u);
    out += dt * fu + 0.5 * dt * dt * wu;
    if (a.step() >= 3) {
      const Vec gc = d.g1.col(j) - 0.5 * d.g_final;
      out += dt * a.bracket(gc, fu) + 0.5 * dt * dt * (a.bracket(gc, wu) + a.bracket(u, fu)) +
             (dt * dt * dt / 3.0) * a.bracket(u, wu);
    }
  }
  return out;
}

Vec energy_gradient_row(const ControlGrid& grid) {
  check_based(grid);
  const int n1 = grid.algebra->layer_dim(1);
  const int N = grid.segments();
  Mat grads = Mat::Zero(n1, N + 1);
  for (int j = 0; j < N; ++j) {
    grads.col(j) -= grid.u.col(j);
    grads.col(j + 1) += grid.u.col(j);
  }
  return variation_dofs(Variation{grads});
}

EndpointJet endpoint_jacobian(const ControlGrid& grid) {
  check_based(grid);
  const auto& a = *grid.algebra;
  const int n = a.dim();
  EndpointJet jet;
  jet.base = grid;
  jet.value = endpoint_value(grid);
  jet.jacobian.resize(n, a.layer_dim(1) * grid.segments());
  for (int r = 0; r < n; ++r) {
    Vec nu = Vec::Zero(n);
    nu(r) = 1.0;
    jet.jacobian.row(r) = differential_adjoint(grid, nu).transpose();
  }
  Eigen::JacobiSVD<Mat> svd(jet.jacobian);
  jet.singular_values = svd.singularValues();
  const double smax = jet.singular_values.size() ? jet.singular_values(0) : 0.0;
  for (int i = 0; i < jet.singular_values.size(); ++i) {
    const double s = jet.singular_values(i);
    if (s >= kEpsRank * smax && s < kNearSingularBand * smax) jet.near_singular = true;
  }
  return jet;
}

const Mat& endpoint_kernel(EndpointJet& jet) {
  if (jet.kernel.size() > 0 || jet.dofs() == 0) return jet.kernel;
  const double smax = jet.singular_values.size() ? jet.singular_values(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < jet.singular_values.size(); ++i)
    if (jet.singular_values(i) > kEpsRank * smax) ++rank;
  Eigen::BDCSVD<Mat> svd(jet.jacobian, Eigen::ComputeFullV);
  jet.kernel = svd.matrixV().rightCols(jet.dofs() - rank);
  return jet.kernel;
}

namespace {

/// lambda . (segment j contribution of d2E) for node values (f, fn).
double hessian_segment(const BaseData& d, int j, const Vec& f, const Vec& fn, const Vec& lambda) {
  const auto& a = *d.a;
  if (a.step() < 2) return 0.0;
  const double dt = d.dt;
  const Vec w = (fn - f) / dt;
  const Vec fw = a.bracket(f, w);
  double out = lambda.dot(dt * fw);
  if (a.step() >= 3) {
    const Vec u = d.u.col(j);
    const Vec fu = a.bracket(f, u);
    const Vec wu = a.bracket(w, u);
    const Vec gc = d.g1.col(j) - 0.5 * d.g_final;
    Vec q3 = dt * a.bracket(f, fu) + 0.5 * dt * dt * (a.bracket(f, wu) + a.bracket(w, fu)) +
             (dt * dt * dt / 3.0) * a.bracket(w, wu);
    q3 += dt * a.bracket(gc, fw) + 0.5 * dt * dt * a.bracket(u, fw);
    out += lambda.dot(q3);
  }
  return out;
}

}  // namespace

Vec hessian_quadratic(const ControlGrid& grid, const Variation& phi) {
  check_based(grid);
  check_variation(grid, phi);
  const BaseData d = base_data(grid);
  const auto& a = *d.a;
  const double dt = d.dt;
  Vec out = Vec::Zero(a.dim());
  for (int j = 0; j < d.N; ++j) {
    if (a.step() < 2) break;
    const Vec f = pad1(a, phi.phi.col(j));
    const Vec fn = pad1(a, phi.phi.col(j + 1));
    const Vec w = (fn - f) / dt;
    const Vec fw = a.bracket(f, w);
    out += dt * fw;
    if (a.step() >= 3) {
      const Vec u = d.u.col(j);
      const Vec fu = a.bracket(f, u);
      const Vec wu = a.bracket(w, u);
      const Vec gc = d.g1.col(j) - 0.5 * d.g_final;
      out += dt * a.bracket(f, fu) + 0.5 * dt * dt * (a.bracket(f, wu) + a.bracket(w, fu)) +
             (dt * dt * dt / 3.0) * a.bracket(w, wu);
      out += dt * a.bracket(gc, fw) + 0.5 * dt * dt * a.bracket(u, fw);
    }
  }
  return out;
}

Vec endpoint_hessian(const EndpointJet& jet, const Variation& phi, const Variation& psi) {
  const double smax = jet.singular_values.size() ? jet.singular_values(0) : 0.0;
  for (const Variation* v : {&phi, &psi}) {
    check_variation(jet.base, *v);
    const Vec dofs = variation_dofs(*v);
    const double scale = std::max(1.0, smax * dofs.norm());
    if ((jet.jacobian * dofs).norm() > 1e-6 * scale)
      throw UsageError("endpoint_hessian: variation is not in the kernel of the differential");
  }
  Variation sum{phi.phi + psi.phi}, diff{phi.phi - psi.phi};
  return 0.25 * (hessian_quadratic(jet.base, sum) - hessian_quadratic(jet.base, diff));
}

CorankInfo corank(const EndpointJet& jet) {
  const auto& a = *jet.base.algebra;
  CorankInfo info;
  const double smax = jet.singular_values.size() ? jet.singular_values(0) : 0.0;
  for (int i = 0; i < jet.singular_values.size(); ++i)
    if (jet.singular_values(i) > kEpsRank * smax) ++info.rank;
  info.corank = a.dim() - info.rank;
  info.kernel_dim = jet.dofs() - info.rank;

  Mat aug(a.dim() + 1, jet.dofs());
  aug.topRows(a.dim()) = jet.jacobian;
  aug.row(a.dim()) = energy_gradient_row(jet.base).transpose();
  Eigen::JacobiSVD<Mat> svd(aug);
  const Vec sv = svd.singularValues();
  const double smax2 = sv.size() ? sv(0) : 0.0;
  int rank2 = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kEpsRank * smax2) ++rank2;
  info.corank_augmented = a.dim() + 1 - rank2;
  return info;
}

Mat hessian_form_matrix(const ControlGrid& grid, const Vec& lambda) {
  check_based(grid);
  const auto& a = *grid.algebra;
  if (lambda.size() != a.dim()) throw UsageError("hessian_form_matrix: lambda must have length n");
  const BaseData d = base_data(grid);
  const int n1 = a.layer_dim(1);
  const int dofs = n1 * d.N;
  Mat S = Mat::Zero(dofs, dofs);
  if (a.step() < 2) return S;

  // Block-tridiagonal assembly: segment j couples nodes j and j+1; node 0 is
  // clamped. Local basis: (slot, coord) with slot 0 -> node j, slot 1 -> j+1.
  for (int j = 0; j < d.N; ++j) {
    const int local = 2 * n1;
    auto dof_index = [&](int slot, int c) {
      const int node = j + slot;
      return node == 0 ? -1 : (node - 1) * n1 + c;
    };
    for (int p = 0; p < local; ++p) {
      const int dp = dof_index(p / n1, p % n1);
      if (dp < 0) continue;
      for (int q = 0; q <= p; ++q) {
        const int dq = dof_index(q / n1, q % n1);
        if (dq < 0) continue;
        // polarization of the per-segment quadratic
        Vec fp = Vec::Zero(a.dim()), fnp = Vec::Zero(a.dim());
        Vec fq = Vec::Zero(a.dim()), fnq = Vec::Zero(a.dim());
        if (p / n1 == 0) fp(p % n1) = 1.0; else fnp(p % n1) = 1.0;
        if (q / n1 == 0) fq(q % n1) = 1.0; else fnq(q % n1) = 1.0;
        const double b = 0.25 * (hessian_segment(d, j, fp + fq, fnp + fnq, lambda) -
                                 hessian_segment(d, j, fp - fq, fnp - fnq, lambda));
        S(dp, dq) += b;
        if (dp != dq) S(dq, dp) += b;
      }
    }
  }
  return S;
}

}  // namespace subcarnot
