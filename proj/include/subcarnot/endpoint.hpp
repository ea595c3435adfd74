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

#ifndef SUBCARNOT_ENDPOINT_HPP
#define SUBCARNOT_ENDPOINT_HPP

#include "subcarnot/curves.hpp"

namespace subcarnot {

/// Relative singular-value cutoff for rank decisions.
inline constexpr double kEpsRank = 1e-9;
/// Singular values in [kEpsRank, kNearSingularBand) * sigma_max flag the jet
/// as near-singular.
inline constexpr double kNearSingularBand = 1e-6;

/// First-layer variation: node values phi(t_j), n1 x (N+1), phi(0) = 0.
/// Dof coordinates flatten columns 1..N (hat-function basis).
struct Variation {
  Mat phi;

  bool terminal_zero(double tol = 1e-12) const {
    return phi.col(phi.cols() - 1).norm() <= tol;
  }
};

Vec variation_dofs(const Variation& v);
Variation variation_from_dofs(const ControlGrid& grid, const Vec& dofs);

/// End-point value, analytic Jacobian and its SVD data for one base curve.
struct EndpointJet {
  ControlGrid base;
  Vec value;            // endpoint in exponential coordinates, length n
  Mat jacobian;         // n x (N*n1)
  Vec singular_values;  // of the jacobian
  Mat kernel;           // dofs x kernel_dim, orthonormal; empty until computed
  bool near_singular = false;

  int dofs() const { return static_cast<int>(jacobian.cols()); }
};

/// exp^{-1} of the lifted curve's terminal point (based curves only).
Vec endpoint_value(const ControlGrid& grid);

/// Analytic differential dE(phi) = (phi(1), dF2(phi), dF3(phi)), all
/// integrals in per-segment closed form.
Vec apply_differential(const ControlGrid& grid, const Variation& phi);

/// J^T nu as a dof vector, assembled per segment (adjoint of
/// apply_differential; used row-wise to build the Jacobian and by the
/// solver's gradient).
Vec differential_adjoint(const ControlGrid& grid, const Vec& nu);

/// dE(phi) for terminal-zero variations in the reduced form
/// (0, int [phi, g'], int [g - g(1)/2, [phi, g']]).
Vec differential_terminal_zero(const ControlGrid& grid, const Variation& phi);

/// Energy differential row dL(phi) = int <gdot, phidot> as a dof vector.
Vec energy_gradient_row(const ControlGrid& grid);

EndpointJet endpoint_jacobian(const ControlGrid& grid);

/// Orthonormal kernel basis (columns, dof coordinates); cached on the jet.
const Mat& endpoint_kernel(EndpointJet& jet);

/// Quadratic intrinsic Hessian d2E(phi,phi); no kernel membership check.
Vec hessian_quadratic(const ControlGrid& grid, const Variation& phi);

/// Polarized symmetric Hessian value on kernel directions; throws UsageError
/// when phi or psi is not in the kernel (residual > 1e-6).
Vec endpoint_hessian(const EndpointJet& jet, const Variation& phi, const Variation& psi);

struct CorankInfo {
  int corank = 0;            // n - rank(dE)
  int corank_augmented = 0;  // with the energy differential row appended
  int rank = 0;
  int kernel_dim = 0;
};
CorankInfo corank(const EndpointJet& jet);

/// Dof-space matrix of the scalar form phi -> lambda . d2E(phi, phi)
/// (lambda padded to length n; only the V2/V3 blocks enter).
Mat hessian_form_matrix(const ControlGrid& grid, const Vec& lambda);

}  // namespace subcarnot

#endif  // SUBCARNOT_ENDPOINT_HPP
