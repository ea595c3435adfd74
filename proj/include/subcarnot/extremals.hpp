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

#ifndef SUBCARNOT_EXTREMALS_HPP
#define SUBCARNOT_EXTREMALS_HPP

#include <vector>

#include "subcarnot/endpoint.hpp"

namespace subcarnot {

/// Orthonormal basis of abnormal multipliers: left null space of the
/// end-point differential (empty for regular curves).
std::vector<Vec> find_abnormal(const EndpointJet& jet);

/// Best-fit normal multiplier (lambda2, lambda3), padded to length n with a
/// zero first-layer block. residual is the H^1_0-dual norm of the remaining
/// first-variation functional, relative to the L^2 speed.
struct NormalFit {
  Vec lambda;
  double residual = 0.0;
};
NormalFit find_normal(const ControlGrid& grid);

/// Residual of a given multiplier in the same dual norm find_normal
/// minimizes (lambda padded to length n; first-layer block ignored).
double normal_residual(const ControlGrid& grid, const Vec& lambda);

struct GohResult {
  bool pass = false;
  double violation = 0.0;  // for the unit-normalized multiplier
  bool nonconstant_speed = false;
};
/// Goh conditions for an abnormal multiplier: the V2 block vanishes and
/// lambda3 annihilates [gamma1(t), [V1, V1]] at every node.
GohResult goh_check(const ControlGrid& grid, const Vec& lambda);

/// Multipliers (lambda3 only) annihilating [W, V2], for first-layer
/// subspaces W. Nonempty exactly when such Goh multipliers exist.
std::vector<Vec> goh_subspace_test(const AlgebraPtr& a, const std::vector<Vec>& W);

struct LegendreResult {
  bool pass = false;
  int sign = +1;    // overall multiplier sign that makes the form psd
  Vec profile;      // per-segment smallest eigenvalue of sign * Q(t)
};
/// Generalized Legendre condition: Q(t)_ab = lambda3 . [e_a,[e_b, gdot(t)]]
/// (symmetrized) must be positive semidefinite for one global sign choice.
LegendreResult legendre_check(const ControlGrid& grid, const Vec& lambda);

/// Negative eigenvalue count of lambda . Hess restricted to the kernel of
/// the end-point differential.
int morse_index(EndpointJet& jet, const Vec& lambda);

/// Everything the first- and second-order checks say about one curve.
struct ExtremalReport {
  int corank = 0;
  int corank_augmented = 0;
  std::vector<Vec> abnormal_basis;
  Vec normal_multiplier;  // padded to length n, first layer zero
  double normal_residual = 0.0;
  bool singular = false;
  bool goh_pass = false;
  double goh_violation = 0.0;  // best (smallest) over the abnormal basis
  bool legendre_pass = false;
  int legendre_sign = +1;
  Vec legendre_profile;
  int morse = 0;
  std::vector<std::string> notes;
};

/// Runs the full battery: corank, abnormal basis, Goh/Legendre on the best
/// abnormal multiplier, Morse index, and the normal least-squares fit.
ExtremalReport analyze_extremal(const ControlGrid& grid);

struct FlowResult {
  HorizontalPath path;   // states rescaled to [0,1]
  Mat states;            // n x (steps+1), group coordinates
  Mat covectors;         // n x (steps+1), lambda(t)
  Mat momenta;           // n x (steps+1), frame momenta h_i(t)
  Vec hamiltonian;       // per node, H = sum h_i^2 / 2 over the first layer
  double energy_drift = 0.0;
};
/// Normal Hamiltonian flow from `start` with initial covector lambda0,
/// integrated over [0, T] with RK4 in frame momenta.
FlowResult hamiltonian_flow(const AlgebraPtr& a, const GroupPoint& start, const Vec& lambda0,
                            double T, int steps);

}  // namespace subcarnot

#endif  // SUBCARNOT_EXTREMALS_HPP
