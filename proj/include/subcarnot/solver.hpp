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

#ifndef SUBCARNOT_SOLVER_HPP
#define SUBCARNOT_SOLVER_HPP

#include <cstdint>

#include "subcarnot/extremals.hpp"

namespace subcarnot {

struct SolveOptions {
  int N = 256;
  int max_outer = 40;
  double penalty_growth = 10.0;
  double constraint_tol = 1e-8;
  double stationarity_tol = 1e-8;
  int multistart = 8;
  std::uint32_t seed = 0;
};

enum class SolveStatus { converged, failed };

struct SolveResult {
  ControlGrid grid;
  double energy = 0.0;
  double endpoint_residual = 0.0;  // ||E(gamma1) - xi||
  Vec multiplier;                  // KKT estimate, padded to length n
  double stationarity = 0.0;       // final gradient norm of the Lagrangian
  SolveStatus status = SolveStatus::failed;
};

/// min { energy : E(gamma1) = xi } by augmented-Lagrangian direct
/// transcription over the controls, best of multistart.
SolveResult solve_geodesic(const AlgebraPtr& a, const Vec& xi, const SolveOptions& opts);

struct ShootResult {
  Vec lambda0;            // initial covector, length n
  double residual = 0.0;  // group distance of the flow endpoint to q
  FlowResult flow;
  SolveStatus status = SolveStatus::failed;
};

/// Finite-difference Newton on the shooting map of the normal flow from p;
/// multistart over vertical initial momenta.
ShootResult shoot_to_target(const AlgebraPtr& a, const GroupPoint& p, const GroupPoint& q,
                            const SolveOptions& opts);

struct CompareReport {
  int trials = 0;
  int skipped = 0;  // projection failures
  double min_competitor_energy = 0.0;
  bool pass = false;  // result energy <= min competitor + 1e-9
};

/// Minimality spot-check: random feasible competitors built by constrained
/// projection with the analytic Jacobian.
CompareReport compare_energy(const SolveResult& result, const Vec& xi, int trials,
                             std::uint32_t seed);

}  // namespace subcarnot

#endif  // SUBCARNOT_SOLVER_HPP
