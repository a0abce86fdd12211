// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <array>
#include <vector>

#include "bitalloc/swarm.hpp"

namespace bitalloc {

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Stability certificate of the deterministic one-dimensional swarm
/// dynamics with constant (w, c1, c2), c = (c1 + c2) / 2.
struct ConvergenceReport {
  double w = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c = 0.0;
  Mat2 P{};              ///< Lyapunov matrix solving PA + A^T P = -I
  double lambda_max = 0.0;
  double threshold = 0.0;  ///< 1 / (2 sqrt(c^2 + w^2))
  bool condition_1 = false;  ///< 0 < w < c + 1
  bool condition_2 = false;  ///< lambda_max < threshold
  bool guaranteed = false;
};

/// A = [[w-1, -c], [w, -c]].
Mat2 dynamics_matrix(double w, double c);

/// Throws ContractViolation for non-finite input or c <= 0, and
/// SingularDenominator when 1 + c - w == 0.
ConvergenceReport check_convergence_conditions(double w, double c1, double c2);

/// Max-abs entry of P A + A^T P + I.
double lyapunov_residual(const ConvergenceReport& report);

struct ScheduleConvergence {
  std::vector<ConvergenceReport> per_iteration;  ///< index it-1
  int worst_iteration = 0;  ///< largest lambda_max / threshold ratio
  bool all_guaranteed = false;
};

/// Evaluates the constant-parameter condition at every point of the
/// time-varying schedule.
ScheduleConvergence check_schedule_convergence(const SwarmConfig& cfg);

}  // namespace bitalloc
