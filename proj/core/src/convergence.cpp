// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "bitalloc/error.hpp"

namespace bitalloc {

Mat2 dynamics_matrix(double w, double c) {
  return {{{w - 1.0, -c}, {w, -c}}};
}

ConvergenceReport check_convergence_conditions(double w, double c1, double c2) {
  if (!std::isfinite(w) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw ContractViolation("w, c1, c2 must be finite");
  }
  const double c = 0.5 * (c1 + c2);
  if (!(c > 0.0)) throw ContractViolation("c = (c1 + c2) / 2 must be positive");
  const double gap = 1.0 + c - w;
  if (gap == 0.0) throw SingularDenominator("1 + c - w is zero");

  ConvergenceReport r;
  r.w = w;
  r.c1 = c1;
  r.c2 = c2;
  r.c = c;
  const double denom = 2.0 * c * gap;
  const double off = (-c * c + w - w * w) / denom;
  r.P = {{{(c + c * c + w * w) / denom, off},
          {off, (1.0 + c + c * c - 2.0 * w + w * w) / denom}}};

  // Largest eigenvalue of a symmetric 2x2.
  const double mean = 0.5 * (r.P[0][0] + r.P[1][1]);
  const double half_diff = 0.5 * (r.P[0][0] - r.P[1][1]);
  r.lambda_max = mean + std::hypot(half_diff, off);

  r.threshold = 1.0 / (2.0 * std::hypot(c, w));
  r.condition_1 = 0.0 < w && w < c + 1.0;
  r.condition_2 = r.lambda_max < r.threshold;
  r.guaranteed = r.condition_1 && r.condition_2;
  return r;
}

double lyapunov_residual(const ConvergenceReport& report) {
  const Mat2 A = dynamics_matrix(report.w, report.c);
  const Mat2& P = report.P;
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double v = (i == j) ? 1.0 : 0.0;
      for (int k = 0; k < 2; ++k) v += P[i][k] * A[k][j] + A[k][i] * P[k][j];
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

ScheduleConvergence check_schedule_convergence(const SwarmConfig& cfg) {
  cfg.validate();
  ScheduleConvergence out;
  out.per_iteration.reserve(static_cast<std::size_t>(cfg.iterations));
  out.all_guaranteed = true;
  double worst_ratio = -1.0;
  for (int it = 1; it <= cfg.iterations; ++it) {
    const Hyperparams hp = schedule_hyperparams(cfg, it);
    auto r = check_convergence_conditions(hp.w, hp.c1, hp.c2);
    const double ratio = r.lambda_max / r.threshold;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      out.worst_iteration = it;
    }
    out.all_guaranteed = out.all_guaranteed && r.guaranteed;
    out.per_iteration.push_back(r);
  }
  return out;
}

}  // namespace bitalloc
