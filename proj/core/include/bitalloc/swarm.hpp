// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bitalloc/problem.hpp"
#include "bitalloc/rng.hpp"

namespace bitalloc {

/// How the U(0,1) acceleration weights r1, r2 are drawn.
enum class CoefficientDraw {
  per_dimension,  ///< fresh r1, r2 for every coordinate
  per_particle,   ///< one scalar r1, r2 per particle update
};

enum class Engine {
  ppso,   ///< penalized fitness, positions may be infeasible
  gcpso,  ///< raw objective, every position greedily repaired
};

const char* engine_name(Engine engine) noexcept;

/// Swarm hyperparameters. Defaults follow the FIR simulation table:
/// 550 particles, 100 iterations, inertia 0.9 -> 0.4, both acceleration
/// coefficients in [0.5, 2.5], velocity clamp [-3, 3], penalty 1e3,
/// best of 10 restarts.
struct SwarmConfig {
  int population = 550;
  int iterations = 100;
  double w_max = 0.9;
  double w_min = 0.4;
  double c1_max = 2.5;
  double c1_min = 0.5;
  double c2_max = 2.5;
  double c2_min = 0.5;
  double v_min = -3.0;
  double v_max = 3.0;
  double penalty = 1e3;  ///< lambda, PPSO only
  int restarts = 10;     ///< runs use seeds seed, seed+1, ...
  std::uint64_t seed = 0;
  CoefficientDraw draw = CoefficientDraw::per_dimension;
  int threads = 1;  ///< fitness evaluation workers; results do not depend on it
  bool cache_evaluations = true;
  std::size_t cache_limit = 1u << 20;  ///< entries before the memo is flushed

  /// Throws ContractViolation on an inconsistent configuration.
  void validate() const;
};

struct Hyperparams {
  double w = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Linear ramps: w falls from w_max, c1 falls from c1_max, c2 rises from
/// c2_min; the end values are reached at iteration == cfg.iterations.
/// Requires 1 <= iteration <= cfg.iterations.
Hyperparams schedule_hyperparams(const SwarmConfig& cfg, int iteration);

struct Particle {
  BitVector position;
  std::vector<double> velocity;
  BitVector best;
  double best_cost = 0.0;
};

/// One velocity/position update:
///   v <- clamp(w v + c1 r1 (p_best - b) + c2 r2 (g_best - b), v_min, v_max)
///   b <- snap_B(b + round(v))
/// round() is half away from zero. Does not touch the personal best.
void step_particle(Particle& particle, std::span<const int> global_best,
                   const Hyperparams& hp, Rng& rng, const SwarmConfig& cfg,
                   const AllowedSet& allowed);

struct SwarmState {
  std::vector<Particle> particles;
  BitVector global_best;
  double global_best_cost = 0.0;
  std::vector<std::string> warnings;
};

/// Every particle starts at [b-bar, ..., b-bar] (b-bar snapped into B with
/// a warning if needed), velocities uniform in [v_min, v_max]. The global
/// best starts as a uniform draw from B with cost +inf and is then replaced
/// by the best particle.
SwarmState init_swarm(const AllocationProblem& problem, const SwarmConfig& cfg,
                      Engine engine, Rng& rng);

struct RunResult {
  BitVector best;
  double best_cost = 0.0;    ///< engine fitness of `best`
  double objective = 0.0;    ///< raw F(best)
  double consumption = 0.0;  ///< C(best)
  bool feasible = false;
  /// Global-best fitness after initialization (index 0) and after each
  /// iteration; nonincreasing.
  std::vector<double> trace;
  std::uint64_t seed = 0;
  std::chrono::duration<double> elapsed{0.0};
  /// Best fitness of every restart, in restart order (restart runs only).
  std::vector<double> restart_costs;
  std::uint64_t evaluations = 0;  ///< objective calls that reached the problem
  std::vector<std::string> warnings;
};

/// One seeded run of the chosen engine.
RunResult run_swarm(const AllocationProblem& problem, const SwarmConfig& cfg,
                    Engine engine, std::uint64_t seed);

/// cfg.restarts independent runs with seeds cfg.seed + r; returns the run
/// with the lowest fitness (earliest restart on ties).
RunResult run_restarts(const AllocationProblem& problem, const SwarmConfig& cfg,
                       Engine engine);

inline RunResult run_ppso(const AllocationProblem& problem,
                          const SwarmConfig& cfg) {
  return run_restarts(problem, cfg, Engine::ppso);
}

inline RunResult run_gcpso(const AllocationProblem& problem,
                           const SwarmConfig& cfg) {
  return run_restarts(problem, cfg, Engine::gcpso);
}

/// S_j = F(b with b_j decremented) - F(b); +inf when b_j == min(B).
double sensitivity(const AllocationProblem& problem, std::span<const int> bits,
                   std::size_t j);

struct RepairOutcome {
  BitVector bits;
  bool scaled = false;
  std::size_t decrements = 0;
};

/// Greedy bit adjustment: snap into B; if over budget scale by
/// C(b-bar)/C(b), round and snap; then repeatedly decrement the coordinate
/// with the smallest sensitivity (lowest index on ties) until feasible.
/// Throws InfeasibleBudget when every coordinate sits at min(B) and the
/// budget is still exceeded.
RepairOutcome greedy_repair_traced(const AllocationProblem& problem,
                                   std::span<const int> bits);

inline BitVector greedy_repair(const AllocationProblem& problem,
                               std::span<const int> bits) {
  return greedy_repair_traced(problem, bits).bits;
}

}  // namespace bitalloc
