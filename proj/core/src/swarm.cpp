// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/swarm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "bitalloc/error.hpp"

namespace bitalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BitVectorHash {
  std::size_t operator()(const BitVector& b) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : b) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Memoizes F(b) for one search. Values are a pure function of b, so hits
// and misses return identical doubles and the run stays bit-reproducible.
class CachedProblem final : public AllocationProblem {
 public:
  CachedProblem(const AllocationProblem& inner, bool enabled, std::size_t limit)
      : inner_(inner), enabled_(enabled), limit_(std::max<std::size_t>(limit, 1)) {}

  std::size_t dimension() const override { return inner_.dimension(); }
  const AllowedSet& allowed() const override { return inner_.allowed(); }
  int budget_bits() const override { return inner_.budget_bits(); }
  double budget() const override { return inner_.budget(); }
  double consumption(std::span<const int> bits) const override {
    return inner_.consumption(bits);
  }
  std::optional<std::uint64_t> evaluation_seed() const override {
    return inner_.evaluation_seed();
  }
  bool incremental_decrements() const override {
    return inner_.incremental_decrements();
  }

  double objective(std::span<const int> bits) const override {
    if (!enabled_) {
      evaluations_.fetch_add(1, std::memory_order_relaxed);
      return inner_.objective(bits);
    }
    BitVector key(bits.begin(), bits.end());
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    evaluations_.fetch_add(1, std::memory_order_relaxed);
    const double value = inner_.objective(bits);
    std::lock_guard lock(mutex_);
    if (memo_.size() >= limit_) memo_.clear();
    memo_.emplace(std::move(key), value);
    return value;
  }

  double decrement_objectives(std::span<const int> bits,
                              std::span<double> out) const override {
    if (inner_.incremental_decrements()) {
      evaluations_.fetch_add(1, std::memory_order_relaxed);
      return inner_.decrement_objectives(bits, out);
    }
    return AllocationProblem::decrement_objectives(bits, out);
  }

  std::uint64_t evaluations() const noexcept { return evaluations_.load(); }

 private:
  const AllocationProblem& inner_;
  bool enabled_;
  std::size_t limit_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<BitVector, double, BitVectorHash> memo_;
  mutable std::atomic<std::uint64_t> evaluations_{0};
};

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double engine_fitness(const AllocationProblem& problem, const SwarmConfig& cfg,
                      Engine engine, std::span<const int> bits) {
  return engine == Engine::ppso ? penalized_fitness(problem, bits, cfg.penalty)
                                : problem.objective(bits);
}

// Repairs (GC-PSO) and scores every particle position; bookkeeping happens
// afterwards in index order.
std::vector<double> evaluate_positions(const AllocationProblem& problem,
                                       const SwarmConfig& cfg, Engine engine,
                                       std::vector<Particle>& particles) {
  std::vector<double> cost(particles.size());
  parallel_for(particles.size(), cfg.threads, [&](std::size_t i) {
    auto& pos = particles[i].position;
    if (engine == Engine::gcpso) pos = greedy_repair(problem, pos);
    cost[i] = engine_fitness(problem, cfg, engine, pos);
  });
  return cost;
}

RunResult run_single(const AllocationProblem& problem, const SwarmConfig& cfg,
                     Engine engine, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  SwarmState state = init_swarm(problem, cfg, engine, rng);

  RunResult result;
  result.seed = seed;
  result.trace.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  result.trace.push_back(state.global_best_cost);

  for (int it = 1; it <= cfg.iterations; ++it) {
    const Hyperparams hp = schedule_hyperparams(cfg, it);
    const BitVector leader = state.global_best;
    for (auto& p : state.particles) {
      step_particle(p, leader, hp, rng, cfg, problem.allowed());
    }
    const auto cost = evaluate_positions(problem, cfg, engine, state.particles);
    for (std::size_t i = 0; i < state.particles.size(); ++i) {
      auto& p = state.particles[i];
      if (cost[i] < p.best_cost) {
        p.best_cost = cost[i];
        p.best = p.position;
      }
      if (p.best_cost < state.global_best_cost) {
        state.global_best_cost = p.best_cost;
        state.global_best = p.best;
      }
    }
    result.trace.push_back(state.global_best_cost);
  }

  result.best = state.global_best;
  result.best_cost = state.global_best_cost;
  result.objective = problem.objective(result.best);
  result.consumption = problem.consumption(result.best);
  result.feasible = result.consumption <= problem.budget();
  result.warnings = std::move(state.warnings);
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace

const char* engine_name(Engine engine) noexcept {
  return engine == Engine::ppso ? "ppso" : "gcpso";
}

void SwarmConfig::validate() const {
  if (population < 1) throw ContractViolation("population must be >= 1");
  if (iterations < 1) throw ContractViolation("iterations must be >= 1");
  if (restarts < 1) throw ContractViolation("restarts must be >= 1");
  if (!(v_min < v_max)) throw ContractViolation("v_min must be < v_max");
  if (!(w_min <= w_max)) throw ContractViolation("w_min must be <= w_max");
  if (!(penalty > 0.0)) throw ContractViolation("penalty must be positive");
  for (double x : {w_max, w_min, c1_max, c1_min, c2_max, c2_min, v_min, v_max}) {
    if (!std::isfinite(x)) throw ContractViolation("non-finite swarm parameter");
  }
}

Hyperparams schedule_hyperparams(const SwarmConfig& cfg, int iteration) {
  if (iteration < 1 || iteration > cfg.iterations) {
    throw ContractViolation("iteration " + std::to_string(iteration) +
                            " outside [1, " + std::to_string(cfg.iterations) +
                            "]");
  }
  const double t = static_cast<double>(iteration) / cfg.iterations;
  return {cfg.w_max - (cfg.w_max - cfg.w_min) * t,
          cfg.c1_max + (cfg.c1_min - cfg.c1_max) * t,
          cfg.c2_min + (cfg.c2_max - cfg.c2_min) * t};
}

void step_particle(Particle& particle, std::span<const int> global_best,
                   const Hyperparams& hp, Rng& rng, const SwarmConfig& cfg,
                   const AllowedSet& allowed) {
  const std::size_t n = particle.position.size();
  if (particle.velocity.size() != n || particle.best.size() != n ||
      global_best.size() != n) {
    throw ContractViolation("particle vectors differ in length");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r1 = 0.0;
  double r2 = 0.0;
  if (cfg.draw == CoefficientDraw::per_particle) {
    r1 = unit(rng);
    r2 = unit(rng);
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (cfg.draw == CoefficientDraw::per_dimension) {
      r1 = unit(rng);
      r2 = unit(rng);
    }
    const double b = particle.position[d];
    double v = hp.w * particle.velocity[d] + hp.c1 * r1 * (particle.best[d] - b) +
               hp.c2 * r2 * (global_best[d] - b);
    v = std::clamp(v, cfg.v_min, cfg.v_max);
    particle.velocity[d] = v;
    particle.position[d] =
        allowed.snap(static_cast<long long>(particle.position[d]) + std::llround(v));
  }
}

SwarmState init_swarm(const AllocationProblem& problem, const SwarmConfig& cfg,
                      Engine engine, Rng& rng) {
  cfg.validate();
  const std::size_t n = problem.dimension();
  const AllowedSet& allowed = problem.allowed();
  SwarmState state;

  std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
  state.global_best.resize(n);
  for (auto& b : state.global_best) b = allowed.values()[pick(rng)];
  state.global_best_cost = kInf;

  int start = problem.budget_bits();
  if (!allowed.contains(start)) {
    const int snapped = allowed.snap(start);
    state.warnings.push_back("average bits " + std::to_string(start) +
                             " not in the allowed set; starting from " +
                             std::to_string(snapped));
    start = snapped;
  }

  std::uniform_real_distribution<double> vel(cfg.v_min, cfg.v_max);
  state.particles.resize(static_cast<std::size_t>(cfg.population));
  for (auto& p : state.particles) {
    p.position.assign(n, start);
    p.velocity.resize(n);
    for (auto& v : p.velocity) v = vel(rng);
  }
  const auto cost = evaluate_positions(problem, cfg, engine, state.particles);
  for (std::size_t i = 0; i < state.particles.size(); ++i) {
    auto& p = state.particles[i];
    p.best = p.position;
    p.best_cost = cost[i];
    if (p.best_cost < state.global_best_cost) {
      state.global_best_cost = p.best_cost;
      state.global_best = p.best;
    }
  }
  return state;
}

RunResult run_swarm(const AllocationProblem& problem, const SwarmConfig& cfg,
                    Engine engine, std::uint64_t seed) {
  cfg.validate();
  CachedProblem cached(problem, cfg.cache_evaluations, cfg.cache_limit);
  RunResult result = run_single(cached, cfg, engine, seed);
  result.evaluations = cached.evaluations();
  return result;
}

RunResult run_restarts(const AllocationProblem& problem, const SwarmConfig& cfg,
                       Engine engine) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  CachedProblem cached(problem, cfg.cache_evaluations, cfg.cache_limit);
  RunResult best;
  std::vector<double> costs;
  costs.reserve(static_cast<std::size_t>(cfg.restarts));
  for (int r = 0; r < cfg.restarts; ++r) {
    RunResult run =
        run_single(cached, cfg, engine, cfg.seed + static_cast<std::uint64_t>(r));
    costs.push_back(run.best_cost);
    if (r == 0 || run.best_cost < best.best_cost) best = std::move(run);
  }
  best.restart_costs = std::move(costs);
  best.evaluations = cached.evaluations();
  best.elapsed = std::chrono::steady_clock::now() - start;
  return best;
}

double sensitivity(const AllocationProblem& problem, std::span<const int> bits,
                   std::size_t j) {
  problem.check_dimension(bits);
  if (j >= bits.size()) {
    throw ContractViolation("sensitivity index " + std::to_string(j) +
                            " out of range");
  }
  const auto lower = problem.allowed().next_lower(bits[j]);
  if (!lower) return kInf;
  BitVector probe(bits.begin(), bits.end());
  probe[j] = *lower;
  return problem.objective(probe) - problem.objective(bits);
}

RepairOutcome greedy_repair_traced(const AllocationProblem& problem,
                                   std::span<const int> bits) {
  problem.check_dimension(bits);
  const AllowedSet& allowed = problem.allowed();
  const double budget = problem.budget();

  RepairOutcome out;
  out.bits.resize(bits.size());
  std::transform(bits.begin(), bits.end(), out.bits.begin(),
                 [&](int v) { return allowed.snap(v); });
  BitVector& b = out.bits;

  double used = problem.consumption(b);
  if (!(used > budget)) return out;

  const double ratio = budget / used;
  for (auto& v : b) v = allowed.snap(std::llround(v * ratio));
  out.scaled = true;
  used = problem.consumption(b);

  std::vector<double> lowered(b.size());
  while (used > budget) {
    const double base = problem.decrement_objectives(b, lowered);
    std::size_t pick = b.size();
    double best = kInf;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!std::isfinite(lowered[j]) && lowered[j] > 0) continue;  // +inf: at floor
      const double s = lowered[j] - base;
      if (pick == b.size() || s < best) {
        best = s;
        pick = j;
      }
    }
    if (pick == b.size()) {
      throw InfeasibleBudget("every coordinate is at min(B) = " +
                             std::to_string(allowed.min()) +
                             " and consumption " + std::to_string(used) +
                             " still exceeds the budget " +
                             std::to_string(budget));
    }
    b[pick] = *allowed.next_lower(b[pick]);
    ++out.decrements;
    used = problem.consumption(b);
  }
  return out;
}

}  // namespace bitalloc
