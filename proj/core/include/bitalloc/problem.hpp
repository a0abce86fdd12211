// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace bitalloc {

/// Integer bit assignment, one entry per quantized input.
using BitVector = std::vector<int>;

/// Finite, nonempty set of admissible bit counts, kept sorted.
class AllowedSet {
 public:
  /// Throws ContractViolation on an empty set.
  explicit AllowedSet(std::vector<int> values);

  /// {lo, lo+1, ..., hi}.
  static AllowedSet range(int lo, int hi);

  int min() const noexcept { return values_.front(); }
  int max() const noexcept { return values_.back(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const int> values() const noexcept { return values_; }
  bool contiguous() const noexcept {
    return static_cast<std::size_t>(max() - min()) + 1 == values_.size();
  }

  bool contains(int v) const noexcept;

  /// Nearest member, ties resolved towards the smaller member.
  int snap(long long v) const noexcept;

  /// Largest member strictly below v, if any.
  std::optional<int> next_lower(int v) const noexcept;

  bool operator==(const AllowedSet&) const = default;

 private:
  std::vector<int> values_;
};

/// One mixed-precision bit-allocation problem:
///
///   minimize F(b)  subject to  C(b) <= budget,  b_n in B.
///
/// `objective`, `consumption` and `decrement_objectives` must be safe to call
/// concurrently. Stochastic objectives are built around a fixed set of
/// samples drawn from their `evaluation_seed`, so repeated calls on the same
/// vector return the same value.
class AllocationProblem {
 public:
  virtual ~AllocationProblem() = default;

  virtual std::size_t dimension() const = 0;
  virtual const AllowedSet& allowed() const = 0;
  /// Average bits per input (b-bar); the uniform starting allocation.
  virtual int budget_bits() const = 0;
  /// C(b-bar): stored, not recomputed, so nonlinear budgets plug in directly.
  virtual double budget() const = 0;

  virtual double objective(std::span<const int> bits) const = 0;
  virtual double consumption(std::span<const int> bits) const = 0;

  /// Writes F(b with coordinate j lowered to the next member of B) into
  /// out[j], or +inf when b_j is already min(B). Returns F(b).
  /// The default evaluates every candidate from scratch.
  virtual double decrement_objectives(std::span<const int> bits,
                                      std::span<double> out) const;

  /// True when decrement_objectives is cheaper than dimension() objective
  /// calls; wrappers forward to it instead of re-evaluating.
  virtual bool incremental_decrements() const { return false; }

  virtual std::optional<std::uint64_t> evaluation_seed() const {
    return std::nullopt;
  }

  bool feasible(std::span<const int> bits) const {
    return consumption(bits) <= budget();
  }

  /// Throws ContractViolation when bits.size() != dimension().
  void check_dimension(std::span<const int> bits) const;

  /// [b-bar, ..., b-bar].
  BitVector uniform_allocation() const {
    return BitVector(dimension(), budget_bits());
  }
};

/// AllocationProblem assembled from callables; handy for toy instances.
class FunctionProblem final : public AllocationProblem {
 public:
  using Function = std::function<double(std::span<const int>)>;

  FunctionProblem(std::size_t dimension, AllowedSet allowed, int budget_bits,
                  double budget, Function objective, Function consumption);

  /// Consumption sum(b), budget N * b-bar.
  static FunctionProblem linear(std::size_t dimension, AllowedSet allowed,
                                int budget_bits, Function objective);

  std::size_t dimension() const override { return dimension_; }
  const AllowedSet& allowed() const override { return allowed_; }
  int budget_bits() const override { return budget_bits_; }
  double budget() const override { return budget_; }
  double objective(std::span<const int> bits) const override {
    return objective_(bits);
  }
  double consumption(std::span<const int> bits) const override {
    return consumption_(bits);
  }

 private:
  std::size_t dimension_;
  AllowedSet allowed_;
  int budget_bits_;
  double budget_;
  Function objective_;
  Function consumption_;
};

/// F(b) + lambda * max(0, C(b) - C(b-bar)).
double penalized_fitness(const AllocationProblem& problem,
                         std::span<const int> bits, double lambda);

struct OracleResult {
  BitVector bits;
  double value = 0.0;
  std::uint64_t evaluated = 0;
  std::uint64_t feasible_points = 0;
};

inline constexpr std::uint64_t kDefaultOracleCap = 1'000'000;

/// Exhaustive search over B^N. Ties go to the lexicographically smallest
/// vector. Throws SearchSpaceTooLarge when (#B)^N > cap and InfeasibleBudget
/// when no point meets the budget. Single-threaded.
OracleResult brute_force_optimum(const AllocationProblem& problem,
                                 std::uint64_t cap = kDefaultOracleCap);

}  // namespace bitalloc
