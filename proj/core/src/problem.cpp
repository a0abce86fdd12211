// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bitalloc/error.hpp"

namespace bitalloc {

AllowedSet::AllowedSet(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("allowed bit set is empty");
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

AllowedSet AllowedSet::range(int lo, int hi) {
  if (hi < lo) {
    throw ContractViolation("allowed range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] is empty");
  }
  std::vector<int> v(static_cast<std::size_t>(hi - lo) + 1);
  std::iota(v.begin(), v.end(), lo);
  return AllowedSet(std::move(v));
}

bool AllowedSet::contains(int v) const noexcept {
  return std::binary_search(values_.begin(), values_.end(), v);
}

int AllowedSet::snap(long long v) const noexcept {
  if (v <= values_.front()) return values_.front();
  if (v >= values_.back()) return values_.back();
  auto hi = std::lower_bound(values_.begin(), values_.end(), v);
  if (*hi == v) return *hi;
  auto lo = std::prev(hi);
  return (v - *lo <= *hi - v) ? *lo : *hi;
}

std::optional<int> AllowedSet::next_lower(int v) const noexcept {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.begin()) return std::nullopt;
  return *std::prev(it);
}

void AllocationProblem::check_dimension(std::span<const int> bits) const {
  if (bits.size() != dimension()) {
    throw ContractViolation("bit vector has length " +
                            std::to_string(bits.size()) + ", problem expects " +
                            std::to_string(dimension()));
  }
}

double AllocationProblem::decrement_objectives(std::span<const int> bits,
                                               std::span<double> out) const {
  check_dimension(bits);
  if (out.size() != bits.size()) {
    throw ContractViolation("sensitivity buffer length mismatch");
  }
  const double base = objective(bits);
  BitVector probe(bits.begin(), bits.end());
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const auto lower = allowed().next_lower(probe[j]);
    if (!lower) {
      out[j] = std::numeric_limits<double>::infinity();
      continue;
    }
    const int saved = probe[j];
    probe[j] = *lower;
    out[j] = objective(probe);
    probe[j] = saved;
  }
  return base;
}

FunctionProblem::FunctionProblem(std::size_t dimension, AllowedSet allowed,
                                 int budget_bits, double budget,
                                 Function objective, Function consumption)
    : dimension_(dimension),
      allowed_(std::move(allowed)),
      budget_bits_(budget_bits),
      budget_(budget),
      objective_(std::move(objective)),
      consumption_(std::move(consumption)) {
  if (dimension_ == 0) throw ContractViolation("problem dimension is zero");
}

FunctionProblem FunctionProblem::linear(std::size_t dimension,
                                        AllowedSet allowed, int budget_bits,
                                        Function objective) {
  const double budget = static_cast<double>(dimension) * budget_bits;
  return FunctionProblem(
      dimension, std::move(allowed), budget_bits, budget, std::move(objective),
      [](std::span<const int> b) {
        return static_cast<double>(std::accumulate(b.begin(), b.end(), 0LL));
      });
}

double penalized_fitness(const AllocationProblem& problem,
                         std::span<const int> bits, double lambda) {
  problem.check_dimension(bits);
  if (!(lambda > 0.0)) throw ContractViolation("penalty must be positive");
  const double excess = problem.consumption(bits) - problem.budget();
  const double value = problem.objective(bits);
  return excess > 0.0 ? value + lambda * excess : value;
}

OracleResult brute_force_optimum(const AllocationProblem& problem,
                                 std::uint64_t cap) {
  const auto values = problem.allowed().values();
  const std::size_t n = problem.dimension();
  const double points =
      std::pow(static_cast<double>(values.size()), static_cast<double>(n));
  if (points > static_cast<double>(cap)) throw SearchSpaceTooLarge(points, cap);

  // Odometer over indices into B, last coordinate fastest: lexicographic
  // order, so keeping only strict improvements yields the smallest tie.
  std::vector<std::size_t> idx(n, 0);
  BitVector bits(n, values.front());
  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool found = false;
  for (;;) {
    ++best.evaluated;
    if (problem.feasible(bits)) {
      ++best.feasible_points;
      const double f = problem.objective(bits);
      if (!found || f < best.value) {
        best.value = f;
        best.bits = bits;
        found = true;
      }
    }
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < values.size()) {
        bits[k] = values[idx[k]];
        break;
      }
      idx[k] = 0;
      bits[k] = values.front();
      if (k == 0) {
        k = n + 1;  // wrapped the most significant digit
        break;
      }
    }
    if (k == n + 1) break;
  }
  if (!found) {
    throw InfeasibleBudget("no allocation in B^" + std::to_string(n) +
                           " satisfies C(b) <= " +
                           std::to_string(problem.budget()));
  }
  return best;
}

}  // namespace bitalloc
