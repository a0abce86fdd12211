// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bitalloc {

/// Raised when a caller breaks a documented precondition (dimension
/// mismatch, index out of range, non-positive penalty, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No allocation inside the allowed set meets the consumption budget.
class InfeasibleBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search refused because the search space exceeds the cap.
class SearchSpaceTooLarge : public std::runtime_error {
 public:
  SearchSpaceTooLarge(double points, std::uint64_t cap)
      : std::runtime_error("search space has " + std::to_string(points) +
                           " points, cap is " + std::to_string(cap)),
        points_(points),
        cap_(cap) {}

  double points() const noexcept { return points_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  double points_;
  std::uint64_t cap_;
};

/// 1 + c - w == 0 in the Lyapunov closed form.
class SingularDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bitalloc
