// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bitalloc/problem.hpp"
#include "bitalloc/swarm.hpp"

namespace bitalloc {

enum class QgdKind { least_squares, logistic };

/// Full-batch gradient descent task whose gradient is sent with `bits`
/// per coordinate.
struct QgdTask {
  QgdKind kind = QgdKind::least_squares;
  std::size_t dim = 0;
  std::size_t rows = 0;       ///< T (least squares) or m (logistic)
  std::vector<double> data;   ///< A or the feature rows, row-major rows x dim
  std::vector<double> target; ///< y: responses or labels in {-1, +1}
  std::vector<double> z_star; ///< least squares only; empty if unknown
  double step = 1e-3;
  int iterations = 200;
  int avg_bits = 4;
  double penalty = 1e5;

  /// Throws ContractViolation on inconsistent sizes, rows < dim (least
  /// squares) or labels outside {-1, +1}.
  void validate() const;
  AllowedSet allowed() const { return AllowedSet::range(1, 2 * avg_bits + 1); }
};

/// A with i.i.d. N(0, 1) entries, z* ~ N(0, I), y = A z*.
QgdTask make_least_squares(std::size_t rows, std::size_t dim,
                           std::uint64_t seed);

/// Two Gaussian classes with means +mu / -mu (mu ~ N(0, I) scaled to norm
/// `separation`), unit-variance noise, balanced labels.
QgdTask make_logistic_synthetic(std::size_t samples, std::size_t dim,
                                std::uint64_t seed, double separation = 4.0);

/// Sparse text, one sample per line: `label idx:val ...` with 1-based
/// indices. Labels 0/1 are mapped to -1/+1. dim = 0 infers the largest
/// index.
QgdTask parse_sparse_dataset(std::istream& in, std::string_view source,
                             std::size_t dim = 0);
QgdTask load_sparse_dataset(const std::filesystem::path& path,
                            std::size_t dim = 0);

/// Least squares 0.5 ||y - A z||^2; logistic mean log(1 + exp(-y z.v)) +
/// ||z||^2 / (2m).
double loss(const QgdTask& task, std::span<const double> z);
std::vector<double> gradient(const QgdTask& task, std::span<const double> z);

/// q_i = c Q(g_i / c, b_i) with c = ||g||_2 and b_i fractional bits; the
/// zero vector maps to zero.
std::vector<double> quantize_gradient(std::span<const double> g,
                                      std::span<const int> bits);

/// Bit allocation for one step: F(b) = f(z - eta q(b)), C = sum b,
/// budget D b-bar. Requires a nonzero gradient.
class QgdProblem final : public AllocationProblem {
 public:
  QgdProblem(const QgdTask& task, std::span<const double> z,
             std::span<const double> grad);

  std::size_t dimension() const override { return task_.dim; }
  const AllowedSet& allowed() const override { return allowed_; }
  int budget_bits() const override { return task_.avg_bits; }
  double budget() const override {
    return static_cast<double>(task_.dim) * task_.avg_bits;
  }
  double objective(std::span<const int> bits) const override;
  double consumption(std::span<const int> bits) const override;

 private:
  const QgdTask& task_;
  AllowedSet allowed_;
  std::vector<double> z_;
  std::vector<double> grad_;
  double loss_now_ = 0.0;
  std::vector<double> gram_;  ///< A^T A, least squares only
};

/// oracle: exhaustive search per step (tiny dimensions only).
enum class QgdStrategy { uniform, ppso, gcpso, oracle };

struct TrainResult {
  /// ||z_t - z*|| (least squares with known z*) or f(z_t), t = 0..T.
  std::vector<double> trace;
  std::vector<long long> bits_used;  ///< sum of the chosen b, t = 1..T
  std::vector<double> z;
  BitVector last_bits;  ///< allocation of the final step
  bool converged = false;  ///< stopped on an exactly zero gradient
};

/// T quantized GD steps from z = 0. Swarm strategies solve one QgdProblem
/// per step with seed mix_seed(swarm.seed, t).
TrainResult train(const QgdTask& task, QgdStrategy strategy,
                  const SwarmConfig& swarm);

/// Swarm settings for per-step allocation: 60 particles, 30 iterations,
/// one restart, penalty 1e5.
SwarmConfig qgd_swarm_defaults();

}  // namespace bitalloc
