// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors
//
// Seeded generators for property tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "bitalloc/fir.hpp"
#include "bitalloc/problem.hpp"
#include "bitalloc/rng.hpp"

namespace bitalloc::testing {

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Contiguous allowed set {lo, ..., lo + size - 1}.
inline AllowedSet random_range(Rng& rng, int max_size) {
  const int size = uniform_int(rng, 2, max_size);
  const int lo = uniform_int(rng, 0, 3);
  return AllowedSet::range(lo, lo + size - 1);
}

/// Random vector drawn from B^N.
inline BitVector random_bits(Rng& rng, const AllowedSet& allowed, std::size_t n) {
  BitVector b(n);
  for (auto& v : b) {
    v = allowed.values()[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(allowed.size()) - 1))];
  }
  return b;
}

/// Weighted sum of 2^{-2 b_j}: the shape of every quantization MSE.
inline FunctionProblem random_mse_problem(Rng& rng, std::size_t n, const AllowedSet& allowed,
                                          int avg_bits) {
  std::vector<double> weight(n);
  for (auto& w : weight) w = std::exp(uniform_real(rng, -3.0, 3.0));
  return FunctionProblem::linear(n, allowed, avg_bits, [weight](std::span<const int> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) s += weight[j] * std::ldexp(1.0, -2 * b[j]);
    return s;
  });
}

/// Arbitrary objective: a random lookup table hashed from the vector.
inline FunctionProblem random_table_problem(Rng& rng, std::size_t n,
                                            const AllowedSet& allowed, int avg_bits) {
  const std::uint64_t key = rng();
  return FunctionProblem::linear(n, allowed, avg_bits, [key](std::span<const int> b) {
    std::uint64_t h = key;
    for (int v : b) h = mix_seed(h, static_cast<std::uint64_t>(v + 1000));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  });
}

/// Symmetric odd-length impulse response with entries of magnitude in
/// [lo, hi] and random signs.
inline CoefficientSet random_coefficients(Rng& rng, std::size_t taps, double lo = 1e-3,
                                          double hi = 0.5) {
  const std::size_t c = (taps - 1) / 2;
  std::vector<double> h(taps);
  for (std::size_t n = 0; n <= c; ++n) {
    const double mag = std::exp(uniform_real(rng, std::log(lo), std::log(hi)));
    h[n] = h[taps - 1 - n] = (rng() & 1u) ? mag : -mag;
  }
  return CoefficientSet(std::move(h));
}

}  // namespace bitalloc::testing
