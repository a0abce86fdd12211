// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

namespace bitalloc {

/// Signed fixed-point format with `frac_bits` fractional bits (one sign bit
/// on top). Grid k * 2^-b clamped to [-1, 1 - 2^-b].
struct FixedQuantSpec {
  int frac_bits = 0;
};

/// Binary floating-point format: `mantissa_bits` significant bits (the
/// significand k of k * 2^(e - m + 1) has m bits, leading one included) and
/// an `exp_bits` exponent field with bias 2^(exp_bits-1) - 1 and no codes
/// reserved for Inf/NaN. Subnormals are flushed to zero.
struct FloatQuantSpec {
  int exp_bits = 8;
  int mantissa_bits = 24;

  int min_exponent() const noexcept;
  int max_exponent() const noexcept;
  /// (2^m - 1) * 2^(e_max - m + 1).
  double max_finite() const noexcept;
  /// 2^e_min, the smallest normal magnitude.
  double min_normal() const noexcept;
};

/// Round half away from zero onto the fixed-point grid, saturating.
double quantize_fixed(double x, FixedQuantSpec spec);

struct FloatQuantized {
  double value = 0.0;
  bool saturated = false;
  bool flushed = false;
};

/// Round to nearest, ties to even significand.
FloatQuantized quantize_float_checked(double x, FloatQuantSpec spec);

inline double quantize_float(double x, FloatQuantSpec spec) {
  return quantize_float_checked(x, spec).value;
}

/// Error-model variances: fixed-point absolute error 2^-2b / 12,
/// floating-point relative error 2^-2m / 6.
double fixed_error_variance(int frac_bits);
double float_relative_error_variance(int mantissa_bits);

}  // namespace bitalloc
