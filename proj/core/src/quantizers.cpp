// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/quantizers.hpp"

#include <algorithm>
#include <cmath>

#include "bitalloc/error.hpp"

namespace bitalloc {

namespace {

double round_half_even(double t) {
  const double fl = std::floor(t);
  const double diff = t - fl;
  if (diff > 0.5) return fl + 1.0;
  if (diff < 0.5) return fl;
  return std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
}

}  // namespace

int FloatQuantSpec::min_exponent() const noexcept {
  const int bias = (1 << (exp_bits - 1)) - 1;
  return -bias;
}

int FloatQuantSpec::max_exponent() const noexcept {
  const int bias = (1 << (exp_bits - 1)) - 1;
  return ((1 << exp_bits) - 1) - bias;
}

double FloatQuantSpec::max_finite() const noexcept {
  return std::ldexp(std::ldexp(1.0, mantissa_bits) - 1.0,
                    max_exponent() - mantissa_bits + 1);
}

double FloatQuantSpec::min_normal() const noexcept {
  return std::ldexp(1.0, min_exponent());
}

double quantize_fixed(double x, FixedQuantSpec spec) {
  if (spec.frac_bits < 0) throw ContractViolation("negative fractional bits");
  const double scale = std::ldexp(1.0, spec.frac_bits);
  const double hi = 1.0 - 1.0 / scale;
  const double q = std::round(x * scale) / scale;
  return std::clamp(q, -1.0, hi);
}

FloatQuantized quantize_float_checked(double x, FloatQuantSpec spec) {
  if (spec.mantissa_bits < 1) throw ContractViolation("mantissa bits < 1");
  if (spec.exp_bits < 1 || spec.exp_bits > 11) {
    throw ContractViolation("exponent bits outside [1, 11]");
  }
  FloatQuantized out;
  if (x == 0.0 || std::isnan(x)) {
    out.value = x;
    return out;
  }
  const double mag = std::fabs(x);
  if (mag < spec.min_normal()) {
    out.value = std::copysign(0.0, x);
    out.flushed = true;
    return out;
  }
  int e2 = 0;
  std::frexp(mag, &e2);  // mag = f * 2^e2, f in [0.5, 1)
  const int exponent = e2 - 1;
  const int shift = exponent - spec.mantissa_bits + 1;
  const double k = round_half_even(std::ldexp(mag, -shift));
  double q = std::ldexp(k, shift);
  const double top = spec.max_finite();
  if (q > top || std::isinf(mag)) {
    q = top;
    out.saturated = true;
  }
  out.value = std::copysign(q, x);
  return out;
}

double fixed_error_variance(int frac_bits) {
  return std::ldexp(1.0, -2 * frac_bits) / 12.0;
}

double float_relative_error_variance(int mantissa_bits) {
  return std::ldexp(1.0, -2 * mantissa_bits) / 6.0;
}

}  // namespace bitalloc
