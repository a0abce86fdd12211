// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitalloc/problem.hpp"
#include "bitalloc/quantizers.hpp"

namespace bitalloc {

/// One band of a piecewise-constant response spec; edges in radians.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double desired = 0.0;
  double weight = 1.0;
};

/// Type I (odd length, even symmetry) design spec.
struct FilterSpec {
  std::vector<Band> bands;
  std::size_t taps = 0;
  int grid_density = 16;  ///< grid points per band = grid_density * taps

  /// `edges` holds lo0, hi0, lo1, hi1, ... as multiples of pi.
  static FilterSpec from_pi_fractions(std::span<const double> edges,
                                      std::span<const double> desired,
                                      std::span<const double> weight,
                                      std::size_t taps, int grid_density = 16);

  /// Throws ContractViolation: no bands, even or zero length, bands
  /// overlapping, unordered or outside [0, pi].
  void validate() const;
};

/// Low-/band-pass specs 'A'..'D' of the standard wordlength benchmark.
FilterSpec table_filter_spec(char id, std::size_t taps);

/// Full-length, even-symmetric impulse response.
class CoefficientSet {
 public:
  /// Rejects even length, non-finite entries and asymmetry beyond 1e-12.
  explicit CoefficientSet(std::vector<double> h);

  std::size_t taps() const noexcept { return h_.size(); }
  std::size_t center() const noexcept { return (h_.size() - 1) / 2; }
  std::span<const double> values() const noexcept { return h_; }
  /// h[0..center], the coefficients that carry independent bits.
  std::span<const double> unique() const noexcept {
    return std::span<const double>(h_).first(center() + 1);
  }

 private:
  std::vector<double> h_;
};

/// One decimal value per line; '#' starts a comment. `source` names the
/// input in diagnostics.
CoefficientSet parse_coefficients(std::istream& in, std::string_view source);
CoefficientSet load_coefficients(const std::filesystem::path& path);

/// H(w) = sum_{n<c} 2 h[n] cos((c - n) w) + h[c], c = (N-1)/2.
double magnitude(std::span<const double> h, double omega);

/// Symmetric bit assignment over the unique coefficients.
struct FirAllocation {
  BitVector half_bits;

  /// Mirrored to the full filter length.
  BitVector full() const;
  /// 2 * sum_{n<c} b_n + b_c.
  long long consumption() const;
};

/// Coefficient quantizer driven by a per-coefficient bit count.
struct FirQuantizer {
  enum class Kind { fixed, floating };
  Kind kind = Kind::fixed;
  int exp_bits = 5;  ///< floating only; shared by every coefficient
  /// Fixed only: the allocated count includes the sign bit, so a coefficient
  /// with b bits keeps b - 1 fractional bits. False: b fractional bits.
  bool sign_in_wordlength = true;

  static FirQuantizer fixed(bool sign_in_wordlength = true) {
    return {Kind::fixed, 0, sign_in_wordlength};
  }
  static FirQuantizer floating(int exp_bits) {
    return {Kind::floating, exp_bits, true};
  }

  /// Fixed: quantize_fixed with the fractional bits above. Floating:
  /// quantize_float with `bits` significant mantissa bits.
  double apply(double x, int bits) const;
  /// Smallest bit count the quantizer accepts.
  int min_bits() const noexcept;
  /// Throws ContractViolation when a coefficient falls outside the
  /// representable range (|h| >= 1 fixed, outside the normal range floating).
  void check_range(std::span<const double> h) const;
};

/// Dense frequency grid with cached cosine basis for fast evaluation.
class FirEvaluator {
 public:
  explicit FirEvaluator(FilterSpec spec);

  const FilterSpec& spec() const noexcept { return spec_; }
  std::size_t grid_size() const noexcept { return omega_.size(); }
  std::span<const double> grid() const noexcept { return omega_; }

  /// max_g |W(w_g) (H(w_g) - D(w_g))| for the given unique coefficients.
  double error(std::span<const double> unique_h) const;

  /// Response on the grid in amplitude-coefficient form: a_n = 2 h[n]
  /// (n < c), a_c = h[c].
  void response(std::span<const double> unique_h, std::span<double> out) const;
  /// cos((c - n) w_g) for g over the grid.
  std::span<const double> basis(std::size_t n) const noexcept {
    return std::span<const double>(basis_).subspan(n * omega_.size(),
                                                   omega_.size());
  }
  /// Error of a precomputed response shifted by delta * basis(n).
  double shifted_error(std::span<const double> response, std::size_t n,
                       double delta) const;
  double error_of_response(std::span<const double> response) const;

 private:
  FilterSpec spec_;
  std::vector<double> omega_;
  std::vector<double> desired_;
  std::vector<double> weight_;
  std::vector<double> basis_;  ///< n-major, (center + 1) x grid
};

double full_precision_error(const FilterSpec& spec, const CoefficientSet& h);

double minimax_error(const FilterSpec& spec, const CoefficientSet& h,
                     const FirAllocation& alloc, const FirQuantizer& q);

/// Quantized unique coefficients under `alloc`.
std::vector<double> quantize_coefficients(const CoefficientSet& h,
                                          const FirAllocation& alloc,
                                          const FirQuantizer& q);

/// Wordlength allocation for one filter: dimension (N+1)/2, F the minimax
/// error, C = 2 sum b_n + b_c, budget N * b-bar, B = {1, ..., 2 b-bar + 1}
/// unless overridden.
class FirProblem final : public AllocationProblem {
 public:
  FirProblem(FilterSpec spec, CoefficientSet h, FirQuantizer q, int avg_bits,
             std::optional<AllowedSet> allowed = std::nullopt);

  std::size_t dimension() const override { return h_.center() + 1; }
  const AllowedSet& allowed() const override { return allowed_; }
  int budget_bits() const override { return avg_bits_; }
  double budget() const override {
    return static_cast<double>(h_.taps()) * avg_bits_;
  }
  double objective(std::span<const int> bits) const override;
  double consumption(std::span<const int> bits) const override;

  /// Reuses one response and shifts it per candidate; values agree with
  /// objective() up to rounding of the final sum.
  double decrement_objectives(std::span<const int> bits,
                              std::span<double> out) const override;
  bool incremental_decrements() const override { return true; }

  const FirEvaluator& evaluator() const noexcept { return evaluator_; }
  const CoefficientSet& coefficients() const noexcept { return h_; }
  const FirQuantizer& quantizer() const noexcept { return q_; }

 private:
  double quantized(std::size_t n, int bits) const;

  FirEvaluator evaluator_;
  CoefficientSet h_;
  FirQuantizer q_;
  int avg_bits_;
  AllowedSet allowed_;
  std::vector<double> table_;  ///< quantized a_n per (n, index in B)
};

/// Uniform allocation: every unique coefficient gets b-bar bits.
FirAllocation lc_fixed_alloc(std::size_t taps, int avg_bits);

/// Relaxed mantissa bits m~_n = m-bar + log2(|h[n]| / GM(h)) over the
/// unique coefficients; GM is taken over all N taps. Throws
/// ContractViolation on a zero coefficient and InfeasibleBudget when
/// m-bar < 1 + ceil(log2(GM / min |h|)).
std::vector<double> lc_float_alloc(std::span<const double> h_full,
                                   double avg_mantissa);
std::vector<double> lc_float_alloc(const CoefficientSet& h,
                                   double avg_mantissa);

/// Same relaxation with the box m_n >= floor_bits enforced: coordinates
/// that would fall below the floor are pinned to it and the rest re-solved
/// (water-filling). Equals lc_float_alloc whenever that one is feasible.
std::vector<double> lc_float_alloc_floored(const CoefficientSet& h,
                                           double avg_mantissa,
                                           double floor_bits = 1.0);

/// Integer mapping of a relaxed allocation: integers kept, the rest
/// ceiled, then the cheapest ones in K order floored until
/// 2 sum m_n + m_c <= N * m-bar.
FirAllocation lc_float_map(std::span<const double> relaxed,
                           const CoefficientSet& h, double avg_mantissa);

/// MSQE increase per saved bit when flooring coordinate i.
double lc_tradeoff(double relaxed, double coeff, bool is_center);

/// Expected integrated squared error surrogates.
/// Fixed: sum_{n<c} (pi/6) 2^-2b_n + (pi/12) 2^-2b_c.
double fixed_msqe(std::span<const double> half_bits);
/// Floating: sum_{n<c} (pi/3) h_n^2 2^-2m_n + (pi/6) h_c^2 2^-2m_c.
double float_msqe(std::span<const double> unique_h,
                  std::span<const double> half_bits);

}  // namespace bitalloc
