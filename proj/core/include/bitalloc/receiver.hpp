// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bitalloc/problem.hpp"
#include "bitalloc/rng.hpp"

namespace bitalloc {

using cplx = std::complex<double>;

/// Single-cell uplink with per-antenna ADC resolution.
struct SystemConfig {
  int antennas = 64;
  int users = 10;
  double p_u = 100.0;  ///< per-user transmit power, linear (20 dB)
  double cell_radius = 1000.0;
  double r_min = 100.0;
  double path_loss_exp = 3.8;
  double shadow_db = 8.0;
  int avg_bits = 1;
  int mc_channels = 100;
  std::uint64_t seed = 0;
  /// Keep one draw of user positions and shadowing for every realization.
  bool freeze_large_scale = false;

  void validate() const;
  /// {0, 1, ..., 2 b-bar + 1}; 0 switches the antenna's ADC pair off.
  AllowedSet allowed() const { return AllowedSet::range(0, 2 * avg_bits + 1); }
};

double db_to_linear(double db);

/// G = H D^(1/2), stored row-major (antenna, user).
struct ChannelRealization {
  int antennas = 0;
  int users = 0;
  std::vector<cplx> G;
  std::vector<double> gamma;  ///< large-scale fading per user

  cplx at(int antenna, int user) const {
    return G[static_cast<std::size_t>(antenna) * users + user];
  }
};

/// Distortion factor beta(b): tabulated for 1..5 bits, (pi sqrt 3 / 2)
/// 2^-2b from 6 bits on, 1 at b = 0 (antenna off).
double adc_beta(int bits);
/// 1 - beta(b); 0 at b = 0.
double adc_alpha(int bits);
/// ADC power in units of the figure-of-merit times the sample rate: 2^b,
/// 0 at b = 0.
double adc_power(int bits);

/// gamma_k = o_k (r_k / r_min)^-nu for users dropped uniformly in the
/// hexagonal cell outside r_min, o_k log-normal.
std::vector<double> draw_large_scale(const SystemConfig& cfg, Rng& rng);

/// Draws large-scale fading (unless given) then H with CN(0, 1) entries.
ChannelRealization generate_channel(const SystemConfig& cfg, Rng& rng,
                                    std::optional<std::span<const double>>
                                        large_scale = std::nullopt);

/// Assembles G from an explicit fast-fading matrix (row-major M x K) and
/// large-scale gains.
ChannelRealization make_channel(int antennas, int users,
                                std::span<const cplx> H,
                                std::span<const double> gamma);

/// Sum over users of log2(1 + SINR_k) with MRC detection under the
/// additive quantization noise model, for one realization.
double sum_rate(const ChannelRealization& ch, std::span<const int> bits,
                double p_u);

/// Unquantized MRC sum rate (alpha = 1, no quantization noise).
double ideal_sum_rate(const ChannelRealization& ch, double p_u);

/// F = -(mean sum rate over a fixed Monte-Carlo channel set), C = sum 2^b,
/// budget M 2^b-bar. The channel set is drawn once from the "channel"
/// substream of cfg.seed.
class ReceiverProblem final : public AllocationProblem {
 public:
  explicit ReceiverProblem(SystemConfig cfg);

  std::size_t dimension() const override {
    return static_cast<std::size_t>(cfg_.antennas);
  }
  const AllowedSet& allowed() const override { return allowed_; }
  int budget_bits() const override { return cfg_.avg_bits; }
  double budget() const override {
    return cfg_.antennas * adc_power(cfg_.avg_bits);
  }
  double objective(std::span<const int> bits) const override;
  double consumption(std::span<const int> bits) const override;
  std::optional<std::uint64_t> evaluation_seed() const override {
    return cfg_.seed;
  }

  /// Rank-one update of the combining matrix per candidate antenna.
  double decrement_objectives(std::span<const int> bits,
                              std::span<double> out) const override;
  bool incremental_decrements() const override { return true; }

  double ergodic_rate(std::span<const int> bits) const;
  double ideal_rate() const;
  const SystemConfig& config() const noexcept { return cfg_; }
  std::span<const ChannelRealization> channels() const noexcept {
    return channels_;
  }

 private:
  SystemConfig cfg_;
  AllowedSet allowed_;
  std::vector<ChannelRealization> channels_;
};

}  // namespace bitalloc
