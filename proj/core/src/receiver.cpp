// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "bitalloc/error.hpp"

namespace bitalloc {

namespace {

constexpr double kBetaTable[] = {1.0, 0.3634, 0.1175, 0.03454, 0.009497,
                                 0.002499};

// Per-realization pieces of the SINR: Q = G^H D_a G (K x K, row k holds
// g_k^H D_a g_i) and the noise term g_k^H (D_a^2 + R_nq) g_k.
struct RateTerms {
  std::vector<cplx> Q;
  std::vector<double> noise;
};

std::vector<double> row_power(const ChannelRealization& ch) {
  std::vector<double> p(static_cast<std::size_t>(ch.antennas), 0.0);
  for (int j = 0; j < ch.antennas; ++j) {
    for (int i = 0; i < ch.users; ++i) p[j] += std::norm(ch.at(j, i));
  }
  return p;
}

// alpha^2 + alpha beta (p_u ||row_j||^2 + 1) for antenna j at `bits`.
double noise_weight(int bits, double p_u, double row_pow) {
  const double a = adc_alpha(bits);
  return a * a + a * adc_beta(bits) * (p_u * row_pow + 1.0);
}

RateTerms rate_terms(const ChannelRealization& ch, std::span<const int> bits,
                     double p_u, std::span<const double> rows) {
  const int K = ch.users;
  RateTerms t;
  t.Q.assign(static_cast<std::size_t>(K) * K, cplx(0.0, 0.0));
  t.noise.assign(static_cast<std::size_t>(K), 0.0);
  for (int j = 0; j < ch.antennas; ++j) {
    const double a = adc_alpha(bits[j]);
    if (a == 0.0) continue;
    const double nw = noise_weight(bits[j], p_u, rows[j]);
    for (int k = 0; k < K; ++k) {
      const cplx gk = std::conj(ch.at(j, k));
      t.noise[k] += std::norm(ch.at(j, k)) * nw;
      for (int i = 0; i < K; ++i) t.Q[k * K + i] += a * gk * ch.at(j, i);
    }
  }
  return t;
}

double rate_from_terms(std::span<const cplx> Q, std::span<const double> noise,
                       int K, double p_u) {
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const double signal = p_u * std::norm(Q[k * K + k]);
    if (signal == 0.0) continue;
    double phi = noise[k];
    for (int i = 0; i < K; ++i) {
      if (i != k) phi += p_u * std::norm(Q[k * K + i]);
    }
    total += std::log2(1.0 + signal / phi);
  }
  return total;
}

}  // namespace

void SystemConfig::validate() const {
  if (users < 1) throw ContractViolation("users must be >= 1");
  if (antennas < users) throw ContractViolation("antennas must be >= users");
  if (!(p_u > 0.0) || !std::isfinite(p_u)) {
    throw ContractViolation("p_u must be positive");
  }
  if (!(r_min > 0.0) || !(cell_radius > r_min)) {
    throw ContractViolation("need 0 < r_min < cell_radius");
  }
  if (!(shadow_db >= 0.0)) throw ContractViolation("shadow_db must be >= 0");
  if (avg_bits < 0) throw ContractViolation("avg_bits must be >= 0");
  if (mc_channels < 1) throw ContractViolation("mc_channels must be >= 1");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double adc_beta(int bits) {
  if (bits < 0) throw ContractViolation("ADC bits must be >= 0");
  if (bits <= 5) return kBetaTable[bits];
  return std::numbers::pi * std::sqrt(3.0) / 2.0 * std::exp2(-2.0 * bits);
}

double adc_alpha(int bits) { return bits == 0 ? 0.0 : 1.0 - adc_beta(bits); }

double adc_power(int bits) {
  if (bits < 0) throw ContractViolation("ADC bits must be >= 0");
  return bits == 0 ? 0.0 : std::exp2(static_cast<double>(bits));
}

std::vector<double> draw_large_scale(const SystemConfig& cfg, Rng& rng) {
  const double R = cfg.cell_radius;
  const double half_height = std::sqrt(3.0) / 2.0 * R;
  std::uniform_real_distribution<double> ux(-R, R);
  std::uniform_real_distribution<double> uy(-half_height, half_height);
  std::normal_distribution<double> shadow(0.0, 1.0);
  std::vector<double> gamma(static_cast<std::size_t>(cfg.users));
  for (auto& g : gamma) {
    double r = 0.0;
    for (;;) {
      const double x = ux(rng);
      const double y = uy(rng);
      // Hexagon with vertices on the x axis at distance R.
      if (std::sqrt(3.0) * std::abs(x) + std::abs(y) > std::sqrt(3.0) * R) {
        continue;
      }
      r = std::hypot(x, y);
      if (r >= cfg.r_min) break;
    }
    const double o = std::pow(10.0, cfg.shadow_db * shadow(rng) / 10.0);
    g = o * std::pow(r / cfg.r_min, -cfg.path_loss_exp);
  }
  return gamma;
}

ChannelRealization make_channel(int antennas, int users,
                                std::span<const cplx> H,
                                std::span<const double> gamma) {
  if (antennas < 1 || users < 1 ||
      H.size() != static_cast<std::size_t>(antennas) * users ||
      gamma.size() != static_cast<std::size_t>(users)) {
    throw ContractViolation("channel dimensions do not match");
  }
  ChannelRealization ch;
  ch.antennas = antennas;
  ch.users = users;
  ch.gamma.assign(gamma.begin(), gamma.end());
  ch.G.resize(H.size());
  for (int k = 0; k < users; ++k) {
    if (!(gamma[k] > 0.0) || !std::isfinite(gamma[k])) {
      throw ContractViolation("large-scale gain must be positive and finite");
    }
  }
  for (int j = 0; j < antennas; ++j) {
    for (int k = 0; k < users; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * users + k;
      ch.G[idx] = H[idx] * std::sqrt(gamma[k]);
    }
  }
  return ch;
}

ChannelRealization generate_channel(
    const SystemConfig& cfg, Rng& rng,
    std::optional<std::span<const double>> large_scale) {
  cfg.validate();
  std::vector<double> gamma = large_scale
                                  ? std::vector<double>(large_scale->begin(),
                                                        large_scale->end())
                                  : draw_large_scale(cfg, rng);
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  std::vector<cplx> H(static_cast<std::size_t>(cfg.antennas) * cfg.users);
  for (auto& h : H) {
    const double re = n(rng);
    const double im = n(rng);
    h = {re, im};
  }
  return make_channel(cfg.antennas, cfg.users, H, gamma);
}

double sum_rate(const ChannelRealization& ch, std::span<const int> bits,
                double p_u) {
  if (bits.size() != static_cast<std::size_t>(ch.antennas)) {
    throw ContractViolation("bit vector has length " +
                            std::to_string(bits.size()) + ", channel has " +
                            std::to_string(ch.antennas) + " antennas");
  }
  const auto rows = row_power(ch);
  const RateTerms t = rate_terms(ch, bits, p_u, rows);
  return rate_from_terms(t.Q, t.noise, ch.users, p_u);
}

double ideal_sum_rate(const ChannelRealization& ch, double p_u) {
  const int K = ch.users;
  std::vector<cplx> Q(static_cast<std::size_t>(K) * K, cplx(0.0, 0.0));
  std::vector<double> noise(static_cast<std::size_t>(K), 0.0);
  for (int j = 0; j < ch.antennas; ++j) {
    for (int k = 0; k < K; ++k) {
      const cplx gk = std::conj(ch.at(j, k));
      noise[k] += std::norm(ch.at(j, k));
      for (int i = 0; i < K; ++i) Q[k * K + i] += gk * ch.at(j, i);
    }
  }
  return rate_from_terms(Q, noise, K, p_u);
}

ReceiverProblem::ReceiverProblem(SystemConfig cfg)
    : cfg_(std::move(cfg)), allowed_(AllowedSet::range(0, 1)) {
  cfg_.validate();
  allowed_ = cfg_.allowed();
  Rng rng(substream_seed(cfg_.seed, "channel"));
  std::vector<double> frozen;
  if (cfg_.freeze_large_scale) frozen = draw_large_scale(cfg_, rng);
  channels_.reserve(static_cast<std::size_t>(cfg_.mc_channels));
  for (int r = 0; r < cfg_.mc_channels; ++r) {
    channels_.push_back(
        cfg_.freeze_large_scale
            ? generate_channel(cfg_, rng, std::span<const double>(frozen))
            : generate_channel(cfg_, rng));
  }
}

double ReceiverProblem::ergodic_rate(std::span<const int> bits) const {
  check_dimension(bits);
  double total = 0.0;
  for (const auto& ch : channels_) total += sum_rate(ch, bits, cfg_.p_u);
  return total / static_cast<double>(channels_.size());
}

double ReceiverProblem::ideal_rate() const {
  double total = 0.0;
  for (const auto& ch : channels_) total += ideal_sum_rate(ch, cfg_.p_u);
  return total / static_cast<double>(channels_.size());
}

double ReceiverProblem::objective(std::span<const int> bits) const {
  return -ergodic_rate(bits);
}

double ReceiverProblem::consumption(std::span<const int> bits) const {
  check_dimension(bits);
  double total = 0.0;
  for (int b : bits) total += adc_power(b);
  return total;
}

double ReceiverProblem::decrement_objectives(std::span<const int> bits,
                                             std::span<double> out) const {
  check_dimension(bits);
  if (out.size() != bits.size()) {
    throw ContractViolation("sensitivity buffer length mismatch");
  }
  const int M = cfg_.antennas;
  const int K = cfg_.users;
  const double p_u = cfg_.p_u;

  std::vector<std::optional<int>> lower(bits.size());
  int active = 0;
  for (int j = 0; j < M; ++j) {
    lower[j] = allowed_.next_lower(bits[j]);
    if (adc_alpha(bits[j]) != 0.0) ++active;
  }

  std::vector<double> totals(bits.size(), 0.0);
  double base = 0.0;
  std::vector<cplx> Q(static_cast<std::size_t>(K) * K);
  std::vector<double> noise(static_cast<std::size_t>(K));
  for (const auto& ch : channels_) {
    const auto rows = row_power(ch);
    const RateTerms t = rate_terms(ch, bits, p_u, rows);
    base += rate_from_terms(t.Q, t.noise, K, p_u);
    for (int j = 0; j < M; ++j) {
      if (!lower[j]) continue;
      const int nb = *lower[j];
      const double a_new = adc_alpha(nb);
      if (a_new == 0.0 && adc_alpha(bits[j]) != 0.0 && active == 1) {
        continue;  // array switched off: rate 0
      }
      const double da = a_new - adc_alpha(bits[j]);
      const double dn = noise_weight(nb, p_u, rows[j]) -
                        noise_weight(bits[j], p_u, rows[j]);
      Q = t.Q;
      noise = t.noise;
      for (int k = 0; k < K; ++k) {
        const cplx gk = std::conj(ch.at(j, k));
        noise[k] = std::max(0.0, noise[k] + std::norm(ch.at(j, k)) * dn);
        for (int i = 0; i < K; ++i) Q[k * K + i] += da * gk * ch.at(j, i);
      }
      totals[j] += rate_from_terms(Q, noise, K, p_u);
    }
  }
  const double count = static_cast<double>(channels_.size());
  for (int j = 0; j < M; ++j) {
    out[j] = lower[j] ? -totals[j] / count
                      : std::numeric_limits<double>::infinity();
  }
  return -base / count;
}

}  // namespace bitalloc
