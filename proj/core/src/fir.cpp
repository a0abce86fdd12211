// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/fir.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bitalloc/error.hpp"

namespace bitalloc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSymmetryTol = 1e-12;
constexpr double kIntegerTol = 1e-9;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Weight of unique coefficient n in the full-length count.
int tap_weight(std::size_t n, std::size_t center) { return n < center ? 2 : 1; }

}  // namespace

// ---------------------------------------------------------------- spec

FilterSpec FilterSpec::from_pi_fractions(std::span<const double> edges,
                                         std::span<const double> desired,
                                         std::span<const double> weight,
                                         std::size_t taps, int grid_density) {
  if (edges.size() % 2 != 0) {
    throw ContractViolation("band edges must come in lo/hi pairs");
  }
  const std::size_t nb = edges.size() / 2;
  if (desired.size() != nb || weight.size() != nb) {
    throw ContractViolation("need one desired and one weight value per band (" +
                            std::to_string(nb) + " bands)");
  }
  FilterSpec spec;
  spec.taps = taps;
  spec.grid_density = grid_density;
  for (std::size_t i = 0; i < nb; ++i) {
    spec.bands.push_back(
        {edges[2 * i] * kPi, edges[2 * i + 1] * kPi, desired[i], weight[i]});
  }
  spec.validate();
  return spec;
}

void FilterSpec::validate() const {
  if (bands.empty()) throw ContractViolation("filter spec has no bands");
  if (taps == 0 || taps % 2 == 0) {
    throw ContractViolation("Type I filter needs an odd length, got " +
                            std::to_string(taps));
  }
  if (grid_density < 1) throw ContractViolation("grid density must be >= 1");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const Band& b = bands[i];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) ||
        !std::isfinite(b.desired) || !std::isfinite(b.weight)) {
      throw ContractViolation("band " + std::to_string(i) + " is not finite");
    }
    if (b.lo < 0.0 || b.hi > kPi * (1.0 + 1e-15) || !(b.lo < b.hi)) {
      throw ContractViolation("band " + std::to_string(i) +
                              " must satisfy 0 <= lo < hi <= pi");
    }
    if (i > 0 && b.lo < bands[i - 1].hi) {
      throw ContractViolation("band " + std::to_string(i) +
                              " overlaps or precedes band " +
                              std::to_string(i - 1));
    }
    if (!(b.weight > 0.0)) {
      throw ContractViolation("band " + std::to_string(i) +
                              " weight must be positive");
    }
  }
}

FilterSpec table_filter_spec(char id, std::size_t taps) {
  switch (id) {
    case 'A': {
      const double e[] = {0.0, 0.4, 0.5, 1.0}, d[] = {1, 0}, w[] = {1, 1};
      return FilterSpec::from_pi_fractions(e, d, w, taps);
    }
    case 'B': {
      const double e[] = {0.0, 0.4, 0.5, 1.0}, d[] = {1, 0}, w[] = {1, 10};
      return FilterSpec::from_pi_fractions(e, d, w, taps);
    }
    case 'C': {
      const double e[] = {0.0, 0.24, 0.4, 0.68, 0.84, 1.0}, d[] = {1, 0, 1},
                   w[] = {1, 1, 1};
      return FilterSpec::from_pi_fractions(e, d, w, taps);
    }
    case 'D': {
      const double e[] = {0.02, 0.42, 0.52, 0.98}, d[] = {1, 0}, w[] = {1, 1};
      return FilterSpec::from_pi_fractions(e, d, w, taps);
    }
    default:
      throw ContractViolation(std::string("unknown filter spec '") + id +
                              "', expected A, B, C or D");
  }
}

// -------------------------------------------------------- coefficients

CoefficientSet::CoefficientSet(std::vector<double> h) : h_(std::move(h)) {
  if (h_.empty()) throw ContractViolation("coefficient set is empty");
  if (h_.size() % 2 == 0) {
    throw ContractViolation("Type I filter needs an odd length, got " +
                            std::to_string(h_.size()));
  }
  for (std::size_t n = 0; n < h_.size(); ++n) {
    if (!std::isfinite(h_[n])) {
      throw ContractViolation("coefficient " + std::to_string(n) +
                              " is not finite");
    }
  }
  const std::size_t N = h_.size();
  for (std::size_t n = 0; n < N / 2; ++n) {
    if (std::abs(h_[n] - h_[N - 1 - n]) > kSymmetryTol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "coefficients are not even-symmetric: h[" << n << "] = " << h_[n]
          << ", h[" << N - 1 - n << "] = " << h_[N - 1 - n];
      throw ContractViolation(msg.str());
    }
  }
}

CoefficientSet parse_coefficients(std::istream& in, std::string_view source) {
  std::vector<double> h;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const std::string token = trim(view);
    if (token.empty()) continue;
    double value = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ContractViolation(std::string(source) + ":" +
                              std::to_string(lineno) + ": cannot parse '" +
                              token + "' as a coefficient");
    }
    if (!std::isfinite(value)) {
      throw ContractViolation(std::string(source) + ":" +
                              std::to_string(lineno) +
                              ": coefficient is not finite");
    }
    h.push_back(value);
  }
  try {
    return CoefficientSet(std::move(h));
  } catch (const ContractViolation& e) {
    throw ContractViolation(std::string(source) + ": " + e.what());
  }
}

CoefficientSet load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ContractViolation("cannot open coefficient file " + path.string());
  }
  return parse_coefficients(in, path.string());
}

double magnitude(std::span<const double> h, double omega) {
  if (h.empty() || h.size() % 2 == 0) {
    throw ContractViolation("magnitude needs an odd-length filter");
  }
  const std::size_t c = (h.size() - 1) / 2;
  double sum = 0.0;
  for (std::size_t n = 0; n < c; ++n) {
    sum += 2.0 * h[n] * std::cos(static_cast<double>(c - n) * omega);
  }
  return sum + h[c];
}

BitVector FirAllocation::full() const {
  BitVector out(half_bits);
  if (out.empty()) return out;
  out.insert(out.end(), half_bits.rbegin() + 1, half_bits.rend());
  return out;
}

long long FirAllocation::consumption() const {
  if (half_bits.empty()) return 0;
  const long long side =
      std::accumulate(half_bits.begin(), half_bits.end() - 1, 0LL);
  return 2 * side + half_bits.back();
}

// ----------------------------------------------------------- quantizer

double FirQuantizer::apply(double x, int bits) const {
  if (kind == Kind::fixed) {
    return quantize_fixed(x, {sign_in_wordlength ? bits - 1 : bits});
  }
  return quantize_float(x, {exp_bits, bits});
}

int FirQuantizer::min_bits() const noexcept {
  return (kind == Kind::fixed && !sign_in_wordlength) ? 0 : 1;
}

void FirQuantizer::check_range(std::span<const double> h) const {
  if (kind == Kind::fixed) {
    for (std::size_t n = 0; n < h.size(); ++n) {
      if (!(std::abs(h[n]) < 1.0)) {
        throw ContractViolation("coefficient " + std::to_string(n) +
                                " lies outside (-1, 1); fixed-point "
                                "quantization would saturate");
      }
    }
    return;
  }
  const FloatQuantSpec fs{exp_bits, 1};
  if (exp_bits < 1 || exp_bits > 11) {
    throw ContractViolation("exponent bits must be in [1, 11]");
  }
  for (std::size_t n = 0; n < h.size(); ++n) {
    const double a = std::abs(h[n]);
    if (a == 0.0) continue;
    if (a < fs.min_normal() || a > fs.max_finite()) {
      throw ContractViolation("coefficient " + std::to_string(n) +
                              " is outside the normal range of a " +
                              std::to_string(exp_bits) + "-bit exponent");
    }
  }
}

// ----------------------------------------------------------- evaluator

FirEvaluator::FirEvaluator(FilterSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const std::size_t per_band =
      static_cast<std::size_t>(spec_.grid_density) * spec_.taps;
  for (const Band& b : spec_.bands) {
    for (std::size_t k = 0; k < per_band; ++k) {
      const double t =
          per_band == 1 ? 0.0 : static_cast<double>(k) / (per_band - 1);
      omega_.push_back(k + 1 == per_band ? b.hi : b.lo + (b.hi - b.lo) * t);
      desired_.push_back(b.desired);
      weight_.push_back(b.weight);
    }
  }
  const std::size_t c = (spec_.taps - 1) / 2;
  const std::size_t G = omega_.size();
  basis_.resize((c + 1) * G);
  for (std::size_t n = 0; n <= c; ++n) {
    for (std::size_t g = 0; g < G; ++g) {
      basis_[n * G + g] = std::cos(static_cast<double>(c - n) * omega_[g]);
    }
  }
}

void FirEvaluator::response(std::span<const double> unique_h,
                            std::span<double> out) const {
  const std::size_t c = (spec_.taps - 1) / 2;
  if (unique_h.size() != c + 1 || out.size() != omega_.size()) {
    throw ContractViolation("response buffer sizes do not match the grid");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t n = 0; n <= c; ++n) {
    const double a = n < c ? 2.0 * unique_h[n] : unique_h[n];
    const auto col = basis(n);
    for (std::size_t g = 0; g < out.size(); ++g) out[g] += a * col[g];
  }
}

double FirEvaluator::error_of_response(std::span<const double> r) const {
  double worst = 0.0;
  for (std::size_t g = 0; g < r.size(); ++g) {
    worst = std::max(worst, std::abs(weight_[g] * (r[g] - desired_[g])));
  }
  return worst;
}

double FirEvaluator::shifted_error(std::span<const double> r, std::size_t n,
                                   double delta) const {
  const auto col = basis(n);
  double worst = 0.0;
  for (std::size_t g = 0; g < r.size(); ++g) {
    worst = std::max(
        worst, std::abs(weight_[g] * (r[g] + delta * col[g] - desired_[g])));
  }
  return worst;
}

double FirEvaluator::error(std::span<const double> unique_h) const {
  std::vector<double> r(omega_.size());
  response(unique_h, r);
  return error_of_response(r);
}

double full_precision_error(const FilterSpec& spec, const CoefficientSet& h) {
  if (spec.taps != h.taps()) {
    throw ContractViolation("spec length " + std::to_string(spec.taps) +
                            " differs from coefficient length " +
                            std::to_string(h.taps()));
  }
  return FirEvaluator(spec).error(h.unique());
}

std::vector<double> quantize_coefficients(const CoefficientSet& h,
                                          const FirAllocation& alloc,
                                          const FirQuantizer& q) {
  const auto u = h.unique();
  if (alloc.half_bits.size() != u.size()) {
    throw ContractViolation("allocation has " +
                            std::to_string(alloc.half_bits.size()) +
                            " entries, filter has " + std::to_string(u.size()) +
                            " unique coefficients");
  }
  std::vector<double> out(u.size());
  for (std::size_t n = 0; n < u.size(); ++n) {
    out[n] = q.apply(u[n], alloc.half_bits[n]);
  }
  return out;
}

double minimax_error(const FilterSpec& spec, const CoefficientSet& h,
                     const FirAllocation& alloc, const FirQuantizer& q) {
  if (spec.taps != h.taps()) {
    throw ContractViolation("spec length " + std::to_string(spec.taps) +
                            " differs from coefficient length " +
                            std::to_string(h.taps()));
  }
  return FirEvaluator(spec).error(quantize_coefficients(h, alloc, q));
}

// ------------------------------------------------------------- problem

namespace {

AllowedSet default_fir_set(int avg_bits) {
  if (avg_bits < 1) {
    throw ContractViolation("average bits must be >= 1, got " +
                            std::to_string(avg_bits));
  }
  return AllowedSet::range(1, 2 * avg_bits + 1);
}

}  // namespace

FirProblem::FirProblem(FilterSpec spec, CoefficientSet h, FirQuantizer q,
                       int avg_bits, std::optional<AllowedSet> allowed)
    : evaluator_(std::move(spec)),
      h_(std::move(h)),
      q_(q),
      avg_bits_(avg_bits),
      allowed_(allowed ? std::move(*allowed) : default_fir_set(avg_bits)) {
  if (evaluator_.spec().taps != h_.taps()) {
    throw ContractViolation("spec length " +
                            std::to_string(evaluator_.spec().taps) +
                            " differs from coefficient length " +
                            std::to_string(h_.taps()));
  }
  if (allowed_.min() < q_.min_bits()) {
    throw ContractViolation("allowed set reaches " +
                            std::to_string(allowed_.min()) +
                            " bits; quantizer needs at least " +
                            std::to_string(q_.min_bits()));
  }
  q_.check_range(h_.values());

  const auto u = h_.unique();
  const std::size_t c = h_.center();
  const auto vals = allowed_.values();
  table_.resize(u.size() * vals.size());
  for (std::size_t n = 0; n < u.size(); ++n) {
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const double qv = q_.apply(u[n], vals[k]);
      table_[n * vals.size() + k] = n < c ? 2.0 * qv : qv;
    }
  }
}

double FirProblem::quantized(std::size_t n, int bits) const {
  const auto vals = allowed_.values();
  const auto it = std::lower_bound(vals.begin(), vals.end(), bits);
  if (it == vals.end() || *it != bits) {
    throw ContractViolation("bit count " + std::to_string(bits) +
                            " is not in the allowed set");
  }
  return table_[n * vals.size() + static_cast<std::size_t>(it - vals.begin())];
}

double FirProblem::objective(std::span<const int> bits) const {
  check_dimension(bits);
  const std::size_t G = evaluator_.grid_size();
  std::vector<double> r(G, 0.0);
  for (std::size_t n = 0; n < bits.size(); ++n) {
    const double a = quantized(n, bits[n]);
    const auto col = evaluator_.basis(n);
    for (std::size_t g = 0; g < G; ++g) r[g] += a * col[g];
  }
  return evaluator_.error_of_response(r);
}

double FirProblem::consumption(std::span<const int> bits) const {
  check_dimension(bits);
  long long side = 0;
  for (std::size_t n = 0; n + 1 < bits.size(); ++n) side += bits[n];
  return static_cast<double>(2 * side + bits.back());
}

double FirProblem::decrement_objectives(std::span<const int> bits,
                                        std::span<double> out) const {
  check_dimension(bits);
  if (out.size() != bits.size()) {
    throw ContractViolation("sensitivity buffer length mismatch");
  }
  const std::size_t G = evaluator_.grid_size();
  std::vector<double> r(G, 0.0);
  for (std::size_t n = 0; n < bits.size(); ++n) {
    const double a = quantized(n, bits[n]);
    const auto col = evaluator_.basis(n);
    for (std::size_t g = 0; g < G; ++g) r[g] += a * col[g];
  }
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const auto lower = allowed_.next_lower(bits[j]);
    if (!lower) {
      out[j] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double delta = quantized(j, *lower) - quantized(j, bits[j]);
    out[j] = evaluator_.shifted_error(r, j, delta);
  }
  return evaluator_.error_of_response(r);
}

// ------------------------------------------------- closed-form allocators

FirAllocation lc_fixed_alloc(std::size_t taps, int avg_bits) {
  if (taps == 0 || taps % 2 == 0) {
    throw ContractViolation("Type I filter needs an odd length, got " +
                            std::to_string(taps));
  }
  if (avg_bits < 0) throw ContractViolation("average bits must be >= 0");
  return {BitVector((taps + 1) / 2, avg_bits)};
}

std::vector<double> lc_float_alloc(std::span<const double> h_full,
                                   double avg_mantissa) {
  if (h_full.empty() || h_full.size() % 2 == 0) {
    throw ContractViolation("Type I filter needs an odd length");
  }
  double log_sum = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < h_full.size(); ++n) {
    const double a = std::abs(h_full[n]);
    if (a == 0.0) {
      throw ContractViolation("coefficient " + std::to_string(n) +
                              " is zero; log-magnitude allocation undefined");
    }
    log_sum += std::log2(a);
    min_abs = std::min(min_abs, a);
  }
  const double log_gm = log_sum / static_cast<double>(h_full.size());
  const double needed = 1.0 + std::ceil(log_gm - std::log2(min_abs));
  if (avg_mantissa < needed) {
    throw InfeasibleBudget(
        "average mantissa " + std::to_string(avg_mantissa) +
        " is below the bound 1 + ceil(log2(GM/min|h|)) = " +
        std::to_string(needed));
  }
  const std::size_t c = (h_full.size() - 1) / 2;
  std::vector<double> out(c + 1);
  for (std::size_t n = 0; n <= c; ++n) {
    out[n] = avg_mantissa + std::log2(std::abs(h_full[n])) - log_gm;
  }
  return out;
}

std::vector<double> lc_float_alloc(const CoefficientSet& h,
                                   double avg_mantissa) {
  return lc_float_alloc(h.values(), avg_mantissa);
}

std::vector<double> lc_float_alloc_floored(const CoefficientSet& h,
                                           double avg_mantissa,
                                           double floor_bits) {
  const auto u = h.unique();
  const std::size_t c = h.center();
  std::vector<double> logs(u.size());
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u[n] == 0.0) {
      throw ContractViolation("coefficient " + std::to_string(n) +
                              " is zero; log-magnitude allocation undefined");
    }
    logs[n] = std::log2(std::abs(u[n]));
  }
  const double total = static_cast<double>(h.taps()) * avg_mantissa;
  if (total < static_cast<double>(h.taps()) * floor_bits) {
    throw InfeasibleBudget("budget " + std::to_string(total) +
                           " cannot give every coefficient " +
                           std::to_string(floor_bits) + " bits");
  }

  // Pin the k smallest magnitudes to the floor; the first k for which the
  // smallest free coordinate clears the floor is the KKT point.
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return logs[a] < logs[b]; });
  double free_weight = 0.0;
  double free_logs = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    free_weight += tap_weight(n, c);
    free_logs += tap_weight(n, c) * logs[n];
  }
  double pinned_bits = 0.0;
  std::size_t k = 0;
  double level = 0.0;
  for (; k < order.size(); ++k) {
    level = (total - pinned_bits - free_logs) / free_weight;
    if (level + logs[order[k]] >= floor_bits) break;
    const double w = tap_weight(order[k], c);
    pinned_bits += w * floor_bits;
    free_weight -= w;
    free_logs -= w * logs[order[k]];
  }
  std::vector<double> out(u.size(), floor_bits);
  for (std::size_t i = k; i < order.size(); ++i) {
    out[order[i]] = level + logs[order[i]];
  }
  return out;
}

double lc_tradeoff(double relaxed, double coeff, bool is_center) {
  const double weight = (is_center ? kPi / 6.0 : kPi / 3.0) * coeff * coeff;
  const double fl = std::floor(relaxed);
  return (std::exp2(-2.0 * fl) - std::exp2(-2.0 * relaxed)) * weight /
         (relaxed - fl);
}

FirAllocation lc_float_map(std::span<const double> relaxed,
                           const CoefficientSet& h, double avg_mantissa) {
  const auto u = h.unique();
  const std::size_t c = h.center();
  if (relaxed.size() != u.size()) {
    throw ContractViolation("relaxed allocation has " +
                            std::to_string(relaxed.size()) + " entries, need " +
                            std::to_string(u.size()));
  }
  FirAllocation alloc;
  alloc.half_bits.resize(u.size());
  std::vector<std::size_t> fractional;
  std::vector<double> key;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = relaxed[i];
    const double nearest = std::round(r);
    if (std::abs(r - nearest) <= kIntegerTol) {
      alloc.half_bits[i] = static_cast<int>(nearest);
      continue;
    }
    alloc.half_bits[i] = static_cast<int>(std::ceil(r));
    fractional.push_back(i);
    key.push_back(lc_tradeoff(r, u[i], i == c));
  }
  const double cap = static_cast<double>(h.taps()) * avg_mantissa;
  // Demotion order: ascending K, lowest index on ties.
  std::vector<std::size_t> order(fractional.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  std::size_t next = 0;
  while (static_cast<double>(alloc.consumption()) > cap) {
    if (next == order.size()) {
      throw InfeasibleBudget("flooring every fractional coordinate still "
                             "exceeds the mantissa budget");
    }
    --alloc.half_bits[fractional[order[next++]]];
  }
  return alloc;
}

double fixed_msqe(std::span<const double> half_bits) {
  if (half_bits.empty()) return 0.0;
  const std::size_t c = half_bits.size() - 1;
  double sum = 0.0;
  for (std::size_t n = 0; n < c; ++n) {
    sum += kPi / 6.0 * std::exp2(-2.0 * half_bits[n]);
  }
  return sum + kPi / 12.0 * std::exp2(-2.0 * half_bits[c]);
}

double float_msqe(std::span<const double> unique_h,
                  std::span<const double> half_bits) {
  if (unique_h.size() != half_bits.size()) {
    throw ContractViolation("coefficient and bit vectors differ in length");
  }
  if (half_bits.empty()) return 0.0;
  const std::size_t c = half_bits.size() - 1;
  double sum = 0.0;
  for (std::size_t n = 0; n < c; ++n) {
    sum += kPi / 3.0 * unique_h[n] * unique_h[n] * std::exp2(-2.0 * half_bits[n]);
  }
  return sum + kPi / 6.0 * unique_h[c] * unique_h[c] *
                   std::exp2(-2.0 * half_bits[c]);
}

}  // namespace bitalloc
