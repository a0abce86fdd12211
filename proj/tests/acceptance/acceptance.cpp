// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors
//
// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and never relaxed at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bitalloc/convergence.hpp"
#include "bitalloc/error.hpp"
#include "bitalloc/fir.hpp"
#include "bitalloc/qgd.hpp"
#include "bitalloc/quantizers.hpp"
#include "bitalloc/receiver.hpp"
#include "bitalloc/swarm.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "generators.hpp"

namespace {

using namespace bitalloc;
namespace fs = std::filesystem;

const fs::path kFixtures = BITALLOC_FIXTURE_DIR "/fir";

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;
  std::vector<std::string> info;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back("violated: " + what);
    }
  }
  void note(const std::string& what) { info.push_back(what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CoefficientSet fixture(const std::string& name) {
  return load_coefficients(kFixtures / (name + ".txt"));
}

// ------------------------------------------------------------ 1. oracle

CoefficientSet toy_filter(Rng& rng, std::size_t unique, double cutoff) {
  const std::size_t taps = 2 * unique - 1;
  const double c = static_cast<double>(unique - 1);
  std::vector<double> h(taps);
  for (std::size_t n = 0; n < taps; ++n) {
    const double t = static_cast<double>(n) - c;
    const double sinc = t == 0.0 ? cutoff : std::sin(cutoff * std::numbers::pi * t) / (std::numbers::pi * t);
    const double win = taps == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (taps - 1));
    h[n] = sinc * win * testing::uniform_real(rng, 0.9, 1.1);
  }
  for (std::size_t n = 0; n < unique - 1; ++n) h[taps - 1 - n] = h[n];
  return CoefficientSet(h);
}

struct OracleTally {
  int hits = 0;
  int total = 0;
  int worse_than_uniform = 0;
};

void oracle_trial(const AllocationProblem& p, const SwarmConfig& cfg, OracleTally& t) {
  const auto oracle = brute_force_optimum(p);
  const auto r = run_gcpso(p, cfg);
  const BitVector uniform(p.dimension(), p.budget_bits());
  ++t.total;
  if (r.feasible && r.objective == oracle.value) ++t.hits;
  if (!(r.objective <= p.objective(uniform))) ++t.worse_than_uniform;
}

Verdict criterion_oracle() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  SwarmConfig cfg;  // 550 particles, 100 iterations, 10 restarts
  OracleTally fir, rx, qgd;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = static_cast<std::size_t>(testing::uniform_int(rng, 2, 5));
    const double cutoff = testing::uniform_real(rng, 0.25, 0.6);
    const auto h = toy_filter(rng, n, cutoff);
    const double e[] = {0.0, cutoff - 0.1, cutoff + 0.1, 1.0}, d[] = {1, 0}, w[] = {1, 1};
    const int avg = testing::uniform_int(rng, 3, 5);
    const FirProblem p(FilterSpec::from_pi_fractions(e, d, w, h.taps()), h, FirQuantizer::fixed(), avg,
                       AllowedSet::range(avg - 2, avg + 3));
    cfg.seed = rng();
    oracle_trial(p, cfg, fir);
  }
  for (int i = 0; i < 20; ++i) {
    SystemConfig s;
    s.antennas = testing::uniform_int(rng, 2, 5);
    s.users = testing::uniform_int(rng, 1, 2);
    s.avg_bits = testing::uniform_int(rng, 1, 2);
    s.mc_channels = 6;
    s.p_u = db_to_linear(10.0 * testing::uniform_int(rng, 0, 2));
    s.seed = rng();
    const ReceiverProblem p(s);
    cfg.seed = rng();
    oracle_trial(p, cfg, rx);
  }
  std::vector<QgdTask> tasks(20);
  for (int i = 0; i < 20; ++i) {
    const std::size_t dim = static_cast<std::size_t>(testing::uniform_int(rng, 2, 5));
    QgdTask& task = tasks[static_cast<std::size_t>(i)];
    task = (i % 2) ? make_logistic_synthetic(12 * dim, dim, rng()) : make_least_squares(3 * dim, dim, rng());
    task.step = (i % 2) ? 0.5 : 0.3 / static_cast<double>(task.rows);
    task.avg_bits = testing::uniform_int(rng, 1, 2);
    std::vector<double> z(dim);
    for (auto& x : z) x = testing::uniform_real(rng, -1.0, 1.0);
    const auto g = gradient(task, z);
    const QgdProblem p(task, z, g);
    cfg.seed = rng();
    oracle_trial(p, cfg, qgd);
  }
  for (const auto& [name, t] : {std::pair{"fir", fir}, std::pair{"receiver", rx}, std::pair{"qgd", qgd}}) {
    v.details.push_back(fmt("%s %d/%d optimal, %d worse than uniform", name, t.hits, t.total, t.worse_than_uniform));
    v.check(t.hits * 10 >= t.total * 9, std::string(name) + " hit rate >= 90%");
    v.check(t.worse_than_uniform == 0, std::string(name) + " never worse than uniform");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.check(secs < 120.0, fmt("runtime %.1f s under 2 min", secs));
  return v;
}

// ------------------------------------------------------------ 2. uniform LC

struct TableCase {
  const char* name;
  char spec;
  std::size_t taps;
  int fixed_bits;
  int mantissa_bits;
};

constexpr TableCase kTable[] = {
    {"A35", 'A', 35, 8, 4}, {"A45", 'A', 45, 8, 4}, {"B35", 'B', 35, 9, 5}, {"B45", 'B', 45, 9, 5},
    {"C35", 'C', 35, 8, 4}, {"C45", 'C', 45, 8, 4}, {"D35", 'D', 35, 8, 4}, {"D45", 'D', 45, 8, 4},
};

Verdict criterion_uniform_lc() {
  Verdict v;
  for (const auto& c : kTable) {
    const auto h = fixture(c.name);
    const auto spec = table_filter_spec(c.spec, c.taps);
    const auto lc = lc_fixed_alloc(c.taps, c.fixed_bits);
    v.check(lc.half_bits == BitVector(h.center() + 1, c.fixed_bits), std::string(c.name) + " uniform vector");
    const FirProblem p(spec, h, FirQuantizer::fixed(), c.fixed_bits);
    const double naive = p.objective(BitVector(p.dimension(), c.fixed_bits));
    const double via_lc = minimax_error(spec, h, lc, FirQuantizer::fixed());
    v.check(naive == via_lc, std::string(c.name) + " bit-identical error");
  }
  v.details.push_back("8 fixtures, lc == naive bit-for-bit");
  return v;
}

// ------------------------------------------------------------ 3. LC float

struct Relaxation {
  std::vector<double> c;  // surrogate weight per unique coefficient
  std::vector<double> a;  // consumption weight (2 side, 1 center)
  double budget = 0.0;
  double value(std::span<const double> m) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += c[i] * std::pow(4.0, -m[i]);
    return s;
  }
};

// Equality-constrained Newton with backtracking, from the uniform point.
std::vector<double> newton_minimize(const Relaxation& r, double start) {
  const std::size_t n = r.c.size();
  std::vector<double> m(n, start), g(n), hinv(n), dm(n);
  const double k = 2.0 * std::log(2.0);
  for (int it = 0; it < 200; ++it) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = r.c[i] * std::pow(4.0, -m[i]);
      g[i] = -k * t;
      hinv[i] = 1.0 / (k * k * t);
      num += r.a[i] * hinv[i] * g[i];
      den += r.a[i] * hinv[i] * r.a[i];
    }
    const double nu = -num / den;
    double dec = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dm[i] = -hinv[i] * (g[i] + r.a[i] * nu);
      dec += -g[i] * dm[i];
    }
    if (dec < 1e-30) break;
    double step = 1.0;
    const double f0 = r.value(m);
    std::vector<double> trial(n);
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = m[i] + step * dm[i];
      if (r.value(trial) <= f0 - 0.25 * step * dec || step < 1e-12) break;
      step *= 0.5;
    }
    m = trial;
  }
  return m;
}

Verdict criterion_lc_float() {
  Verdict v;
  Rng rng(303);
  int checked = 0, alternatives = 0, cross_better = 0;
  double worst_gap = 0.0, worst_cross = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t taps = 2 * static_cast<std::size_t>(testing::uniform_int(rng, 1, 10)) + 1;
    const auto h = testing::random_coefficients(rng, taps, 1e-3, 0.5);
    const auto u = h.unique();
    const std::size_t c = h.center();
    double log_gm = 0.0, min_abs = 1.0;
    for (double x : h.values()) {
      log_gm += std::log2(std::fabs(x));
      min_abs = std::min(min_abs, std::fabs(x));
    }
    log_gm /= static_cast<double>(taps);
    const double bound = 1.0 + std::ceil(log_gm - std::log2(min_abs));
    const double avg = bound + testing::uniform_int(rng, 0, 4) + testing::uniform_int(rng, 0, 9) / 10.0;
    const auto relaxed = lc_float_alloc(h, avg);

    Relaxation r;
    for (std::size_t i = 0; i <= c; ++i) {
      const bool center = i == c;
      r.c.push_back((center ? std::numbers::pi / 6 : std::numbers::pi / 3) * u[i] * u[i]);
      r.a.push_back(center ? 1.0 : 2.0);
    }
    r.budget = static_cast<double>(taps) * avg;
    const auto numeric = newton_minimize(r, avg);
    const double f_closed = r.value(relaxed), f_num = r.value(numeric);
    const double gap = std::fabs(f_closed - f_num) / f_num;
    worst_gap = std::max(worst_gap, gap);
    v.check(gap <= 1e-6, fmt("trial %d relaxed objective %.3e vs numeric %.3e", trial, f_closed, f_num));

    const auto mapped = lc_float_map(relaxed, h, avg);
    v.check(static_cast<double>(mapped.consumption()) <= r.budget + 1e-9, fmt("trial %d mapped budget", trial));
    std::vector<double> mb(mapped.half_bits.begin(), mapped.half_bits.end());
    const double f_mapped = float_msqe(u, mb);

    std::vector<std::size_t> demoted, kept;
    for (std::size_t i = 0; i <= c; ++i) {
      const double frac = relaxed[i] - std::floor(relaxed[i]);
      if (frac < 1e-9 || frac > 1.0 - 1e-9) continue;
      (mb[i] < std::ceil(relaxed[i]) ? demoted : kept).push_back(i);
    }
    for (std::size_t d : demoted) {
      for (std::size_t k : kept) {
        std::vector<double> alt = mb;
        alt[d] += 1.0;
        alt[k] -= 1.0;
        const bool same_weight = r.a[d] == r.a[k];
        const double f_alt = float_msqe(u, alt);
        if (same_weight) {
          ++alternatives;
          v.check(f_mapped <= f_alt * (1.0 + 1e-12), fmt("trial %d swap %zu->%zu beats mapping", trial, d, k));
        } else {
          double used = 0.0;
          for (std::size_t i = 0; i <= c; ++i) used += r.a[i] * alt[i];
          if (used <= r.budget + 1e-9 && f_alt < f_mapped) {
            ++cross_better;
            worst_cross = std::max(worst_cross, 1.0 - f_alt / f_mapped);
          }
        }
      }
    }
    ++checked;
  }
  v.details.push_back(fmt("%d sets, worst relaxed gap %.1e, %d same-weight swaps checked", checked, worst_gap,
                          alternatives));
  v.note(fmt("cross-weight (center/side) swaps better than the mapping: %d, up to %.2f%% lower surrogate",
             cross_better, 100.0 * worst_cross));
  return v;
}

// ------------------------------------------------------------ 4. FIR order

Verdict criterion_fir_order() {
  Verdict v;
  SwarmConfig cfg;
  cfg.population = 100;
  cfg.seed = 404;
  const double table_naive[] = {0.03266, 0.15879, 0.04687, 0.04692};  // A35/8, B35/9, C35/8, D35/8
  const double table_full[] = {0.01595, 0.05275, 0.002631, 0.01761};
  int idx = 0;
  for (const auto& c : kTable) {
    if (c.taps != 35) continue;
    const auto h = fixture(c.name);
    const auto spec = table_filter_spec(c.spec, c.taps);

    const FirProblem fx(spec, h, FirQuantizer::fixed(), c.fixed_bits);
    const double naive = fx.objective(BitVector(fx.dimension(), c.fixed_bits));
    const auto pp = run_ppso(fx, cfg);
    const auto gc = run_gcpso(fx, cfg);
    v.details.push_back(fmt("%s/%d fixed: gcpso %.5f ppso %.5f naive %.5f", c.name, c.fixed_bits, gc.objective,
                            pp.objective, naive));
    v.check(pp.feasible && gc.feasible, std::string(c.name) + " fixed feasible");
    v.check(gc.objective <= pp.objective, std::string(c.name) + " fixed gcpso <= ppso");
    v.check(pp.objective <= naive, std::string(c.name) + " fixed ppso <= naive");

    const double full = full_precision_error(spec, h);
    if (std::fabs(full - table_full[idx]) <= 0.01 * table_full[idx]) {
      const double rel = std::fabs(naive - table_naive[idx]) / table_naive[idx];
      v.check(rel <= 0.02, fmt("%s naive %.5f within 2%% of %.5f", c.name, naive, table_naive[idx]));
    } else {
      v.note(fmt("%s full-precision %.5f differs from design %.5f; naive value not gated", c.name, full,
                 table_full[idx]));
    }
    ++idx;

    const auto q = FirQuantizer::floating(5);
    const FirProblem fl(spec, h, q, c.mantissa_bits);
    const double fnaive = fl.objective(BitVector(fl.dimension(), c.mantissa_bits));
    std::vector<double> relaxed;
    try {
      relaxed = lc_float_alloc(h, c.mantissa_bits);
    } catch (const InfeasibleBudget&) {
      relaxed = lc_float_alloc_floored(h, c.mantissa_bits);
    }
    const auto lc_alloc = lc_float_map(relaxed, h, c.mantissa_bits);
    const double lc = minimax_error(spec, h, lc_alloc, q);
    const auto fpp = run_ppso(fl, cfg);
    const auto fgc = run_gcpso(fl, cfg);
    v.details.push_back(fmt("%s/[5,%d] float: gcpso %.5f ppso %.5f lc %.5f naive %.5f", c.name, c.mantissa_bits,
                            fgc.objective, fpp.objective, lc, fnaive));
    v.check(fpp.feasible && fgc.feasible, std::string(c.name) + " float feasible");
    v.check(fgc.objective <= fpp.objective, std::string(c.name) + " float gcpso <= ppso");
    v.check(fpp.objective <= lc, std::string(c.name) + " float ppso <= lc");
    v.check(lc <= fnaive, std::string(c.name) + " float lc <= naive");
  }
  return v;
}

// ------------------------------------------------------------ 5. error models

Verdict criterion_error_models() {
  Verdict v;
  constexpr int kSamples = 1'000'000;
  Rng rng(505);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int b : {4, 8, 12}) {
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = u(rng) * (1.0 - std::ldexp(1.0, -b));
      const double e = quantize_fixed(x, {b}) - x;
      sum += e;
      sq += e * e;
    }
    const double mean = sum / kSamples;
    const double var = sq / kSamples - mean * mean;
    const double rel = std::fabs(var / fixed_error_variance(b) - 1.0);
    v.details.push_back(fmt("fixed b=%d var ratio %.4f", b, var / fixed_error_variance(b)));
    v.check(rel <= 0.05, fmt("fixed b=%d within 5%%", b));
  }
  std::uniform_real_distribution<double> mant(1.0, 2.0);
  std::uniform_int_distribution<int> ex(-8, 8);
  for (int m : {4, 8, 12}) {
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = std::ldexp(mant(rng), ex(rng)) * ((rng() & 1u) ? 1.0 : -1.0);
      const double e = (quantize_float(x, {8, m}) - x) / x;
      sum += e;
      sq += e * e;
    }
    const double mean = sum / kSamples;
    const double var = sq / kSamples - mean * mean;
    const double rel = std::fabs(var / float_relative_error_variance(m) - 1.0);
    v.details.push_back(fmt("float m=%d var ratio %.4f", m, var / float_relative_error_variance(m)));
    v.check(rel <= 0.10, fmt("float m=%d within 10%%", m));
  }
  return v;
}

// ------------------------------------------------------------ 6. AQNM

Verdict criterion_aqnm() {
  Verdict v;
  const double table[] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};
  for (int b = 1; b <= 5; ++b) v.check(adc_beta(b) == table[b - 1], fmt("beta(%d) exact", b));
  for (int b = 6; b <= 20; ++b) {
    const double f = std::numbers::pi * std::sqrt(3.0) / 2.0 * std::ldexp(1.0, -2 * b);
    v.check(std::fabs(adc_beta(b) - f) <= 1e-15 * f, fmt("beta(%d) formula", b));
  }
  const std::vector<cplx> H{{0.3, -0.4}, {-1.1, 0.2}};
  const std::vector<double> gamma{2.0};
  const auto ch = make_channel(2, 1, H, gamma);
  const std::vector<int> bits{1, 4};
  const double p = 5.0;
  const double g1 = 2.0 * 0.25, g2 = 2.0 * 1.25;
  const double a1 = 1 - 0.3634, b1 = 0.3634, a2 = 1 - 0.009497, b2 = 0.009497;
  const double q = a1 * g1 + a2 * g2;
  const double noise = g1 * (a1 * a1 + a1 * b1 * (p * g1 + 1)) + g2 * (a2 * a2 + a2 * b2 * (p * g2 + 1));
  const double hand = std::log2(1.0 + p * q * q / noise);
  const double got = sum_rate(ch, bits, p);
  v.details.push_back(fmt("M=2 K=1 rate %.15f vs hand %.15f", got, hand));
  v.check(std::fabs(got - hand) <= 1e-12, "M=2 K=1 hand evaluation to 1e-12");
  return v;
}

// ------------------------------------------------------------ 7. receiver

Verdict criterion_receiver() {
  Verdict v;
  SwarmConfig cfg;
  cfg.population = 100;
  cfg.iterations = 60;
  cfg.restarts = 5;
  cfg.seed = 707;
  for (double db : {0.0, 10.0, 20.0}) {
    SystemConfig s;
    s.antennas = 16;
    s.users = 4;
    s.mc_channels = 50;
    s.avg_bits = 1;
    s.p_u = db_to_linear(db);
    s.seed = 77;
    const ReceiverProblem p(s);
    const double uniform = p.ergodic_rate(BitVector(16, 1));
    const auto pp = run_ppso(p, cfg);
    const auto gc = run_gcpso(p, cfg);
    const double rpp = -pp.objective, rgc = -gc.objective, ideal = p.ideal_rate();
    v.details.push_back(fmt("%g dB: gcpso %.4f ppso %.4f uniform %.4f ideal %.4f", db, rgc, rpp, uniform, ideal));
    v.check(pp.feasible && gc.feasible, fmt("%g dB feasible", db));
    v.check(rgc >= rpp, fmt("%g dB gcpso >= ppso", db));
    v.check(rpp >= uniform, fmt("%g dB ppso >= uniform", db));
    v.check(rgc < ideal && rpp < ideal && uniform < ideal, fmt("%g dB below ideal", db));
  }
  return v;
}

// ------------------------------------------------------------ 8. QGD

double fd_worst(const QgdTask& task, Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    std::vector<double> z(task.dim);
    for (auto& x : z) x = testing::uniform_real(rng, -1.0, 1.0);
    const auto g = gradient(task, z);
    for (std::size_t i = 0; i < task.dim; ++i) {
      auto zp = z, zm = z;
      const double h = 1e-5;
      zp[i] += h;
      zm[i] -= h;
      const double fd = (loss(task, zp) - loss(task, zm)) / (2 * h);
      worst = std::max(worst, std::fabs(fd - g[i]) / std::max(1.0, std::fabs(g[i])));
    }
  }
  return worst;
}

Verdict criterion_qgd() {
  Verdict v;
  QgdTask task = make_least_squares(200, 20, substream_seed(808, "data"));
  task.step = 1e-3;
  task.iterations = 200;
  task.avg_bits = 4;
  SwarmConfig cfg = qgd_swarm_defaults();
  cfg.population = 30;
  cfg.iterations = 20;
  cfg.seed = 808;
  const auto uniform = train(task, QgdStrategy::uniform, cfg);
  const auto gc = train(task, QgdStrategy::gcpso, cfg);
  v.details.push_back(fmt("final error gcpso %.3e uniform %.3e", gc.trace.back(), uniform.trace.back()));
  v.check(gc.trace.back() <= uniform.trace.back(), "gcpso final error <= uniform");
  Rng rng(809);
  const double ls = fd_worst(make_least_squares(60, 8, 1), rng);
  const double lg = fd_worst(make_logistic_synthetic(100, 8, 2), rng);
  v.details.push_back(fmt("finite-difference gap: least squares %.1e, logistic %.1e", ls, lg));
  v.check(ls <= 1e-6 && lg <= 1e-6, "gradients agree with finite differences to 1e-6");
  return v;
}

// ------------------------------------------------------------ 9. Lyapunov

Verdict criterion_lyapunov() {
  Verdict v;
  double worst = 0.0;
  int points = 0;
  for (int i = 1; i <= 60; ++i) {
    for (int k = 1; k <= 60; ++k) {
      const double c = 0.05 * k;
      const double w = (c + 1.0) * i / 61.0;
      worst = std::max(worst, lyapunov_residual(check_convergence_conditions(w, c, c)));
      ++points;
    }
  }
  v.check(worst <= 1e-12, "residual <= 1e-12 on the grid");
  const auto r = check_convergence_conditions(0.6, 1.0, 1.0);
  v.details.push_back(fmt("%d grid points, worst residual %.1e; w=0.6 c=1: lambda_max %.4f, %s", points, worst,
                          r.lambda_max, r.guaranteed ? "guaranteed" : "not guaranteed"));
  v.check(std::fabs(r.lambda_max - 1.081) <= 5e-4, "worked example lambda_max ~ 1.081");
  v.check(!r.guaranteed, "worked example not guaranteed");
  return v;
}

// ------------------------------------------------------------ 10. determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion_determinism() {
  Verdict v;
  const std::string configs[] = {
      "[experiment]\napplication = fir\nstrategies = naive, lc, ppso, gcpso, oracle\nseed = 10\n"
      "oracle_cap = 10\n[swarm]\npopulation = 20\niterations = 10\nrestarts = 2\n"
      "[fir]\ncoefficients = " BITALLOC_FIXTURE_DIR "/fir/C35.txt\nspec = C\nquantizer = float\navg_bits = 4\n",
      "[experiment]\napplication = receiver\nstrategies = naive, ppso, gcpso\nseed = 11\n"
      "[swarm]\npopulation = 20\niterations = 10\nrestarts = 2\n"
      "[receiver]\nantennas = 8\nusers = 2\nmc_channels = 10\np_u_db = 0, 20\n",
      "[experiment]\napplication = qgd\nstrategies = naive, ppso, gcpso\nseed = 12\n"
      "[swarm]\npopulation = 10\niterations = 5\n"
      "[qgd]\ntask = logistic\nsamples = 60\ndim = 6\niterations = 10\n",
  };
  int files = 0;
  for (const auto& text : configs) {
    std::istringstream in(text);
    const auto file = tools::ConfigFile::parse(in, "acceptance.ini");
    auto cfg = tools::parse_experiment(file, fs::current_path());
    std::ostringstream log;
    std::vector<tools::ExperimentReport> runs;
    for (int r = 0; r < 2; ++r) {
      cfg.output = fs::temp_directory_path() / fmt("bitalloc_acceptance_%s_%d", tools::application_name(cfg.application), r);
      fs::remove_all(cfg.output);
      cfg.swarm.threads = r == 0 ? 1 : 3;
      runs.push_back(tools::run_experiment(cfg, log));
    }
    v.check(runs[0].files.size() == runs[1].files.size(), "same file set");
    for (std::size_t i = 0; i < runs[0].files.size() && i < runs[1].files.size(); ++i) {
      const bool same = slurp(runs[0].files[i]) == slurp(runs[1].files[i]);
      v.check(same, runs[0].files[i].filename().string() + " byte-identical");
      ++files;
    }
  }
  v.details.push_back(fmt("%d output files compared across reruns (1 vs 3 threads)", files));
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence", criterion_oracle},
      {2, "uniform LC equals naive rounding", criterion_uniform_lc},
      {3, "floating-point LC relaxation and mapping", criterion_lc_float},
      {4, "FIR benchmark ordering", criterion_fir_order},
      {5, "quantizer error models", criterion_error_models},
      {6, "ADC distortion table and sum rate", criterion_aqnm},
      {7, "receiver ordering at desk scale", criterion_receiver},
      {8, "quantized gradient descent", criterion_qgd},
      {9, "convergence checker", criterion_lyapunov},
      {10, "determinism", criterion_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.details.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s #%d %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs);
    for (const auto& d : v.details) std::printf("       %s\n", d.c_str());
    for (const auto& d : v.info) std::printf("       info: %s\n", d.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
