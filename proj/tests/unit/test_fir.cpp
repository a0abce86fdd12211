// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "bitalloc/error.hpp"
#include "bitalloc/fir.hpp"
#include "generators.hpp"

namespace bitalloc {
namespace {

const std::filesystem::path kFixtures = BITALLOC_FIXTURE_DIR "/fir";

CoefficientSet fixture(const std::string& name) {
  return load_coefficients(kFixtures / (name + ".txt"));
}

TEST(Magnitude, MatchesDirectTransform) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t taps = 2 * static_cast<std::size_t>(testing::uniform_int(rng, 0, 15)) + 1;
    const auto h = testing::random_coefficients(rng, taps);
    const double c = static_cast<double>(h.center());
    for (int g = 0; g <= 64; ++g) {
      const double w = std::numbers::pi * g / 64.0;
      std::complex<double> dft = 0.0;
      for (std::size_t n = 0; n < taps; ++n) {
        dft += h.values()[n] * std::polar(1.0, -w * static_cast<double>(n));
      }
      // Linear phase: e^{jwc} H(e^{jw}) is real and equals the amplitude.
      const std::complex<double> amp = dft * std::polar(1.0, w * c);
      ASSERT_NEAR(amp.imag(), 0.0, 1e-12);
      ASSERT_NEAR(magnitude(h.values(), w), amp.real(), 1e-12);
    }
  }
}

TEST(Magnitude, DcGainIsTapSum) {
  const auto h = fixture("A35");
  double sum = 0.0;
  for (double v : h.values()) sum += v;
  EXPECT_NEAR(magnitude(h.values(), 0.0), sum, 1e-14);
}

TEST(Magnitude, CenterImpulseIsFlat) {
  std::vector<double> h(9, 0.0);
  h[4] = 0.37;
  for (double w : {0.0, 0.3, 1.7, std::numbers::pi}) EXPECT_EQ(magnitude(h, w), 0.37);
}

TEST(CoefficientSet, AcceptsFixturesAndRejectsBadInput) {
  for (const char* name : {"A35", "B35", "C35", "D35", "A45", "B45", "C45", "D45"}) {
    const auto h = fixture(name);
    EXPECT_EQ(h.taps(), std::string(name).ends_with("35") ? 35u : 45u);
  }
  EXPECT_THROW(CoefficientSet({0.1, 0.2, 0.2, 0.1}), ContractViolation);
  EXPECT_THROW(CoefficientSet({0.1, 0.2, 0.1 + 1e-9}), ContractViolation);
  EXPECT_THROW(CoefficientSet({0.1, NAN, 0.1}), ContractViolation);
  EXPECT_NO_THROW(CoefficientSet({0.1, 0.2, 0.1 + 1e-13}));
}

TEST(CoefficientSet, ParseReportsLine) {
  std::istringstream in("# header\n0.1\n0.2x\n0.1\n");
  try {
    parse_coefficients(in, "taps.txt");
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("taps.txt:3:"), std::string::npos) << e.what();
  }
}

TEST(FilterSpec, ValidateRejectsBadBands) {
  const double edges[] = {0.0, 0.5, 0.4, 1.0}, d[] = {1, 0}, w[] = {1, 1};
  EXPECT_THROW(FilterSpec::from_pi_fractions(edges, d, w, 35).validate(), ContractViolation);
  FilterSpec empty;
  empty.taps = 35;
  EXPECT_THROW(empty.validate(), ContractViolation);
  EXPECT_THROW(table_filter_spec('E', 35), ContractViolation);
}

TEST(FirEvaluator, GridHasDensityTimesTapsPerBand) {
  const FirEvaluator ev(table_filter_spec('C', 35));
  EXPECT_EQ(ev.grid_size(), 3u * 16u * 35u);
  EXPECT_EQ(ev.grid().front(), 0.0);
  EXPECT_NEAR(ev.grid().back(), std::numbers::pi, 1e-15);
}

TEST(FirEvaluator, ErrorScalesWithWeight) {
  const auto h = fixture("A35");
  const FilterSpec spec = table_filter_spec('A', 35);
  FilterSpec doubled = spec;
  for (auto& b : doubled.bands) b.weight *= 2.0;
  const auto alloc = lc_fixed_alloc(35, 8);
  const auto q = FirQuantizer::fixed();
  EXPECT_EQ(minimax_error(doubled, h, alloc, q), 2.0 * minimax_error(spec, h, alloc, q));
}

TEST(FirEvaluator, WideWordsReproduceFullPrecision) {
  const auto h = fixture("A35");
  const FilterSpec spec = table_filter_spec('A', 35);
  const double full = full_precision_error(spec, h);
  EXPECT_NEAR(full, 0.01595, 0.01595 * 0.005);
  const double wide = minimax_error(spec, h, lc_fixed_alloc(35, 40), FirQuantizer::fixed());
  EXPECT_NEAR(wide, full, 1e-9);
}

TEST(FirEvaluator, NaiveFixedA35MatchesTable) {
  const auto h = fixture("A35");
  const double e = minimax_error(table_filter_spec('A', 35), h, lc_fixed_alloc(35, 8),
                                 FirQuantizer::fixed());
  EXPECT_NEAR(e, 0.03266, 0.03266 * 0.02);
}

TEST(FirQuantizer, WordlengthConventions) {
  const auto with_sign = FirQuantizer::fixed(true);
  const auto without = FirQuantizer::fixed(false);
  EXPECT_EQ(with_sign.apply(0.3, 4), 0.25);  // 3 fractional bits
  EXPECT_EQ(without.apply(0.3, 3), 0.25);
  EXPECT_EQ(FirQuantizer::floating(5).apply(0.3, 5), 0.296875);
  EXPECT_THROW(with_sign.check_range(std::vector<double>{0.5, 1.0}), ContractViolation);
}

TEST(FirProblem, UniformAllocationSpendsExactBudget) {
  const FirProblem p(table_filter_spec('B', 35), fixture("B35"), FirQuantizer::fixed(), 9);
  EXPECT_EQ(p.dimension(), 18u);
  EXPECT_EQ(p.allowed(), AllowedSet::range(1, 19));
  const BitVector uniform(18, 9);
  EXPECT_EQ(p.consumption(uniform), 35.0 * 9.0);
  EXPECT_EQ(p.consumption(uniform), p.budget());
  BitVector outside = uniform;
  outside[0] = 20;
  EXPECT_THROW(p.objective(outside), ContractViolation);
}

TEST(FirProblem, ObjectiveMatchesFreeFunction) {
  const auto h = fixture("C35");
  const FilterSpec spec = table_filter_spec('C', 35);
  const FirProblem p(spec, h, FirQuantizer::floating(5), 4);
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto b = testing::random_bits(rng, p.allowed(), p.dimension());
    EXPECT_NEAR(p.objective(b), minimax_error(spec, h, {b}, FirQuantizer::floating(5)), 1e-15);
  }
}

TEST(FirProblem, IncrementalDecrementsAgreeWithObjective) {
  const FirProblem p(table_filter_spec('D', 35), fixture("D35"), FirQuantizer::fixed(), 8);
  Rng rng(4);
  std::vector<double> out(p.dimension());
  for (int trial = 0; trial < 20; ++trial) {
    auto b = testing::random_bits(rng, p.allowed(), p.dimension());
    const double base = p.decrement_objectives(b, out);
    EXPECT_EQ(base, p.objective(b));
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == p.allowed().min()) {
        EXPECT_TRUE(std::isinf(out[j]));
        continue;
      }
      auto probe = b;
      --probe[j];
      EXPECT_NEAR(out[j], p.objective(probe), 1e-12);
    }
  }
}

// ---------------------------------------------------------------- LC

TEST(LcFixed, UniformVector) {
  const auto a = lc_fixed_alloc(35, 8);
  EXPECT_EQ(a.half_bits, BitVector(18, 8));
  EXPECT_EQ(a.consumption(), 280);
  EXPECT_EQ(a.full().size(), 35u);
}

TEST(LcFloat, EqualMagnitudesGiveAverage) {
  const CoefficientSet h({-0.1, 0.1, 0.1, -0.1, 0.1, 0.1, -0.1});
  for (double m : lc_float_alloc(h, 4.0)) EXPECT_NEAR(m, 4.0, 1e-13);
}

TEST(LcFloat, ZeroCoefficientAndInfeasibleBudget) {
  EXPECT_THROW(lc_float_alloc(CoefficientSet({0.0, 0.5, 0.0}), 4.0), ContractViolation);
  // GM / min|h| is about 10, so the bound asks for m-bar >= 1 + 4.
  const CoefficientSet h({1e-4 * 1.0, 0.1024, 1e-4});
  EXPECT_THROW(lc_float_alloc(h, 4.0), InfeasibleBudget);
  EXPECT_NO_THROW(lc_float_alloc(h, 9.0));
}

// Stationarity of sum c_n 4^{-m_n} under 2 sum m_n + m_c = N m-bar forces
// h_n^2 4^{-m_n} to be the same for every coefficient.
TEST(LcFloatProperty, RelaxedAllocationIsStationaryAndOnBudget) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t taps = 2 * static_cast<std::size_t>(testing::uniform_int(rng, 1, 10)) + 1;
    const auto h = testing::random_coefficients(rng, taps, 0.05, 0.5);
    const double avg = 8.0;
    const auto m = lc_float_alloc(h, avg);
    double used = 0.0;
    const auto u = h.unique();
    for (std::size_t n = 0; n < m.size(); ++n) used += (n == h.center() ? 1.0 : 2.0) * m[n];
    ASSERT_NEAR(used, static_cast<double>(taps) * avg, 1e-10);
    const double ref = u[0] * u[0] * std::pow(4.0, -m[0]);
    for (std::size_t n = 1; n < m.size(); ++n) {
      ASSERT_NEAR(u[n] * u[n] * std::pow(4.0, -m[n]) / ref, 1.0, 1e-10);
    }
  }
}

TEST(LcFloatProperty, FlooredRespectsFloorAndBudget) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t taps = 2 * static_cast<std::size_t>(testing::uniform_int(rng, 1, 15)) + 1;
    const auto h = testing::random_coefficients(rng, taps, 1e-5, 0.5);
    const double avg = testing::uniform_int(rng, 2, 8);
    const auto m = lc_float_alloc_floored(h, avg);
    double used = 0.0;
    for (std::size_t n = 0; n < m.size(); ++n) {
      ASSERT_GE(m[n], 1.0 - 1e-12);
      used += (n == h.center() ? 1.0 : 2.0) * m[n];
    }
    ASSERT_NEAR(used, static_cast<double>(taps) * avg, 1e-9);
    try {
      const auto strict = lc_float_alloc(h, avg);
      for (std::size_t n = 0; n < m.size(); ++n) ASSERT_NEAR(m[n], strict[n], 1e-10);
    } catch (const InfeasibleBudget&) {
    }
    const auto mapped = lc_float_map(m, h, avg);
    ASSERT_LE(static_cast<double>(mapped.consumption()), static_cast<double>(taps) * avg + 1e-9);
  }
}

TEST(LcFloatMap, IntegersPassThrough) {
  const CoefficientSet h({0.1, 0.2, 0.4, 0.2, 0.1});
  const std::vector<double> relaxed{3.0, 4.0, 5.0};
  const auto a = lc_float_map(relaxed, h, 4.0);  // 2*7 + 5 = 19 <= 20
  EXPECT_EQ(a.half_bits, (BitVector{3, 4, 5}));
}

// Ceiling (3.5, 3.5, 4) -> (4, 4, 4) spends 20 against 18: one side tap must
// drop. Both choices are enumerated; the lower-K one must be the lower-MSQE one.
TEST(LcFloatMap, SmallerTradeoffDemotedFirst) {
  for (const auto& u : {std::vector<double>{0.1, 0.3, 0.5}, std::vector<double>{0.3, 0.1, 0.5}}) {
    const CoefficientSet h({u[0], u[1], u[2], u[1], u[0]});
    const std::vector<double> relaxed{3.5, 3.5, 4.0};
    const auto a = lc_float_map(relaxed, h, 3.6);
    EXPECT_EQ(a.consumption(), 18);
    const std::vector<double> drop0{3, 4, 4}, drop1{4, 3, 4};
    const bool zero_cheaper = float_msqe(h.unique(), drop0) < float_msqe(h.unique(), drop1);
    EXPECT_EQ(a.half_bits, zero_cheaper ? (BitVector{3, 4, 4}) : (BitVector{4, 3, 4}));
    const bool k_zero_smaller = lc_tradeoff(3.5, u[0], false) < lc_tradeoff(3.5, u[1], false);
    EXPECT_EQ(k_zero_smaller, zero_cheaper);
  }
}

TEST(Msqe, ClosedForms) {
  const std::vector<double> b{2.0, 3.0};
  EXPECT_NEAR(fixed_msqe(b), std::numbers::pi / 6 / 16 + std::numbers::pi / 12 / 64, 1e-16);
  const std::vector<double> h{0.5, 0.25};
  EXPECT_NEAR(float_msqe(h, b),
              std::numbers::pi / 3 * 0.25 / 16 + std::numbers::pi / 6 * 0.0625 / 64, 1e-16);
}

}  // namespace
}  // namespace bitalloc
