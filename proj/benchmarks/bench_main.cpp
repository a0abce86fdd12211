// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include <benchmark/benchmark.h>

#include <random>

#include "bitalloc/fir.hpp"
#include "bitalloc/quantizers.hpp"
#include "bitalloc/receiver.hpp"
#include "bitalloc/swarm.hpp"

namespace {

using namespace bitalloc;

const FirProblem& a35_fixed() {
  static const FirProblem p(table_filter_spec('A', 35),
                            load_coefficients(BITALLOC_FIXTURE_DIR "/fir/A35.txt"),
                            FirQuantizer::fixed(), 8);
  return p;
}

void BM_FirObjective(benchmark::State& state) {
  const auto& p = a35_fixed();
  const BitVector b(p.dimension(), 8);
  for (auto _ : state) benchmark::DoNotOptimize(p.objective(b));
}
BENCHMARK(BM_FirObjective);

void BM_FirDecrementObjectives(benchmark::State& state) {
  const auto& p = a35_fixed();
  const BitVector b(p.dimension(), 8);
  std::vector<double> out(p.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(p.decrement_objectives(b, out));
}
BENCHMARK(BM_FirDecrementObjectives);

void BM_ReceiverObjective(benchmark::State& state) {
  SystemConfig cfg;
  cfg.antennas = static_cast<int>(state.range(0));
  cfg.users = 4;
  cfg.mc_channels = 50;
  const ReceiverProblem p(cfg);
  const BitVector b(p.dimension(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(p.objective(b));
}
BENCHMARK(BM_ReceiverObjective)->Arg(16)->Arg(64);

void BM_GcpsoFir(benchmark::State& state) {
  SwarmConfig cfg;
  cfg.population = static_cast<int>(state.range(0));
  cfg.iterations = 20;
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_gcpso(a35_fixed(), cfg).objective);
}
BENCHMARK(BM_GcpsoFir)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_QuantizeFixed(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(1024);
  for (auto& v : x) v = u(rng);
  for (auto _ : state) {
    for (double v : x) benchmark::DoNotOptimize(quantize_fixed(v, {12}));
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_QuantizeFixed);

void BM_QuantizeFloat(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(1024);
  for (auto& v : x) v = u(rng);
  for (auto _ : state) {
    for (double v : x) benchmark::DoNotOptimize(quantize_float(v, {5, 4}));
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_QuantizeFloat);

}  // namespace

BENCHMARK_MAIN();
