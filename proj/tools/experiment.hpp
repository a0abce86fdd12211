// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bitalloc/fir.hpp"
#include "bitalloc/problem.hpp"
#include "bitalloc/qgd.hpp"
#include "bitalloc/receiver.hpp"
#include "bitalloc/swarm.hpp"
#include "config.hpp"

namespace bitalloc::tools {

enum class Application { fir, receiver, qgd };
enum class Strategy { naive, lc, ppso, gcpso, oracle };

const char* application_name(Application app);
const char* strategy_name(Strategy s);

struct FirSettings {
  std::filesystem::path coefficients;
  std::shared_ptr<const CoefficientSet> h;
  FilterSpec spec;
  FirQuantizer quantizer;
  int avg_bits = 8;
};

struct ReceiverSettings {
  SystemConfig system;
  std::vector<double> p_u_db{20.0};
};

struct QgdSettings {
  QgdTask task;
};

struct ExperimentConfig {
  Application application = Application::fir;
  std::vector<Strategy> strategies;
  std::uint64_t seed = 0;
  std::filesystem::path output = "results";
  bool json = false;
  std::uint64_t oracle_cap = kDefaultOracleCap;
  SwarmConfig swarm;  ///< seed already derived from the experiment seed
  FirSettings fir;
  ReceiverSettings receiver;
  QgdSettings qgd;
};

/// Validates the whole file; relative fixture paths resolve against
/// `base_dir`. Throws ConfigError naming the offending field.
ExperimentConfig parse_experiment(const ConfigFile& file,
                                  const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

struct StrategyOutcome {
  std::string label;  ///< sub-case, e.g. "p_u_dB=10"; empty for one-case runs
  Strategy strategy = Strategy::naive;
  double objective = 0.0;
  double consumption = 0.0;
  double budget = 0.0;
  bool feasible = false;
  std::string status = "ok";
  BitVector bits;
  std::vector<double> restart_costs;
  std::uint64_t evaluations = 0;
  double seconds = 0.0;
};

struct ExperimentReport {
  std::vector<StrategyOutcome> outcomes;
  std::vector<std::filesystem::path> files;  ///< in write order
};

/// Runs every strategy in declared order and writes results.csv, one trace
/// CSV per swarm run, rates.csv (receiver) and summary.json (if enabled)
/// into cfg.output. Progress goes to `log`.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Allocation problem the oracle subcommand searches: the configured FIR
/// problem, the receiver at its first power level, or the first QGD step.
struct OracleCase {
  std::string description;
  std::unique_ptr<AllocationProblem> problem;
};
OracleCase oracle_case(const ExperimentConfig& cfg);

}  // namespace bitalloc::tools
