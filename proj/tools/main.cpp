// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bitalloc/convergence.hpp"
#include "bitalloc/error.hpp"
#include "csv.hpp"
#include "experiment.hpp"

namespace {

using namespace bitalloc;
using namespace bitalloc::tools;

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

void print_report(const ConvergenceReport& r) {
  std::printf("w = %.6g, c1 = %.6g, c2 = %.6g, c = %.6g\n", r.w, r.c1, r.c2, r.c);
  std::printf("P = [[%.12g, %.12g], [%.12g, %.12g]]\n", r.P[0][0], r.P[0][1],
              r.P[1][0], r.P[1][1]);
  std::printf("lambda_max(P) = %.6f\n", r.lambda_max);
  std::printf("threshold      = %.6f\n", r.threshold);
  std::printf("condition 1 (0 < w < c + 1):         %s\n", r.condition_1 ? "true" : "false");
  std::printf("condition 2 (lambda_max < threshold): %s\n", r.condition_2 ? "true" : "false");
  std::printf("lyapunov residual = %.3e\n", lyapunov_residual(r));
  std::printf("verdict: %s\n", r.guaranteed ? "guaranteed" : "not guaranteed");
}

int cmd_run(const std::string& path, const std::string& output) {
  ExperimentConfig cfg = load_experiment(path);
  if (!output.empty()) cfg.output = output;
  const ExperimentReport report = run_experiment(cfg, std::cout);
  for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

int cmd_oracle(const std::string& path) {
  const ExperimentConfig cfg = load_experiment(path);
  const OracleCase c = oracle_case(cfg);
  const OracleResult r = brute_force_optimum(*c.problem, cfg.oracle_cap);
  std::cout << c.description << '\n'
            << "optimum     " << format_double(r.value) << '\n'
            << "bits        " << format_bits(r.bits) << '\n'
            << "consumption " << format_double(c.problem->consumption(r.bits)) << '/'
            << format_double(c.problem->budget()) << '\n'
            << "evaluated   " << r.evaluated << " (" << r.feasible_points
            << " feasible)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bit allocation experiments with swarm optimizers"};
  app.require_subcommand(1);

  std::string config, output;
  auto* run = app.add_subcommand("run", "Run every strategy of an experiment config");
  run->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--output,-o", output, "Output directory (overrides the config)");

  double w = 0.0, c1 = 0.0, c2 = 0.0;
  auto* conv = app.add_subcommand("check-convergence",
                                  "Evaluate the swarm stability conditions for constant parameters");
  conv->add_option("--w", w, "Inertia weight")->required();
  conv->add_option("--c1", c1, "Cognitive coefficient")->required();
  conv->add_option("--c2", c2, "Social coefficient")->required();

  std::string oracle_config;
  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum of a small instance");
  oracle->add_option("config", oracle_config, "Experiment config file")
      ->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*run) return cmd_run(config, output);
    if (*conv) {
      print_report(check_convergence_conditions(w, c1, c2));
      return 0;
    }
    if (*oracle) return cmd_oracle(oracle_config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const SingularDenominator& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
