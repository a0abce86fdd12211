// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <cctype>
#include <ostream>

#include "bitalloc/error.hpp"
#include "bitalloc/rng.hpp"
#include "csv.hpp"
#include "json.hpp"

namespace bitalloc::tools {

namespace fs = std::filesystem;

const char* application_name(Application app) {
  switch (app) {
    case Application::fir: return "fir";
    case Application::receiver: return "receiver";
    case Application::qgd: return "qgd";
  }
  return "?";
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::naive: return "naive";
    case Strategy::lc: return "lc";
    case Strategy::ppso: return "ppso";
    case Strategy::gcpso: return "gcpso";
    case Strategy::oracle: return "oracle";
  }
  return "?";
}

namespace {

// ------------------------------------------------------------- parsing

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

void parse_swarm(const ConfigFile& f, SwarmConfig& s) {
  constexpr std::string_view sec = "swarm";
  s.population = static_cast<int>(f.get_int(sec, "population", s.population, 1, 1'000'000));
  s.iterations = static_cast<int>(f.get_int(sec, "iterations", s.iterations, 1, 1'000'000));
  s.restarts = static_cast<int>(f.get_int(sec, "restarts", s.restarts, 1, 10'000));
  s.w_max = f.get_double(sec, "w_max", s.w_max);
  s.w_min = f.get_double(sec, "w_min", s.w_min);
  s.c1_max = f.get_double(sec, "c1_max", s.c1_max);
  s.c1_min = f.get_double(sec, "c1_min", s.c1_min);
  s.c2_max = f.get_double(sec, "c2_max", s.c2_max);
  s.c2_min = f.get_double(sec, "c2_min", s.c2_min);
  s.v_min = f.get_double(sec, "v_min", s.v_min);
  s.v_max = f.get_double(sec, "v_max", s.v_max);
  s.penalty = f.get_double(sec, "penalty", s.penalty);
  s.threads = static_cast<int>(f.get_int(sec, "threads", s.threads, 1, 1024));
  s.cache_evaluations = f.get_bool(sec, "cache", s.cache_evaluations);
  const std::string draw = f.get_string(sec, "draw", "per_dimension");
  if (draw == "per_dimension") {
    s.draw = CoefficientDraw::per_dimension;
  } else if (draw == "per_particle") {
    s.draw = CoefficientDraw::per_particle;
  } else {
    f.fail(sec, "draw", "expected per_dimension or per_particle, got '" + draw + "'");
  }
  try {
    s.validate();
  } catch (const ContractViolation& e) {
    f.fail(sec, "", e.what());
  }
}

void parse_fir(const ConfigFile& f, const fs::path& base, FirSettings& out) {
  constexpr std::string_view sec = "fir";
  if (!f.has_section(sec)) f.fail(sec, "", "missing [fir] section");
  out.coefficients = resolve(base, f.require(sec, "coefficients"));
  if (!fs::exists(out.coefficients)) {
    f.fail(sec, "coefficients", "file not found: " + out.coefficients.string());
  }
  try {
    out.h = std::make_shared<const CoefficientSet>(load_coefficients(out.coefficients));
  } catch (const std::exception& e) {
    f.fail(sec, "coefficients", e.what());
  }
  const std::size_t taps = out.h->taps();
  const int density = static_cast<int>(f.get_int(sec, "grid_density", 16, 1, 1024));

  try {
    if (auto id = f.get(sec, "spec")) {
      if (f.has(sec, "bands")) f.fail(sec, "bands", "give either spec or bands, not both");
      if (id->size() != 1) f.fail(sec, "spec", "expected one of A, B, C, D");
      out.spec = table_filter_spec(static_cast<char>(std::toupper((*id)[0])), taps);
      out.spec.grid_density = density;
    } else {
      const auto edges = f.get_doubles(sec, "bands", {});
      if (edges.empty()) f.fail(sec, "bands", "need spec or bands");
      const auto desired = f.get_doubles(sec, "desired", {});
      auto weight = f.get_doubles(sec, "weight", {});
      if (weight.empty()) weight.assign(desired.size(), 1.0);
      if (edges.size() % 2 != 0 || desired.size() * 2 != edges.size() ||
          weight.size() != desired.size()) {
        f.fail(sec, "bands", "need two edges and one desired/weight value per band");
      }
      out.spec = FilterSpec::from_pi_fractions(edges, desired, weight, taps, density);
    }
    out.spec.validate();
  } catch (const ContractViolation& e) {
    f.fail(sec, f.has(sec, "spec") ? "spec" : "bands", e.what());
  }

  const std::string kind = f.get_string(sec, "quantizer", "fixed");
  if (kind == "fixed") {
    out.quantizer = FirQuantizer::fixed(f.get_bool(sec, "sign_in_wordlength", true));
  } else if (kind == "float") {
    out.quantizer = FirQuantizer::floating(
        static_cast<int>(f.get_int(sec, "exp_bits", 5, 2, 11)));
  } else {
    f.fail(sec, "quantizer", "expected fixed or float, got '" + kind + "'");
  }
  out.avg_bits = static_cast<int>(f.get_int(sec, "avg_bits", 8, 1, 26));
  try {
    out.quantizer.check_range(out.h->values());
  } catch (const ContractViolation& e) {
    f.fail(sec, "coefficients", e.what());
  }
}

void parse_receiver(const ConfigFile& f, ReceiverSettings& out) {
  constexpr std::string_view sec = "receiver";
  SystemConfig& s = out.system;
  s.antennas = static_cast<int>(f.get_int(sec, "antennas", s.antennas, 1, 4096));
  s.users = static_cast<int>(f.get_int(sec, "users", s.users, 1, 4096));
  s.cell_radius = f.get_double(sec, "cell_radius", s.cell_radius);
  s.r_min = f.get_double(sec, "r_min", s.r_min);
  s.path_loss_exp = f.get_double(sec, "path_loss_exp", s.path_loss_exp);
  s.shadow_db = f.get_double(sec, "shadow_db", s.shadow_db);
  s.avg_bits = static_cast<int>(f.get_int(sec, "avg_bits", s.avg_bits, 1, 12));
  s.mc_channels = static_cast<int>(f.get_int(sec, "mc_channels", s.mc_channels, 1, 1'000'000));
  s.freeze_large_scale = f.get_bool(sec, "freeze_large_scale", s.freeze_large_scale);
  out.p_u_db = f.get_doubles(sec, "p_u_db", out.p_u_db);
  if (out.p_u_db.empty()) f.fail(sec, "p_u_db", "need at least one power level");
  s.p_u = db_to_linear(out.p_u_db.front());
  try {
    s.validate();
  } catch (const ContractViolation& e) {
    f.fail(sec, "", e.what());
  }
}

void parse_qgd(const ConfigFile& f, const fs::path& base, std::uint64_t seed,
               QgdSettings& out) {
  constexpr std::string_view sec = "qgd";
  const std::string task = f.get_string(sec, "task", "least_squares");
  const std::uint64_t data_seed = substream_seed(seed, "data");
  const auto dim = static_cast<std::size_t>(f.get_int(sec, "dim", 20, 1, 100'000));
  try {
    if (task == "least_squares") {
      const auto rows = static_cast<std::size_t>(f.get_int(sec, "rows", 1000, 1, 10'000'000));
      out.task = make_least_squares(rows, dim, data_seed);
    } else if (task == "logistic") {
      if (auto path = f.get(sec, "dataset")) {
        const fs::path p = resolve(base, *path);
        if (!fs::exists(p)) f.fail(sec, "dataset", "file not found: " + p.string());
        out.task = load_sparse_dataset(p, f.has(sec, "dim") ? dim : 0);
      } else {
        const auto samples = static_cast<std::size_t>(f.get_int(sec, "samples", 500, 2, 10'000'000));
        out.task = make_logistic_synthetic(samples, dim, data_seed,
                                           f.get_double(sec, "separation", 4.0));
      }
    } else {
      f.fail(sec, "task", "expected least_squares or logistic, got '" + task + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    f.fail(sec, task == "logistic" && f.has(sec, "dataset") ? "dataset" : "task", e.what());
  }
  out.task.step = f.get_double(sec, "step", out.task.step);
  out.task.iterations = static_cast<int>(f.get_int(sec, "iterations", out.task.iterations, 1, 10'000'000));
  out.task.avg_bits = static_cast<int>(f.get_int(sec, "avg_bits", out.task.avg_bits, 1, 26));
  out.task.penalty = f.get_double(sec, "penalty", out.task.penalty);
  try {
    out.task.validate();
  } catch (const ContractViolation& e) {
    f.fail(sec, "", e.what());
  }
}

}  // namespace

ExperimentConfig parse_experiment(const ConfigFile& f, const fs::path& base) {
  constexpr std::string_view sec = "experiment";
  ExperimentConfig cfg;
  const std::string app = f.require(sec, "application");
  if (app == "fir") {
    cfg.application = Application::fir;
  } else if (app == "receiver") {
    cfg.application = Application::receiver;
  } else if (app == "qgd") {
    cfg.application = Application::qgd;
  } else {
    f.fail(sec, "application", "unknown application '" + app + "', expected fir, receiver or qgd");
  }

  for (const auto& name : f.get_list(sec, "strategies", {})) {
    Strategy s;
    if (name == "naive") s = Strategy::naive;
    else if (name == "lc") s = Strategy::lc;
    else if (name == "ppso") s = Strategy::ppso;
    else if (name == "gcpso") s = Strategy::gcpso;
    else if (name == "oracle") s = Strategy::oracle;
    else f.fail(sec, "strategies", "unknown strategy '" + name + "'");
    if (s == Strategy::lc && cfg.application != Application::fir) {
      f.fail(sec, "strategies", "strategy 'lc' is only defined for fir");
    }
    if (std::find(cfg.strategies.begin(), cfg.strategies.end(), s) != cfg.strategies.end()) {
      f.fail(sec, "strategies", "strategy '" + name + "' listed twice");
    }
    cfg.strategies.push_back(s);
  }
  if (cfg.strategies.empty()) f.fail(sec, "strategies", "need at least one strategy");

  cfg.seed = f.get_u64(sec, "seed", 0);
  cfg.output = f.get_string(sec, "output", "results");
  cfg.json = f.get_bool(sec, "json", false);
  cfg.oracle_cap = f.get_u64(sec, "oracle_cap", kDefaultOracleCap);

  if (cfg.application == Application::qgd) cfg.swarm = qgd_swarm_defaults();
  parse_swarm(f, cfg.swarm);
  cfg.swarm.seed = substream_seed(cfg.seed, "swarm");

  switch (cfg.application) {
    case Application::fir: parse_fir(f, base, cfg.fir); break;
    case Application::receiver:
      parse_receiver(f, cfg.receiver);
      cfg.receiver.system.seed = cfg.seed;
      break;
    case Application::qgd: parse_qgd(f, base, cfg.seed, cfg.qgd); break;
  }
  f.reject_unused();
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path) {
  const ConfigFile file = ConfigFile::load(path);
  return parse_experiment(file, path.parent_path());
}

// ------------------------------------------------------------- running

namespace {

Engine engine_of(Strategy s) {
  return s == Strategy::ppso ? Engine::ppso : Engine::gcpso;
}

std::string case_tag(const std::string& label) {
  std::string out;
  for (char c : label) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  }
  return out;
}

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, std::ostream& log)
      : cfg_(cfg), log_(log) {
    fs::create_directories(cfg.output);
  }

  ExperimentReport run() {
    switch (cfg_.application) {
      case Application::fir: run_fir(); break;
      case Application::receiver: run_receiver(); break;
      case Application::qgd: run_qgd(); break;
    }
    write_results();
    if (cfg_.json) write_json();
    return std::move(report_);
  }

 private:
  fs::path file(const std::string& name) {
    const fs::path p = cfg_.output / name;
    report_.files.push_back(p);
    return p;
  }

  void note(const StrategyOutcome& o) {
    log_ << application_name(cfg_.application) << ' '
         << (o.label.empty() ? "" : o.label + ' ') << strategy_name(o.strategy)
         << ": " << o.status;
    if (o.status == "ok") {
      log_ << " objective=" << format_double(o.objective)
           << " consumption=" << format_double(o.consumption) << '/'
           << format_double(o.budget);
    }
    log_ << " (" << std::chrono::duration<double>(o.seconds).count() << " s)\n";
  }

  void write_trace(const std::string& name, const RunResult& r) {
    CsvWriter w(file(name), cfg_.seed, {"iteration", "best_fitness"});
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      w.row({std::to_string(i), format_double(r.trace[i])});
    }
    w.close();
  }

  // Fills objective, consumption, feasibility and status for one allocation
  // strategy; InfeasibleBudget and SearchSpaceTooLarge end up in status.
  template <class Fn>
  StrategyOutcome attempt(const AllocationProblem& problem, Strategy s,
                          std::string label, Fn&& fn) {
    StrategyOutcome o;
    o.label = std::move(label);
    o.strategy = s;
    o.budget = problem.budget();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
      o.feasible = o.consumption <= o.budget;
    } catch (const InfeasibleBudget& e) {
      o.status = "infeasible";
      log_ << "  " << e.what() << '\n';
    } catch (const SearchSpaceTooLarge& e) {
      o.status = "refused";
      log_ << "  " << e.what() << '\n';
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    note(o);
    return o;
  }

  // Strategies common to every application that work on the problem alone.
  bool generic(const AllocationProblem& problem, Strategy s, StrategyOutcome& o,
               const std::string& trace_suffix) {
    switch (s) {
      case Strategy::naive: {
        BitVector bits(problem.dimension(), problem.budget_bits());
        o.objective = problem.objective(bits);
        o.consumption = problem.consumption(bits);
        o.bits = std::move(bits);
        return true;
      }
      case Strategy::ppso:
      case Strategy::gcpso: {
        RunResult r = run_restarts(problem, cfg_.swarm, engine_of(s));
        for (const auto& w : r.warnings) log_ << "  warning: " << w << '\n';
        o.objective = r.objective;
        o.consumption = r.consumption;
        o.bits = r.best;
        o.restart_costs = r.restart_costs;
        o.evaluations = r.evaluations;
        write_trace("trace_" + std::string(strategy_name(s)) + trace_suffix + ".csv", r);
        return true;
      }
      case Strategy::oracle: {
        OracleResult r = brute_force_optimum(problem, cfg_.oracle_cap);
        o.objective = r.value;
        o.consumption = problem.consumption(r.bits);
        o.bits = std::move(r.bits);
        o.evaluations = r.evaluated;
        return true;
      }
      case Strategy::lc: return false;
    }
    return false;
  }

  void run_fir() {
    const FirSettings& s = cfg_.fir;
    const FirProblem problem(s.spec, *s.h, s.quantizer, s.avg_bits);
    const std::string label = s.coefficients.stem().string();
    log_ << "fir " << label << ": full-precision error "
         << format_double(full_precision_error(s.spec, *s.h)) << '\n';
    for (Strategy st : cfg_.strategies) {
      report_.outcomes.push_back(attempt(problem, st, label, [&](StrategyOutcome& o) {
        if (generic(problem, st, o, "")) return;
        FirAllocation alloc;
        if (s.quantizer.kind == FirQuantizer::Kind::fixed) {
          alloc = lc_fixed_alloc(s.h->taps(), s.avg_bits);
        } else {
          std::vector<double> relaxed;
          try {
            relaxed = lc_float_alloc(*s.h, s.avg_bits);
          } catch (const InfeasibleBudget& e) {
            log_ << "  " << e.what() << "; using the floored relaxation\n";
            relaxed = lc_float_alloc_floored(*s.h, s.avg_bits);
          }
          alloc = lc_float_map(relaxed, *s.h, s.avg_bits);
        }
        o.bits.assign(alloc.half_bits.begin(), alloc.half_bits.end());
        o.objective = minimax_error(s.spec, *s.h, alloc, s.quantizer);
        o.consumption = static_cast<double>(alloc.consumption());
      }));
    }
  }

  void run_receiver() {
    const ReceiverSettings& s = cfg_.receiver;
    CsvWriter rates(file("rates.csv"), cfg_.seed, {"p_u_dB", "strategy", "sum_rate_bps_hz"});
    for (double db : s.p_u_db) {
      SystemConfig sys = s.system;
      sys.p_u = db_to_linear(db);
      const ReceiverProblem problem(sys);
      const std::string label = "p_u_dB=" + format_double(db);
      const std::string suffix = "_pu" + case_tag(format_double(db)) + "dB";
      for (Strategy st : cfg_.strategies) {
        StrategyOutcome o = attempt(problem, st, label, [&](StrategyOutcome& out) {
          generic(problem, st, out, suffix);
        });
        if (o.status == "ok") {
          rates.row({format_double(db), strategy_name(st), format_double(-o.objective)});
        }
        report_.outcomes.push_back(std::move(o));
      }
      rates.row({format_double(db), "ideal", format_double(problem.ideal_rate())});
    }
    rates.close();
  }

  void run_qgd() {
    const QgdTask& task = cfg_.qgd.task;
    const bool error_trace = task.kind == QgdKind::least_squares && !task.z_star.empty();
    const std::string label = task.kind == QgdKind::least_squares ? "least_squares" : "logistic";
    // Only budget() is read from this stand-in; each step builds its own.
    const FunctionProblem shape = FunctionProblem::linear(
        task.dim, task.allowed(), task.avg_bits,
        [](std::span<const int>) { return 0.0; });
    for (Strategy st : cfg_.strategies) {
      report_.outcomes.push_back(attempt(shape, st, label, [&](StrategyOutcome& o) {
        QgdStrategy mode = QgdStrategy::uniform;
        if (st == Strategy::ppso) mode = QgdStrategy::ppso;
        if (st == Strategy::gcpso) mode = QgdStrategy::gcpso;
        if (st == Strategy::oracle) {
          mode = QgdStrategy::oracle;
          const double space = std::pow(static_cast<double>(task.allowed().size()),
                                        static_cast<double>(task.dim));
          if (space > static_cast<double>(cfg_.oracle_cap)) {
            throw SearchSpaceTooLarge(space, cfg_.oracle_cap);
          }
        }
        const TrainResult r = train(task, mode, cfg_.swarm);
        CsvWriter w(file("trace_" + std::string(strategy_name(st)) + ".csv"), cfg_.seed,
                    {"iteration", error_trace ? "error" : "loss", "bits_used"});
        for (std::size_t t = 0; t < r.trace.size(); ++t) {
          w.row({std::to_string(t), format_double(r.trace[t]),
                 t == 0 ? "0" : std::to_string(r.bits_used[t - 1])});
        }
        w.close();
        o.objective = r.trace.back();
        o.bits = r.last_bits;
        // Worst step, so feasible means every step met the budget.
        if (!r.bits_used.empty()) {
          o.consumption = static_cast<double>(
              *std::max_element(r.bits_used.begin(), r.bits_used.end()));
        }
      }));
    }
  }

  void write_results() {
    CsvWriter w(file("results.csv"), cfg_.seed,
                {"case", "strategy", "objective", "consumption", "budget",
                 "feasible", "status", "bits"});
    for (const auto& o : report_.outcomes) {
      const bool ok = o.status == "ok";
      w.row({o.label, strategy_name(o.strategy), ok ? format_double(o.objective) : "",
             ok ? format_double(o.consumption) : "", format_double(o.budget),
             ok ? (o.feasible ? "true" : "false") : "", o.status,
             format_bits(o.bits)});
    }
    w.close();
  }

  void write_json() {
    nlohmann::ordered_json j;
    j["application"] = application_name(cfg_.application);
    j["seed"] = cfg_.seed;
    j["swarm_seed"] = cfg_.swarm.seed;
    auto& list = j["outcomes"] = nlohmann::ordered_json::array();
    for (const auto& o : report_.outcomes) {
      nlohmann::ordered_json e;
      e["case"] = o.label;
      e["strategy"] = strategy_name(o.strategy);
      e["status"] = o.status;
      if (o.status == "ok") {
        e["objective"] = o.objective;
        e["consumption"] = o.consumption;
        e["feasible"] = o.feasible;
        e["bits"] = o.bits;
      }
      e["budget"] = o.budget;
      if (!o.restart_costs.empty()) e["restart_costs"] = o.restart_costs;
      list.push_back(std::move(e));
    }
    const fs::path p = file("summary.json");
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + p.string());
  }

  const ExperimentConfig& cfg_;
  std::ostream& log_;
  ExperimentReport report_;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  return Runner(cfg, log).run();
}

OracleCase oracle_case(const ExperimentConfig& cfg) {
  OracleCase out;
  switch (cfg.application) {
    case Application::fir:
      out.description = "fir " + cfg.fir.coefficients.stem().string();
      out.problem = std::make_unique<FirProblem>(cfg.fir.spec, *cfg.fir.h,
                                                 cfg.fir.quantizer, cfg.fir.avg_bits);
      break;
    case Application::receiver: {
      SystemConfig sys = cfg.receiver.system;
      sys.p_u = db_to_linear(cfg.receiver.p_u_db.front());
      out.description = "receiver p_u_dB=" + format_double(cfg.receiver.p_u_db.front());
      out.problem = std::make_unique<ReceiverProblem>(sys);
      break;
    }
    case Application::qgd: {
      const QgdTask& task = cfg.qgd.task;
      const std::vector<double> z(task.dim, 0.0);
      const auto g = gradient(task, z);
      out.description = "qgd first step";
      out.problem = std::make_unique<QgdProblem>(task, z, g);
      break;
    }
  }
  return out;
}

}  // namespace bitalloc::tools
