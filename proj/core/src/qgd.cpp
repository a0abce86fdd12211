// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "bitalloc/qgd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "bitalloc/error.hpp"
#include "bitalloc/quantizers.hpp"
#include "bitalloc/rng.hpp"

namespace bitalloc {

namespace {

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) {
  return t > 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

// 1 / (1 + exp(t)) = sigma(-t).
double sigmoid_neg(double t) {
  if (t >= 0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void check_z(const QgdTask& task, std::span<const double> z) {
  if (z.size() != task.dim) {
    throw ContractViolation("parameter vector has length " +
                            std::to_string(z.size()) + ", task expects " +
                            std::to_string(task.dim));
  }
}

}  // namespace

void QgdTask::validate() const {
  if (dim == 0 || rows == 0) throw ContractViolation("empty QGD task");
  if (data.size() != rows * dim) {
    throw ContractViolation("data has " + std::to_string(data.size()) +
                            " entries, expected rows * dim = " +
                            std::to_string(rows * dim));
  }
  if (target.size() != rows) {
    throw ContractViolation("need one target per row");
  }
  if (!z_star.empty() && z_star.size() != dim) {
    throw ContractViolation("z* length differs from dim");
  }
  if (!(step > 0.0)) throw ContractViolation("step size must be positive");
  if (iterations < 0) throw ContractViolation("iterations must be >= 0");
  if (avg_bits < 1) throw ContractViolation("avg_bits must be >= 1");
  if (!(penalty > 0.0)) throw ContractViolation("penalty must be positive");
  if (kind == QgdKind::least_squares && rows < dim) {
    throw ContractViolation("least squares needs rows >= dim");
  }
  if (kind == QgdKind::logistic) {
    for (double y : target) {
      if (y != 1.0 && y != -1.0) {
        throw ContractViolation("logistic labels must be -1 or +1");
      }
    }
  }
}

QgdTask make_least_squares(std::size_t rows, std::size_t dim,
                           std::uint64_t seed) {
  Rng rng(substream_seed(seed, "data"));
  std::normal_distribution<double> n(0.0, 1.0);
  QgdTask t;
  t.kind = QgdKind::least_squares;
  t.rows = rows;
  t.dim = dim;
  t.data.resize(rows * dim);
  for (auto& a : t.data) a = n(rng);
  t.z_star.resize(dim);
  for (auto& z : t.z_star) z = n(rng);
  t.target.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    t.target[r] = dot(std::span<const double>(t.data).subspan(r * dim, dim),
                      t.z_star);
  }
  t.validate();
  return t;
}

QgdTask make_logistic_synthetic(std::size_t samples, std::size_t dim,
                                std::uint64_t seed, double separation) {
  Rng rng(substream_seed(seed, "data"));
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> mu(dim);
  for (auto& m : mu) m = n(rng);
  const double scale = separation / std::max(norm2(mu), 1e-300);
  for (auto& m : mu) m *= scale;

  QgdTask t;
  t.kind = QgdKind::logistic;
  t.rows = samples;
  t.dim = dim;
  t.step = 0.5;
  t.data.resize(samples * dim);
  t.target.resize(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const double y = (s % 2 == 0) ? 1.0 : -1.0;
    t.target[s] = y;
    for (std::size_t d = 0; d < dim; ++d) {
      t.data[s * dim + d] = y * mu[d] + n(rng);
    }
  }
  t.validate();
  return t;
}

QgdTask parse_sparse_dataset(std::istream& in, std::string_view source,
                             std::size_t dim) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> labels;
  std::size_t max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ContractViolation(std::string(source) + ":" + std::to_string(lineno) +
                            ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    double label = 0.0;
    {
      const char* b = tok.data();
      if (*b == '+') ++b;
      const auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), label);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        fail("cannot parse label '" + tok + "'");
      }
    }
    if (label == 0.0) label = -1.0;
    if (label != 1.0 && label != -1.0) {
      fail("label must be -1/+1 or 0/1, got '" + tok + "'");
    }
    std::vector<std::pair<std::size_t, double>> feats;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) fail("expected idx:val, got '" + tok + "'");
      std::size_t idx = 0;
      double val = 0.0;
      const char* s = tok.data();
      const auto [p1, e1] = std::from_chars(s, s + colon, idx);
      const char* v = s + colon + 1;
      if (v < s + tok.size() && *v == '+') ++v;
      const auto [p2, e2] = std::from_chars(v, s + tok.size(), val);
      if (e1 != std::errc() || p1 != s + colon || e2 != std::errc() ||
          p2 != s + tok.size() || idx == 0 || !std::isfinite(val)) {
        fail("malformed feature '" + tok + "'");
      }
      max_index = std::max(max_index, idx);
      feats.emplace_back(idx - 1, val);
    }
    rows.push_back(std::move(feats));
    labels.push_back(label);
  }
  if (rows.empty()) {
    throw ContractViolation(std::string(source) + ": no samples");
  }
  if (dim == 0) dim = max_index;
  if (max_index > dim) {
    throw ContractViolation(std::string(source) + ": feature index " +
                            std::to_string(max_index) + " exceeds dim " +
                            std::to_string(dim));
  }
  QgdTask t;
  t.kind = QgdKind::logistic;
  t.step = 0.5;
  t.rows = rows.size();
  t.dim = dim;
  t.data.assign(t.rows * dim, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [i, v] : rows[r]) t.data[r * dim + i] = v;
  }
  t.target = std::move(labels);
  t.validate();
  return t;
}

QgdTask load_sparse_dataset(const std::filesystem::path& path,
                            std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open dataset " + path.string());
  return parse_sparse_dataset(in, path.string(), dim);
}

double loss(const QgdTask& task, std::span<const double> z) {
  check_z(task, z);
  const std::span<const double> data(task.data);
  double total = 0.0;
  if (task.kind == QgdKind::least_squares) {
    for (std::size_t r = 0; r < task.rows; ++r) {
      const double e = task.target[r] - dot(data.subspan(r * task.dim, task.dim), z);
      total += e * e;
    }
    return 0.5 * total;
  }
  for (std::size_t r = 0; r < task.rows; ++r) {
    total += softplus_neg(task.target[r] *
                          dot(data.subspan(r * task.dim, task.dim), z));
  }
  const double m = static_cast<double>(task.rows);
  return total / m + dot(z, z) / (2.0 * m);
}

std::vector<double> gradient(const QgdTask& task, std::span<const double> z) {
  check_z(task, z);
  const std::span<const double> data(task.data);
  std::vector<double> g(task.dim, 0.0);
  if (task.kind == QgdKind::least_squares) {
    for (std::size_t r = 0; r < task.rows; ++r) {
      const auto a = data.subspan(r * task.dim, task.dim);
      const double e = dot(a, z) - task.target[r];
      for (std::size_t d = 0; d < task.dim; ++d) g[d] += e * a[d];
    }
    return g;
  }
  const double m = static_cast<double>(task.rows);
  for (std::size_t r = 0; r < task.rows; ++r) {
    const auto v = data.subspan(r * task.dim, task.dim);
    const double y = task.target[r];
    const double s = sigmoid_neg(y * dot(v, z));
    for (std::size_t d = 0; d < task.dim; ++d) g[d] -= y * v[d] * s;
  }
  for (std::size_t d = 0; d < task.dim; ++d) g[d] = g[d] / m + z[d] / m;
  return g;
}

std::vector<double> quantize_gradient(std::span<const double> g,
                                      std::span<const int> bits) {
  if (g.size() != bits.size()) {
    throw ContractViolation("gradient and bit vector differ in length");
  }
  std::vector<double> q(g.size(), 0.0);
  const double c = norm2(g);
  if (c == 0.0) return q;
  for (std::size_t i = 0; i < g.size(); ++i) {
    q[i] = c * quantize_fixed(g[i] / c, {bits[i]});
  }
  return q;
}

QgdProblem::QgdProblem(const QgdTask& task, std::span<const double> z,
                       std::span<const double> grad)
    : task_(task),
      allowed_(task.allowed()),
      z_(z.begin(), z.end()),
      grad_(grad.begin(), grad.end()) {
  task_.validate();
  check_z(task_, z_);
  check_z(task_, grad_);
  if (norm2(grad_) == 0.0) {
    throw ContractViolation("allocation problem needs a nonzero gradient");
  }
  loss_now_ = loss(task_, z_);
  if (task_.kind == QgdKind::least_squares) {
    const std::size_t D = task_.dim;
    gram_.assign(D * D, 0.0);
    for (std::size_t r = 0; r < task_.rows; ++r) {
      const double* a = task_.data.data() + r * D;
      for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = 0; j < D; ++j) gram_[i * D + j] += a[i] * a[j];
      }
    }
  }
}

double QgdProblem::objective(std::span<const int> bits) const {
  check_dimension(bits);
  const auto q = quantize_gradient(grad_, bits);
  const double eta = task_.step;
  if (task_.kind == QgdKind::least_squares) {
    // f(z - eta q) = f(z) - eta g.q + eta^2/2 q^T A^T A q, with g = A^T(Az - y).
    const std::size_t D = task_.dim;
    double quad = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < D; ++j) row += gram_[i * D + j] * q[j];
      quad += q[i] * row;
    }
    return loss_now_ - eta * dot(grad_, q) + 0.5 * eta * eta * quad;
  }
  std::vector<double> next(z_);
  for (std::size_t i = 0; i < next.size(); ++i) next[i] -= eta * q[i];
  return loss(task_, next);
}

double QgdProblem::consumption(std::span<const int> bits) const {
  check_dimension(bits);
  return static_cast<double>(std::accumulate(bits.begin(), bits.end(), 0LL));
}

SwarmConfig qgd_swarm_defaults() {
  SwarmConfig cfg;
  cfg.population = 60;
  cfg.iterations = 30;
  cfg.restarts = 1;
  cfg.penalty = 1e5;
  return cfg;
}

TrainResult train(const QgdTask& task, QgdStrategy strategy,
                  const SwarmConfig& swarm) {
  task.validate();
  TrainResult out;
  out.z.assign(task.dim, 0.0);
  const bool track_error =
      task.kind == QgdKind::least_squares && !task.z_star.empty();
  auto record = [&] {
    if (track_error) {
      double s = 0.0;
      for (std::size_t i = 0; i < task.dim; ++i) {
        const double d = out.z[i] - task.z_star[i];
        s += d * d;
      }
      out.trace.push_back(std::sqrt(s));
    } else {
      out.trace.push_back(loss(task, out.z));
    }
  };
  record();

  SwarmConfig cfg = swarm;
  cfg.penalty = task.penalty;
  const std::uint64_t base_seed = swarm.seed;
  const BitVector uniform(task.dim, task.avg_bits);
  for (int t = 1; t <= task.iterations; ++t) {
    const auto g = gradient(task, out.z);
    if (norm2(g) == 0.0) {
      out.converged = true;
      out.bits_used.push_back(0);
      record();
      continue;
    }
    BitVector bits = uniform;
    if (strategy == QgdStrategy::oracle) {
      QgdProblem problem(task, out.z, g);
      bits = brute_force_optimum(problem).bits;
    } else if (strategy != QgdStrategy::uniform) {
      QgdProblem problem(task, out.z, g);
      cfg.seed = mix_seed(base_seed, static_cast<std::uint64_t>(t));
      const Engine engine =
          strategy == QgdStrategy::ppso ? Engine::ppso : Engine::gcpso;
      RunResult r = run_restarts(problem, cfg, engine);
      // A penalized run can end infeasible; fall back to the uniform split.
      bits = r.feasible ? std::move(r.best) : uniform;
    }
    const auto q = quantize_gradient(g, bits);
    for (std::size_t i = 0; i < task.dim; ++i) out.z[i] -= task.step * q[i];
    out.bits_used.push_back(std::accumulate(bits.begin(), bits.end(), 0LL));
    out.last_bits = std::move(bits);
    record();
  }
  return out;
}

}  // namespace bitalloc
