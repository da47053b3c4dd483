// Copyright 2026 The x8sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment driver: phi-grid sweeps of the compiling cost, the shot-budget
// resolution law, and the gradient-descent loop, with CSV emission designed
// to replay (seed, shots and noise ride along with every row).

#ifndef X8SIM_DRIVER_HPP_
#define X8SIM_DRIVER_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "x8sim/cost.hpp"
#include "x8sim/device.hpp"
#include "x8sim/gradient.hpp"
#include "x8sim/measure.hpp"
#include "x8sim/rng.hpp"

namespace x8sim {

struct SweepConfig {
  double phi_min = -std::numbers::pi / 2.0;
  double phi_max = std::numbers::pi / 2.0;
  int points = 21;
  long long shots = 50000;
  int runs = 1;
  std::optional<NoiseConfig> noise;
  bool paired = false;                    // take P from modes 2367 of the same job
  std::optional<long long> regularizer;   // fixed precomputed denominator count
  std::uint64_t seed = 0;
};

struct SweepRow {
  double phi = 0.0;
  long long q_count = 0;
  long long p_count = 0;
  double estimate = 0.0;  // NaN flags a zero-denominator row
  double analytic = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  SweepConfig config;
  long long denominator_count = 0;  // serial P (or regularizer) shared by rows
  std::vector<SweepRow> rows;
};

namespace detail {

inline DeviceJob sweep_job(double phi, const SweepConfig& config, std::uint64_t seed) {
  DeviceJob job;
  job.circuit.num_modes = 4;
  job.circuit.gates = {BeamSplitter{0, 1, std::numbers::pi / 4.0, phi}};
  // The paired protocol reads its reference from pairs 2 and 3, so they must
  // be squeezed; the serial noisy protocol leaves them dark to keep the
  // truncation leak at warning level.
  if (config.paired)
    job.squeezing = {1, 1, 1, 1};
  else if (config.noise)
    job.squeezing = {1, 1, 0, 0};
  else
    job.squeezing = {1, 1, 1, 1};
  job.shots = config.shots;
  job.seed = seed;
  job.noise = config.noise;
  return job;
}

inline DeviceJob denominator_job(const SweepConfig& config, std::uint64_t seed) {
  DeviceJob job = sweep_job(0.0, config, seed);
  job.circuit.gates.clear();
  return job;
}

}  // namespace detail

inline const OutcomePattern& sweep_pattern() {
  static const OutcomePattern pattern{{0, 1, 4, 5}, {0, 1, 0, 1}};
  return pattern;
}

inline const OutcomePattern& paired_reference_pattern() {
  static const OutcomePattern pattern{{2, 3, 6, 7}, {0, 1, 0, 1}};
  return pattern;
}

// Sweeps the beamsplitter phase over a uniform grid, one device job per
// (point, run). The reference count P is, in order of precedence: the fixed
// regularizer, the same job's idle-register count (paired), or a single
// no-gate job executed once per sweep.
inline SweepResult run_sweep(const SweepConfig& config) {
  if (config.points < 1) throw std::invalid_argument("run_sweep: empty grid");
  if (config.runs < 1) throw std::invalid_argument("run_sweep: runs must be >= 1");
  if (config.points > 1 && config.phi_max <= config.phi_min)
    throw std::invalid_argument("run_sweep: grid must be increasing");

  SweepResult result;
  result.config = config;

  long long serial_p = 0;
  if (config.regularizer) {
    serial_p = *config.regularizer;
  } else if (!config.paired) {
    const DeviceJob job =
        detail::denominator_job(config, derive_seed(config.seed, 0xdead, 0));
    serial_p = pattern_count(run_job(job), sweep_pattern());
  }
  result.denominator_count = serial_p;

  for (int run = 0; run < config.runs; ++run) {
    for (int i = 0; i < config.points; ++i) {
      const double phi =
          config.points == 1
              ? config.phi_min
              : config.phi_min + (config.phi_max - config.phi_min) * i /
                                     double(config.points - 1);
      const std::uint64_t job_seed =
          derive_seed(config.seed, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(run));
      const CountTable table = run_job(detail::sweep_job(phi, config, job_seed));

      SweepRow row;
      row.phi = phi;
      row.seed = job_seed;
      row.analytic = d2_analytic(phi);
      row.q_count = pattern_count(table, sweep_pattern());
      row.p_count = config.paired ? pattern_count(table, paired_reference_pattern())
                                  : serial_p;
      if (config.regularizer) {
        row.estimate = d2_estimate(table, *config.regularizer, sweep_pattern(), phi).value;
      } else if (row.p_count == 0) {
        // flagged, not dropped
        row.estimate = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.estimate = std::abs(1.0 - double(row.q_count) / double(row.p_count));
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

struct ResolutionRow {
  long long shots = 0;
  double delta = 0.0;
};

// Smallest offset delta from phi = pi/2 at which the expected 0101 count
// reaches one, under the analytic rate p cos^2(phi); approaches
// sqrt(10/shots) for r = 1.
inline std::vector<ResolutionRow> resolution_analysis(std::span<const long long> shots_list) {
  const double t = std::tanh(1.0), c = std::cosh(1.0);
  const double peak = t * t / (c * c * c * c);  // ~0.1023
  std::vector<ResolutionRow> rows;
  for (long long shots : shots_list) {
    if (shots < 10) throw std::invalid_argument("resolution_analysis: shots must be >= 10");
    auto expected_count = [&](double delta) {
      const double phi = std::numbers::pi / 2.0 - delta;
      return double(shots) * peak * std::cos(phi) * std::cos(phi);
    };
    double lo = 0.0, hi = std::numbers::pi / 2.0;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (expected_count(mid) < 1.0 ? lo : hi) = mid;
    }
    rows.push_back({shots, 0.5 * (lo + hi)});
  }
  return rows;
}

enum class CompileBackend { kExact, kSampled };

struct CompileConfig {
  double phi0 = 1.0;
  double learning_rate = 0.3;
  int max_iters = 100;
  CompileBackend backend = CompileBackend::kExact;
  long long shots = 50000;
  std::uint64_t seed = 0;
  double gradient_tolerance = 1e-6;
  int cutoff = 10;
};

struct CompileStep {
  int iteration = 0;
  double phi = 0.0;
  double cost = 0.0;
  double gradient = 0.0;
  double learning_rate = 0.0;
};

struct CompileTrace {
  std::vector<CompileStep> steps;
  double phi_final = 0.0;
  bool converged = false;
  bool diverged = false;
};

namespace detail {

inline Circuit compile_circuit_template() {
  Circuit c;
  c.num_modes = 4;
  c.gates = {BeamSplitter{0, 1, std::numbers::pi / 4.0, 0.0},
             BeamSplitter{2, 3, std::numbers::pi / 4.0, 0.0}};
  return c;
}

}  // namespace detail

// Gradient descent on the likelihood-ratio cost, phi_{t+1} = phi_t - lr * g,
// with the per-gate parameter-shift gradient. The sampled backend draws
// fresh numerator and reference counts for every cost evaluation.
inline CompileTrace compile_phase(const CompileConfig& config) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (config.phi0 < -half_pi || config.phi0 > half_pi)
    throw std::invalid_argument("compile_phase: phi0 must lie in [-pi/2, pi/2]");
  if (config.learning_rate <= 0.0)
    throw std::invalid_argument("compile_phase: learning rate must be positive");
  if (config.max_iters < 1)
    throw std::invalid_argument("compile_phase: need at least one iteration");

  const double p_exact = compile_p_probability(1.0, config.cutoff);
  std::uint64_t stream = 0;

  std::function<double(const Circuit&)> evaluate;
  if (config.backend == CompileBackend::kExact) {
    evaluate = [&, p_exact](const Circuit& c) {
      PureState s = make_tmss(1.0, 2, config.cutoff);
      s = apply_circuit(s, c);
      return std::abs(1.0 - fock_probability(s, compile_pattern()) / p_exact);
    };
  } else {
    evaluate = [&](const Circuit& c) {
      PureState s = make_tmss(1.0, 2, config.cutoff);
      s = apply_circuit(s, c);
      const std::vector<int> modes = {0, 1, 2, 3};
      const ProbabilityTable q_dist = outcome_distribution(s, modes);
      const ProbabilityTable p_dist =
          outcome_distribution(make_tmss(1.0, 2, config.cutoff), modes);
      const CountTable q =
          sample_counts(q_dist, config.shots, derive_seed(config.seed, ++stream));
      const CountTable p =
          sample_counts(p_dist, config.shots, derive_seed(config.seed, ++stream));
      return d2_estimate(q, p, compile_pattern()).value;
    };
  }

  GradientRequest req;
  req.circuit = detail::compile_circuit_template();
  req.marked = {0, 1};
  req.evaluate = evaluate;

  CompileTrace trace;
  double phi = config.phi0;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    Circuit at = req.circuit;
    std::get<BeamSplitter>(at.gates[0]).phi = phi;
    std::get<BeamSplitter>(at.gates[1]).phi = phi;
    const double cost = evaluate(at);
    const double grad = parameter_shift_gradient(req, phi);
    trace.steps.push_back({iter, phi, cost, grad, config.learning_rate});
    if (std::abs(grad) < config.gradient_tolerance) {
      trace.converged = true;
      break;
    }
    phi -= config.learning_rate * grad;
    if (std::abs(phi) > std::numbers::pi) {
      trace.diverged = true;  // trace retained up to the breakout step
      break;
    }
  }
  trace.phi_final = trace.converged ? trace.steps.back().phi : phi;
  return trace;
}

// --- sweep CSV -------------------------------------------------------------
//
// Header comments carry the replay metadata; the column row is fixed:
// phi,q_count,p_count,d2_estimate,d2_analytic,seed

inline void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  const auto& c = result.config;
  out.precision(17);
  out << "# x8sim sweep\n";
  out << "# phi_min=" << c.phi_min << " phi_max=" << c.phi_max
      << " points=" << c.points << " shots=" << c.shots << " runs=" << c.runs
      << " seed=" << c.seed << " paired=" << (c.paired ? 1 : 0) << "\n";
  out << "# noise=";
  if (c.noise)
    out << c.noise->eta << "," << c.noise->nbar << ","
        << (c.noise->placement == NoisePlacement::kBefore ? "before" : "after");
  else
    out << "none";
  out << " regularizer=" << (c.regularizer ? std::to_string(*c.regularizer) : "none")
      << " denominator_count=" << result.denominator_count << " rng=" << kRngName
      << "\n";
  out << "phi,q_count,p_count,d2_estimate,d2_analytic,seed\n";
  for (const auto& row : result.rows)
    out << row.phi << "," << row.q_count << "," << row.p_count << "," << row.estimate
        << "," << row.analytic << "," << row.seed << "\n";
}

inline void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_sweep_csv(result, out);
}

inline SweepResult read_sweep_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string token;
      while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        auto& c = result.config;
        if (key == "phi_min") c.phi_min = std::stod(value);
        else if (key == "phi_max") c.phi_max = std::stod(value);
        else if (key == "points") c.points = std::stoi(value);
        else if (key == "shots") c.shots = std::stoll(value);
        else if (key == "runs") c.runs = std::stoi(value);
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "paired") c.paired = value == "1";
        else if (key == "denominator_count") result.denominator_count = std::stoll(value);
        else if (key == "regularizer" && value != "none") c.regularizer = std::stoll(value);
        else if (key == "noise" && value != "none") {
          NoiseConfig nc;
          std::istringstream nv(value);
          std::string field;
          std::getline(nv, field, ',');
          nc.eta = std::stod(field);
          std::getline(nv, field, ',');
          nc.nbar = std::stod(field);
          std::getline(nv, field, ',');
          nc.placement =
              field == "before" ? NoisePlacement::kBefore : NoisePlacement::kAfter;
          c.noise = nc;
        }
      }
      continue;
    }
    if (!saw_columns) {
      if (line.rfind("phi,", 0) != 0)
        throw std::runtime_error("sweep csv: unexpected column header: " + line);
      saw_columns = true;
      continue;
    }
    SweepRow row;
    std::istringstream fields(line);
    std::string field;
    std::getline(fields, field, ',');
    row.phi = std::stod(field);
    std::getline(fields, field, ',');
    row.q_count = std::stoll(field);
    std::getline(fields, field, ',');
    row.p_count = std::stoll(field);
    std::getline(fields, field, ',');
    row.estimate = std::stod(field);
    std::getline(fields, field, ',');
    row.analytic = std::stod(field);
    std::getline(fields, field, ',');
    row.seed = std::stoull(field);
    result.rows.push_back(row);
  }
  return result;
}

inline SweepResult read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_sweep_csv(in);
}

}  // namespace x8sim

#endif  // X8SIM_DRIVER_HPP_
