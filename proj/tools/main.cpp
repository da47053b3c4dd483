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

// x8sim command line.
//
//   sweep       phi-grid sweep of the compiling cost, CSV out
//   compile     gradient-descent loop on the beamsplitter phase
//   resolution  shot-budget vs phase-resolution table
//   validate    check a job file against the device constraints
//   decompose   native-alphabet decomposition of U_BS(theta, phi)
//   run         execute a job file, write counts CSV + JSON header
//
// Exit codes: 0 success, 1 validation failure, 2 numerical/runtime error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "x8sim/x8sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

x8sim::NoiseConfig parse_noise(const std::string& spec) {
  x8sim::NoiseConfig nc;
  std::istringstream in(spec);
  std::string field;
  if (!std::getline(in, field, ',')) throw CLI::ValidationError("--noise needs eta,nbar");
  nc.eta = std::stod(field);
  if (!std::getline(in, field, ',')) throw CLI::ValidationError("--noise needs eta,nbar");
  nc.nbar = std::stod(field);
  if (std::getline(in, field, ',')) {
    if (field == "before")
      nc.placement = x8sim::NoisePlacement::kBefore;
    else if (field == "after")
      nc.placement = x8sim::NoisePlacement::kAfter;
    else
      throw CLI::ValidationError("--noise placement must be 'before' or 'after'");
  }
  return nc;
}

int cmd_sweep(const x8sim::SweepConfig& config, const std::string& out_path) {
  const x8sim::SweepResult result = x8sim::run_sweep(config);
  if (out_path.empty()) {
    x8sim::write_sweep_csv(result, std::cout);
  } else {
    x8sim::write_sweep_csv(result, out_path);
    std::cerr << "wrote " << result.rows.size() << " rows to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_compile(const x8sim::CompileConfig& config) {
  const x8sim::CompileTrace trace = x8sim::compile_phase(config);
  std::printf("iter,phi,cost,gradient,learning_rate\n");
  for (const auto& s : trace.steps)
    std::printf("%d,%.12g,%.12g,%.12g,%g\n", s.iteration, s.phi, s.cost, s.gradient,
                s.learning_rate);
  std::printf("# phi_final=%.12g converged=%d diverged=%d iterations=%zu\n",
              trace.phi_final, trace.converged ? 1 : 0, trace.diverged ? 1 : 0,
              trace.steps.size());
  return trace.diverged ? kExitRuntime : kExitOk;
}

int cmd_resolution(const std::vector<long long>& shots_list) {
  const auto rows = x8sim::resolution_analysis(shots_list);
  std::printf("shots,delta,sqrt_10_over_shots\n");
  for (const auto& row : rows)
    std::printf("%lld,%.6g,%.6g\n", row.shots, row.delta,
                std::sqrt(10.0 / double(row.shots)));
  return kExitOk;
}

x8sim::DeviceJob load_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return x8sim::job_from_json(j);
}

int cmd_validate(const std::string& path) {
  x8sim::DeviceJob job;
  try {
    job = load_job(path);
  } catch (const std::exception& e) {
    std::cerr << "invalid job file: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto violations = x8sim::validate_job(job);
  if (violations.empty()) {
    std::printf("ok\n");
    return kExitOk;
  }
  for (const auto& v : violations) std::printf("violation: %s\n", v.c_str());
  return kExitValidation;
}

int cmd_decompose(double theta, double phi) {
  const x8sim::Circuit circuit = x8sim::precompile_two_mode(theta, phi);
  std::cout << x8sim::circuit_to_json(circuit).dump(2) << "\n";
  std::printf("# distance_up_to_phase (cutoff 8, exact sectors): %.3e\n",
              x8sim::mz_decompose_distance(theta, phi, 8));
  return kExitOk;
}

int cmd_run(const std::string& path, std::string out_prefix) {
  x8sim::DeviceJob job;
  try {
    job = load_job(path);
  } catch (const std::exception& e) {
    std::cerr << "invalid job file: " << e.what() << "\n";
    return kExitValidation;
  }
  x8sim::CountTable table;
  try {
    table = x8sim::run_job(job);
  } catch (const x8sim::JobValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  if (out_prefix.empty()) {
    out_prefix = path;
    const auto dot = out_prefix.rfind(".json");
    if (dot != std::string::npos) out_prefix.erase(dot);
    out_prefix += ".counts";
  }
  {
    std::ofstream csv(out_prefix + ".csv");
    if (!csv) throw std::runtime_error("cannot open " + out_prefix + ".csv");
    x8sim::write_count_csv(table, csv);
  }
  {
    std::ofstream meta(out_prefix + ".json");
    if (!meta) throw std::runtime_error("cannot open " + out_prefix + ".json");
    meta << x8sim::count_header_json(table).dump(2) << "\n";
  }
  std::printf("shots=%lld distinct_patterns=%zu overflow=%lld -> %s.{csv,json}\n",
              table.shots, table.counts.size(), table.overflow, out_prefix.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"x8sim: eight-mode squeezed-light processor simulator and "
               "variational gate-compiling toolkit"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "phi-grid sweep of the compiling cost");
  x8sim::SweepConfig sweep_config;
  std::string noise_spec, sweep_out;
  long long regularizer = -1;
  sweep->add_option("--phi-min", sweep_config.phi_min, "grid start (radians)");
  sweep->add_option("--phi-max", sweep_config.phi_max, "grid end (radians)");
  sweep->add_option("--points", sweep_config.points, "grid points");
  sweep->add_option("--shots", sweep_config.shots, "shots per point");
  sweep->add_option("--runs", sweep_config.runs, "independent runs per point");
  sweep->add_option("--noise", noise_spec, "thermal loss: eta,nbar[,before|after]");
  sweep->add_flag("--paired", sweep_config.paired,
                  "take the reference count from modes 2367 of the same job");
  sweep->add_option("--regularizer", regularizer,
                    "fixed precomputed reference count (counts per shot budget)");
  sweep->add_option("--seed", sweep_config.seed, "master seed");
  sweep->add_option("--out", sweep_out, "output CSV path (default: stdout)");

  // compile
  auto* compile = app.add_subcommand("compile", "gradient descent on the phase");
  x8sim::CompileConfig compile_config;
  std::string backend = "exact";
  compile->add_option("--phi0", compile_config.phi0, "starting phase");
  compile->add_option("--lr", compile_config.learning_rate, "learning rate");
  compile->add_option("--iters", compile_config.max_iters, "max iterations");
  compile->add_option("--backend", backend, "exact|sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  compile->add_option("--shots", compile_config.shots, "shots per sampled evaluation");
  compile->add_option("--seed", compile_config.seed, "master seed");

  // resolution
  auto* resolution = app.add_subcommand("resolution", "shot/resolution tradeoff");
  std::string shots_list_spec = "100,1000,10000,100000";
  resolution->add_option("--shots-list", shots_list_spec, "comma-separated shot counts");

  // validate
  auto* validate = app.add_subcommand("validate", "validate a job file");
  std::string validate_path;
  validate->add_option("file", validate_path, "job JSON file")->required();

  // decompose
  auto* decompose = app.add_subcommand("decompose", "native form of U_BS(theta, phi)");
  double theta = 0.0, phi = 0.0;
  decompose->add_option("--theta", theta, "transmissivity angle (radians)")->required();
  decompose->add_option("--phi", phi, "beamsplitter phase (radians)")->required();

  // run
  auto* run = app.add_subcommand("run", "execute a job file");
  std::string run_path, run_out;
  run->add_option("file", run_path, "job JSON file")->required();
  run->add_option("--out", run_out, "output prefix (default: derived from the job file)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      if (!noise_spec.empty()) sweep_config.noise = parse_noise(noise_spec);
      if (regularizer >= 0) sweep_config.regularizer = regularizer;
      return cmd_sweep(sweep_config, sweep_out);
    }
    if (compile->parsed()) {
      compile_config.backend = backend == "sampled" ? x8sim::CompileBackend::kSampled
                                                    : x8sim::CompileBackend::kExact;
      return cmd_compile(compile_config);
    }
    if (resolution->parsed()) {
      std::vector<long long> shots_list;
      std::istringstream in(shots_list_spec);
      std::string field;
      while (std::getline(in, field, ',')) shots_list.push_back(std::stoll(field));
      return cmd_resolution(shots_list);
    }
    if (validate->parsed()) return cmd_validate(validate_path);
    if (decompose->parsed()) return cmd_decompose(theta, phi);
    if (run->parsed()) return cmd_run(run_path, run_out);
  } catch (const x8sim::JobValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
