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

// File formats.
//
// Circuit JSON: an array of gate objects, angles in radians.
//   {"kind": "phase_shift",  "mode": 0, "phi": 0.5}
//   {"kind": "beamsplitter", "mode_a": 0, "mode_b": 1, "theta": 0.785, "phi": 0.0}
//   {"kind": "mach_zehnder", "mode_a": 0, "mode_b": 1, "phi1": 0.1, "phi2": 0.2}
//   {"kind": "thermal_loss", "mode": 0, "eta": 0.9, "nbar": 2.0}
//
// Job JSON:
//   {"circuit": [...], "squeezing": [1,1,1,1], "shots": 50000, "seed": 7,
//    "native_only": false,
//    "noise": {"eta": 0.9, "nbar": 2.0, "placement": "after", "modes": [0,1,4,5]}}
//
// Count tables serialize as a CSV body (pattern,count with occupations joined
// by '-') plus a JSON header carrying shots, seed, modes, rng and overflow.

#ifndef X8SIM_SERIALIZE_HPP_
#define X8SIM_SERIALIZE_HPP_

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "x8sim/device.hpp"
#include "x8sim/gates.hpp"
#include "x8sim/measure.hpp"

namespace x8sim {

inline nlohmann::json gate_to_json(const GateOp& gate) {
  nlohmann::json j;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PhaseShift>) {
          j = {{"kind", "phase_shift"}, {"mode", g.mode}, {"phi", g.phi}};
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          j = {{"kind", "beamsplitter"}, {"mode_a", g.mode_a}, {"mode_b", g.mode_b},
               {"theta", g.theta},       {"phi", g.phi}};
        } else if constexpr (std::is_same_v<T, MachZehnder>) {
          j = {{"kind", "mach_zehnder"}, {"mode_a", g.mode_a}, {"mode_b", g.mode_b},
               {"phi1", g.phi1},         {"phi2", g.phi2}};
        } else {
          j = {{"kind", "thermal_loss"}, {"mode", g.mode}, {"eta", g.eta},
               {"nbar", g.nbar}};
        }
      },
      gate);
  return j;
}

inline GateOp gate_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "phase_shift")
    return PhaseShift{j.at("mode").get<int>(), j.at("phi").get<double>()};
  if (kind == "beamsplitter")
    return BeamSplitter{j.at("mode_a").get<int>(), j.at("mode_b").get<int>(),
                        j.at("theta").get<double>(), j.at("phi").get<double>()};
  if (kind == "mach_zehnder")
    return MachZehnder{j.at("mode_a").get<int>(), j.at("mode_b").get<int>(),
                       j.at("phi1").get<double>(), j.at("phi2").get<double>()};
  if (kind == "thermal_loss")
    return ThermalLoss{j.at("mode").get<int>(), j.at("eta").get<double>(),
                       j.at("nbar").get<double>()};
  throw std::invalid_argument("unknown gate kind: " + kind);
}

inline nlohmann::json circuit_to_json(const Circuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : circuit.gates) gates.push_back(gate_to_json(g));
  return gates;
}

inline Circuit circuit_from_json(const nlohmann::json& j, int num_modes) {
  Circuit c;
  c.num_modes = num_modes;
  for (const auto& g : j) c.gates.push_back(gate_from_json(g));
  return c;
}

inline nlohmann::json job_to_json(const DeviceJob& job) {
  nlohmann::json j;
  j["circuit"] = circuit_to_json(job.circuit);
  j["squeezing"] = job.squeezing;
  j["shots"] = job.shots;
  j["seed"] = job.seed;
  j["native_only"] = job.native_only;
  if (job.noise) {
    j["noise"] = {
        {"eta", job.noise->eta},
        {"nbar", job.noise->nbar},
        {"placement",
         job.noise->placement == NoisePlacement::kBefore ? "before" : "after"},
        {"modes", job.noise->modes}};
  }
  return j;
}

inline DeviceJob job_from_json(const nlohmann::json& j) {
  DeviceJob job;
  job.circuit = circuit_from_json(j.at("circuit"), 4);
  const auto squeezing = j.at("squeezing");
  if (squeezing.size() != 4)
    throw std::invalid_argument("job: squeezing must list exactly four pairs");
  for (int i = 0; i < 4; ++i) job.squeezing[static_cast<std::size_t>(i)] = squeezing[i].get<int>();
  job.shots = j.at("shots").get<long long>();
  job.seed = j.value("seed", std::uint64_t{0});
  job.native_only = j.value("native_only", false);
  if (j.contains("noise") && !j.at("noise").is_null()) {
    const auto& n = j.at("noise");
    NoiseConfig nc;
    nc.eta = n.at("eta").get<double>();
    nc.nbar = n.at("nbar").get<double>();
    const std::string placement = n.value("placement", "after");
    if (placement != "before" && placement != "after")
      throw std::invalid_argument("job: noise placement must be 'before' or 'after'");
    nc.placement =
        placement == "before" ? NoisePlacement::kBefore : NoisePlacement::kAfter;
    if (n.contains("modes")) nc.modes = n.at("modes").get<std::vector<int>>();
    job.noise = nc;
  }
  return job;
}

// CSV body: one "pattern,count" row per observed pattern, occupations joined
// by '-' in mode-list order.
inline void write_count_csv(const CountTable& table, std::ostream& out) {
  out << "pattern,count\n";
  for (const auto& [occ, count] : table.counts) {
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (i) out << '-';
      out << occ[i];
    }
    out << ',' << count << '\n';
  }
}

inline nlohmann::json count_header_json(const CountTable& table) {
  return {{"shots", table.shots}, {"seed", table.seed},   {"modes", table.modes},
          {"rng", table.rng},     {"overflow", table.overflow}};
}

}  // namespace x8sim

#endif  // X8SIM_SERIALIZE_HPP_
