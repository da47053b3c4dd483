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

// Parameter-shift differentiation of costs with respect to a beamsplitter
// phase that may appear in several gates at once (one per register).
//
// Each gate's phase enters the observables in scope with frequency one, so
// shifting one gate at a time by +-s and combining with weight 1/(2 sin s)
// is exact; summing over the marked gates is the product rule. At the
// default shift s = pi/2 the weight is 1/2. The end-to-end cost then has
// frequency two in the shared phase, which is why shifting all gates
// together would not be exact.

#ifndef X8SIM_GRADIENT_HPP_
#define X8SIM_GRADIENT_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "x8sim/gates.hpp"

namespace x8sim {

struct GradientRequest {
  Circuit circuit;                  // template; marked gates receive the phase
  std::vector<std::size_t> marked;  // beamsplitter gate positions sharing it
  double shift = std::numbers::pi / 2.0;
  std::function<double(const Circuit&)> evaluate;  // exact or sampled backend
};

inline double parameter_shift_gradient(const GradientRequest& req, double phi) {
  if (req.marked.empty())
    throw std::invalid_argument("parameter_shift_gradient: no marked gate positions");
  if (req.shift == 0.0 || !std::isfinite(req.shift))
    throw std::invalid_argument("parameter_shift_gradient: shift must be nonzero");
  if (!req.evaluate)
    throw std::invalid_argument("parameter_shift_gradient: missing evaluation backend");
  for (std::size_t g : req.marked) {
    if (g >= req.circuit.gates.size())
      throw std::out_of_range("parameter_shift_gradient: marked position out of range");
    if (!std::holds_alternative<BeamSplitter>(req.circuit.gates[g]))
      throw std::invalid_argument(
          "parameter_shift_gradient: marked gate is not a beamsplitter");
  }

  Circuit base = req.circuit;
  for (std::size_t g : req.marked) std::get<BeamSplitter>(base.gates[g]).phi = phi;

  const double weight = 1.0 / (2.0 * std::sin(req.shift));
  double grad = 0.0;
  for (std::size_t g : req.marked) {
    Circuit plus = base;
    std::get<BeamSplitter>(plus.gates[g]).phi = phi + req.shift;
    Circuit minus = base;
    std::get<BeamSplitter>(minus.gates[g]).phi = phi - req.shift;
    grad += weight * (req.evaluate(plus) - req.evaluate(minus));
  }
  return grad;
}

// Central-difference reference (oracle for the shift rule).
inline double finite_difference(const std::function<double(double)>& f, double phi,
                                double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_difference: h must be positive");
  return (f(phi + h) - f(phi - h)) / (2.0 * h);
}

}  // namespace x8sim

#endif  // X8SIM_GRADIENT_HPP_
