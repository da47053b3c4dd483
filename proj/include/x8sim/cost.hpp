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

// Variational-compiling cost functions over two-mode-squeezed registers.
//
// Register layout: for M squeezed pairs, register A is modes 0..M-1 and
// register B is modes M..2M-1; pair j entangles mode j with mode j+M. On the
// eight-mode device, (A1, A2, B1, B2) of the active group map to physical
// modes (0, 1, 4, 5).
//
// Every analytic closed form here has a simulator-backed counterpart built
// from state evolution, so each can serve as the other's cross-check.

#ifndef X8SIM_COST_HPP_
#define X8SIM_COST_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "x8sim/fock.hpp"
#include "x8sim/gates.hpp"
#include "x8sim/measure.hpp"

namespace x8sim {

inline constexpr int kDefaultCostCutoff = 8;

struct CostEstimate {
  double value = 0.0;
  long long numerator_count = 0;
  long long denominator_count = 0;
  long long shots = 0;
  bool regularized = false;
  double angle = 0.0;
};

// Raised when a count-based denominator is empty; dividing by it would turn
// sampling noise into infinities.
class InsufficientShotsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// TMSS on M pairs with the per-register photon total capped at cutoff - 1,
// so register circuits act exactly and the V = U cost zero is exact.
inline PureState sector_safe_tmss(double r, int pairs, int cutoff) {
  return truncate_total_photons(make_tmss(r, pairs, cutoff), 2 * (cutoff - 1));
}

}  // namespace detail

// C(U, V) = 1 - |<T| U_A conj(V)_B |T>|^2, normalized by the truncated-TMSS
// norm so that V = U reads exactly zero.
inline double overlap_cost(const Circuit& u, const Circuit& v, double r, int cutoff) {
  if (u.num_modes != v.num_modes)
    throw std::invalid_argument("overlap_cost: register sizes differ");
  if (u.num_modes < 1) throw std::invalid_argument("overlap_cost: empty register");
  validate_circuit(u);
  validate_circuit(v);
  const int pairs = u.num_modes;
  const PureState t = detail::sector_safe_tmss(r, pairs, cutoff);
  PureState psi = apply_circuit(t, u);
  psi = apply_circuit(psi, conjugate_circuit(v), pairs);
  const double n2 = t.norm_squared();
  const double overlap = std::abs(inner_product(t, psi));
  const double value = 1.0 - (overlap * overlap) / (n2 * n2);
  return std::clamp(value, 0.0, 1.0);
}

// C2(V) = 1 - |<T| V_A V_B |T>|^2 with the same unitary on both registers;
// zero exactly when V is real in the Fock basis.
inline double real_compile_cost(const Circuit& v, double r, int cutoff) {
  if (v.num_modes < 1) throw std::invalid_argument("real_compile_cost: empty register");
  validate_circuit(v);
  const int pairs = v.num_modes;
  const PureState t = detail::sector_safe_tmss(r, pairs, cutoff);
  PureState psi = apply_circuit(t, v);
  psi = apply_circuit(psi, v, pairs);
  const double n2 = t.norm_squared();
  const double overlap = std::abs(inner_product(t, psi));
  const double value = 1.0 - (overlap * overlap) / (n2 * n2);
  return std::clamp(value, 0.0, 1.0);
}

// Single-outcome cost from the 0101 count difference,
// D1 = tanh^2(r)/(2 cosh^4 r) (1 - cos 2 phi).
inline double d1_analytic(double phi, double r) {
  const double t = std::tanh(r), c = std::cosh(r);
  return t * t / (2.0 * c * c * c * c) * (1.0 - std::cos(2.0 * phi));
}

// Likelihood-ratio cost D2 = (1 - cos 2 phi) / 2; squeezing-independent.
inline double d2_analytic(double phi) { return 0.5 * (1.0 - std::cos(2.0 * phi)); }

// The compiling experiment's single readout pattern: one photon in the
// second mode of each register, (0,1,0,1) on (A1, A2, B1, B2).
inline OutcomePattern compile_pattern() { return {{0, 1, 2, 3}, {0, 1, 0, 1}}; }

// q(phi_a, phi_b): probability of the 0101 pattern after U_BS(pi/4, phi) on
// each register of TMSS x TMSS. Exact at any cutoff >= 2 (the pattern sits in
// single-photon register sectors) and equal to p * cos^2((phi_a + phi_b)/2).
inline double compile_q_probability(double phi_a, double phi_b, double r = 1.0,
                                    int cutoff = kDefaultCostCutoff) {
  constexpr double quarter = std::numbers::pi / 4.0;
  PureState s = make_tmss(r, 2, cutoff);
  s = apply_gate(s, BeamSplitter{0, 1, quarter, phi_a});
  s = apply_gate(s, BeamSplitter{2, 3, quarter, phi_b});
  return fock_probability(s, compile_pattern());
}

// p: the same pattern with no gate, tanh^2(r)/cosh^4(r).
inline double compile_p_probability(double r = 1.0, int cutoff = kDefaultCostCutoff) {
  return fock_probability(make_tmss(r, 2, cutoff), compile_pattern());
}

// Exact-probability D2(phi) = |1 - q(phi, phi)/p| from the simulator path.
inline double d2_exact(double phi, double r = 1.0, int cutoff = kDefaultCostCutoff) {
  const double p = compile_p_probability(r, cutoff);
  if (p <= 0.0) throw std::domain_error("d2_exact: zero reference probability");
  return std::abs(1.0 - compile_q_probability(phi, phi, r, cutoff) / p);
}

// Estimator D2_hat = |1 - N_q/N_p| from two count tables taken with the same
// shot budget.
inline CostEstimate d2_estimate(const CountTable& q_table, const CountTable& p_table,
                                const OutcomePattern& pattern, double angle = 0.0) {
  if (q_table.shots != p_table.shots)
    throw std::invalid_argument("d2_estimate: both tables need the same number of shots");
  const long long nq = pattern_count(q_table, pattern);
  const long long np = pattern_count(p_table, pattern);
  if (np == 0)
    throw InsufficientShotsError("d2_estimate: denominator count is zero; more shots needed");
  CostEstimate est;
  est.value = std::abs(1.0 - static_cast<double>(nq) / static_cast<double>(np));
  est.numerator_count = nq;
  est.denominator_count = np;
  est.shots = q_table.shots;
  est.regularized = false;
  est.angle = angle;
  return est;
}

// Regularized variant: the denominator count is replaced with a precomputed
// value (e.g. from a separately calibrated noisy run).
inline CostEstimate d2_estimate(const CountTable& q_table, long long regularizer,
                                const OutcomePattern& pattern, double angle = 0.0) {
  if (regularizer <= 0)
    throw InsufficientShotsError("d2_estimate: regularizer must be a positive count");
  const long long nq = pattern_count(q_table, pattern);
  CostEstimate est;
  est.value = std::abs(1.0 - static_cast<double>(nq) / static_cast<double>(regularizer));
  est.numerator_count = nq;
  est.denominator_count = regularizer;
  est.shots = q_table.shots;
  est.regularized = true;
  est.angle = angle;
  return est;
}

// Phase-space-reflection cost, faithful on [pi/2, 3pi/2] with its zero at
// phi = pi: the quotient of the 0101 probability for the phase-then-50:50
// circuit against the no-gate reference, cos^2(phi/2).
//
// Convention note (verified against the state simulator): the reflection
// parameter phi enters the device circuit as a phi/2 phase on each register.
// Loading phi itself on both registers doubles the frequency to cos^2(phi),
// which moves the minimum to pi/2 and breaks faithfulness on the interval.
inline double reflection_cost(double phi, double r, bool simulate = false,
                              int cutoff = kDefaultCostCutoff) {
  if (!simulate) {
    const double c = std::cos(0.5 * phi);
    return c * c;
  }
  constexpr double quarter = std::numbers::pi / 4.0;
  PureState s = make_tmss(r, 2, cutoff);
  s = apply_gate(s, PhaseShift{0, 0.5 * phi});
  s = apply_gate(s, BeamSplitter{0, 1, quarter, 0.0});
  s = apply_gate(s, PhaseShift{2, 0.5 * phi});
  s = apply_gate(s, BeamSplitter{2, 3, quarter, 0.0});
  const double numerator = fock_probability(s, compile_pattern());
  const double denominator = compile_p_probability(r, cutoff);
  if (denominator <= 0.0)
    throw std::domain_error("reflection_cost: zero reference probability");
  return numerator / denominator;
}

inline double number_expectation(const PureState& state, int mode) {
  return mean_photon_number(state, mode);
}

// <-i a†_a a_b + i a†_b a_a> evaluated through the number-difference rotation:
// appending U_BS(pi/4, -pi/2) maps the observable onto n_a - n_b. Under the
// beamsplitter convention used here a zero-phase rotation would pick out the
// real quadrature a†_a a_b + a†_b a_a instead; the -pi/2 internal phase is
// what selects the imaginary one. Exact whenever the state's (a, b) photon
// sectors sit fully below the cutoff.
inline double imag_hopping_expectation(const PureState& state, int mode_a, int mode_b) {
  constexpr double quarter = std::numbers::pi / 4.0;
  constexpr double half = std::numbers::pi / 2.0;
  const PureState rotated =
      apply_gate(state, BeamSplitter{mode_a, mode_b, quarter, -half});
  return number_expectation(rotated, mode_a) - number_expectation(rotated, mode_b);
}

namespace detail {

// Numerator state of the occupation costs: TMSS on pair (A1, B1), vacuum on
// (A2, B2), with U_BS(theta, phi) duplicated on (A1, A2) and (B1, B2).
inline PureState occupation_state(double theta, double phi, double r, int cutoff) {
  const std::vector<double> rs = {r, 0.0};
  PureState s = make_tmss_pairs(rs, cutoff);
  s = apply_gate(s, BeamSplitter{0, 1, theta, phi});
  s = apply_gate(s, BeamSplitter{2, 3, theta, phi});
  return s;
}

inline double occupation_reference(double r, int cutoff) {
  const std::vector<double> rs = {r, 0.0};
  const double denom = number_expectation(make_tmss_pairs(rs, cutoff), 0);
  if (denom <= 0.0)
    throw std::domain_error("occupation cost: zero squeezing gives a zero denominator");
  return denom;
}

}  // namespace detail

// Occupation-ratio cost |<-i a†_0 a_1 + i a†_1 a_0>| / <n> = |sin phi| for
// the 50:50 duplicated beamsplitter. The numerator observable is measured
// through the rotation identity (extra beamsplitter layer).
inline double occupation_phase_cost(double phi, double r, int cutoff = 10) {
  constexpr double quarter = std::numbers::pi / 4.0;
  const PureState s = detail::occupation_state(quarter, phi, r, cutoff);
  return std::abs(imag_hopping_expectation(s, 0, 1)) /
         detail::occupation_reference(r, cutoff);
}

// Transmissivity-compiling cost |<n_0 - n_1>| / <n> = |cos 2 theta|,
// minimized at theta = pi/4 on [0, pi/2]; needs no extra layer.
inline double occupation_theta_cost(double theta, double r, int cutoff = 10) {
  const PureState s = detail::occupation_state(theta, 0.0, r, cutoff);
  return std::abs(number_expectation(s, 0) - number_expectation(s, 1)) /
         detail::occupation_reference(r, cutoff);
}

}  // namespace x8sim

#endif  // X8SIM_COST_HPP_
