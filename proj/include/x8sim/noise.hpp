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

// Thermal attenuation on truncated Fock states via density operators.
//
// The thermal loss channel (transmissivity eta, environment occupation nbar)
// is realized as a quantum-limited amplifier of gain G = 1 + (1-eta)*nbar
// composed with a pure-loss channel of transmissivity eta/G; the composition
// is exact (characteristic-function identity), and each stage has a compact
// closed-form Kraus family. Output occupations past the cutoff are dropped,
// so trace is lost near the cutoff rather than aliased; the loss is
// queryable through trace().

#ifndef X8SIM_NOISE_HPP_
#define X8SIM_NOISE_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "x8sim/fock.hpp"
#include "x8sim/gates.hpp"
#include "x8sim/linalg.hpp"

namespace x8sim {

struct MixedState {
  int num_modes = 0;
  int cutoff = 0;
  std::vector<cdouble> rho;  // row-major, cutoff^num_modes square

  std::size_t dim() const { return fock_dimension(num_modes, cutoff); }

  cdouble& at(std::size_t i, std::size_t j) { return rho[i * dim() + j]; }
  const cdouble& at(std::size_t i, std::size_t j) const { return rho[i * dim() + j]; }

  std::size_t stride(int mode) const {
    std::size_t s = 1;
    for (int m = num_modes - 1; m > mode; --m) s *= static_cast<std::size_t>(cutoff);
    return s;
  }

  double trace() const {
    const std::size_t d = dim();
    double t = 0.0;
    for (std::size_t i = 0; i < d; ++i) t += rho[i * d + i].real();
    return t;
  }
};

inline MixedState promote(const PureState& psi) {
  MixedState ms;
  ms.num_modes = psi.num_modes();
  ms.cutoff = psi.cutoff();
  const std::size_t d = psi.dim();
  ms.rho.resize(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    const cdouble ai = psi.amplitudes()[i];
    if (ai == cdouble{}) continue;
    for (std::size_t j = 0; j < d; ++j)
      ms.rho[i * d + j] = ai * std::conj(psi.amplitudes()[j]);
  }
  return ms;
}

inline double hermiticity_error(const MixedState& ms) {
  const std::size_t d = ms.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      worst = std::max(worst, std::abs(ms.rho[i * d + j] - std::conj(ms.rho[j * d + i])));
  return worst;
}

inline double min_eigenvalue(const MixedState& ms) {
  CMatrix m(static_cast<int>(ms.dim()), static_cast<int>(ms.dim()));
  m.data = ms.rho;
  return hermitian_eigen(m).values.front();
}

namespace detail {

inline double binomial_real(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

}  // namespace detail

// Pure-loss Kraus family: L_l removes l photons,
// <n-l| L_l |n> = sqrt(C(n,l) tau^(n-l) (1-tau)^l).
inline std::vector<CMatrix> pure_loss_kraus(double transmissivity, int cutoff) {
  if (transmissivity < 0.0 || transmissivity > 1.0)
    throw std::invalid_argument("transmissivity must be in [0,1]");
  const int d = cutoff;
  std::vector<CMatrix> ops;
  for (int l = 0; l < d; ++l) {
    CMatrix k(d, d);
    bool nonzero = false;
    for (int n = l; n < d; ++n) {
      const double v = std::sqrt(detail::binomial_real(n, l) *
                                 std::pow(transmissivity, n - l) *
                                 std::pow(1.0 - transmissivity, l));
      if (v != 0.0) nonzero = true;
      k.at(n - l, n) = v;
    }
    if (nonzero) ops.push_back(std::move(k));
  }
  return ops;
}

// Quantum-limited amplifier Kraus family: A_g adds g photons,
// <n+g| A_g |n> = sqrt(C(n+g,g)) (1-1/G)^(g/2) (1/G)^((n+1)/2).
inline std::vector<CMatrix> amplifier_kraus(double gain, int cutoff) {
  if (gain < 1.0) throw std::invalid_argument("amplifier gain must be >= 1");
  const int d = cutoff;
  const double x = 1.0 - 1.0 / gain;
  std::vector<CMatrix> ops;
  for (int g = 0; g < d; ++g) {
    CMatrix k(d, d);
    bool nonzero = false;
    for (int n = 0; n + g < d; ++n) {
      const double v = std::sqrt(detail::binomial_real(n + g, g) * std::pow(x, g) *
                                 std::pow(1.0 / gain, n + 1));
      if (v != 0.0) nonzero = true;
      k.at(n + g, n) = v;
    }
    if (nonzero) ops.push_back(std::move(k));
  }
  return ops;
}

// Kraus set of the single-mode thermal attenuator on the truncated space.
// Completeness sum K†K = I holds exactly away from the cutoff for pure loss,
// and up to the amplifier's gain-overflow tail near the cutoff otherwise.
inline std::vector<CMatrix> thermal_loss_kraus(double eta, double nbar, int cutoff) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
  if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
  const double gain = 1.0 + (1.0 - eta) * nbar;
  const double tau = eta / gain;
  const auto loss = pure_loss_kraus(tau, cutoff);
  const auto amp = amplifier_kraus(gain, cutoff);
  std::vector<CMatrix> ops;
  ops.reserve(loss.size() * amp.size());
  for (const auto& a : amp)
    for (const auto& l : loss) {
      CMatrix k = matmul(a, l);
      if (frobenius_norm_squared(k) > 0.0) ops.push_back(std::move(k));
    }
  return ops;
}

// rho -> sum_k (K_k)_mode rho (K_k)_mode†, K_k acting on one mode.
inline MixedState apply_kraus_single_mode(const MixedState& input, int mode,
                                          std::span<const CMatrix> kraus) {
  if (mode < 0 || mode >= input.num_modes)
    throw std::out_of_range("apply_kraus_single_mode: mode out of range");
  const std::size_t dim = input.dim();
  const int d = input.cutoff;
  const std::size_t s = input.stride(mode);

  MixedState out = input;
  out.rho.assign(dim * dim, cdouble{});
  std::vector<cdouble> tmp(dim * dim);

  for (const CMatrix& k : kraus) {
    if (k.rows != d || k.cols != d)
      throw std::invalid_argument("kraus operator dimension mismatch");
    // tmp = (K on mode) * rho : transform the row index.
    std::fill(tmp.begin(), tmp.end(), cdouble{});
    for (std::size_t row = 0; row < dim; ++row) {
      const int a_out = static_cast<int>((row / s) % static_cast<std::size_t>(d));
      const std::size_t row_base = row - static_cast<std::size_t>(a_out) * s;
      for (int a_in = 0; a_in < d; ++a_in) {
        const cdouble kv = k.at(a_out, a_in);
        if (kv == cdouble{}) continue;
        const std::size_t src = (row_base + static_cast<std::size_t>(a_in) * s) * dim;
        const std::size_t dst = row * dim;
        for (std::size_t col = 0; col < dim; ++col)
          tmp[dst + col] += kv * input.rho[src + col];
      }
    }
    // out += tmp * K† : transform the column index with conj(K).
    for (std::size_t row = 0; row < dim; ++row) {
      const std::size_t base = row * dim;
      for (std::size_t col = 0; col < dim; ++col) {
        const int b_out = static_cast<int>((col / s) % static_cast<std::size_t>(d));
        const std::size_t col_base = col - static_cast<std::size_t>(b_out) * s;
        cdouble acc{};
        for (int b_in = 0; b_in < d; ++b_in) {
          const cdouble kv = k.at(b_out, b_in);
          if (kv == cdouble{}) continue;
          acc += tmp[base + col_base + static_cast<std::size_t>(b_in) * s] * std::conj(kv);
        }
        out.rho[base + col] += acc;
      }
    }
  }
  return out;
}

// Thermal attenuation channel on one mode; loss stage then amplifier stage.
inline MixedState apply_channel(const MixedState& rho, int mode, double eta, double nbar) {
  if (mode < 0 || mode >= rho.num_modes)
    throw std::out_of_range("apply_channel: mode out of range");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
  if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
  const double gain = 1.0 + (1.0 - eta) * nbar;
  const double tau = eta / gain;
  MixedState out = apply_kraus_single_mode(rho, mode, pure_loss_kraus(tau, rho.cutoff));
  if (gain > 1.0)
    out = apply_kraus_single_mode(out, mode, amplifier_kraus(gain, rho.cutoff));
  return out;
}

// rho -> U rho U† for a unitary gate, reusing the pure-state kernels on the
// columns (U rho) and rows (right-multiplication by U† = conjugate gate on
// the column index).
inline MixedState apply_gate(const MixedState& input, const GateOp& gate) {
  validate_gate(gate, input.num_modes);
  if (std::holds_alternative<ThermalLoss>(gate))
    throw std::invalid_argument("thermal loss is a channel; use apply_channel");

  const std::size_t dim = input.dim();
  MixedState out = input;

  Circuit one;
  one.num_modes = input.num_modes;
  one.gates = {gate};
  const Circuit conj = conjugate_circuit(one);

  PureState scratch(input.num_modes, input.cutoff);
  // columns: tmp = U rho
  for (std::size_t col = 0; col < dim; ++col) {
    auto& v = scratch.mutable_amplitudes();
    for (std::size_t row = 0; row < dim; ++row) v[row] = out.rho[row * dim + col];
    PureState w = apply_circuit(scratch, one);
    for (std::size_t row = 0; row < dim; ++row) out.rho[row * dim + col] = w.amplitudes()[row];
  }
  // rows: out = tmp U† (conjugate circuit applied to each row vector)
  for (std::size_t row = 0; row < dim; ++row) {
    auto& v = scratch.mutable_amplitudes();
    for (std::size_t col = 0; col < dim; ++col) v[col] = out.rho[row * dim + col];
    PureState w = apply_circuit(scratch, conj);
    for (std::size_t col = 0; col < dim; ++col) out.rho[row * dim + col] = w.amplitudes()[col];
  }
  return out;
}

// Outcome transition matrix T(n|m) = <n| Phi(|m><m|) |n> of the thermal
// attenuator. The channel is phase covariant, so photon-number statistics
// after it depend on the input only through its Fock diagonal:
// p_out(n) = sum_m T(n|m) p_in(m). Exact, and much cheaper than the full
// density route when the channel sits after all unitaries.
inline std::vector<double> thermal_transition_matrix(double eta, double nbar, int cutoff) {
  const auto kraus = thermal_loss_kraus(eta, nbar, cutoff);
  const int d = cutoff;
  std::vector<double> t(static_cast<std::size_t>(d) * d, 0.0);
  for (const auto& k : kraus)
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m) t[static_cast<std::size_t>(n) * d + m] += std::norm(k.at(n, m));
  return t;
}

// Spectral decomposition of a density operator into weighted pure states;
// components below weight_floor are dropped.
inline std::vector<std::pair<double, PureState>> eigen_mixture(const MixedState& ms,
                                                               double weight_floor = 1e-12) {
  CMatrix m(static_cast<int>(ms.dim()), static_cast<int>(ms.dim()));
  m.data = ms.rho;
  const EigenDecomposition eig = hermitian_eigen(m);
  std::vector<std::pair<double, PureState>> comps;
  const int n = static_cast<int>(ms.dim());
  for (int i = n - 1; i >= 0; --i) {
    const double w = eig.values[i];
    if (w <= weight_floor) break;  // ascending order: all remaining are smaller
    PureState psi(ms.num_modes, ms.cutoff);
    auto& amps = psi.mutable_amplitudes();
    for (int k = 0; k < n; ++k) amps[k] = eig.vectors.at(k, i);
    comps.emplace_back(w, std::move(psi));
  }
  return comps;
}

}  // namespace x8sim

#endif  // X8SIM_NOISE_HPP_
