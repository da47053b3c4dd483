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

// Linear-optical gates on truncated Fock states.
//
// Beamsplitter convention: U_BS(theta, phi) = exp[theta (e^{i phi} a† b -
// e^{-i phi} b† a)], which on the single-photon sector in basis (|1,0>, |0,1>)
// reads [[cos t, e^{i phi} sin t], [-e^{-i phi} sin t, cos t]]. The phase gate
// is e^{i phi a† a}. A Mach-Zehnder gate is
//   U_MZ(phi1, phi2) = U_BS(pi/4, pi/2) e^{i phi1 a†a} U_BS(pi/4, pi/2)
//                      e^{i phi2 a†a}
// with both internal phases on the first of its two modes.
//
// Two-mode gates act exactly within each total-photon-number sector; sectors
// that extend past the cutoff are evolved exactly and then projected back,
// which loses norm instead of aliasing it.

#ifndef X8SIM_GATES_HPP_
#define X8SIM_GATES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "x8sim/fock.hpp"
#include "x8sim/linalg.hpp"

namespace x8sim {

struct PhaseShift {
  int mode = 0;
  double phi = 0.0;
};

struct BeamSplitter {
  int mode_a = 0;
  int mode_b = 1;
  double theta = 0.0;
  double phi = 0.0;
};

struct MachZehnder {
  int mode_a = 0;
  int mode_b = 1;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

struct ThermalLoss {
  int mode = 0;
  double eta = 1.0;
  double nbar = 0.0;
};

using GateOp = std::variant<PhaseShift, BeamSplitter, MachZehnder, ThermalLoss>;

struct Circuit {
  int num_modes = 0;
  std::vector<GateOp> gates;
};

inline void validate_gate(const GateOp& gate, int num_modes) {
  auto check_mode = [num_modes](int m) {
    if (m < 0 || m >= num_modes) throw std::out_of_range("gate mode out of range");
  };
  auto check_angle = [](double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("gate angle must be finite");
  };
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PhaseShift>) {
          check_mode(g.mode);
          check_angle(g.phi);
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          check_mode(g.mode_a);
          check_mode(g.mode_b);
          if (g.mode_a == g.mode_b) throw std::invalid_argument("beamsplitter modes must differ");
          check_angle(g.theta);
          check_angle(g.phi);
        } else if constexpr (std::is_same_v<T, MachZehnder>) {
          check_mode(g.mode_a);
          check_mode(g.mode_b);
          if (g.mode_a == g.mode_b) throw std::invalid_argument("mach-zehnder modes must differ");
          check_angle(g.phi1);
          check_angle(g.phi2);
        } else {
          check_mode(g.mode);
          if (g.eta < 0.0 || g.eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
          if (g.nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
        }
      },
      gate);
}

inline void validate_circuit(const Circuit& c) {
  for (const auto& g : c.gates) validate_gate(g, c.num_modes);
}

namespace detail {

// exp of the phi = 0 generator, cached per (theta, sector). The phase enters
// by diagonal conjugation: G(theta, phi) = D(phi) G(theta, 0) D(phi)† with
// D = diag(e^{i phi k}), so only the real exponential needs computing.
inline const CMatrix& bs_sector_matrix_real(double theta, int total_photons) {
  thread_local std::map<std::pair<double, int>, CMatrix> cache;
  const auto key = std::make_pair(theta, total_photons);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const int n = total_photons;
    CMatrix gen(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
      const double s = theta * std::sqrt(double(k + 1) * double(n - k));
      gen.at(k + 1, k) = s;
      gen.at(k, k + 1) = -s;
    }
    it = cache.emplace(key, matrix_exp(gen)).first;
  }
  return it->second;
}

}  // namespace detail

// Exact exponential of the beamsplitter generator on the total-photon sector
// n; basis index k = photons in mode a (k = 0..n). The generator is the
// anti-Hermitian tridiagonal G[k+1][k] = theta e^{i phi} sqrt((k+1)(n-k)),
// G[k][k+1] = -conj(G[k+1][k]).
inline CMatrix bs_sector_matrix(double theta, double phi, int total_photons) {
  const int n = total_photons;
  CMatrix out = detail::bs_sector_matrix_real(theta, n);
  if (phi != 0.0) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        if (i != j) out.at(i, j) *= std::polar(1.0, phi * (i - j));
  }
  return out;
}

// Full two-mode matrix over the truncated space, block diagonal in the total
// photon number; row/column index is n_a * cutoff + n_b.
inline CMatrix bs_two_mode_matrix(double theta, double phi, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
  const int d = cutoff;
  CMatrix out(d * d, d * d);
  for (int n = 0; n <= 2 * (d - 1); ++n) {
    const CMatrix u = bs_sector_matrix(theta, phi, n);
    const int k_lo = std::max(0, n - d + 1);
    const int k_hi = std::min(n, d - 1);
    for (int k_out = k_lo; k_out <= k_hi; ++k_out)
      for (int k_in = k_lo; k_in <= k_hi; ++k_in)
        out.at(k_out * d + (n - k_out), k_in * d + (n - k_in)) = u.at(k_out, k_in);
  }
  return out;
}

namespace detail {

inline void apply_phase_inplace(PureState& state, int mode, double phi) {
  const std::size_t stride = state.stride(mode);
  const int d = state.cutoff();
  auto& amps = state.mutable_amplitudes();
  std::vector<cdouble> phases(d);
  for (int n = 0; n < d; ++n) phases[n] = std::polar(1.0, phi * n);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const int n = static_cast<int>((i / stride) % static_cast<std::size_t>(d));
    if (n) amps[i] *= phases[n];
  }
}

inline void apply_bs_inplace(PureState& state, int mode_a, int mode_b, double theta,
                             double phi) {
  const int d = state.cutoff();
  const std::size_t sa = state.stride(mode_a);
  const std::size_t sb = state.stride(mode_b);
  auto& amps = state.mutable_amplitudes();

  std::vector<CMatrix> sectors(2 * d - 1);
  for (int n = 0; n <= 2 * (d - 1); ++n) sectors[n] = bs_sector_matrix(theta, phi, n);

  std::vector<cdouble> block(static_cast<std::size_t>(d) * d);
  std::vector<cdouble> fresh(static_cast<std::size_t>(d) * d);

  for (std::size_t base = 0; base < amps.size(); ++base) {
    // Visit each two-mode block once, at its (n_a, n_b) = (0, 0) corner.
    if ((base / sa) % static_cast<std::size_t>(d) != 0) continue;
    if ((base / sb) % static_cast<std::size_t>(d) != 0) continue;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        block[static_cast<std::size_t>(a) * d + b] =
            amps[base + sa * static_cast<std::size_t>(a) + sb * static_cast<std::size_t>(b)];

    std::fill(fresh.begin(), fresh.end(), cdouble{});
    for (int n = 0; n <= 2 * (d - 1); ++n) {
      const CMatrix& u = sectors[n];
      const int k_lo = std::max(0, n - d + 1);
      const int k_hi = std::min(n, d - 1);
      for (int k_out = k_lo; k_out <= k_hi; ++k_out) {
        cdouble acc{};
        for (int k_in = k_lo; k_in <= k_hi; ++k_in)
          acc += u.at(k_out, k_in) * block[static_cast<std::size_t>(k_in) * d + (n - k_in)];
        fresh[static_cast<std::size_t>(k_out) * d + (n - k_out)] = acc;
      }
    }

    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        amps[base + sa * static_cast<std::size_t>(a) + sb * static_cast<std::size_t>(b)] =
            fresh[static_cast<std::size_t>(a) * d + b];
  }
}

}  // namespace detail

// The native MZ gate expanded into primitives, in application order.
inline std::vector<GateOp> mz_expand(const MachZehnder& g) {
  constexpr double quarter = std::numbers::pi / 4.0;
  constexpr double half = std::numbers::pi / 2.0;
  return {PhaseShift{g.mode_a, g.phi2}, BeamSplitter{g.mode_a, g.mode_b, quarter, half},
          PhaseShift{g.mode_a, g.phi1}, BeamSplitter{g.mode_a, g.mode_b, quarter, half}};
}

inline PureState apply_gate(const PureState& state, const GateOp& gate) {
  validate_gate(gate, state.num_modes());
  PureState out = state;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PhaseShift>) {
          detail::apply_phase_inplace(out, g.mode, g.phi);
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          detail::apply_bs_inplace(out, g.mode_a, g.mode_b, g.theta, g.phi);
        } else if constexpr (std::is_same_v<T, MachZehnder>) {
          for (const auto& sub : mz_expand(g))
            std::visit(
                [&](const auto& s) {
                  using S = std::decay_t<decltype(s)>;
                  if constexpr (std::is_same_v<S, PhaseShift>)
                    detail::apply_phase_inplace(out, s.mode, s.phi);
                  else if constexpr (std::is_same_v<S, BeamSplitter>)
                    detail::apply_bs_inplace(out, s.mode_a, s.mode_b, s.theta, s.phi);
                },
                sub);
        } else {
          throw std::invalid_argument(
              "thermal loss is a channel, not a unitary; use the density-matrix path");
        }
      },
      gate);
  return out;
}

inline GateOp remap_gate(const GateOp& gate, std::span<const int> mode_map) {
  GateOp g = gate;
  std::visit(
      [&](auto& gg) {
        using T = std::decay_t<decltype(gg)>;
        if constexpr (std::is_same_v<T, PhaseShift> || std::is_same_v<T, ThermalLoss>) {
          gg.mode = mode_map[gg.mode];
        } else {
          gg.mode_a = mode_map[gg.mode_a];
          gg.mode_b = mode_map[gg.mode_b];
        }
      },
      g);
  return g;
}

inline PureState apply_circuit(const PureState& state, const Circuit& circuit,
                               int mode_offset = 0) {
  PureState out = state;
  for (const auto& gate : circuit.gates) {
    if (mode_offset == 0) {
      out = apply_gate(out, gate);
    } else {
      std::vector<int> map(circuit.num_modes);
      for (int m = 0; m < circuit.num_modes; ++m) map[m] = m + mode_offset;
      out = apply_gate(out, remap_gate(gate, map));
    }
  }
  return out;
}

inline PureState apply_circuit_mapped(const PureState& state, const Circuit& circuit,
                                      std::span<const int> mode_map) {
  PureState out = state;
  for (const auto& gate : circuit.gates) out = apply_gate(out, remap_gate(gate, mode_map));
  return out;
}

// Entrywise complex conjugate of a unitary circuit: phases negate; the MZ
// primitive does not stay in the MZ family under conjugation, so it expands.
inline Circuit conjugate_circuit(const Circuit& circuit) {
  Circuit out;
  out.num_modes = circuit.num_modes;
  for (const auto& gate : circuit.gates) {
    std::visit(
        [&](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, PhaseShift>) {
            out.gates.push_back(PhaseShift{g.mode, -g.phi});
          } else if constexpr (std::is_same_v<T, BeamSplitter>) {
            out.gates.push_back(BeamSplitter{g.mode_a, g.mode_b, g.theta, -g.phi});
          } else if constexpr (std::is_same_v<T, MachZehnder>) {
            for (const auto& sub : mz_expand(g)) {
              if (std::holds_alternative<PhaseShift>(sub)) {
                auto p = std::get<PhaseShift>(sub);
                out.gates.push_back(PhaseShift{p.mode, -p.phi});
              } else {
                auto b = std::get<BeamSplitter>(sub);
                out.gates.push_back(BeamSplitter{b.mode_a, b.mode_b, b.theta, -b.phi});
              }
            }
          } else {
            throw std::invalid_argument("cannot conjugate a thermal-loss channel");
          }
        },
        gate);
  }
  return out;
}

// Full matrix of a circuit on its truncated space, by applying it to every
// basis vector. Verification-scale only.
inline CMatrix circuit_matrix(const Circuit& circuit, int cutoff) {
  const std::size_t dim = fock_dimension(circuit.num_modes, cutoff);
  CMatrix out(static_cast<int>(dim), static_cast<int>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    PureState basis(circuit.num_modes, cutoff);
    auto& amps = basis.mutable_amplitudes();
    amps[0] = 0.0;
    amps[j] = 1.0;
    PureState image = apply_circuit(basis, circuit);
    for (std::size_t i = 0; i < dim; ++i)
      out.at(static_cast<int>(i), static_cast<int>(j)) = image.amplitudes()[i];
  }
  return out;
}

// Mode transfer matrix M_ij = <1_i| U |1_j> of a linear-optical circuit.
inline CMatrix transfer_matrix(const Circuit& circuit) {
  const int m = circuit.num_modes;
  CMatrix out(m, m);
  for (int j = 0; j < m; ++j) {
    PureState basis(m, 2);
    auto& amps = basis.mutable_amplitudes();
    amps[0] = 0.0;
    std::vector<int> occ(m, 0);
    occ[j] = 1;
    amps[basis.index_of(occ)] = 1.0;
    PureState image = apply_circuit(basis, circuit);
    for (int i = 0; i < m; ++i) {
      std::vector<int> row(m, 0);
      row[i] = 1;
      out.at(i, j) = image.amplitude(row);
    }
  }
  return out;
}

// min over |c| = 1 of ||U - c V||_F = sqrt(||U||^2 + ||V||^2 - 2 |tr(U†V)|).
// Evaluated by aligning V with the minimizing phase c = tr(V†U)/|tr(V†U)| and
// subtracting elementwise, which avoids the catastrophic cancellation of the
// closed form when the distance is near zero.
inline double distance_up_to_phase(const CMatrix& u, const CMatrix& v) {
  if (u.rows != v.rows || u.cols != v.cols)
    throw std::invalid_argument("distance_up_to_phase: shape mismatch");
  const cdouble t = adjoint_trace_product(v, u);
  const double mag = std::abs(t);
  const cdouble c = mag > 0.0 ? t / mag : cdouble(1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i) sum += std::norm(u.data[i] - c * v.data[i]);
  return std::sqrt(sum);
}

// Sub-block of a multimode Fock operator on basis states with total photon
// number <= max_total -- the subspace where truncated gate products act
// exactly. Comparisons of gate identities belong on this block.
inline CMatrix restrict_total_photons(const CMatrix& m, int num_modes, int cutoff,
                                      int max_total) {
  const std::size_t dim = fock_dimension(num_modes, cutoff);
  if (m.rows != static_cast<int>(dim) || m.cols != static_cast<int>(dim))
    throw std::invalid_argument("restrict_total_photons: shape mismatch");
  std::vector<int> keep;
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t rem = i;
    int total = 0;
    for (int mo = 0; mo < num_modes; ++mo) {
      total += static_cast<int>(rem % static_cast<std::size_t>(cutoff));
      rem /= static_cast<std::size_t>(cutoff);
    }
    if (total <= max_total) keep.push_back(static_cast<int>(i));
  }
  CMatrix out(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) out.at(static_cast<int>(i), static_cast<int>(j)) = m.at(keep[i], keep[j]);
  return out;
}

// Native-alphabet decomposition of U_BS(theta, phi):
//
//   U_BS(theta, phi) = e^{i(phi+pi+theta) n_a} e^{i theta n_b}
//                      U_MZ(pi - 2 theta, 2 pi - phi)
//
// exactly on the Fock space (scalar factor 1). A single external phase can
// match only up to the sector phase e^{-i theta (n_a + n_b)} -- the
// determinant of its single-photon matrix is e^{-2 i theta} -- so the second
// compensating phase is included; both extra phases are invisible to
// photon-number measurement.
inline Circuit mz_decompose(double theta, double phi) {
  constexpr double pi = std::numbers::pi;
  Circuit c;
  c.num_modes = 2;
  c.gates = {MachZehnder{0, 1, pi - 2.0 * theta, 2.0 * pi - phi},
             PhaseShift{1, theta}, PhaseShift{0, phi + pi + theta}};
  return c;
}

// Verification metric for the decomposition: distance up to phase between
// the decomposed circuit and U_BS(theta, phi) on the fully-represented
// photon-number sectors (total <= cutoff - 1) of the cutoff-truncated
// two-mode space.
inline double mz_decompose_distance(double theta, double phi, int cutoff) {
  const Circuit c = mz_decompose(theta, phi);
  const CMatrix got =
      restrict_total_photons(circuit_matrix(c, cutoff), 2, cutoff, cutoff - 1);
  const CMatrix want = restrict_total_photons(bs_two_mode_matrix(theta, phi, cutoff), 2,
                                              cutoff, cutoff - 1);
  return distance_up_to_phase(got, want);
}

// Layered ansatz prod_{j=1..L} e^{-i phi_j n_a} U_BS(xi_j, 0); rightmost
// factor applied first.
inline Circuit layered_ansatz(std::span<const double> xi, std::span<const double> phi) {
  if (xi.size() != phi.size() || xi.empty())
    throw std::invalid_argument("layered_ansatz: xi and phi must have equal nonzero length");
  Circuit c;
  c.num_modes = 2;
  for (int j = static_cast<int>(xi.size()) - 1; j >= 0; --j) {
    c.gates.push_back(BeamSplitter{0, 1, xi[j], 0.0});
    c.gates.push_back(PhaseShift{0, -phi[j]});
  }
  return c;
}

}  // namespace x8sim

#endif  // X8SIM_GATES_HPP_
