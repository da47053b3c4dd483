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

// Truncated Fock-basis pure states.
//
// A state on N modes with per-mode cutoff d stores d^N complex amplitudes in
// lexicographic order with mode 0 most significant:
//
//   index(n_0, ..., n_{N-1}) = ((n_0 * d + n_1) * d + ...) + n_{N-1}.
//
// Truncation is unnormalized: amplitudes of kept basis states are exact and
// the missing tail shows up as 1 - ||psi||^2 (truncation_weight), never as a
// silent renormalization. Low-order Fock probabilities therefore agree with
// their infinite-dimensional values.

#ifndef X8SIM_FOCK_HPP_
#define X8SIM_FOCK_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "x8sim/linalg.hpp"

namespace x8sim {

inline std::size_t fock_dimension(int num_modes, int cutoff) {
  if (num_modes < 1) throw std::invalid_argument("num_modes must be positive");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
  std::size_t dim = 1;
  for (int m = 0; m < num_modes; ++m) {
    if (dim > (std::size_t(1) << 40) / static_cast<std::size_t>(cutoff))
      throw std::invalid_argument("fock space too large");
    dim *= static_cast<std::size_t>(cutoff);
  }
  return dim;
}

// A photon-number pattern on an ordered list of (distinct) modes. Modes not
// listed are marginalized when the pattern is used as a probability query.
struct OutcomePattern {
  std::vector<int> modes;
  std::vector<int> occupations;
};

class PureState {
 public:
  PureState(int num_modes, int cutoff)
      : num_modes_(num_modes),
        cutoff_(cutoff),
        amps_(fock_dimension(num_modes, cutoff)) {
    amps_[0] = 1.0;  // vacuum
  }

  static PureState from_amplitudes(int num_modes, int cutoff,
                                   std::vector<cdouble> amps) {
    PureState s(num_modes, cutoff);
    if (amps.size() != s.amps_.size())
      throw std::invalid_argument("amplitude vector length must be cutoff^num_modes");
    s.amps_ = std::move(amps);
    if (s.norm_squared() > 1.0 + 1e-12)
      throw std::invalid_argument("state norm exceeds 1");
    return s;
  }

  int num_modes() const { return num_modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  std::vector<cdouble>& mutable_amplitudes() { return amps_; }

  std::size_t stride(int mode) const {
    std::size_t s = 1;
    for (int m = num_modes_ - 1; m > mode; --m) s *= static_cast<std::size_t>(cutoff_);
    return s;
  }

  std::size_t index_of(std::span<const int> occupations) const {
    if (static_cast<int>(occupations.size()) != num_modes_)
      throw std::invalid_argument("occupation list must cover all modes");
    std::size_t idx = 0;
    for (int m = 0; m < num_modes_; ++m) {
      if (occupations[m] < 0 || occupations[m] >= cutoff_)
        throw std::out_of_range("occupation outside cutoff");
      idx = idx * static_cast<std::size_t>(cutoff_) + static_cast<std::size_t>(occupations[m]);
    }
    return idx;
  }

  cdouble amplitude(std::span<const int> occupations) const {
    return amps_[index_of(occupations)];
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  int num_modes_;
  int cutoff_;
  std::vector<cdouble> amps_;
};

inline cdouble inner_product(const PureState& a, const PureState& b) {
  if (a.num_modes() != b.num_modes() || a.cutoff() != b.cutoff())
    throw std::invalid_argument("inner_product: shape mismatch");
  cdouble s{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return s;
}

// Multi-pair two-mode squeezed vacuum with per-pair squeezing parameters.
// Pair j couples mode j and mode j + pair_count (the device interleave), and
// carries amplitude tanh^n(r_j)/cosh(r_j) on |n>_j |n>_{j+P}. r = 0 gives
// vacuum on that pair.
inline PureState make_tmss_pairs(std::span<const double> r_per_pair, int cutoff) {
  const int pairs = static_cast<int>(r_per_pair.size());
  if (pairs < 1) throw std::invalid_argument("pair_count must be positive");
  if (cutoff < 2) throw std::invalid_argument("cutoff must be at least 2");
  for (double r : r_per_pair)
    if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("squeezing must be finite and >= 0");

  PureState state(2 * pairs, cutoff);
  auto& amps = state.mutable_amplitudes();
  amps[0] = 0.0;

  std::vector<std::size_t> pair_stride(pairs);
  for (int j = 0; j < pairs; ++j)
    pair_stride[j] = state.stride(j) + state.stride(j + pairs);

  std::vector<int> n(pairs, 0);
  while (true) {
    double amp = 1.0;
    std::size_t idx = 0;
    for (int j = 0; j < pairs; ++j) {
      const double r = r_per_pair[j];
      const double th = std::tanh(r);
      amp *= (n[j] == 0 ? 1.0 : std::pow(th, n[j])) / std::cosh(r);
      idx += static_cast<std::size_t>(n[j]) * pair_stride[j];
    }
    amps[idx] = amp;

    int j = pairs - 1;
    while (j >= 0 && ++n[j] == cutoff) n[j--] = 0;
    if (j < 0) break;
  }
  return state;
}

inline PureState make_tmss(double r, int pair_count, int cutoff) {
  if (pair_count < 1) throw std::invalid_argument("pair_count must be positive");
  std::vector<double> rs(static_cast<std::size_t>(pair_count), r);
  return make_tmss_pairs(rs, cutoff);
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  if (a.cutoff() != b.cutoff())
    throw std::invalid_argument("tensor_product: cutoffs must match");
  PureState out(a.num_modes() + b.num_modes(), a.cutoff());
  auto& amps = out.mutable_amplitudes();
  amps.assign(amps.size(), cdouble{});
  const std::size_t nb = b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const cdouble ai = a.amplitudes()[i];
    if (ai == cdouble{}) continue;
    for (std::size_t j = 0; j < nb; ++j) amps[i * nb + j] = ai * b.amplitudes()[j];
  }
  return out;
}

// Embed a state into a larger per-mode cutoff; amplitudes are preserved.
inline PureState pad_cutoff(const PureState& s, int new_cutoff) {
  if (new_cutoff < s.cutoff())
    throw std::invalid_argument("pad_cutoff: new cutoff smaller than current");
  if (new_cutoff == s.cutoff()) return s;
  PureState out(s.num_modes(), new_cutoff);
  auto& amps = out.mutable_amplitudes();
  amps[0] = 0.0;
  const int n = s.num_modes();
  const int d_old = s.cutoff();
  std::vector<int> occ(n, 0);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    std::size_t rem = i;
    for (int m = n - 1; m >= 0; --m) {
      occ[m] = static_cast<int>(rem % static_cast<std::size_t>(d_old));
      rem /= static_cast<std::size_t>(d_old);
    }
    std::size_t idx = 0;
    for (int m = 0; m < n; ++m)
      idx = idx * static_cast<std::size_t>(new_cutoff) + static_cast<std::size_t>(occ[m]);
    amps[idx] = s.amplitudes()[i];
  }
  return out;
}

// Zero out every amplitude whose total photon number exceeds max_total.
// States capped this way live entirely in fully-represented photon-number
// sectors (max_total <= cutoff - 1 per coupled mode pair), so linear-optical
// evolution on them is exact rather than merely truncated.
inline PureState truncate_total_photons(const PureState& s, int max_total) {
  if (max_total < 0) throw std::invalid_argument("max_total must be >= 0");
  PureState out = s;
  auto& amps = out.mutable_amplitudes();
  const int d = s.cutoff();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t rem = i;
    int total = 0;
    for (int m = 0; m < s.num_modes(); ++m) {
      total += static_cast<int>(rem % static_cast<std::size_t>(d));
      rem /= static_cast<std::size_t>(d);
    }
    if (total > max_total) amps[i] = cdouble{};
  }
  return out;
}

inline void validate_pattern(const OutcomePattern& p, int num_modes, int cutoff) {
  if (p.modes.size() != p.occupations.size())
    throw std::invalid_argument("pattern: modes/occupations length mismatch");
  if (p.modes.empty()) throw std::invalid_argument("pattern: empty mode list");
  for (std::size_t i = 0; i < p.modes.size(); ++i) {
    if (p.modes[i] < 0 || p.modes[i] >= num_modes)
      throw std::out_of_range("pattern: mode out of range");
    if (p.occupations[i] < 0) throw std::out_of_range("pattern: negative occupation");
    if (p.occupations[i] >= cutoff)
      throw std::out_of_range("pattern: occupation " + std::to_string(p.occupations[i]) +
                              " not below cutoff " + std::to_string(cutoff));
    for (std::size_t j = i + 1; j < p.modes.size(); ++j)
      if (p.modes[i] == p.modes[j])
        throw std::invalid_argument("pattern: duplicate mode");
  }
}

// Probability of observing the pattern on its listed modes; unlisted modes
// are summed over. Exact for the truncated state (no renormalization).
inline double fock_probability(const PureState& state, const OutcomePattern& pattern) {
  validate_pattern(pattern, state.num_modes(), state.cutoff());
  const int k = static_cast<int>(pattern.modes.size());
  std::vector<std::size_t> strides(k);
  std::size_t base = 0;
  for (int i = 0; i < k; ++i) {
    strides[i] = state.stride(pattern.modes[i]);
    base += strides[i] * static_cast<std::size_t>(pattern.occupations[i]);
  }
  const int d = state.cutoff();

  double total = 0.0;
  // Walk all basis states whose listed-mode occupations match by iterating
  // the unlisted modes only.
  std::vector<int> free_modes;
  for (int m = 0; m < state.num_modes(); ++m) {
    bool listed = false;
    for (int i = 0; i < k; ++i)
      if (pattern.modes[i] == m) listed = true;
    if (!listed) free_modes.push_back(m);
  }
  std::vector<std::size_t> free_strides(free_modes.size());
  for (std::size_t i = 0; i < free_modes.size(); ++i)
    free_strides[i] = state.stride(free_modes[i]);

  std::vector<int> occ(free_modes.size(), 0);
  while (true) {
    std::size_t idx = base;
    for (std::size_t i = 0; i < free_modes.size(); ++i)
      idx += free_strides[i] * static_cast<std::size_t>(occ[i]);
    total += std::norm(state.amplitudes()[idx]);
    if (free_modes.empty()) break;
    int j = static_cast<int>(free_modes.size()) - 1;
    while (j >= 0 && ++occ[j] == d) occ[j--] = 0;
    if (j < 0) break;
  }
  return total;
}

inline double truncation_weight(const PureState& state) {
  return std::max(0.0, 1.0 - state.norm_squared());
}

// <n_mode> on the truncated state.
inline double mean_photon_number(const PureState& state, int mode) {
  if (mode < 0 || mode >= state.num_modes())
    throw std::out_of_range("mean_photon_number: mode out of range");
  const std::size_t s = state.stride(mode);
  const int d = state.cutoff();
  double total = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const int n = static_cast<int>((i / s) % static_cast<std::size_t>(d));
    if (n) total += n * std::norm(state.amplitudes()[i]);
  }
  return total;
}

}  // namespace x8sim

#endif  // X8SIM_FOCK_HPP_
