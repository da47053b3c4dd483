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

// Photon-number-resolving measurement: outcome distributions, seeded
// multinomial sampling and empirical estimators.
//
// Distributions over a mode subset are exact marginals of the truncated
// state. The probability mass lost to truncation (1 - sum p) goes to an
// explicit overflow bucket when sampling, so counts stay honest instead of
// being renormalized over the kept patterns.

#ifndef X8SIM_MEASURE_HPP_
#define X8SIM_MEASURE_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "x8sim/fock.hpp"
#include "x8sim/noise.hpp"
#include "x8sim/rng.hpp"

namespace x8sim {

// Probabilities of every pattern on an ordered mode list, indexed
// lexicographically with the first listed mode most significant.
struct ProbabilityTable {
  std::vector<int> modes;
  int cutoff = 0;
  std::vector<double> probs;

  std::size_t index_of(std::span<const int> occupations) const {
    if (occupations.size() != modes.size())
      throw std::invalid_argument("occupation list must match the mode list");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < occupations.size(); ++i) {
      if (occupations[i] < 0 || occupations[i] >= cutoff)
        throw std::out_of_range("occupation outside cutoff");
      idx = idx * static_cast<std::size_t>(cutoff) + static_cast<std::size_t>(occupations[i]);
    }
    return idx;
  }

  double total_mass() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }
};

struct CountTable {
  long long shots = 0;
  std::vector<int> modes;
  std::uint64_t seed = 0;
  std::string rng = std::string(kRngName);
  std::map<std::vector<int>, long long> counts;
  long long overflow = 0;  // shots lost to the truncation bucket
};

namespace detail {

inline void check_mode_list(std::span<const int> modes, int num_modes) {
  if (modes.empty()) throw std::invalid_argument("mode list must be nonempty");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0 || modes[i] >= num_modes)
      throw std::out_of_range("mode out of range");
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j]) throw std::invalid_argument("duplicate mode");
  }
}

}  // namespace detail

inline ProbabilityTable outcome_distribution(const PureState& state,
                                             std::span<const int> modes) {
  detail::check_mode_list(modes, state.num_modes());
  ProbabilityTable table;
  table.modes.assign(modes.begin(), modes.end());
  table.cutoff = state.cutoff();
  const int d = state.cutoff();
  std::size_t out_dim = 1;
  for (std::size_t i = 0; i < modes.size(); ++i) out_dim *= static_cast<std::size_t>(d);
  table.probs.assign(out_dim, 0.0);

  std::vector<std::size_t> strides(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) strides[i] = state.stride(modes[i]);

  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    const double p = std::norm(state.amplitudes()[idx]);
    if (p == 0.0) continue;
    std::size_t out = 0;
    for (std::size_t i = 0; i < modes.size(); ++i)
      out = out * static_cast<std::size_t>(d) +
            (idx / strides[i]) % static_cast<std::size_t>(d);
    table.probs[out] += p;
  }
  return table;
}

inline ProbabilityTable outcome_distribution(const MixedState& state,
                                             std::span<const int> modes) {
  detail::check_mode_list(modes, state.num_modes);
  ProbabilityTable table;
  table.modes.assign(modes.begin(), modes.end());
  table.cutoff = state.cutoff;
  const int d = state.cutoff;
  std::size_t out_dim = 1;
  for (std::size_t i = 0; i < modes.size(); ++i) out_dim *= static_cast<std::size_t>(d);
  table.probs.assign(out_dim, 0.0);

  std::vector<std::size_t> strides(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) strides[i] = state.stride(modes[i]);

  const std::size_t dim = state.dim();
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const double p = state.rho[idx * dim + idx].real();
    if (p == 0.0) continue;
    std::size_t out = 0;
    for (std::size_t i = 0; i < modes.size(); ++i)
      out = out * static_cast<std::size_t>(d) +
            (idx / strides[i]) % static_cast<std::size_t>(d);
    table.probs[out] += p;
  }
  return table;
}

namespace detail {

// Walker alias table over the distribution plus a trailing overflow cell of
// mass max(0, 1 - sum p). O(1) per draw.
class AliasSampler {
 public:
  explicit AliasSampler(std::span<const double> probs) {
    const std::size_t n = probs.size() + 1;  // trailing overflow cell
    double mass = 0.0;
    for (double p : probs) {
      if (p < -1e-12) throw std::invalid_argument("negative probability");
      mass += p;
    }
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i + 1 < n; ++i) scaled[i] = std::max(0.0, probs[i]) * n;
    scaled[n - 1] = std::max(0.0, 1.0 - mass) * n;
    const double total = mass + std::max(0.0, 1.0 - mass);
    for (auto& s : scaled) s /= total;

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i)
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = scaled[l] + scaled[s] - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;
    count_ = n;
  }

  // Returns a cell in [0, size]; the last cell is the overflow bucket.
  std::size_t draw(SplitMix64& gen) const {
    const double u = gen.next_double() * double(count_);
    std::size_t cell = static_cast<std::size_t>(u);
    if (cell >= count_) cell = count_ - 1;
    const double frac = u - double(cell);
    return frac < prob_[cell] ? cell : alias_[cell];
  }

  std::size_t overflow_cell() const { return count_ - 1; }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::size_t count_ = 0;
};

}  // namespace detail

// Per-shot outcome indices into the distribution's pattern enumeration;
// entries equal to probs.size() landed in the overflow bucket.
inline std::vector<std::uint32_t> sample_outcome_indices(const ProbabilityTable& dist,
                                                         long long shots,
                                                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  detail::AliasSampler sampler(dist.probs);
  SplitMix64 gen(seed);
  std::vector<std::uint32_t> out(static_cast<std::size_t>(shots));
  for (auto& o : out) o = static_cast<std::uint32_t>(sampler.draw(gen));
  return out;
}

inline CountTable sample_counts(const ProbabilityTable& dist, long long shots,
                                std::uint64_t seed) {
  CountTable table;
  table.shots = shots;
  table.modes = dist.modes;
  table.seed = seed;

  const auto draws = sample_outcome_indices(dist, shots, seed);
  std::vector<long long> flat(dist.probs.size(), 0);
  for (std::uint32_t idx : draws) {
    if (idx == dist.probs.size())
      ++table.overflow;
    else
      ++flat[idx];
  }

  const int d = dist.cutoff;
  const int k = static_cast<int>(dist.modes.size());
  for (std::size_t idx = 0; idx < flat.size(); ++idx) {
    if (flat[idx] == 0) continue;
    std::vector<int> occ(k);
    std::size_t rem = idx;
    for (int i = k - 1; i >= 0; --i) {
      occ[i] = static_cast<int>(rem % static_cast<std::size_t>(d));
      rem /= static_cast<std::size_t>(d);
    }
    table.counts.emplace(std::move(occ), flat[idx]);
  }
  return table;
}

// Count of a pattern; the pattern's modes must be a subset of the table's
// modes, and unlisted table modes are marginalized.
inline long long pattern_count(const CountTable& table, const OutcomePattern& pattern) {
  if (pattern.modes.size() != pattern.occupations.size())
    throw std::invalid_argument("pattern: modes/occupations length mismatch");
  std::vector<int> positions(pattern.modes.size());
  for (std::size_t i = 0; i < pattern.modes.size(); ++i) {
    auto it = std::find(table.modes.begin(), table.modes.end(), pattern.modes[i]);
    if (it == table.modes.end())
      throw std::invalid_argument("pattern mode not present in the count table");
    positions[i] = static_cast<int>(it - table.modes.begin());
  }
  long long total = 0;
  for (const auto& [occ, count] : table.counts) {
    bool match = true;
    for (std::size_t i = 0; i < positions.size(); ++i)
      if (occ[static_cast<std::size_t>(positions[i])] != pattern.occupations[i]) {
        match = false;
        break;
      }
    if (match) total += count;
  }
  return total;
}

inline double empirical_probability(const CountTable& table, const OutcomePattern& pattern) {
  if (table.shots <= 0) throw std::invalid_argument("count table has no shots");
  return static_cast<double>(pattern_count(table, pattern)) /
         static_cast<double>(table.shots);
}

}  // namespace x8sim

#endif  // X8SIM_MEASURE_HPP_
