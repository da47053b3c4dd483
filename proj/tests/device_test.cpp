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

#include "x8sim/device.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "x8sim/cost.hpp"
#include "x8sim/measure.hpp"
#include "x8sim/noise.hpp"

using namespace x8sim;
namespace nums = std::numbers;

namespace {

constexpr double kQuarter = nums::pi / 4.0;

DeviceJob example2_job(double phi, long long shots, std::uint64_t seed) {
  DeviceJob job;
  job.circuit.num_modes = 4;
  job.circuit.gates = {BeamSplitter{0, 1, kQuarter, phi}};
  job.squeezing = {1, 1, 1, 1};
  job.shots = shots;
  job.seed = seed;
  return job;
}

const OutcomePattern kPattern0145{{0, 1, 4, 5}, {0, 1, 0, 1}};

}  // namespace

TEST_CASE("job validation") {
  SUBCASE("the compiling job is accepted") {
    CHECK(validate_job(example2_job(0.3, 50000, 1)).empty());
  }

  SUBCASE("gates outside modes 0..3 violate the duplicated-unitary rule") {
    DeviceJob job = example2_job(0.0, 100, 1);
    job.circuit.gates.push_back(PhaseShift{5, 0.2});
    const auto v = validate_job(job);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("duplicated") != std::string::npos);
  }

  SUBCASE("thermal loss cannot ride in the circuit") {
    DeviceJob job = example2_job(0.0, 100, 1);
    job.circuit.gates.push_back(ThermalLoss{0, 0.9, 1.0});
    const auto v = validate_job(job);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("noise config") != std::string::npos);
  }

  SUBCASE("native-only jobs reject raw beamsplitters") {
    DeviceJob job = example2_job(0.0, 100, 1);
    job.native_only = true;
    const auto v = validate_job(job);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("precompile_two_mode") != std::string::npos);

    DeviceJob native = job;
    native.circuit = precompile_two_mode(kQuarter, 0.0);
    native.circuit.num_modes = 4;
    CHECK(validate_job(native).empty());
  }

  SUBCASE("squeezing outside {0,1} and nonpositive shots are violations") {
    DeviceJob job = example2_job(0.0, 100, 1);
    job.squeezing = {1, 2, 0, 0};
    job.shots = 0;
    const auto v = validate_job(job);
    CHECK(v.size() == 2);
  }

  SUBCASE("noise config bounds") {
    DeviceJob job = example2_job(0.0, 100, 1);
    NoiseConfig nc;
    nc.eta = 1.4;
    nc.nbar = -1.0;
    nc.modes = {9};
    job.noise = nc;
    CHECK(validate_job(job).size() == 3);
  }
}

TEST_CASE("precompiled circuits reproduce the beamsplitter observables") {
  CHECK(mz_decompose_distance(kQuarter, 0.7, 8) < 1e-10);

  DeviceJob raw = example2_job(0.7, 1, 1);
  DeviceJob native = raw;
  native.circuit = precompile_two_mode(kQuarter, 0.7);
  native.circuit.num_modes = 4;
  native.native_only = true;

  const auto factors_raw = detail::split_factors(raw.circuit);
  const auto factors_native = detail::split_factors(native.circuit);
  REQUIRE(factors_raw.size() == 3);
  REQUIRE(factors_native.size() == 3);
  const auto dist_raw = detail::factor_distribution(factors_raw[0], raw, 10);
  const auto dist_native = detail::factor_distribution(factors_native[0], native, 10);
  // same 0101 probability through the native alphabet
  const std::size_t i0101 = ((0ul * 10 + 1) * 10 + 0) * 10 + 1;
  CHECK(dist_native[i0101] == doctest::Approx(dist_raw[i0101]).epsilon(1e-10));
}

TEST_CASE("run_job basics") {
  SUBCASE("no squeezing and no gates puts every shot on zeros") {
    DeviceJob job;
    job.circuit.num_modes = 4;
    job.squeezing = {0, 0, 0, 0};
    job.shots = 2000;
    job.seed = 11;
    CountTable t = run_job(job);
    CHECK(t.counts.at(std::vector<int>(8, 0)) == 2000);
    CHECK(t.overflow == 0);
  }

  SUBCASE("deterministic under the seed") {
    CountTable a = run_job(example2_job(0.4, 20000, 99));
    CountTable b = run_job(example2_job(0.4, 20000, 99));
    CountTable c = run_job(example2_job(0.4, 20000, 100));
    CHECK(a.counts == b.counts);
    CHECK(a.counts != c.counts);
  }

  SUBCASE("zero-phase job lands near 5115 of 5e4 on 0101") {
    CountTable t = run_job(example2_job(0.0, 50000, 2026));
    const long long n = pattern_count(t, kPattern0145);
    CHECK(std::abs(double(n) - 5115.0) <= 203.0);
  }

  SUBCASE("sampled marginals track the exact distribution at 3 sigma") {
    const long long shots = 50000;
    CountTable t = run_job(example2_job(0.9, shots, 17));
    PureState s = make_tmss(1.0, 2, kNoiselessCutoff);
    s = apply_gate(s, BeamSplitter{0, 1, kQuarter, 0.9});
    s = apply_gate(s, BeamSplitter{2, 3, kQuarter, 0.9});
    for (const auto& [devpat, libpat] :
         std::vector<std::pair<std::vector<int>, std::vector<int>>>{
             {{0, 1, 0, 1}, {0, 1, 0, 1}}, {{1, 0, 1, 0}, {1, 0, 1, 0}},
             {{0, 0, 0, 0}, {0, 0, 0, 0}}, {{1, 1, 1, 1}, {1, 1, 1, 1}}}) {
      const double p = fock_probability(s, {{0, 1, 2, 3}, libpat});
      const double got = empirical_probability(t, {{0, 1, 4, 5}, devpat});
      CHECK(std::abs(got - p) <= 3.0 * std::sqrt(p * (1.0 - p) / double(shots)) + 1e-9);
    }
  }

  SUBCASE("invalid jobs throw with the violation list attached") {
    DeviceJob job = example2_job(0.0, 100, 1);
    job.squeezing = {3, 0, 0, 0};
    CHECK_THROWS_AS(run_job(job), JobValidationError);
    try {
      run_job(job);
    } catch (const JobValidationError& e) {
      CHECK(e.violations().size() == 1);
    }
  }
}

TEST_CASE("noisy execution") {
  NoiseConfig loss_20;
  loss_20.eta = 0.9;
  loss_20.nbar = 2.0;

  SUBCASE("thermal loss (0.9, 2.0) lands in the calibration window") {
    DeviceJob job = example2_job(0.0, 50000, 7);
    job.squeezing = {1, 1, 0, 0};
    job.noise = loss_20;
    CountTable t = run_job(job);
    const long long n = pattern_count(t, kPattern0145);
    // expected probability 0.028564 (1428 counts); window is 1538 +/- 15%
    CHECK(n >= 1307);
    CHECK(n <= 1769);
  }

  SUBCASE("thermal loss (0.9, 1.5) lands in 1500..2000 for both placements") {
    for (NoisePlacement placement : {NoisePlacement::kBefore, NoisePlacement::kAfter}) {
      DeviceJob job = example2_job(0.0, 50000, 31);
      job.squeezing = {1, 1, 0, 0};
      NoiseConfig nc;
      nc.eta = 0.9;
      nc.nbar = 1.5;
      nc.placement = placement;
      job.noise = nc;
      CountTable t = run_job(job);
      const long long n = pattern_count(t, kPattern0145);
      CHECK(n >= 1500);
      CHECK(n <= 2000);
    }
  }

  SUBCASE("before and after placements agree for uniform noise") {
    // Per-mode thermal attenuation applied identically to every active mode
    // commutes with the beamsplitters coupling them.
    DeviceJob job = example2_job(0.0, 1, 1);
    job.squeezing = {1, 1, 0, 0};
    NoiseConfig nc = loss_20;
    nc.placement = NoisePlacement::kBefore;
    job.noise = nc;
    const auto factors = detail::split_factors(job.circuit);
    const auto before = detail::factor_distribution(factors[0], job, 8);
    nc.placement = NoisePlacement::kAfter;
    job.noise = nc;
    const auto after = detail::factor_distribution(factors[0], job, 8);
    double worst = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i)
      worst = std::max(worst, std::abs(before[i] - after[i]));
    CHECK(worst < 2e-4);
    const std::size_t i0101 = ((0ul * 8 + 1) * 8 + 0) * 8 + 1;
    CHECK(before[i0101] == doctest::Approx(after[i0101]).epsilon(1e-3));
  }

  SUBCASE("before-placement mixture equals the generic density route") {
    DeviceJob job = example2_job(0.35, 1, 1);
    job.squeezing = {1, 1, 0, 0};
    NoiseConfig nc;
    nc.eta = 0.85;
    nc.nbar = 0.8;
    nc.placement = NoisePlacement::kBefore;
    job.noise = nc;
    const int d = 5;
    const auto factors = detail::split_factors(job.circuit);
    const auto got = detail::factor_distribution(factors[0], job, d);

    // oracle: full 4-mode density operator, channels then gates
    PureState in = make_tmss(1.0, 2, d);
    MixedState rho = promote(in);
    for (int mode : {0, 1, 2, 3}) rho = apply_channel(rho, mode, 0.85, 0.8);
    rho = apply_gate(rho, BeamSplitter{0, 1, kQuarter, 0.35});
    rho = apply_gate(rho, BeamSplitter{2, 3, kQuarter, 0.35});
    const std::size_t dim = rho.dim();
    for (std::size_t i = 0; i < dim; ++i)
      CHECK(std::abs(got[i] - rho.rho[i * dim + i].real()) < 1e-10);
  }

  SUBCASE("mode-subset noise matches the density oracle in both placements") {
    // Channel only device modes 0 and 5 (local factor modes 0 and 3).
    DeviceJob job = example2_job(0.6, 1, 1);
    job.squeezing = {1, 1, 0, 0};
    NoiseConfig nc;
    nc.eta = 0.8;
    nc.nbar = 0.6;
    nc.modes = {0, 5};
    const int d = 5;
    for (NoisePlacement placement : {NoisePlacement::kBefore, NoisePlacement::kAfter}) {
      nc.placement = placement;
      job.noise = nc;
      const auto factors = detail::split_factors(job.circuit);
      const auto got = detail::factor_distribution(factors[0], job, d);

      MixedState rho = promote(make_tmss(1.0, 2, d));
      auto channels = [&](MixedState m) {
        m = apply_channel(m, 0, 0.8, 0.6);
        return apply_channel(m, 3, 0.8, 0.6);
      };
      if (placement == NoisePlacement::kBefore) rho = channels(rho);
      rho = apply_gate(rho, BeamSplitter{0, 1, kQuarter, 0.6});
      rho = apply_gate(rho, BeamSplitter{2, 3, kQuarter, 0.6});
      if (placement == NoisePlacement::kAfter) rho = channels(rho);
      const std::size_t dim = rho.dim();
      for (std::size_t i = 0; i < dim; ++i)
        CHECK(std::abs(got[i] - rho.rho[i * dim + i].real()) < 1e-10);
    }
  }

  SUBCASE("excessive truncation leak aborts the run") {
    DeviceJob job = example2_job(0.0, 1000, 1);
    NoiseConfig nc;
    nc.eta = 0.5;
    nc.nbar = 5.0;
    job.noise = nc;
    CHECK_THROWS_WITH_AS(run_job(job), doctest::Contains("truncation leak"),
                         std::runtime_error);
  }

  SUBCASE("before-placement forbids factors wider than two pairs") {
    DeviceJob job;
    job.circuit.num_modes = 4;
    job.circuit.gates = {BeamSplitter{0, 1, kQuarter, 0.0},
                         BeamSplitter{1, 2, kQuarter, 0.0}};
    job.squeezing = {1, 1, 1, 0};
    job.shots = 10;
    NoiseConfig nc;
    nc.eta = 0.95;
    nc.nbar = 0.1;
    nc.placement = NoisePlacement::kBefore;
    job.noise = nc;
    CHECK_THROWS_WITH_AS(run_job(job), doctest::Contains("at most two"),
                         std::runtime_error);
  }
}

TEST_CASE("large factors lower their cutoff to fit memory") {
  CHECK(detail::factor_cutoff(4, kNoiselessCutoff) == kNoiselessCutoff);
  CHECK(detail::factor_cutoff(6, kNoiselessCutoff) == kNoiselessCutoff);
  CHECK(detail::factor_cutoff(8, kNoiselessCutoff) == 9);
  CHECK(detail::factor_cutoff(8, kNoisyCutoff) == 9);
  CHECK(detail::factor_cutoff(2, 3) == 3);
}

TEST_CASE("postselection on dark modes matches the marginal count") {
  // With no squeezing on pairs 2 and 3, modes 2367 read zero on every kept
  // shot, so counting 0101 on 0145 jointly with vacuum on 2367 is the same
  // estimator as the plain marginal.
  DeviceJob job = example2_job(0.45, 30000, 21);
  job.squeezing = {1, 1, 0, 0};
  CountTable t = run_job(job);
  const long long marginal = pattern_count(t, kPattern0145);
  const long long postselected =
      pattern_count(t, {{0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 0, 0, 0, 1, 0, 0}});
  CHECK(postselected == marginal);
}

TEST_CASE("disconnected factors join into full eight-mode patterns") {
  // Pair 0 off; couple modes (2,3) only. Factors: {0}, {1}, {2,3}.
  DeviceJob job;
  job.circuit.num_modes = 4;
  job.circuit.gates = {BeamSplitter{2, 3, kQuarter, 0.0}};
  job.squeezing = {0, 1, 1, 1};
  job.shots = 40000;
  job.seed = 5;
  CountTable t = run_job(job);

  // mode 0 and 4 are vacuum: every kept shot has them at zero
  CHECK(pattern_count(t, {{0, 4}, {0, 0}}) == 40000 - t.overflow);
  // pair (1,5) is an undisturbed tmss: occupations correlate exactly
  long long diag = 0;
  for (const auto& [occ, n] : t.counts)
    if (occ[1] == occ[5]) diag += n;
  CHECK(diag + t.overflow == 40000);
  // coupled squeezed block (2,3,6,7) reproduces the zero-phase 0101 rate
  const double p = compile_p_probability(1.0, 8);
  const double got = empirical_probability(t, {{2, 3, 6, 7}, {0, 1, 0, 1}});
  CHECK(std::abs(got - p) < 4.0 * std::sqrt(p / 40000.0));
}
