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

#include "x8sim/gates.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "x8sim/fock.hpp"

using namespace x8sim;
namespace nums = std::numbers;

namespace {

// TMSS with the per-register photon total capped at cutoff - 1, so every
// populated gate sector is fully below the cutoff and evolution is exact.
PureState sector_safe_tmss(double r, int pairs, int cutoff) {
  return truncate_total_photons(make_tmss(r, pairs, cutoff), 2 * (cutoff - 1));
}

double fidelity_vs_norm(const PureState& before, const PureState& after) {
  return std::abs(inner_product(before, after)) / before.norm_squared();
}

}  // namespace

TEST_CASE("beamsplitter matrix convention and unitarity") {
  SUBCASE("theta = 0 is the identity") {
    const CMatrix u = bs_two_mode_matrix(0.0, 0.7, 5);
    CHECK(frobenius_norm(u) == doctest::Approx(5.0));  // sqrt(dim)
    for (int i = 0; i < u.rows; ++i) CHECK(std::abs(u.at(i, i) - cdouble(1.0)) < 1e-15);
  }

  SUBCASE("single-photon block matches the stated convention") {
    const int d = 4;
    const double theta = 0.37, phi = 1.21;
    const CMatrix u = bs_two_mode_matrix(theta, phi, d);
    const int i10 = 1 * d + 0, i01 = 0 * d + 1;
    CHECK(std::abs(u.at(i10, i10) - cdouble(std::cos(theta))) < 1e-14);
    CHECK(std::abs(u.at(i01, i01) - cdouble(std::cos(theta))) < 1e-14);
    CHECK(std::abs(u.at(i10, i01) - std::polar(std::sin(theta), phi)) < 1e-14);
    CHECK(std::abs(u.at(i01, i10) + std::polar(std::sin(theta), -phi)) < 1e-14);
  }

  SUBCASE("50:50 single-photon block") {
    const int d = 3;
    const CMatrix u = bs_two_mode_matrix(nums::pi / 4.0, 0.0, d);
    const double s = std::sqrt(0.5);
    CHECK(u.at(1 * d, 1 * d).real() == doctest::Approx(s).epsilon(1e-14));
    CHECK(u.at(1 * d, 1).real() == doctest::Approx(s).epsilon(1e-14));
    CHECK(u.at(1, 1 * d).real() == doctest::Approx(-s).epsilon(1e-14));
    CHECK(u.at(1, 1).real() == doctest::Approx(s).epsilon(1e-14));
  }

  SUBCASE("per-sector unitarity for random angles") {
    SplitMix64 g(99);
    for (int trial = 0; trial < 6; ++trial) {
      const double theta = g.next_double() * 3.0;
      const double phi = (g.next_double() - 0.5) * 6.0;
      for (int n = 0; n <= 9; ++n) {
        const CMatrix u = bs_sector_matrix(theta, phi, n);
        const CMatrix should_be_i = matmul(adjoint(u), u);
        CMatrix eye = CMatrix::identity(n + 1);
        for (std::size_t i = 0; i < eye.data.size(); ++i)
          CHECK(std::abs(should_be_i.data[i] - eye.data[i]) < 1e-12);
      }
    }
  }

  SUBCASE("matches the combinatorial transfer formula") {
    const double theta = 0.83, phi = -0.91;
    const CMatrix lib = bs_two_mode_matrix(theta, phi, 6);
    const CMatrix ref = oracle::dense_two_mode_matrix(oracle::bs_mode_matrix(theta, phi), 6);
    CHECK(distance_up_to_phase(lib, ref) < 1e-11);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < lib.data.size(); ++i)
      max_abs = std::max(max_abs, std::abs(lib.data[i] - ref.data[i]));
    CHECK(max_abs < 1e-12);
  }
}

TEST_CASE("gate application") {
  SUBCASE("phase on both tmss halves is the identity iff phi in {0, pi}") {
    PureState s = make_tmss(1.0, 1, 10);
    for (double phi : {0.0, nums::pi}) {
      PureState t = apply_gate(s, PhaseShift{0, phi});
      t = apply_gate(t, PhaseShift{1, phi});
      CHECK(fidelity_vs_norm(s, t) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (double phi : {0.4, nums::pi / 2, 2.5}) {
      PureState t = apply_gate(s, PhaseShift{0, phi});
      t = apply_gate(t, PhaseShift{1, phi});
      CHECK(fidelity_vs_norm(s, t) < 1.0 - 1e-3);
    }
  }

  SUBCASE("real 50:50 beamsplitter fixes tmss x tmss") {
    PureState s = sector_safe_tmss(1.0, 2, 9);
    PureState t = apply_gate(s, BeamSplitter{0, 1, nums::pi / 4.0, 0.0});
    t = apply_gate(t, BeamSplitter{2, 3, nums::pi / 4.0, 0.0});
    CHECK(fidelity_vs_norm(s, t) >= 1.0 - 1e-10);
  }

  SUBCASE("0101 probability is 0.05115 (1 + cos 2 phi)") {
    const double p = std::pow(std::tanh(1.0) / std::cosh(1.0), 2) /
                     (std::cosh(1.0) * std::cosh(1.0));
    for (double phi : {0.0, 0.3, 1.0, nums::pi / 2}) {
      PureState s = make_tmss(1.0, 2, 8);
      s = apply_gate(s, BeamSplitter{0, 1, nums::pi / 4.0, phi});
      s = apply_gate(s, BeamSplitter{2, 3, nums::pi / 4.0, phi});
      const double got = fock_probability(s, {{0, 1, 2, 3}, {0, 1, 0, 1}});
      CHECK(got == doctest::Approx(p / 2.0 * (1.0 + std::cos(2.0 * phi))).epsilon(1e-11));
    }
  }

  SUBCASE("unitary gates preserve norm and photon-sector weights") {
    PureState s = oracle::random_state_capped_total(3, 8, 7, 404);
    auto sector_weights = [](const PureState& st) {
      std::vector<double> w(3 * 8, 0.0);
      for (std::size_t i = 0; i < st.dim(); ++i) {
        std::size_t rem = i;
        int total = 0;
        for (int m = 0; m < 3; ++m) {
          total += static_cast<int>(rem % 8);
          rem /= 8;
        }
        w[total] += std::norm(st.amplitudes()[i]);
      }
      return w;
    };
    const auto before = sector_weights(s);
    PureState t = apply_gate(s, BeamSplitter{0, 2, 0.81, -0.33});
    t = apply_gate(t, PhaseShift{1, 2.2});
    t = apply_gate(t, MachZehnder{1, 2, 0.5, -1.4});
    CHECK(t.norm_squared() == doctest::Approx(s.norm_squared()).epsilon(1e-12));
    const auto after = sector_weights(t);
    for (std::size_t k = 0; k < before.size(); ++k)
      CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-11));
  }

  SUBCASE("thermal loss rejected on the pure path") {
    PureState s(2, 4);
    CHECK_THROWS_AS(apply_gate(s, ThermalLoss{0, 0.9, 1.0}), std::invalid_argument);
  }

  SUBCASE("mode out of range rejected") {
    PureState s(2, 4);
    CHECK_THROWS_AS(apply_gate(s, PhaseShift{2, 0.1}), std::out_of_range);
    CHECK_THROWS_AS(apply_gate(s, BeamSplitter{0, 0, 0.1, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("ricochet and overlap invariants") {
  SUBCASE("real two-mode V on both registers fixes the state") {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
      SplitMix64 g(seed);
      Circuit v;
      v.num_modes = 2;
      v.gates = {BeamSplitter{0, 1, g.next_double() * 2.0, 0.0},
                 PhaseShift{g.next_u64() % 2 ? 1 : 0, nums::pi},
                 BeamSplitter{0, 1, g.next_double() * 2.0, 0.0}};
      PureState s = sector_safe_tmss(1.0, 2, 9);
      PureState t = apply_circuit(s, v);       // register A = modes 0, 1
      t = apply_circuit(t, v, 2);              // register B = modes 2, 3
      CHECK(fidelity_vs_norm(s, t) >= 1.0 - 1e-10);
    }
  }

  SUBCASE("<T| U x conj(U) |T> equals the truncated norm for any U") {
    for (std::uint64_t seed : {31u, 32u, 33u, 34u}) {
      Circuit u = oracle::random_linear_circuit(2, 4, seed);
      PureState s = sector_safe_tmss(0.8, 2, 9);
      PureState w = apply_circuit(s, u);          // U on register A
      w = apply_circuit(w, conjugate_circuit(u), 2);  // conj(U) on register B
      const cdouble ov = inner_product(s, w);
      CHECK(std::abs(ov - cdouble(s.norm_squared())) < 1e-10);
    }
  }
}

TEST_CASE("distance up to phase") {
  const CMatrix u = bs_two_mode_matrix(0.6, 0.2, 4);
  SUBCASE("zero for equal operators") { CHECK(distance_up_to_phase(u, u) < 1e-13); }
  SUBCASE("zero under a global phase") {
    CMatrix v = u;
    const cdouble c = std::polar(1.0, 1.234);
    for (auto& z : v.data) z *= c;
    CHECK(distance_up_to_phase(u, v) < 1e-12);
  }
  SUBCASE("identity vs diag(1,-1) is 2") {
    CMatrix a = CMatrix::identity(2);
    CMatrix b = CMatrix::identity(2);
    b.at(1, 1) = -1.0;
    CHECK(distance_up_to_phase(a, b) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("shape mismatch rejected") {
    CHECK_THROWS_AS(distance_up_to_phase(CMatrix::identity(2), CMatrix::identity(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("mz decomposition reproduces the beamsplitter") {
  // Distances are taken on the fully-represented photon-number sectors;
  // past them, any product of truncated gates differs from the one-shot
  // truncated gate by construction.
  SUBCASE("theta = pi/4, phi = 0 on the cutoff-8 two-mode space") {
    CHECK(mz_decompose_distance(nums::pi / 4.0, 0.0, 8) < 1e-10);
  }

  SUBCASE("theta = 0 gives the identity up to phase") {
    const Circuit c = mz_decompose(0.0, 0.0);
    const CMatrix got = restrict_total_photons(circuit_matrix(c, 6), 2, 6, 5);
    CHECK(distance_up_to_phase(got, CMatrix::identity(got.rows)) < 1e-10);
  }

  SUBCASE("25-point (theta, phi) grid") {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double theta = 0.1 + i * (nums::pi / 2.0 - 0.2) / 4.0;
        const double phi = -nums::pi + j * (2.0 * nums::pi) / 4.0;
        CHECK(mz_decompose_distance(theta, phi, 6) < 1e-10);
      }
    }
  }

  SUBCASE("mz primitive matches its defining product") {
    // U_MZ(p1, p2) = BS(pi/4, pi/2) P(p1) BS(pi/4, pi/2) P(p2), phases on mode a.
    const double p1 = 0.77, p2 = -1.31;
    Circuit mz;
    mz.num_modes = 2;
    mz.gates = {MachZehnder{0, 1, p1, p2}};
    Circuit expanded;
    expanded.num_modes = 2;
    expanded.gates = {PhaseShift{0, p2}, BeamSplitter{0, 1, nums::pi / 4.0, nums::pi / 2.0},
                      PhaseShift{0, p1}, BeamSplitter{0, 1, nums::pi / 4.0, nums::pi / 2.0}};
    const CMatrix a = circuit_matrix(mz, 5);
    const CMatrix b = circuit_matrix(expanded, 5);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
      max_abs = std::max(max_abs, std::abs(a.data[i] - b.data[i]));
    CHECK(max_abs < 1e-13);
  }
}

TEST_CASE("layered ansatz") {
  const double quarter = nums::pi / 4.0;

  SUBCASE("single zero-phase layer is the beamsplitter itself") {
    const std::vector<double> xi = {quarter}, phi = {0.0};
    const Circuit c = layered_ansatz(xi, phi);
    const CMatrix got = circuit_matrix(c, 6);
    const CMatrix want = bs_two_mode_matrix(quarter, 0.0, 6);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < got.data.size(); ++i)
      max_abs = std::max(max_abs, std::abs(got.data[i] - want.data[i]));
    CHECK(max_abs < 1e-13);
  }

  auto target_distance = [&](const Circuit& c) {
    const CMatrix got = restrict_total_photons(circuit_matrix(c, 6), 2, 6, 5);
    const CMatrix want =
        restrict_total_photons(bs_two_mode_matrix(quarter, 0.0, 6), 2, 6, 5);
    return distance_up_to_phase(got, want);
  };

  SUBCASE("all-zero phases compose transmissivities exactly") {
    for (int layers = 2; layers <= 3; ++layers) {
      std::vector<double> xi(layers, quarter / layers), phi(layers, 0.0);
      CHECK(target_distance(layered_ansatz(xi, phi)) < 1e-12);
    }
  }

  SUBCASE("nonzero phase sum moves the circuit away from the target") {
    for (int layers = 1; layers <= 3; ++layers) {
      std::vector<double> xi(layers, quarter / layers), phi(layers, 0.3 / layers);
      CHECK(target_distance(layered_ansatz(xi, phi)) > 1e-2);
    }
  }

  SUBCASE("zero phase sum is necessary but not sufficient") {
    // A balanced-but-nonzero profile does not reproduce the target even
    // though the phases cancel in total.
    const std::vector<double> xi = {quarter / 2.0, quarter / 2.0};
    const std::vector<double> phi = {nums::pi / 2.0, -nums::pi / 2.0};
    CHECK(target_distance(layered_ansatz(xi, phi)) > 1e-2);
  }

  SUBCASE("length mismatch rejected") {
    const std::vector<double> xi = {0.1, 0.2}, phi = {0.0};
    CHECK_THROWS_AS(layered_ansatz(xi, phi), std::invalid_argument);
  }
}

TEST_CASE("conjugate circuit conjugates the matrix") {
  Circuit c;
  c.num_modes = 2;
  c.gates = {PhaseShift{0, 0.9}, BeamSplitter{0, 1, 0.7, 0.4}, MachZehnder{0, 1, 1.1, -0.6}};
  const CMatrix m = circuit_matrix(c, 5);
  const CMatrix mc = circuit_matrix(conjugate_circuit(c), 5);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < m.data.size(); ++i)
    max_abs = std::max(max_abs, std::abs(std::conj(m.data[i]) - mc.data[i]));
  CHECK(max_abs < 1e-13);
  Circuit bad;
  bad.num_modes = 1;
  bad.gates = {ThermalLoss{0, 0.9, 0.5}};
  CHECK_THROWS_AS(conjugate_circuit(bad), std::invalid_argument);
}

TEST_CASE("transfer matrix extracts the mode matrix") {
  const double theta = 1.02, phi = 0.33;
  Circuit c;
  c.num_modes = 2;
  c.gates = {BeamSplitter{0, 1, theta, phi}};
  const CMatrix m = transfer_matrix(c);
  CHECK(std::abs(m.at(0, 0) - cdouble(std::cos(theta))) < 1e-14);
  CHECK(std::abs(m.at(0, 1) - std::polar(std::sin(theta), phi)) < 1e-14);
  CHECK(std::abs(m.at(1, 0) + std::polar(std::sin(theta), -phi)) < 1e-14);
}
