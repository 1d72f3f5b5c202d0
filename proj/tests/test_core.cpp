// Copyright 2026 The tsyn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tsyn/core.hpp"

using namespace tsyn;

namespace {
constexpr double kPi = std::numbers::pi;

double entry_diff(const Unitary2& a, const Unitary2& b) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
  return d;
}
}  // namespace

TEST_CASE("gate matrices") {
  const Unitary2& t = gate_matrix(GateId::T);
  CHECK(std::abs(t.e[0] - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(t.e[3] - std::polar(1.0, kPi / 4)) < 1e-15);
  for (GateId g : kAllGates) {
    CHECK(gate_matrix(g).unitarity_defect() < 1e-15);
  }
  // S = T^2
  const Unitary2 tt = gate_matrix(GateId::T) * gate_matrix(GateId::T);
  CHECK(entry_diff(tt, gate_matrix(GateId::S)) < 1e-15);
}

TEST_CASE("matrix_of ordering") {
  CHECK(entry_diff(matrix_of(GateSequence{}), Unitary2::identity()) == 0.0);
  CHECK(entry_diff(matrix_of(GateSequence::from_str("T")),
                   gate_matrix(GateId::T)) == 0.0);
  // [H, T]: H acts first, so the product is T*H. Hand oracle:
  // T*H = (1/sqrt2) * [[1, 1], [e^{i pi/4}, -e^{i pi/4}]].
  const double is2 = 1.0 / std::sqrt(2.0);
  const cplx w = std::polar(is2, kPi / 4);
  const Unitary2 expect{is2, is2, w, -w};
  CHECK(entry_diff(matrix_of(GateSequence::from_str("HT")), expect) < 1e-15);
}

TEST_CASE("matrix_of is a monoid homomorphism") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    GateSequence s1, s2;
    const int n1 = static_cast<int>(rng.uniform() * 8);
    const int n2 = static_cast<int>(rng.uniform() * 8);
    for (int i = 0; i < n1; ++i) {
      s1.append(kAllGates[static_cast<int>(rng.uniform() * 6)]);
    }
    for (int i = 0; i < n2; ++i) {
      s2.append(kAllGates[static_cast<int>(rng.uniform() * 6)]);
    }
    GateSequence cat = s1;
    cat.append(s2);
    CHECK(entry_diff(matrix_of(cat), matrix_of(s2) * matrix_of(s1)) < 1e-13);
  }
}

TEST_CASE("trace_value and distance") {
  const Unitary2 id = Unitary2::identity();
  CHECK(trace_value(id, id) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_value(id, gate_matrix(GateId::X)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // |1 + e^{i pi/4}|/2, evaluated from the closed form.
  CHECK(trace_value(id, gate_matrix(GateId::T)) ==
        doctest::Approx(0.9238795325112867).epsilon(1e-12));
  CHECK(distance(id, id) == doctest::Approx(0.0));
  CHECK(distance(id, gate_matrix(GateId::T)) ==
        doctest::Approx(0.3826834323650898).epsilon(1e-12));

  // Phase invariance and symmetry.
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    const Unitary2 v = haar_random_unitary(rng);
    const double alpha = rng.uniform() * 6.28;
    CHECK(distance(u, std::polar(1.0, alpha) * u) < 1e-12);
    CHECK(trace_value(u, v) == doctest::Approx(trace_value(v, u)).epsilon(1e-12));
    CHECK(distance(u, v) >= 0.0);
    CHECK(distance(u, v) <= 1.0 + 1e-12);
  }
}

TEST_CASE("u3 basics") {
  CHECK(distance(u3(0, 0, 0), Unitary2::identity()) < 1e-12);
  CHECK(distance(u3(kPi, 0, kPi), gate_matrix(GateId::X)) < 1e-12);
}

TEST_CASE("u3 equals the Rz-H-Rz-H-Rz form") {
  const Unitary2& h = gate_matrix(GateId::H);
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double th = (rng.uniform() - 0.5) * 4 * kPi;
    const double ph = (rng.uniform() - 0.5) * 4 * kPi;
    const double lm = (rng.uniform() - 0.5) * 4 * kPi;
    const Unitary2 lhs = u3(th, ph, lm);
    const Unitary2 rhs =
        rz(ph + 2.5 * kPi) * h * rz(th) * h * rz(lm - kPi / 2.0);
    CHECK(distance(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("zyz_decompose") {
  const EulerAngles a = zyz_decompose(Unitary2::identity());
  CHECK(a.theta == 0.0);
  CHECK(a.phi == 0.0);
  CHECK(a.lam == 0.0);

  const EulerAngles b = zyz_decompose(rz(0.7));
  CHECK(b.theta == 0.0);
  CHECK(b.lam == 0.0);
  CHECK(std::abs(std::remainder(b.phi - 0.7, 2 * kPi)) < 1e-12);

  Rng rng(1234);
  for (int i = 0; i < 500; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    CHECK(distance(u3(zyz_decompose(u)), u) < 1e-10);
  }
  // Degenerate anti-diagonal case.
  CHECK(distance(u3(zyz_decompose(gate_matrix(GateId::X))),
                 gate_matrix(GateId::X)) < 1e-10);
  CHECK(distance(u3(zyz_decompose(gate_matrix(GateId::Y))),
                 gate_matrix(GateId::Y)) < 1e-10);
}

TEST_CASE("haar sampling") {
  CHECK(entry_diff(haar_random_unitary(42), haar_random_unitary(42)) == 0.0);
  Rng rng(5);
  double acc = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    CHECK(u.unitarity_defect() < 1e-12);
    acc += std::norm(u.trace()) / 4.0;
  }
  // Haar moment: E|Tr U|^2 = 1, so the mean of |Tr|^2/4 is 0.25 with
  // sigma_mean = 0.25/sqrt(n).
  CHECK(std::abs(acc / n - 0.25) < 3.0 * 0.25 / std::sqrt(double(n)));
}

TEST_CASE("sequence counts") {
  const GateSequence s = GateSequence::from_str("HTSXTZY");
  CHECK(s.t_count() == 2);
  CHECK(s.s_count() == 1);
  CHECK(s.h_count() == 1);
  CHECK(s.non_pauli_clifford_count() == 2);
  CHECK(s.str() == "HTSXTZY");
  CHECK(cost_of(s) == SeqCost{2, 2, 7});
}
