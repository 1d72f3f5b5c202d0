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

#include "tsyn/core.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <numbers>

#include "tsyn/errors.hpp"

namespace tsyn {

namespace {
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

char gate_char(GateId g) {
  static constexpr char chars[] = {'H', 'S', 'T', 'X', 'Y', 'Z'};
  return chars[static_cast<int>(g)];
}

bool gate_from_char(char c, GateId& out) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'H': out = GateId::H; return true;
    case 'S': out = GateId::S; return true;
    case 'T': out = GateId::T; return true;
    case 'X': out = GateId::X; return true;
    case 'Y': out = GateId::Y; return true;
    case 'Z': out = GateId::Z; return true;
    default: return false;
  }
}

const Unitary2& gate_matrix(GateId g) {
  static const std::array<Unitary2, 6> mats = [] {
    std::array<Unitary2, 6> m;
    const cplx i(0.0, 1.0);
    m[0] = Unitary2{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};       // H
    m[1] = Unitary2{1.0, 0.0, 0.0, i};                                  // S
    m[2] = Unitary2{1.0, 0.0, 0.0, std::polar(1.0, kPi / 4.0)};         // T
    m[3] = Unitary2{0.0, 1.0, 1.0, 0.0};                                // X
    m[4] = Unitary2{0.0, -i, i, 0.0};                                   // Y
    m[5] = Unitary2{1.0, 0.0, 0.0, -1.0};                               // Z
    return m;
  }();
  return mats[static_cast<int>(g)];
}

double Unitary2::unitarity_defect() const {
  const Unitary2 g = adjoint() * (*this);
  double d = 0.0;
  d = std::max(d, std::abs(g.e[0] - 1.0));
  d = std::max(d, std::abs(g.e[1]));
  d = std::max(d, std::abs(g.e[2]));
  d = std::max(d, std::abs(g.e[3] - 1.0));
  d = std::max(d, std::abs(std::abs(det()) - 1.0));
  return d;
}

bool Unitary2::finite() const {
  for (const auto& c : e) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

int GateSequence::t_count() const {
  return static_cast<int>(std::count(gates.begin(), gates.end(), GateId::T));
}

int GateSequence::s_count() const {
  return static_cast<int>(std::count(gates.begin(), gates.end(), GateId::S));
}

int GateSequence::h_count() const {
  return static_cast<int>(std::count(gates.begin(), gates.end(), GateId::H));
}

int GateSequence::non_pauli_clifford_count() const {
  return s_count() + h_count();
}

GateSequence& GateSequence::append(const GateSequence& tail) {
  gates.insert(gates.end(), tail.gates.begin(), tail.gates.end());
  return *this;
}

GateSequence& GateSequence::append(GateId g) {
  gates.push_back(g);
  return *this;
}

std::string GateSequence::str() const {
  std::string s;
  s.reserve(gates.size());
  for (GateId g : gates) s.push_back(gate_char(g));
  return s;
}

GateSequence GateSequence::from_str(const std::string& s) {
  GateSequence seq;
  seq.gates.reserve(s.size());
  for (char c : s) {
    GateId g;
    if (!gate_from_char(c, g)) {
      throw InputError(std::string("unknown gate character '") + c + "'");
    }
    seq.gates.push_back(g);
  }
  return seq;
}

Unitary2 matrix_of(const GateSequence& seq) {
  Unitary2 m = Unitary2::identity();
  // Last gate acts last in time, hence leftmost in the product.
  for (GateId g : seq.gates) m = gate_matrix(g) * m;
  return m;
}

double trace_value(const Unitary2& u, const Unitary2& v) {
  const Unitary2 p = u.adjoint() * v;
  return 0.5 * std::abs(p.trace());
}

double distance(const Unitary2& u, const Unitary2& v) {
  // For unitary W = U†V, 1 - |Tr W|^2/4 equals ||W - (TrW/2) I||_F^2 / 2
  // exactly; the latter has no catastrophic cancellation near zero, where
  // sqrt(1 - tv^2) loses half the digits.
  const Unitary2 w = u.adjoint() * v;
  const cplx mean = 0.5 * w.trace();
  const double frob2 = std::norm(w.e[0] - mean) + std::norm(w.e[1]) +
                       std::norm(w.e[2]) + std::norm(w.e[3] - mean);
  return std::sqrt(0.5 * frob2);
}

bool phase_equivalent(const Unitary2& u, const Unitary2& v, double tol) {
  return distance(u, v) < tol;
}

Unitary2 rz(double theta) {
  return {std::polar(1.0, -theta / 2.0), 0.0, 0.0,
          std::polar(1.0, theta / 2.0)};
}

Unitary2 rx(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, cplx(0.0, -s), cplx(0.0, -s), c};
}

Unitary2 ry(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}

Unitary2 u3(const EulerAngles& a) {
  const double c = std::cos(a.theta / 2.0);
  const double s = std::sin(a.theta / 2.0);
  return {c, -std::polar(s, a.lam), std::polar(s, a.phi),
          std::polar(c, a.phi + a.lam)};
}

EulerAngles zyz_decompose(const Unitary2& u) {
  const double lo = std::abs(u.e[2]);  // |sin(theta/2)|
  const double hi = std::abs(u.e[0]);  // |cos(theta/2)|
  EulerAngles a;
  a.theta = 2.0 * std::atan2(lo, hi);
  if (lo < kExactTol) {
    // Diagonal: whole z rotation goes to phi.
    a.theta = 0.0;
    a.phi = std::arg(u.e[3]) - std::arg(u.e[0]);
    a.lam = 0.0;
  } else if (hi < kExactTol) {
    // Anti-diagonal: symmetric convention, lam = 0.
    a.theta = kPi;
    a.phi = std::arg(u.e[2]) - std::arg(-u.e[1]);
    a.lam = 0.0;
  } else {
    a.phi = std::arg(u.e[2]) - std::arg(u.e[0]);
    a.lam = std::arg(-u.e[1]) - std::arg(u.e[0]);
  }
  return a;
}

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * kPi * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

Unitary2 haar_random_unitary(Rng& rng) {
  // Ginibre ensemble followed by Gram-Schmidt with positive diagonal R.
  cplx a0(rng.normal(), rng.normal());
  cplx a1(rng.normal(), rng.normal());
  cplx b0(rng.normal(), rng.normal());
  cplx b1(rng.normal(), rng.normal());

  double na = std::sqrt(std::norm(a0) + std::norm(a1));
  while (na == 0.0) {  // essentially impossible; regenerate
    a0 = cplx(rng.normal(), rng.normal());
    a1 = cplx(rng.normal(), rng.normal());
    na = std::sqrt(std::norm(a0) + std::norm(a1));
  }
  a0 /= na;
  a1 /= na;

  const cplx proj = std::conj(a0) * b0 + std::conj(a1) * b1;
  b0 -= proj * a0;
  b1 -= proj * a1;
  double nb = std::sqrt(std::norm(b0) + std::norm(b1));
  if (nb < 1e-300) {
    // Degenerate draw; fall back to the orthogonal complement.
    b0 = -std::conj(a1);
    b1 = std::conj(a0);
    nb = 1.0;
  }
  b0 /= nb;
  b1 /= nb;

  return {a0, b0, a1, b1};
}

Unitary2 haar_random_unitary(std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_unitary(rng);
}

}  // namespace tsyn
