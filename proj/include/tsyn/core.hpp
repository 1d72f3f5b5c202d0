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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tsyn {

using cplx = std::complex<double>;

/// Default tolerance for exactness checks (unitarity, phase equality).
inline constexpr double kExactTol = 1e-12;
/// Default tolerance for round-trip / reconstruction checks.
inline constexpr double kRoundTripTol = 1e-10;

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

/// Gate identifiers. The numeric values are the on-disk encoding and must not
/// change.
enum class GateId : std::uint8_t { H = 0, S = 1, T = 2, X = 3, Y = 4, Z = 5 };

inline constexpr std::array<GateId, 6> kAllGates = {GateId::H, GateId::S,
                                                    GateId::T, GateId::X,
                                                    GateId::Y, GateId::Z};

char gate_char(GateId g);
/// Parses one of "HSTXYZ" (case-insensitive). Returns false on other input.
bool gate_from_char(char c, GateId& out);

inline bool is_pauli(GateId g) {
  return g == GateId::X || g == GateId::Y || g == GateId::Z;
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices
// ---------------------------------------------------------------------------

/// A 2x2 complex matrix in row-major order [a,b;c,d]. Used for unitaries
/// throughout; nothing enforces unitarity on construction, use
/// unitarity_defect() where the invariant matters.
struct Unitary2 {
  std::array<cplx, 4> e{};

  Unitary2() = default;
  Unitary2(cplx a, cplx b, cplx c, cplx d) : e{a, b, c, d} {}

  cplx& at(int r, int c) { return e[2 * r + c]; }
  const cplx& at(int r, int c) const { return e[2 * r + c]; }

  static Unitary2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Unitary2 adjoint() const {
    return {std::conj(e[0]), std::conj(e[2]), std::conj(e[1]),
            std::conj(e[3])};
  }

  cplx trace() const { return e[0] + e[3]; }
  cplx det() const { return e[0] * e[3] - e[1] * e[2]; }

  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2],
            a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2],
            a.e[2] * b.e[1] + a.e[3] * b.e[3]};
  }
  friend Unitary2 operator*(cplx s, const Unitary2& a) {
    return {s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]};
  }

  /// Max-abs entrywise deviation of U†U from the identity, plus the
  /// deviation of |det| from 1.
  double unitarity_defect() const;
  bool finite() const;
};

/// The fixed matrix of a gate. T = diag(1, e^{i pi/4}), S = T^2, standard
/// H/X/Y/Z.
const Unitary2& gate_matrix(GateId g);

// ---------------------------------------------------------------------------
// Gate sequences
// ---------------------------------------------------------------------------

/// An ordered list of gates; index 0 acts first in time, so the realized
/// matrix multiplies the list in reverse (last gate leftmost).
struct GateSequence {
  std::vector<GateId> gates;

  GateSequence() = default;
  explicit GateSequence(std::vector<GateId> g) : gates(std::move(g)) {}

  int t_count() const;
  int s_count() const;
  int h_count() const;
  /// H and S gates only; Paulis are free in error-corrected codes.
  int non_pauli_clifford_count() const;
  std::size_t size() const { return gates.size(); }
  bool empty() const { return gates.empty(); }

  GateSequence& append(const GateSequence& tail);
  GateSequence& append(GateId g);

  std::string str() const;  // e.g. "HTSH", time order
  static GateSequence from_str(const std::string& s);  // throws on bad char
};

/// Ordered product of the sequence's gate matrices (last gate leftmost).
/// The empty sequence yields the identity.
Unitary2 matrix_of(const GateSequence& seq);

/// Cost order used everywhere a "shortest" sequence is needed:
/// lexicographic (t_count, s_count + h_count, total length).
struct SeqCost {
  int t = 0;
  int sh = 0;
  int len = 0;
  friend auto operator<=>(const SeqCost&, const SeqCost&) = default;
};

inline SeqCost cost_of(const GateSequence& s) {
  return {s.t_count(), s.non_pauli_clifford_count(),
          static_cast<int>(s.size())};
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// |Tr(U†V)| / 2, in [0,1] for unitary inputs (up to rounding).
double trace_value(const Unitary2& u, const Unitary2& v);

/// Unitary distance sqrt(1 - trace_value^2); phase-invariant and symmetric.
double distance(const Unitary2& u, const Unitary2& v);

/// True when u and v agree up to a global phase within tol (in distance).
bool phase_equivalent(const Unitary2& u, const Unitary2& v,
                      double tol = 1e-9);

// ---------------------------------------------------------------------------
// Euler angles
// ---------------------------------------------------------------------------

struct EulerAngles {
  double theta = 0.0;
  double phi = 0.0;
  double lam = 0.0;
};

Unitary2 rz(double theta);
Unitary2 rx(double theta);
Unitary2 ry(double theta);

/// Standard U3(theta, phi, lambda) =
///   [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]].
Unitary2 u3(const EulerAngles& a);
inline Unitary2 u3(double theta, double phi, double lam) {
  return u3(EulerAngles{theta, phi, lam});
}

/// Inverse of u3 up to global phase. Degenerate cases: theta ~ 0 puts the
/// whole z rotation in phi with lam = 0; theta ~ pi likewise sets lam = 0.
EulerAngles zyz_decompose(const Unitary2& u);

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// Deterministic RNG. Normals use an explicit Box-Muller so streams do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Haar-distributed 2x2 unitary (Ginibre + QR with positive diagonal R).
Unitary2 haar_random_unitary(Rng& rng);
Unitary2 haar_random_unitary(std::uint64_t seed);

}  // namespace tsyn
