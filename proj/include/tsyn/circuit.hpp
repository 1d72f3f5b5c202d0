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

#include <cstdint>
#include <string>
#include <vector>

#include "tsyn/core.hpp"
#include "tsyn/synth.hpp"
#include "tsyn/tables.hpp"

namespace tsyn::circuit {

enum class OpKind { CX, H, S, T, X, Y, Z, RZ, RX, RY, U3 };

struct CircuitOp {
  OpKind kind = OpKind::H;
  int q0 = 0;       // target qubit (single-qubit ops), control for CX
  int q1 = -1;      // CX target
  double a0 = 0.0;  // rotation angle / u3 theta
  double a1 = 0.0;  // u3 phi
  double a2 = 0.0;  // u3 lambda

  bool two_qubit() const { return kind == OpKind::CX; }
  bool rotation_like() const {
    return kind == OpKind::RZ || kind == OpKind::RX || kind == OpKind::RY ||
           kind == OpKind::U3;
  }
};

struct Circuit {
  int num_qubits = 0;
  std::vector<CircuitOp> ops;
};

/// 2x2 matrix of a single-qubit op (throws on CX).
Unitary2 op_matrix(const CircuitOp& op);

// ---------------------------------------------------------------------------
// Text format: one statement per line, `//` comments.
//   qreg N;  cx A B;  h|s|t|x|y|z Q;  rz(EXPR) Q;  rx(EXPR) Q;  ry(EXPR) Q;
//   u3(E1,E2,E3) Q;    EXPR = float | [n*]pi[/m]
// ---------------------------------------------------------------------------

Circuit parse(const std::string& text);
std::string emit(const Circuit& c);

// ---------------------------------------------------------------------------
// Passes and metrics
// ---------------------------------------------------------------------------

/// Fuses adjacent single-qubit runs into U3 ops. With commutation enabled,
/// Rz ops slide across CNOT controls and Rx ops across CNOT targets when
/// that lets them reach a fusion partner (greedy forward sweep plus one
/// backward sweep). Never increases the rotation count.
Circuit merge_rotations(const Circuit& c, bool enable_commutation);

struct CircuitMetrics {
  int t_count = 0;
  int t_depth = 0;         // T count on the dependency-DAG critical path
  int clifford_count = 0;  // H, S and CX; Paulis are free
  int rotation_count = 0;  // rotations needing more than one T to realize
};

CircuitMetrics metrics(const Circuit& c);

/// True when `angle` is an integer multiple of pi/4 within 1e-12 (such
/// rotations synthesize exactly).
bool is_trivial_rotation_angle(double angle);
/// True when a U3 matrix is realizable with at most one T gate.
bool is_trivial_rotation(const CircuitOp& op);

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

struct RotationRecord {
  std::size_t op_index = 0;  // index into the input circuit
  double error = 0.0;
  int t_count = 0;
  bool below_threshold = true;
};

struct CircuitSynthesisResult {
  Circuit compiled;  // CX + {H,S,T,X,Y,Z} only
  std::vector<RotationRecord> rotations;
  double error_bound = 0.0;  // sum of per-rotation distances
  int threshold_misses = 0;  // rotations that missed a configured epsilon
};

/// Replaces every rotation with a synthesized Clifford+T sequence. The
/// circuit-level error is bounded by the sum of per-rotation distances.
/// Rotations are independent; `jobs` > 1 synthesizes them in parallel with
/// deterministic output order.
CircuitSynthesisResult synthesize_circuit(const Circuit& c,
                                          const synth::SynthesisConfig& cfg,
                                          const tables::UniqueTable& table,
                                          const tables::RewriteTable& rewrites,
                                          int jobs = 1);

// ---------------------------------------------------------------------------
// Helpers for verification and benchmarks
// ---------------------------------------------------------------------------

/// Dense unitary of a small circuit, row-major 2^n x 2^n, qubit 0 least
/// significant. Throws TooLargeError above max_qubits.
std::vector<cplx> dense_unitary(const Circuit& c, int max_qubits = 10);

/// Distance between two N x N unitaries: sqrt(1 - |Tr(A†B)|^2 / N^2).
double dense_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

/// MaxCut QAOA circuit on a random connected 3-regular graph, with gadgets
/// ordered so the commutation pass can merge every mixer rotation except
/// one per layer.
Circuit qaoa_maxcut(int num_qubits, int depth, std::uint64_t seed);

}  // namespace tsyn::circuit
