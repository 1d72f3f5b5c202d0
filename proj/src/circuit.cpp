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

#include "tsyn/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <sstream>
#include <thread>

#include "tsyn/errors.hpp"

namespace tsyn::circuit {

namespace {
constexpr double kPi = std::numbers::pi;
}

Unitary2 op_matrix(const CircuitOp& op) {
  switch (op.kind) {
    case OpKind::H: return gate_matrix(GateId::H);
    case OpKind::S: return gate_matrix(GateId::S);
    case OpKind::T: return gate_matrix(GateId::T);
    case OpKind::X: return gate_matrix(GateId::X);
    case OpKind::Y: return gate_matrix(GateId::Y);
    case OpKind::Z: return gate_matrix(GateId::Z);
    case OpKind::RZ: return rz(op.a0);
    case OpKind::RX: return rx(op.a0);
    case OpKind::RY: return ry(op.a0);
    case OpKind::U3: return u3(op.a0, op.a1, op.a2);
    case OpKind::CX: break;
  }
  throw InputError("op_matrix on a two-qubit gate");
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& s;
  int line;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  int col() const { return static_cast<int>(pos) + 1; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col());
  }
};

std::string read_ident(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  while (c.pos < c.s.size() &&
         (std::isalnum(static_cast<unsigned char>(c.s[c.pos])) ||
          c.s[c.pos] == '_')) {
    ++c.pos;
  }
  if (c.pos == start) c.fail("expected an identifier");
  return c.s.substr(start, c.pos - start);
}

double read_number(Cursor& c) {
  c.skip_ws();
  const char* begin = c.s.c_str() + c.pos;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) c.fail("expected a number");
  c.pos += static_cast<std::size_t>(end - begin);
  return v;
}

// EXPR = [+-]? ( "pi" | NUM [ "*" "pi" ] ) [ "/" NUM ]
double read_angle_expr(Cursor& c) {
  c.skip_ws();
  double sign = 1.0;
  if (c.pos < c.s.size() && (c.s[c.pos] == '+' || c.s[c.pos] == '-')) {
    if (c.s[c.pos] == '-') sign = -1.0;
    ++c.pos;
  }
  c.skip_ws();
  double value;
  if (c.s.compare(c.pos, 2, "pi") == 0) {
    value = kPi;
    c.pos += 2;
  } else {
    value = read_number(c);
    c.skip_ws();
    if (c.pos < c.s.size() && c.s[c.pos] == '*') {
      ++c.pos;
      c.skip_ws();
      if (c.s.compare(c.pos, 2, "pi") != 0) c.fail("expected 'pi' after '*'");
      c.pos += 2;
      value *= kPi;
    }
  }
  c.skip_ws();
  if (c.pos < c.s.size() && c.s[c.pos] == '/') {
    ++c.pos;
    const double den = read_number(c);
    if (den == 0.0) c.fail("division by zero in angle");
    value /= den;
  }
  return sign * value;
}

int read_qubit(Cursor& c, int num_qubits) {
  c.skip_ws();
  const int col = c.col();
  if (c.pos >= c.s.size() ||
      !std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
    c.fail("expected a qubit index");
  }
  long v = 0;
  while (c.pos < c.s.size() &&
         std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
    v = v * 10 + (c.s[c.pos] - '0');
    ++c.pos;
  }
  if (v >= num_qubits) {
    throw ParseError("qubit index " + std::to_string(v) +
                         " out of range for qreg " +
                         std::to_string(num_qubits),
                     c.line, col);
  }
  return static_cast<int>(v);
}

void expect(Cursor& c, char ch) {
  c.skip_ws();
  if (c.pos >= c.s.size() || c.s[c.pos] != ch) {
    c.fail(std::string("expected '") + ch + "'");
  }
  ++c.pos;
}

}  // namespace

Circuit parse(const std::string& text) {
  Circuit out;
  bool have_qreg = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t comment = raw.find("//");
    std::string body =
        comment == std::string::npos ? raw : raw.substr(0, comment);
    Cursor c{body, line_no};
    if (c.eof()) continue;

    const std::string head = read_ident(c);
    if (head == "qreg") {
      if (have_qreg) c.fail("duplicate qreg");
      const double n = read_number(c);
      if (n < 1 || n != std::floor(n) || n > 4096) c.fail("bad qreg size");
      out.num_qubits = static_cast<int>(n);
      have_qreg = true;
    } else if (!have_qreg) {
      c.fail("qreg must come first");
    } else if (head == "cx") {
      CircuitOp op;
      op.kind = OpKind::CX;
      op.q0 = read_qubit(c, out.num_qubits);
      op.q1 = read_qubit(c, out.num_qubits);
      if (op.q0 == op.q1) c.fail("cx control equals target");
      out.ops.push_back(op);
    } else if (head == "h" || head == "s" || head == "t" || head == "x" ||
               head == "y" || head == "z") {
      CircuitOp op;
      op.kind = head == "h"   ? OpKind::H
                : head == "s" ? OpKind::S
                : head == "t" ? OpKind::T
                : head == "x" ? OpKind::X
                : head == "y" ? OpKind::Y
                              : OpKind::Z;
      op.q0 = read_qubit(c, out.num_qubits);
      out.ops.push_back(op);
    } else if (head == "rz" || head == "rx" || head == "ry") {
      CircuitOp op;
      op.kind = head == "rz"   ? OpKind::RZ
                : head == "rx" ? OpKind::RX
                               : OpKind::RY;
      expect(c, '(');
      op.a0 = read_angle_expr(c);
      expect(c, ')');
      op.q0 = read_qubit(c, out.num_qubits);
      out.ops.push_back(op);
    } else if (head == "u3") {
      CircuitOp op;
      op.kind = OpKind::U3;
      expect(c, '(');
      op.a0 = read_angle_expr(c);
      expect(c, ',');
      op.a1 = read_angle_expr(c);
      expect(c, ',');
      op.a2 = read_angle_expr(c);
      expect(c, ')');
      op.q0 = read_qubit(c, out.num_qubits);
      out.ops.push_back(op);
    } else {
      c.fail("unsupported gate '" + head + "'");
    }
    expect(c, ';');
    if (!c.eof()) c.fail("trailing text after ';'");
  }
  if (!have_qreg) throw ParseError("missing qreg statement", 1, 1);
  return out;
}

std::string emit(const Circuit& c) {
  std::ostringstream out;
  out << "qreg " << c.num_qubits << ";\n";
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const CircuitOp& op : c.ops) {
    switch (op.kind) {
      case OpKind::CX: out << "cx " << op.q0 << " " << op.q1; break;
      case OpKind::H: out << "h " << op.q0; break;
      case OpKind::S: out << "s " << op.q0; break;
      case OpKind::T: out << "t " << op.q0; break;
      case OpKind::X: out << "x " << op.q0; break;
      case OpKind::Y: out << "y " << op.q0; break;
      case OpKind::Z: out << "z " << op.q0; break;
      case OpKind::RZ: out << "rz(" << num(op.a0) << ") " << op.q0; break;
      case OpKind::RX: out << "rx(" << num(op.a0) << ") " << op.q0; break;
      case OpKind::RY: out << "ry(" << num(op.a0) << ") " << op.q0; break;
      case OpKind::U3:
        out << "u3(" << num(op.a0) << "," << num(op.a1) << "," << num(op.a2)
            << ") " << op.q0;
        break;
    }
    out << ";\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Rotation merging
// ---------------------------------------------------------------------------

namespace {

bool touches(const CircuitOp& op, int q) {
  return op.q0 == q || (op.two_qubit() && op.q1 == q);
}

// Fused single-qubit op for `early` followed by `late` on the same qubit.
CircuitOp fuse(const CircuitOp& early, const CircuitOp& late) {
  const Unitary2 m = op_matrix(late) * op_matrix(early);
  const EulerAngles ang = zyz_decompose(m);  // global phase dropped
  CircuitOp out;
  out.kind = OpKind::U3;
  out.q0 = early.q0;
  out.a0 = ang.theta;
  out.a1 = ang.phi;
  out.a2 = ang.lam;
  return out;
}

bool fusible_pair(const CircuitOp& a, const CircuitOp& b) {
  return a.rotation_like() || b.rotation_like();
}

// Adjacent single-qubit fusion to a fixpoint.
void fuse_adjacent(std::vector<CircuitOp>& ops) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < ops.size() && !changed; ++i) {
      if (ops[i].two_qubit()) continue;
      const int q = ops[i].q0;
      for (std::size_t j = i + 1; j < ops.size(); ++j) {
        if (!touches(ops[j], q)) continue;
        if (!ops[j].two_qubit() && fusible_pair(ops[i], ops[j])) {
          ops[j] = fuse(ops[i], ops[j]);
          ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
        }
        break;
      }
    }
  }
}

bool slides_past(const CircuitOp& rot, const CircuitOp& cx, int q) {
  if (!cx.two_qubit()) return false;
  if (rot.kind == OpKind::RZ) return cx.q0 == q;  // past the control
  if (rot.kind == OpKind::RX) return cx.q1 == q;  // past the target
  return false;
}

// One forward sweep: each Rz/Rx tries to slide right to a fusion partner.
void sweep_forward(std::vector<CircuitOp>& ops) {
  std::size_t i = 0;
  while (i < ops.size()) {
    const CircuitOp op = ops[i];
    if (op.kind != OpKind::RZ && op.kind != OpKind::RX) {
      ++i;
      continue;
    }
    const int q = op.q0;
    bool fused = false;
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      if (!touches(ops[j], q)) continue;
      if (slides_past(op, ops[j], q)) continue;
      if (!ops[j].two_qubit()) {
        ops[j] = fuse(op, ops[j]);
        ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
        fused = true;
      }
      break;
    }
    if (!fused) ++i;
  }
}

// One backward sweep: each Rz/Rx tries to slide left to a fusion partner.
void sweep_backward(std::vector<CircuitOp>& ops) {
  std::size_t i = ops.size();
  while (i-- > 0) {
    const CircuitOp op = ops[i];
    if (op.kind != OpKind::RZ && op.kind != OpKind::RX) continue;
    const int q = op.q0;
    for (std::size_t j = i; j-- > 0;) {
      if (!touches(ops[j], q)) continue;
      if (slides_past(op, ops[j], q)) continue;
      if (!ops[j].two_qubit()) {
        ops[j] = fuse(ops[j], op);
        ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
      }
      break;
    }
  }
}

}  // namespace

Circuit merge_rotations(const Circuit& c, bool enable_commutation) {
  Circuit out = c;
  fuse_adjacent(out.ops);
  if (enable_commutation) {
    sweep_forward(out.ops);
    sweep_backward(out.ops);
    fuse_adjacent(out.ops);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

bool is_trivial_rotation_angle(double angle) {
  return std::abs(std::remainder(angle, kPi / 4.0)) < 1e-12;
}

namespace {

const std::vector<tables::TableEntry>& one_t_catalog() {
  static const std::vector<tables::TableEntry> cat = [] {
    std::vector<tables::TableEntry> out;
    const auto br = tables::enumerate_table(1);
    for (const auto& level : br.table.entries_by_t) {
      out.insert(out.end(), level.begin(), level.end());
    }
    return out;
  }();
  return cat;
}

}  // namespace

bool is_trivial_rotation(const CircuitOp& op) {
  switch (op.kind) {
    case OpKind::RZ:
    case OpKind::RX:
    case OpKind::RY:
      return is_trivial_rotation_angle(op.a0);
    case OpKind::U3: {
      const Unitary2 m = op_matrix(op);
      for (const auto& e : one_t_catalog()) {
        if (trace_value(m, e.matrix.m) > 1.0 - 1e-12) return true;
      }
      return false;
    }
    default:
      return true;  // named Clifford+T gates need no synthesis
  }
}

CircuitMetrics metrics(const Circuit& c) {
  CircuitMetrics m;
  // Longest path over the dependency DAG: an edge runs from each op to the
  // next op on every shared qubit; T ops weigh 1, everything else 0.
  std::vector<int> dp(c.ops.size(), 0);
  std::vector<std::vector<std::size_t>> preds(c.ops.size());
  std::vector<int> last(static_cast<std::size_t>(c.num_qubits), -1);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const CircuitOp& op = c.ops[i];
    const int qs[2] = {op.q0, op.two_qubit() ? op.q1 : op.q0};
    for (int q : qs) {
      const int p = last[static_cast<std::size_t>(q)];
      if (p >= 0) preds[i].push_back(static_cast<std::size_t>(p));
      last[static_cast<std::size_t>(q)] = static_cast<int>(i);
    }
  }
  int t_depth = 0;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const CircuitOp& op = c.ops[i];
    switch (op.kind) {
      case OpKind::T: m.t_count += 1; break;
      case OpKind::H:
      case OpKind::S:
      case OpKind::CX: m.clifford_count += 1; break;
      default: break;
    }
    if (op.rotation_like() && !is_trivial_rotation(op)) m.rotation_count += 1;
    int d = 0;
    for (std::size_t p : preds[i]) d = std::max(d, dp[p]);
    dp[i] = d + (op.kind == OpKind::T ? 1 : 0);
    t_depth = std::max(t_depth, dp[i]);
  }
  m.t_depth = t_depth;
  return m;
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

CircuitSynthesisResult synthesize_circuit(const Circuit& c,
                                          const synth::SynthesisConfig& cfg,
                                          const tables::UniqueTable& table,
                                          const tables::RewriteTable& rewrites,
                                          int jobs) {
  // Rotations are independent targets; synthesize them (possibly in
  // parallel), then splice the results back in circuit order.
  std::vector<std::size_t> rotation_ops;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    if (c.ops[i].rotation_like()) rotation_ops.push_back(i);
  }
  std::vector<synth::SynthesisResult> results(rotation_ops.size());
  const auto run = [&](std::size_t begin, std::size_t step) {
    for (std::size_t r = begin; r < rotation_ops.size(); r += step) {
      synth::SynthesisConfig local = cfg;
      local.rng_seed = cfg.rng_seed + rotation_ops[r];
      results[r] = synth::synthesize(op_matrix(c.ops[rotation_ops[r]]), local,
                                     table, rewrites);
    }
  };
  if (jobs <= 1 || rotation_ops.size() < 2) {
    run(0, 1);
  } else {
    const std::size_t nthreads = std::min<std::size_t>(
        static_cast<std::size_t>(jobs), rotation_ops.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nthreads; ++w) {
      pool.emplace_back(run, w, nthreads);
    }
    for (auto& th : pool) th.join();
  }

  CircuitSynthesisResult out;
  out.compiled.num_qubits = c.num_qubits;
  std::size_t next_rot = 0;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const CircuitOp& op = c.ops[i];
    if (!op.rotation_like()) {
      out.compiled.ops.push_back(op);
      continue;
    }
    const synth::SynthesisResult& res = results[next_rot++];
    for (GateId g : res.sequence.gates) {
      CircuitOp ng;
      ng.q0 = op.q0;
      switch (g) {
        case GateId::H: ng.kind = OpKind::H; break;
        case GateId::S: ng.kind = OpKind::S; break;
        case GateId::T: ng.kind = OpKind::T; break;
        case GateId::X: ng.kind = OpKind::X; break;
        case GateId::Y: ng.kind = OpKind::Y; break;
        case GateId::Z: ng.kind = OpKind::Z; break;
      }
      out.compiled.ops.push_back(ng);
    }
    out.rotations.push_back(
        {i, res.error, res.sequence.t_count(), res.below_threshold});
    if (!res.below_threshold) out.threshold_misses += 1;
    out.error_bound += res.error;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense verification
// ---------------------------------------------------------------------------

std::vector<cplx> dense_unitary(const Circuit& c, int max_qubits) {
  if (c.num_qubits > max_qubits) {
    throw TooLargeError("dense unitary beyond the qubit cap");
  }
  const std::size_t n = std::size_t{1} << c.num_qubits;
  std::vector<cplx> u(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) u[i * n + i] = 1.0;

  for (const CircuitOp& op : c.ops) {
    if (op.kind == OpKind::CX) {
      const std::size_t cbit = std::size_t{1} << op.q0;
      const std::size_t tbit = std::size_t{1} << op.q1;
      for (std::size_t r = 0; r < n; ++r) {
        if ((r & cbit) && !(r & tbit)) {
          const std::size_t r2 = r | tbit;
          for (std::size_t col = 0; col < n; ++col) {
            std::swap(u[r * n + col], u[r2 * n + col]);
          }
        }
      }
      continue;
    }
    const Unitary2 g = op_matrix(op);
    const std::size_t qbit = std::size_t{1} << op.q0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r & qbit) continue;
      const std::size_t r1 = r | qbit;
      for (std::size_t col = 0; col < n; ++col) {
        const cplx a = u[r * n + col];
        const cplx b = u[r1 * n + col];
        u[r * n + col] = g.e[0] * a + g.e[1] * b;
        u[r1 * n + col] = g.e[2] * a + g.e[3] * b;
      }
    }
  }
  return u;
}

double dense_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw DimensionMismatchError("size mismatch");
  const auto n = static_cast<std::size_t>(
      std::llround(std::sqrt(static_cast<double>(a.size()))));
  // As in the 2x2 case, 1 - |Tr W|^2/N^2 for unitary W = A†B equals
  // ||W - (Tr W / N) I||_F^2 / N, which stays accurate near zero.
  std::vector<cplx> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += std::conj(a[k * n + i]) * b[k * n + j];
      }
      w[i * n + j] = acc;
    }
  }
  cplx tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += w[i * n + i];
  const cplx mean = tr / static_cast<double>(n);
  double frob2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      frob2 += std::norm(w[i * n + j] - (i == j ? mean : cplx(0.0)));
    }
  }
  return std::sqrt(std::max(0.0, frob2 / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// QAOA benchmark generator
// ---------------------------------------------------------------------------

namespace {

struct Edge {
  int u, v;
};

// Random connected simple 3-regular graph via the configuration model.
std::vector<Edge> random_cubic_graph(int n, Rng& rng) {
  if (n < 4 || n % 2 != 0) {
    throw InputError("3-regular graphs need an even number >= 4 of vertices");
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(3 * static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < 3; ++k) stubs.push_back(v);
    }
    for (std::size_t i = stubs.size(); i-- > 1;) {
      const auto j = static_cast<std::size_t>(
          rng.uniform() * static_cast<double>(i + 1));
      std::swap(stubs[i], stubs[std::min(j, i)]);
    }
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      const int a = stubs[i], b = stubs[i + 1];
      if (a == b) {
        ok = false;
        break;
      }
      for (int w : adj[static_cast<std::size_t>(a)]) {
        if (w == b) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    if (!ok) continue;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int reached = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          ++reached;
          q.push(w);
        }
      }
    }
    if (reached == n) return edges;
  }
  throw Error("failed to sample a connected 3-regular graph");
}

}  // namespace

Circuit qaoa_maxcut(int num_qubits, int depth, std::uint64_t seed) {
  if (depth < 1) throw InputError("depth must be >= 1");
  Rng rng(seed);
  const std::vector<Edge> edges = random_cubic_graph(num_qubits, rng);

  // BFS spanning tree from vertex 0. Each non-root vertex designates its
  // tree in-edge; placing those gadgets deepest-first makes every vertex's
  // last touch in a layer a CNOT targeting it, so its mixer rotation can
  // slide back onto the phase rotation there. The root stays unmerged.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_qubits));
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<int> parent(static_cast<std::size_t>(num_qubits), -1);
  std::vector<int> depth_of(static_cast<std::size_t>(num_qubits), -1);
  std::queue<int> q;
  q.push(0);
  depth_of[0] = 0;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (depth_of[static_cast<std::size_t>(w)] < 0) {
        depth_of[static_cast<std::size_t>(w)] =
            depth_of[static_cast<std::size_t>(v)] + 1;
        parent[static_cast<std::size_t>(w)] = v;
        q.push(w);
      }
    }
  }

  struct Gadget {
    int control, target;
  };
  std::vector<Gadget> tree, rest;
  for (const Edge& e : edges) {
    if (parent[static_cast<std::size_t>(e.v)] == e.u) {
      tree.push_back({e.u, e.v});
    } else if (parent[static_cast<std::size_t>(e.u)] == e.v) {
      tree.push_back({e.v, e.u});
    } else {
      rest.push_back({e.u, e.v});
    }
  }
  std::sort(tree.begin(), tree.end(), [&](const Gadget& a, const Gadget& b) {
    const int da = depth_of[static_cast<std::size_t>(a.target)];
    const int db = depth_of[static_cast<std::size_t>(b.target)];
    return std::tie(db, a.target) < std::tie(da, b.target);  // deepest first
  });
  std::sort(rest.begin(), rest.end(), [](const Gadget& a, const Gadget& b) {
    return std::tie(a.control, a.target) < std::tie(b.control, b.target);
  });

  Circuit out;
  out.num_qubits = num_qubits;
  for (int layer = 0; layer < depth; ++layer) {
    double gamma = 0.0, beta = 0.0;
    do {
      gamma = (0.05 + 0.9 * rng.uniform()) * kPi;
    } while (is_trivial_rotation_angle(2.0 * gamma));
    do {
      beta = (0.05 + 0.9 * rng.uniform()) * kPi;
    } while (is_trivial_rotation_angle(2.0 * beta));

    const auto gadget = [&](const Gadget& g) {
      CircuitOp cx1;
      cx1.kind = OpKind::CX;
      cx1.q0 = g.control;
      cx1.q1 = g.target;
      CircuitOp phase;
      phase.kind = OpKind::RZ;
      phase.q0 = g.target;
      phase.a0 = 2.0 * gamma;
      out.ops.push_back(cx1);
      out.ops.push_back(phase);
      out.ops.push_back(cx1);
    };
    for (const Gadget& g : rest) gadget(g);
    for (const Gadget& g : tree) gadget(g);
    for (int v = 0; v < num_qubits; ++v) {
      CircuitOp mixer;
      mixer.kind = OpKind::RX;
      mixer.q0 = v;
      mixer.a0 = 2.0 * beta;
      out.ops.push_back(mixer);
    }
  }
  return out;
}

}  // namespace tsyn::circuit
