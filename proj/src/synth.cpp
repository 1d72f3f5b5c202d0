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

#include "tsyn/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "tsyn/errors.hpp"
#include "tsyn/kernels.hpp"
#include "tsyn/mps.hpp"

namespace tsyn::synth {

namespace {

struct SliceSet {
  std::vector<mps::Slice> slices;
  std::vector<sampler::SliceRef> refs;
};

SliceSet make_slices(std::span<const int> budgets,
                     const tables::UniqueTable& table) {
  SliceSet out;
  for (int m : budgets) {
    if (m < 0 || m > table.max_t) {
      throw InputError("budget " + std::to_string(m) +
                       " not covered by a table with max_t=" +
                       std::to_string(table.max_t));
    }
    const std::size_t count = table.count_through(m);
    out.slices.push_back({table.stacked.data(), count, m});
    out.refs.push_back({&table, 0, count});
  }
  return out;
}

}  // namespace

SynthesisResult synthesize_inner(const Unitary2& target,
                                 std::span<const int> budgets, std::size_t k,
                                 const tables::UniqueTable& table,
                                 const tables::RewriteTable& rewrites,
                                 std::uint64_t seed, sampler::Mode mode,
                                 bool run_postprocess) {
  if (budgets.empty()) throw InputError("no T budgets given");
  const SliceSet ss = make_slices(budgets, table);
  const mps::Mps chain = mps::build_mps(ss.slices, target);

  sampler::Options opts;
  // One tensor is an exhaustive lookup; keep that guarantee regardless of
  // the configured mode.
  opts.mode = (budgets.size() == 1) ? sampler::Mode::TopK : mode;
  opts.seed = seed;
  std::size_t want = k;
  if (budgets.size() == 1 && opts.mode == sampler::Mode::TopK) {
    want = std::max(want, std::size_t{1});
  }
  const sampler::SampleBatch batch = sampler::sample(chain, want, opts);

  double best_mag = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < batch.k; ++i) {
    const double m = std::abs(batch.trace_values[i]);
    if (m > best_mag + kExactTol) {
      best_mag = m;
      best_i = i;
    } else if (m > best_mag - kExactTol) {
      // Tie on trace value: prefer the cheaper decoded sequence.
      const GateSequence a = sampler::decode(batch.tuple(i), ss.refs);
      const GateSequence b = sampler::decode(batch.tuple(best_i), ss.refs);
      if (cost_of(a) < cost_of(b)) {
        best_i = i;
        best_mag = std::max(best_mag, m);
      }
    }
  }

  SynthesisResult out;
  out.sequence = sampler::decode(batch.tuple(best_i), ss.refs);
  if (run_postprocess) out.sequence = postprocess(out.sequence, rewrites);
  out.realized = matrix_of(out.sequence);
  out.error = distance(target, out.realized);
  out.tensors_used = static_cast<int>(budgets.size());
  out.samples_evaluated = batch.k;
  return out;
}

// ---------------------------------------------------------------------------
// Post-processing
// ---------------------------------------------------------------------------

namespace {

const std::vector<tables::TableEntry>& clifford_catalog() {
  static const std::vector<tables::TableEntry> cat =
      tables::enumerate_cliffords();
  return cat;
}

// Minimal word for a Clifford run, or nullptr when the run is not Clifford
// (cannot happen for {H,S,X,Y,Z} input).
const GateSequence* minimal_clifford_word(const Unitary2& m) {
  const auto cm = tables::canonicalize(m);
  for (const auto& e : clifford_catalog()) {
    if (trace_value(cm.m, e.matrix.m) > 1.0 - tables::kDedupTol) {
      return &e.sequence;
    }
  }
  return nullptr;
}

// Replaces maximal non-T runs by their minimal Clifford words.
bool canonicalize_clifford_runs(GateSequence& seq) {
  bool changed = false;
  std::vector<GateId> out;
  out.reserve(seq.size());
  std::size_t i = 0;
  const auto& gates = seq.gates;
  while (i < gates.size()) {
    if (gates[i] == GateId::T) {
      out.push_back(gates[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < gates.size() && gates[j] != GateId::T) ++j;
    GateSequence run(std::vector<GateId>(gates.begin() + i, gates.begin() + j));
    const GateSequence* min_word = minimal_clifford_word(matrix_of(run));
    if (min_word != nullptr && cost_of(*min_word) < cost_of(run)) {
      out.insert(out.end(), min_word->gates.begin(), min_word->gates.end());
      changed = true;
    } else {
      out.insert(out.end(), gates.begin() + i, gates.begin() + j);
    }
    i = j;
  }
  if (changed) seq.gates = std::move(out);
  return changed;
}

// One left-to-right longest-match pass over the rewrite table.
bool rewrite_pass(GateSequence& seq, const tables::RewriteTable& rewrites) {
  if (rewrites.size() == 0) return false;
  bool changed = false;
  std::string s = seq.str();
  std::size_t i = 0;
  while (i < s.size()) {
    bool replaced = false;
    const std::size_t wmax =
        std::min<std::size_t>(tables::RewriteTable::kMaxKeyLen, s.size() - i);
    for (std::size_t w = wmax; w >= 2; --w) {
      const std::string key = s.substr(i, w);
      const GateSequence* val = rewrites.find(key);
      if (val == nullptr) continue;
      if (cost_of(*val) < cost_of(GateSequence::from_str(key))) {
        s = s.substr(0, i) + val->str() + s.substr(i + w);
        changed = true;
        replaced = true;
        break;
      }
    }
    if (!replaced) ++i;
  }
  if (changed) seq = GateSequence::from_str(s);
  return changed;
}

}  // namespace

GateSequence postprocess(const GateSequence& seq,
                         const tables::RewriteTable& rewrites) {
  GateSequence cur = seq;
  // Every substitution strictly lowers the cost order, so this terminates.
  for (;;) {
    bool changed = canonicalize_clifford_runs(cur);
    changed |= rewrite_pass(cur, rewrites);
    if (!changed) return cur;
  }
}

// ---------------------------------------------------------------------------
// Outer loop
// ---------------------------------------------------------------------------

SynthesisResult synthesize(const Unitary2& target, const SynthesisConfig& cfg,
                           const tables::UniqueTable& table,
                           const tables::RewriteTable& rewrites) {
  if (cfg.t_budgets.empty()) throw InputError("t_budgets must be nonempty");
  if (cfg.min_tensors < 1 ||
      cfg.min_tensors > static_cast<int>(cfg.t_budgets.size())) {
    throw InputError("min_tensors out of range");
  }
  if (cfg.samples < 1) throw InputError("samples must be >= 1");
  if (cfg.attempts < 1) throw InputError("attempts must be >= 1");
  if (cfg.epsilon && (*cfg.epsilon < 0.0 || *cfg.epsilon >= 1.0)) {
    throw InputError("epsilon must be in [0, 1)");
  }

  const auto start = std::chrono::steady_clock::now();
  const auto expired = [&] {
    if (cfg.time_limit_seconds <= 0.0) return false;
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - start;
    return dt.count() >= cfg.time_limit_seconds;
  };

  SynthesisResult best;
  std::size_t samples_total = 0;
  bool done = false;
  for (int l = cfg.min_tensors;
       l <= static_cast<int>(cfg.t_budgets.size()) && !done; ++l) {
    for (int j = 1; j <= cfg.attempts; ++j) {
      SynthesisResult r = synthesize_inner(
          target, std::span<const int>(cfg.t_budgets.data(), l), cfg.samples,
          table, rewrites, cfg.rng_seed + static_cast<std::uint64_t>(j),
          cfg.mode, cfg.run_postprocess);
      samples_total += r.samples_evaluated;
      if (r.error < best.error) best = r;
      if (cfg.epsilon && best.error < *cfg.epsilon) {
        done = true;
        break;
      }
      if (expired()) {
        done = true;
        break;
      }
      // Without randomness, reattempts would repeat the same search.
      if (cfg.mode == sampler::Mode::TopK || l == 1) break;
    }
  }
  best.samples_evaluated = samples_total;
  best.below_threshold = !cfg.epsilon || best.error < *cfg.epsilon;
  return best;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

SynthesisResult brute_force_best(const Unitary2& target,
                                 std::span<const int> budgets,
                                 const tables::UniqueTable& table) {
  if (budgets.empty()) throw InputError("no T budgets given");
  const SliceSet ss = make_slices(budgets, table);
  double total = 1.0;
  for (const auto& s : ss.slices) total *= static_cast<double>(s.count);
  if (total > 1e8) throw TooLargeError("brute-force space exceeds 1e8 tuples");

  const std::size_t l = ss.slices.size();
  const std::size_t last_n = ss.slices[l - 1].count;
  std::vector<cplx> tr(last_n);
  std::vector<std::uint32_t> prefix(l > 0 ? l - 1 : 0, 0);
  std::vector<std::uint32_t> best_tuple(l, 0);
  double best_mag = -1.0;

  const auto consider = [&](double mag, std::span<const std::uint32_t> tup) {
    if (mag > best_mag + kExactTol) {
      best_mag = mag;
      std::copy(tup.begin(), tup.end(), best_tuple.begin());
    } else if (mag > best_mag - kExactTol) {
      const GateSequence a = sampler::decode(tup, ss.refs);
      const GateSequence b = sampler::decode(best_tuple, ss.refs);
      if (cost_of(a) < cost_of(b)) {
        best_mag = std::max(best_mag, mag);
        std::copy(tup.begin(), tup.end(), best_tuple.begin());
      }
    }
  };

  std::vector<std::uint32_t> tup(l, 0);
  const std::function<void(std::size_t, const Unitary2&)> walk =
      [&](std::size_t depth, const Unitary2& product) {
        if (depth + 1 == l) {
          // t(x) = Tr(target† M_last P)/2 = Tr(A† M_last)/2 with
          // A = target P†.
          const Unitary2 a = target * product.adjoint();
          kernels::batch_frobenius(a.e.data(),
                                   ss.slices[depth].mats, last_n, tr.data());
          for (std::size_t x = 0; x < last_n; ++x) {
            tup[depth] = static_cast<std::uint32_t>(x);
            consider(0.5 * std::abs(tr[x]), tup);
          }
          return;
        }
        const mps::Slice& s = ss.slices[depth];
        for (std::size_t x = 0; x < s.count; ++x) {
          tup[depth] = static_cast<std::uint32_t>(x);
          Unitary2 m;
          std::copy(s.mats + 4 * x, s.mats + 4 * x + 4, m.e.begin());
          walk(depth + 1, m * product);
        }
      };
  walk(0, Unitary2::identity());

  SynthesisResult out;
  out.sequence = sampler::decode(best_tuple, ss.refs);
  out.realized = matrix_of(out.sequence);
  out.error = distance(target, out.realized);
  out.tensors_used = static_cast<int>(l);
  out.samples_evaluated = static_cast<std::size_t>(total);
  out.below_threshold = true;
  return out;
}

// ---------------------------------------------------------------------------
// Paired U3-vs-3Rz harness
// ---------------------------------------------------------------------------

EconomyPair economy_compare(const Unitary2& target, double epsilon,
                            const SynthesisConfig& base,
                            const tables::UniqueTable& table,
                            const tables::RewriteTable& rewrites) {
  constexpr double kPi = std::numbers::pi;
  const EulerAngles ang = zyz_decompose(target);
  const double angles[3] = {ang.lam - kPi / 2.0, ang.theta,
                            ang.phi + 2.5 * kPi};

  SynthesisConfig rz_cfg = base;
  rz_cfg.epsilon = epsilon / 3.0;
  SynthesisResult parts[3];
  for (int i = 0; i < 3; ++i) {
    parts[i] = synthesize(rz(angles[i]), rz_cfg, table, rewrites);
  }
  const Unitary2& h = gate_matrix(GateId::H);
  const Unitary2 combined = parts[2].realized * h * parts[1].realized * h *
                            parts[0].realized;

  EconomyPair out;
  out.epsilon = epsilon;
  out.err_three_rz = distance(target, combined);
  out.t_three_rz = parts[0].sequence.t_count() + parts[1].sequence.t_count() +
                   parts[2].sequence.t_count();

  SynthesisConfig direct_cfg = base;
  direct_cfg.epsilon = std::max(out.err_three_rz, 1e-12);
  SynthesisResult direct = synthesize(target, direct_cfg, table, rewrites);
  // The three-factor error occasionally cancels below the sample-limited
  // search floor; widen the candidate pool until the match is made.
  for (int retry = 0; retry < 2 && !direct.below_threshold; ++retry) {
    direct_cfg.samples *= 4;
    const SynthesisResult again =
        synthesize(target, direct_cfg, table, rewrites);
    if (again.error < direct.error) direct = again;
  }
  out.t_direct = direct.sequence.t_count();
  out.err_direct = direct.error;
  return out;
}

}  // namespace tsyn::synth
