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

#include <optional>
#include <span>

#include "tsyn/core.hpp"
#include "tsyn/sampler.hpp"
#include "tsyn/tables.hpp"

namespace tsyn::synth {

struct SynthesisConfig {
  /// Per-tensor T caps; the outer loop grows the chain from min_tensors up
  /// to the full list.
  std::vector<int> t_budgets{10, 10, 10};
  int min_tensors = 1;
  std::size_t samples = 40000;  // k
  std::optional<double> epsilon;  // early-exit error threshold, in [0, 1)
  int attempts = 1;               // r; reattempts reseed in stochastic mode
  std::uint64_t rng_seed = 0;
  sampler::Mode mode = sampler::Mode::TopK;
  bool run_postprocess = true;
  double time_limit_seconds = 0.0;  // 0 = unlimited
};

struct SynthesisResult {
  GateSequence sequence;
  double error = 2.0;  // exact unitary distance of `sequence` to the target
  Unitary2 realized;
  int tensors_used = 0;
  std::size_t samples_evaluated = 0;
  /// With an epsilon configured: whether error < epsilon was reached.
  /// Without one there is nothing to miss and this is true.
  bool below_threshold = false;
};

/// One Synthesize() call: builds the MPS over the budget slices, draws k
/// candidates, picks the minimum-distance one (ties by cost order) and
/// post-processes it. A single-tensor chain always uses the deterministic
/// exhaustive path, which makes it an exact lookup.
SynthesisResult synthesize_inner(const Unitary2& target,
                                 std::span<const int> budgets, std::size_t k,
                                 const tables::UniqueTable& table,
                                 const tables::RewriteTable& rewrites,
                                 std::uint64_t seed,
                                 sampler::Mode mode = sampler::Mode::TopK,
                                 bool run_postprocess = true);

/// Step 3: shrink a sequence without changing its matrix (up to phase).
/// Alternates rewrite-table window substitution with canonicalization of
/// maximal Clifford runs until a fixpoint; cost never increases.
GateSequence postprocess(const GateSequence& seq,
                         const tables::RewriteTable& rewrites);

/// Outer loop: tensor counts ascend from min_tensors so cheap solutions are
/// preferred; returns early once error < epsilon when epsilon is given,
/// otherwise the best result over all iterations.
SynthesisResult synthesize(const Unitary2& target, const SynthesisConfig& cfg,
                           const tables::UniqueTable& table,
                           const tables::RewriteTable& rewrites);

/// Exhaustive argmax of the trace value over every index tuple. Oracle for
/// tests and benchmarks; throws TooLargeError beyond 1e8 tuples.
SynthesisResult brute_force_best(const Unitary2& target,
                                 std::span<const int> budgets,
                                 const tables::UniqueTable& table);

/// Paired harness: direct synthesis of a target vs. synthesizing its three
/// z-rotation factors (the Rz-H-Rz-H-Rz form) at epsilon/3 each, with the
/// direct run matched to the combined error actually achieved.
struct EconomyPair {
  double epsilon = 0.0;
  int t_direct = 0;
  double err_direct = 0.0;
  int t_three_rz = 0;
  double err_three_rz = 0.0;
};

EconomyPair economy_compare(const Unitary2& target, double epsilon,
                            const SynthesisConfig& base,
                            const tables::UniqueTable& table,
                            const tables::RewriteTable& rewrites);

}  // namespace tsyn::synth
