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
#include <span>
#include <vector>

#include "tsyn/core.hpp"
#include "tsyn/mps.hpp"
#include "tsyn/tables.hpp"

namespace tsyn::sampler {

enum class Mode {
  /// Perfect sampling: k i.i.d. draws from p(x) ∝ |t_x|^2 via chain-rule
  /// conditionals, drawn multinomially with per-branch multiplicities.
  Stochastic,
  /// Deterministic beam: keeps the k index prefixes of largest accumulated
  /// mass at every node; the final node ranks by true |amplitude|^2.
  TopK,
};

struct Options {
  Mode mode = Mode::Stochastic;
  std::uint64_t seed = 0;
  /// Conditional weights are raised to exponent/2 before normalization in
  /// stochastic mode (the joint matches |t|^exponent only at the default 2;
  /// other values are a heuristic knob). Ignored by TopK, whose ranking is
  /// monotone in |t| for any positive exponent.
  double exponent = 2.0;
};

struct SampleStats {
  std::uint64_t node_passes = 0;  // one pass over the branch set per node
  std::uint64_t weight_ops = 0;   // per-entry weight/amplitude evaluations
};

struct SampleBatch {
  std::size_t k = 0;          // tuples returned (TopK may return fewer than
                              // requested when the space is smaller)
  std::size_t tuple_len = 0;
  std::vector<std::uint32_t> indices;  // k rows of tuple_len physical indices
  std::vector<cplx> trace_values;      // per tuple, |.| <= 1 (normalized by 2)

  std::span<const std::uint32_t> tuple(std::size_t i) const {
    return {indices.data() + i * tuple_len, tuple_len};
  }
};

/// Step 2: draw k index tuples from a canonical MPS. Every tuple comes with
/// its trace value at no extra cost. Throws NotCanonicalError /
/// DegenerateDistributionError.
SampleBatch sample(const mps::Mps& m, std::size_t k, const Options& opts = {},
                   SampleStats* stats = nullptr);

/// Table slice behind one MPS node, for decoding physical indices back to
/// gate sequences.
struct SliceRef {
  const tables::UniqueTable* table = nullptr;
  std::size_t offset = 0;  // flat index of the slice's first entry
  std::size_t count = 0;
};

/// Concatenates per-node sequences in time order (node 0 first).
GateSequence decode(std::span<const std::uint32_t> tuple,
                    std::span<const SliceRef> slices);

/// Exact joint distribution p(x) = |t_x|^2 / Z computed through the
/// sampler's own conditional machinery (verification; small chains only).
std::vector<double> exact_distribution(const mps::Mps& m,
                                       std::size_t max_elems = 1u << 24);

}  // namespace tsyn::sampler
