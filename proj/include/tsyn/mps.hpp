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

namespace tsyn::mps {

/// One chain tensor, stored row-major as [physical p][left bond a]
/// [right bond b]. Boundary nodes keep bond size 1 on the open side so the
/// representation is uniformly 3-dimensional.
struct MpsNode {
  std::vector<cplx> data;
  std::size_t p = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  int t_budget = 0;  // T budget of the table slice behind this node

  cplx& at(std::size_t x, std::size_t i, std::size_t j) {
    return data[(x * a + i) * b + j];
  }
  const cplx& at(std::size_t x, std::size_t i, std::size_t j) const {
    return data[(x * a + i) * b + j];
  }
};

/// Canonical-form chain: node 0 acts first in time; nodes 1..l-1 are
/// right-isometric after construction. The full contraction over bonds
/// equals Tr(target† · M(x_l) ··· M(x_1)) / 2 for every index tuple.
struct Mps {
  std::vector<MpsNode> nodes;
  bool canonical = false;

  std::size_t length() const { return nodes.size(); }
};

/// A [count, 2, 2] stack of candidate matrices (a view into a unique
/// table's stacked tensor).
struct Slice {
  const cplx* mats = nullptr;
  std::size_t count = 0;
  int t_budget = 0;
};

struct BuildStats {
  std::uint64_t muladds = 0;  // complex multiply-adds in contractions/SVDs
  int svds = 0;
};

/// Step 1: link the slices into a chain, attach the target and eliminate
/// the trace loop by sweeping SVDs right to left. No truncation happens;
/// bonds never exceed 4.
Mps build_mps(std::span<const Slice> slices, const Unitary2& target,
              BuildStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Small dense SVD
// ---------------------------------------------------------------------------

struct SvdResult {
  std::vector<cplx> u;   // m x r, row-major, column-isometric
  std::vector<double> s; // descending, nonnegative
  std::vector<cplx> vt;  // r x n, row-major, row-isometric
  std::size_t m = 0, n = 0, r = 0;
};

/// One-sided Jacobi SVD for the small rectangular reshapes used by
/// build_mps. Keeps every singular value above cutoff (relative to the
/// largest); throws ConvergenceError rather than returning silently wrong
/// factors.
SvdResult svd_small(const cplx* a, std::size_t m, std::size_t n,
                    double cutoff = 1e-14);

// ---------------------------------------------------------------------------
// Verification helpers (exponential in chain length; small inputs only)
// ---------------------------------------------------------------------------

/// Amplitude of one index tuple (tuple[i] indexes node i).
cplx amplitude(const Mps& m, std::span<const std::uint32_t> tuple);

/// All amplitudes, with node 0's index varying slowest. Throws if the full
/// tensor exceeds max_elems.
std::vector<cplx> full_contraction(const Mps& m,
                                   std::size_t max_elems = 1u << 24);

/// Max right-isometry defect over nodes 1..l-1 (0 for a chain of length 1).
double isometry_defect(const Mps& m);

}  // namespace tsyn::mps
