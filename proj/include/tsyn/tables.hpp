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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tsyn/core.hpp"

namespace tsyn::tables {

/// Phase tolerance used for duplicate detection during enumeration.
inline constexpr double kDedupTol = 1e-9;

// ---------------------------------------------------------------------------
// Canonical matrices
// ---------------------------------------------------------------------------

/// A unitary with the global phase fixed: the first row-major entry with
/// magnitude > 1e-9 is real and positive. fingerprint is a stable
/// quantization (6 decimal digits, FNV-1a) of the canonical entries.
struct CanonicalMatrix {
  Unitary2 m;
  std::uint64_t fingerprint = 0;
};

CanonicalMatrix canonicalize(const Unitary2& u);
std::uint64_t fingerprint_of(const Unitary2& canonical);

// ---------------------------------------------------------------------------
// Table types
// ---------------------------------------------------------------------------

struct TableEntry {
  CanonicalMatrix matrix;
  GateSequence sequence;  // shortest known under the cost order
};

/// Per-T-count catalog of all phase-distinct Clifford+T matrices. Entries
/// are stacked contiguously in enumeration order (T count ascending); the
/// index into the stacked tensor is the physical index used by the MPS.
struct UniqueTable {
  int max_t = 0;
  std::vector<std::vector<TableEntry>> entries_by_t;
  std::vector<cplx> stacked;  // [size()][2][2] row-major

  std::size_t size() const { return stacked.size() / 4; }
  /// Cumulative number of entries with T count <= t (t < 0 gives 0).
  std::size_t count_through(int t) const;
  const TableEntry& entry(std::size_t flat_index) const;
  /// Matrix data for flat indices [begin, end).
  std::span<const cplx> stacked_span(std::size_t begin, std::size_t end) const;
};

/// Equivalent-sequence lookup harvested from enumeration collisions:
/// key (gate string) -> strictly cheaper phase-equivalent sequence.
struct RewriteTable {
  std::map<std::string, GateSequence> map;

  /// Records a collision between two sequences realizing the same matrix
  /// (up to phase). Keys longer than the cap are dropped.
  void consider(const GateSequence& a, const GateSequence& b);
  const GateSequence* find(const std::string& key) const;
  std::size_t size() const { return map.size(); }

  static constexpr std::size_t kMaxKeyLen = 16;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// The 24 phase-distinct Clifford matrices with minimal {H,S,X,Y,Z} words
/// under the cost order. Collisions seen during the search are recorded in
/// *rewrites when given.
std::vector<TableEntry> enumerate_cliffords(RewriteTable* rewrites = nullptr);

struct EnumerationConfig {
  /// Enumeration aborts with BudgetExceededError if the projected table
  /// memory exceeds this cap.
  std::size_t memory_cap_bytes = std::size_t{2} << 30;
};

struct BuildResult {
  UniqueTable table;
  RewriteTable rewrites;
};

/// Step 0: enumerate every phase-distinct Clifford+T matrix with exact T
/// count 0..max_t together with its shortest sequence. Cumulative counts
/// obey 24*(3*2^t - 2).
BuildResult enumerate_table(int max_t, const EnumerationConfig& cfg = {});

struct LookupResult {
  std::size_t index = 0;
  const TableEntry* entry = nullptr;
  double trace = 0.0;  // trace_value(target, entry matrix)
};

/// Entry maximizing trace_value(target, .) over the whole table; ties are
/// broken by the cost order.
LookupResult lookup_nearest(const UniqueTable& table, const Unitary2& target);

// ---------------------------------------------------------------------------
// Serialization (format: see README). Deterministic: re-serializing a
// loaded table is byte-identical.
// ---------------------------------------------------------------------------

void save_table(const UniqueTable& table, const RewriteTable& rewrites,
                const std::string& path);
BuildResult load_table(const std::string& path);

/// FNV-1a over a byte range; also used for the table file checksum.
std::uint64_t fnv1a(const void* data, std::size_t len,
                    std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace tsyn::tables
