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

#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <tuple>

#include "tsyn/core.hpp"
#include "tsyn/errors.hpp"
#include "tsyn/tables.hpp"

using namespace tsyn;
using namespace tsyn::tables;

namespace {

std::size_t formula(int t) { return 24u * ((std::size_t{3} << t) - 2u); }

// Independent oracle: plain Dijkstra over raw gate words under the cost
// order, tracking one representative cost per phase class. Shares nothing
// with the enumeration path except the core gate constants.
std::map<std::uint64_t, std::pair<SeqCost, Unitary2>> bfs_costs(int max_t) {
  struct Item {
    SeqCost cost;
    std::string word;
    bool operator>(const Item& o) const {
      return std::tie(cost, word) > std::tie(o.cost, o.word);
    }
  };
  std::map<std::uint64_t, std::pair<SeqCost, Unitary2>> best;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> q;
  q.push({SeqCost{}, ""});
  while (!q.empty()) {
    const Item it = q.top();
    q.pop();
    const GateSequence seq = GateSequence::from_str(it.word);
    const Unitary2 m = matrix_of(seq);
    const CanonicalMatrix cm = canonicalize(m);
    // Key by fingerprint; resolve rare bucket collisions by trace check.
    auto found = best.find(cm.fingerprint);
    if (found != best.end() &&
        trace_value(found->second.second, cm.m) > 1.0 - 1e-9) {
      continue;  // already reached cheaper (pop order)
    }
    best[cm.fingerprint] = {it.cost, cm.m};
    for (GateId g : kAllGates) {
      Item next{it.cost, it.word + gate_char(g)};
      next.cost.len += 1;
      if (g == GateId::T) {
        if (++next.cost.t > max_t) continue;
      } else if (!is_pauli(g)) {
        next.cost.sh += 1;
      }
      q.push(next);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("clifford enumeration") {
  RewriteTable rw;
  const auto cliffs = enumerate_cliffords(&rw);
  REQUIRE(cliffs.size() == 24);
  bool found_identity = false, found_h = false;
  for (const auto& e : cliffs) {
    CHECK(e.sequence.t_count() == 0);
    CHECK(phase_equivalent(matrix_of(e.sequence), e.matrix.m, 1e-10));
    if (e.sequence.empty() &&
        phase_equivalent(e.matrix.m, Unitary2::identity())) {
      found_identity = true;
    }
    if (e.sequence.str() == "H") found_h = true;
  }
  CHECK(found_identity);
  CHECK(found_h);
  CHECK(rw.size() > 0);
}

TEST_CASE("counting law through t=3 and entry invariants") {
  const BuildResult br = enumerate_table(3);
  std::size_t cum = 0;
  for (int t = 0; t <= 3; ++t) {
    cum += br.table.entries_by_t[t].size();
    CHECK(cum == formula(t));
  }
  for (int t = 0; t <= 3; ++t) {
    for (const auto& e : br.table.entries_by_t[t]) {
      CHECK(e.sequence.t_count() == t);
      CHECK(distance(matrix_of(e.sequence), e.matrix.m) < 1e-10);
      CHECK(e.matrix.m.unitarity_defect() < 1e-12);
    }
  }
}

TEST_CASE("closure under products within budget") {
  const BuildResult br = enumerate_table(3);
  const auto& tbl = br.table;
  Rng rng(17);
  // Random pairs with total T <= 3 must land back on the table.
  const std::size_t n = tbl.size();
  int checked = 0;
  while (checked < 300) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform() * n);
    const std::size_t j = static_cast<std::size_t>(rng.uniform() * n);
    const auto& a = tbl.entry(i);
    const auto& b = tbl.entry(j);
    if (a.sequence.t_count() + b.sequence.t_count() > 3) continue;
    const LookupResult hit = lookup_nearest(tbl, a.matrix.m * b.matrix.m);
    CHECK(distance(hit.entry->matrix.m, a.matrix.m * b.matrix.m) < 1e-9);
    ++checked;
  }
}

TEST_CASE("sequences are minimal under the cost order (BFS oracle)") {
  const int max_t = 4;
  const BuildResult br = enumerate_table(max_t);
  const auto oracle = bfs_costs(max_t);
  std::size_t matched = 0;
  for (int t = 0; t <= max_t; ++t) {
    for (const auto& e : br.table.entries_by_t[t]) {
      const auto it = oracle.find(e.matrix.fingerprint);
      REQUIRE(it != oracle.end());
      CHECK(cost_of(e.sequence) == it->second.first);
      ++matched;
    }
  }
  CHECK(matched == formula(max_t));
}

TEST_CASE("rewrite table values are cheaper and phase-equivalent") {
  const BuildResult br = enumerate_table(3);
  CHECK(br.rewrites.size() > 0);
  for (const auto& [key, val] : br.rewrites.map) {
    const GateSequence k = GateSequence::from_str(key);
    CHECK(k.size() <= RewriteTable::kMaxKeyLen);
    CHECK(cost_of(val) < cost_of(k));
    CHECK(distance(matrix_of(k), matrix_of(val)) < 1e-10);
  }
}

TEST_CASE("lookup_nearest agrees with a linear-scan oracle") {
  const BuildResult br = enumerate_table(6);
  const auto& tbl = br.table;
  REQUIRE(tbl.size() == 4560);

  const LookupResult t_hit = lookup_nearest(tbl, gate_matrix(GateId::T));
  CHECK(t_hit.entry->sequence.str() == "T");
  CHECK(distance(t_hit.entry->matrix.m, gate_matrix(GateId::T)) < 1e-12);

  Rng rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const Unitary2 u = haar_random_unitary(rng);
    // Independent scan: straight loop over entries, no kernels.
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < tbl.size(); ++i) {
      const double tv = trace_value(u, tbl.entry(i).matrix.m);
      if (tv > best) {
        best = tv;
        best_i = i;
      }
    }
    const LookupResult hit = lookup_nearest(tbl, u);
    CHECK(hit.trace == doctest::Approx(best).epsilon(1e-12));
    CHECK(phase_equivalent(hit.entry->matrix.m, tbl.entry(best_i).matrix.m));
  }

  // A table matrix looks itself up with distance 0.
  const auto& some = tbl.entry(1234);
  const LookupResult self = lookup_nearest(tbl, some.matrix.m);
  CHECK(distance(self.entry->matrix.m, some.matrix.m) < 1e-12);
}

TEST_CASE("serialization round-trip and corruption") {
  const BuildResult br = enumerate_table(3);
  const std::string path = "test_table_t3.tsyn";
  save_table(br.table, br.rewrites, path);

  const BuildResult loaded = load_table(path);
  CHECK(loaded.table.max_t == 3);
  CHECK(loaded.table.size() == br.table.size());
  CHECK(loaded.rewrites.size() == br.rewrites.size());
  for (std::size_t i = 0; i < br.table.size(); ++i) {
    CHECK(loaded.table.entry(i).matrix.m.e == br.table.entry(i).matrix.m.e);
    CHECK(loaded.table.entry(i).sequence.gates ==
          br.table.entry(i).sequence.gates);
  }

  // Byte-identical re-serialization.
  const std::string path2 = "test_table_t3_resave.tsyn";
  save_table(loaded.table, loaded.rewrites, path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  CHECK(!b1.empty());

  // Truncation.
  {
    std::ofstream t("test_table_trunc.tsyn", std::ios::binary);
    t.write(b1.data(), static_cast<std::streamsize>(b1.size() / 2));
  }
  CHECK_THROWS_AS((void)load_table("test_table_trunc.tsyn"),
                  CorruptTableError);

  // Bad magic.
  {
    std::string bad = b1;
    bad[0] = 'X';
    std::ofstream t("test_table_magic.tsyn", std::ios::binary);
    t.write(bad.data(), static_cast<std::streamsize>(bad.size()));
  }
  CHECK_THROWS_AS((void)load_table("test_table_magic.tsyn"),
                  CorruptTableError);

  // Flipped payload byte -> checksum mismatch.
  {
    std::string bad = b1;
    bad[bad.size() / 2] ^= 0x40;
    std::ofstream t("test_table_flip.tsyn", std::ios::binary);
    t.write(bad.data(), static_cast<std::streamsize>(bad.size()));
  }
  CHECK_THROWS_AS((void)load_table("test_table_flip.tsyn"), CorruptTableError);

  // Unsupported version (patch the field and refresh the checksum).
  {
    std::string bad = b1;
    bad[4] = 9;
    const std::uint64_t sum = fnv1a(bad.data(), bad.size() - 8);
    for (int i = 0; i < 8; ++i) {
      bad[bad.size() - 8 + i] = static_cast<char>((sum >> (8 * i)) & 0xff);
    }
    std::ofstream t("test_table_version.tsyn", std::ios::binary);
    t.write(bad.data(), static_cast<std::streamsize>(bad.size()));
  }
  CHECK_THROWS_AS((void)load_table("test_table_version.tsyn"), VersionError);

  for (const char* p :
       {"test_table_t3.tsyn", "test_table_t3_resave.tsyn",
        "test_table_trunc.tsyn", "test_table_magic.tsyn",
        "test_table_flip.tsyn", "test_table_version.tsyn"}) {
    std::remove(p);
  }
}

TEST_CASE("memory budget guard") {
  EnumerationConfig cfg;
  cfg.memory_cap_bytes = 1 << 20;
  CHECK_THROWS_AS((void)enumerate_table(14, cfg), BudgetExceededError);
}
