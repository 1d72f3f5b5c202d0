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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "tsyn/core.hpp"
#include "tsyn/errors.hpp"
#include "tsyn/synth.hpp"
#include "tsyn/tables.hpp"

using namespace tsyn;
using synth::SynthesisConfig;
using synth::SynthesisResult;

namespace {

const tables::BuildResult& table6() {
  static const tables::BuildResult br = tables::enumerate_table(6);
  return br;
}

GateSequence random_concatenation(Rng& rng, int parts) {
  const auto& tbl = table6().table;
  GateSequence seq;
  for (int i = 0; i < parts; ++i) {
    const auto idx = static_cast<std::size_t>(rng.uniform() * tbl.size());
    seq.append(tbl.entry(idx).sequence);
  }
  return seq;
}

}  // namespace

TEST_CASE("postprocess rewrites the classic pairs") {
  const auto& rw = table6().rewrites;
  CHECK(synth::postprocess(GateSequence::from_str("TT"), rw).str() == "S");
  CHECK(synth::postprocess(GateSequence::from_str("HH"), rw).empty());
}

TEST_CASE("postprocess is safe, non-increasing and idempotent") {
  const auto& rw = table6().rewrites;
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const GateSequence in = random_concatenation(rng, 2 + trial % 3);
    const GateSequence out = synth::postprocess(in, rw);
    CHECK(distance(matrix_of(in), matrix_of(out)) < 1e-9);
    CHECK(cost_of(out) <= cost_of(in));
    const GateSequence again = synth::postprocess(out, rw);
    CHECK(again.gates == out.gates);
  }
}

TEST_CASE("exact table hits synthesize with zero error") {
  const auto& br = table6();
  const int budgets[] = {6};
  const SynthesisResult r = synth::synthesize_inner(
      gate_matrix(GateId::H), budgets, 16, br.table, br.rewrites, 0);
  CHECK(r.error < 1e-12);
  CHECK(r.sequence.str() == "H");
  CHECK(r.tensors_used == 1);
}

TEST_CASE("single tensor equals the lookup and brute-force oracles") {
  const auto& br = table6();
  Rng rng(77);
  const int budgets[] = {6};
  for (int i = 0; i < 20; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    const SynthesisResult inner = synth::synthesize_inner(
        u, budgets, 40000, br.table, br.rewrites, 0);
    const tables::LookupResult hit = tables::lookup_nearest(br.table, u);
    const SynthesisResult oracle = synth::brute_force_best(u, budgets, br.table);
    CHECK(inner.error == doctest::Approx(distance(u, hit.entry->matrix.m))
                             .epsilon(1e-12));
    CHECK(phase_equivalent(inner.realized, hit.entry->matrix.m, 1e-9));
    CHECK(phase_equivalent(oracle.realized, hit.entry->matrix.m, 1e-9));
  }
}

TEST_CASE("planted two-tensor products are recovered") {
  const auto& br = table6();
  Rng rng(123);
  const int budgets[] = {6, 6};
  for (int trial = 0; trial < 3; ++trial) {
    const auto i = static_cast<std::size_t>(rng.uniform() * br.table.size());
    const auto j = static_cast<std::size_t>(rng.uniform() * br.table.size());
    // Plant M_j * M_i: entry i acts first in time.
    const Unitary2 target = br.table.entry(j).matrix.m *
                            br.table.entry(i).matrix.m;
    const SynthesisResult r = synth::synthesize_inner(
        target, budgets, 40000, br.table, br.rewrites, 0);
    CHECK(r.error < 1e-9);

    const SynthesisResult oracle = synth::brute_force_best(target, budgets,
                                                           br.table);
    CHECK(oracle.error < 1e-9);
  }
}

TEST_CASE("outer loop: trivial targets and threshold exit") {
  const auto& br = table6();
  SynthesisConfig cfg;
  cfg.t_budgets = {6, 6};
  cfg.samples = 1000;

  const SynthesisResult id = synth::synthesize(Unitary2::identity(), cfg,
                                               br.table, br.rewrites);
  CHECK(id.error < 1e-12);
  CHECK(id.sequence.empty());
  CHECK(id.tensors_used == 1);

  // rz(pi/4) is T up to phase; an epsilon exit must happen at one tensor.
  SynthesisConfig cfg_eps = cfg;
  cfg_eps.epsilon = 1e-9;
  const SynthesisResult t = synth::synthesize(rz(std::numbers::pi / 4),
                                              cfg_eps, br.table, br.rewrites);
  CHECK(t.below_threshold);
  CHECK(t.error < 1e-9);
  CHECK(t.tensors_used == 1);
  CHECK(t.sequence.t_count() == 1);
  CHECK(t.sequence.str() == "T");
}

TEST_CASE("outer loop: monotone in the budget ladder, budgets respected") {
  const auto& br = table6();
  Rng rng(31);
  for (int i = 0; i < 5; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    SynthesisConfig one;
    one.t_budgets = {4};
    one.samples = 4000;
    SynthesisConfig two = one;
    two.t_budgets = {4, 4};
    const SynthesisResult r1 = synth::synthesize(u, one, br.table, br.rewrites);
    const SynthesisResult r2 = synth::synthesize(u, two, br.table, br.rewrites);
    CHECK(r2.error <= r1.error + 1e-12);
    CHECK(r1.sequence.t_count() <= 4);
    CHECK(r2.sequence.t_count() <= 8);
    CHECK(r2.below_threshold);  // no epsilon configured
  }
}

TEST_CASE("stochastic mode is deterministic per seed") {
  const auto& br = table6();
  const Unitary2 u = haar_random_unitary(9);
  SynthesisConfig cfg;
  cfg.t_budgets = {4, 4};
  cfg.samples = 2000;
  cfg.mode = sampler::Mode::Stochastic;
  cfg.rng_seed = 17;
  cfg.attempts = 3;
  const SynthesisResult a = synth::synthesize(u, cfg, br.table, br.rewrites);
  const SynthesisResult b = synth::synthesize(u, cfg, br.table, br.rewrites);
  CHECK(a.sequence.gates == b.sequence.gates);
  CHECK(a.error == b.error);
  CHECK(a.samples_evaluated == b.samples_evaluated);
}

TEST_CASE("brute force guards its search space") {
  const auto& br = table6();
  const int budgets[] = {6, 6, 6};  // 4560^3 tuples
  CHECK_THROWS_AS(
      (void)synth::brute_force_best(Unitary2::identity(), budgets, br.table),
      TooLargeError);
}

TEST_CASE("sampled search stays close to the exhaustive oracle") {
  const auto& br = table6();
  Rng rng(2718);
  const int budgets[] = {1, 1};  // 96 x 96, exhaustively coverable
  for (int i = 0; i < 10; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    const SynthesisResult oracle = synth::brute_force_best(u, budgets,
                                                           br.table);
    const SynthesisResult got = synth::synthesize_inner(
        u, budgets, 96 * 96, br.table, br.rewrites, 0);
    CHECK(oracle.error <= got.error + 1e-12);
    CHECK(got.error == doctest::Approx(oracle.error).epsilon(1e-9));
  }

  // Undersampled stochastic draws stay within 1.5x of the oracle almost
  // always; the oracle is never beaten.
  int close = 0;
  for (int i = 0; i < 100; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    const SynthesisResult oracle = synth::brute_force_best(u, budgets,
                                                           br.table);
    const SynthesisResult got = synth::synthesize_inner(
        u, budgets, 2000, br.table, br.rewrites, 99 + i,
        sampler::Mode::Stochastic);
    CHECK(oracle.error <= got.error + 1e-12);
    if (got.error <= 1.5 * oracle.error + 1e-12) ++close;
  }
  CHECK(close >= 95);
}

// Opt-in: several minutes of work. Mirrors the desk-scale claim that two
// t<=10 tensors with 40000 samples land around 1e-3, far below 0.01.
TEST_CASE("two t<=10 tensors reach median error well under 0.01" *
          doctest::skip(std::getenv("TSYN_SLOW_TESTS") == nullptr)) {
  const tables::BuildResult br = tables::enumerate_table(10);
  REQUIRE(br.table.size() == 73680);
  const int budgets[] = {10, 10};
  std::vector<double> errs;
  for (int i = 0; i < 10; ++i) {
    const Unitary2 u = haar_random_unitary(1000 + i);
    errs.push_back(synth::synthesize_inner(u, budgets, 40000, br.table,
                                           br.rewrites, 0)
                       .error);
  }
  std::sort(errs.begin(), errs.end());
  const double median = 0.5 * (errs[4] + errs[5]);
  MESSAGE("median error at [10,10]: ", median);
  CHECK(median <= 0.01);
}

TEST_CASE("time limit returns the best found so far") {
  const auto& br = table6();
  SynthesisConfig cfg;
  cfg.t_budgets = {4, 4, 4};
  cfg.samples = 1000;
  cfg.time_limit_seconds = 1e-9;  // expires right after the first attempt
  const Unitary2 u = haar_random_unitary(77);
  const SynthesisResult r = synth::synthesize(u, cfg, br.table, br.rewrites);
  CHECK(r.tensors_used == 1);
  CHECK(r.error < 1.0);
}

TEST_CASE("economy harness produces matched-error pairs") {
  const auto& br = table6();
  SynthesisConfig base;
  base.t_budgets = {6, 6, 6};
  base.samples = 20000;
  Rng rng(5);
  for (int i = 0; i < 2; ++i) {
    const Unitary2 u = haar_random_unitary(rng);
    const synth::EconomyPair pair =
        synth::economy_compare(u, 0.06, base, br.table, br.rewrites);
    CHECK(pair.t_three_rz > 0);
    CHECK(pair.err_three_rz < 0.06);
    CHECK(pair.err_direct <= pair.err_three_rz + 1e-12);
    CHECK(pair.t_direct < pair.t_three_rz);
  }
}
