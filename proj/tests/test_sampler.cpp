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
#include <map>
#include <vector>

#include "stats_util.hpp"
#include "tsyn/core.hpp"
#include "tsyn/errors.hpp"
#include "tsyn/mps.hpp"
#include "tsyn/sampler.hpp"
#include "tsyn/tables.hpp"

using namespace tsyn;
using tsyn::mps::Slice;
using tsyn::sampler::Mode;
using tsyn::sampler::Options;
using tsyn::sampler::SliceRef;

namespace {

struct Fixture {
  tables::BuildResult br;
  std::vector<Slice> slices;
  std::vector<SliceRef> refs;

  Fixture(int max_t, std::size_t n_nodes) : br(tables::enumerate_table(max_t)) {
    const Slice s{br.table.stacked.data(), br.table.size(), max_t};
    const SliceRef r{&br.table, 0, br.table.size()};
    for (std::size_t i = 0; i < n_nodes; ++i) {
      slices.push_back(s);
      refs.push_back(r);
    }
  }
};

}  // namespace

TEST_CASE("sampling requires a canonical MPS") {
  mps::Mps m;
  m.nodes.resize(1);
  m.nodes[0].p = 1;
  m.nodes[0].a = m.nodes[0].b = 1;
  m.nodes[0].data = {cplx(1.0, 0.0)};
  m.canonical = false;
  CHECK_THROWS_AS((void)sampler::sample(m, 1), NotCanonicalError);
}

TEST_CASE("fixed seed reproduces the batch") {
  Fixture fx(1, 2);
  const Unitary2 u = haar_random_unitary(31);
  const auto chain = mps::build_mps(fx.slices, u);
  Options opts;
  opts.seed = 5;
  const auto b1 = sampler::sample(chain, 5, opts);
  const auto b2 = sampler::sample(chain, 5, opts);
  CHECK(b1.indices == b2.indices);
  CHECK(b1.trace_values == b2.trace_values);
  CHECK(b1.k == 5);
}

TEST_CASE("returned trace values match direct evaluation") {
  Fixture fx(1, 2);
  Rng rng(8);
  const Unitary2 u = haar_random_unitary(rng);
  const auto chain = mps::build_mps(fx.slices, u);
  for (Mode mode : {Mode::Stochastic, Mode::TopK}) {
    Options opts;
    opts.mode = mode;
    opts.seed = 77;
    const auto batch = sampler::sample(chain, 200, opts);
    for (std::size_t i = 0; i < batch.k; ++i) {
      const GateSequence seq = sampler::decode(batch.tuple(i), fx.refs);
      const double direct = trace_value(u, matrix_of(seq));
      CHECK(std::abs(batch.trace_values[i]) ==
            doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("decode concatenates per-node sequences in time order") {
  Fixture fx(1, 2);
  // Locate the identity and the single-gate entries.
  std::uint32_t id_idx = 0, t_idx = 0, h_idx = 0;
  for (std::uint32_t i = 0; i < fx.br.table.size(); ++i) {
    const auto& seq = fx.br.table.entry(i).sequence;
    if (seq.empty()) id_idx = i;
    if (seq.str() == "T") t_idx = i;
    if (seq.str() == "H") h_idx = i;
  }
  {
    const std::vector<std::uint32_t> tup{id_idx, id_idx};
    CHECK(sampler::decode(tup, fx.refs).empty());
  }
  {
    const std::vector<std::uint32_t> tup{t_idx, h_idx};
    CHECK(sampler::decode(tup, fx.refs).str() == "TH");
  }
  {
    const std::vector<std::uint32_t> bad{static_cast<std::uint32_t>(
                                             fx.br.table.size()),
                                         0};
    CHECK_THROWS_AS((void)sampler::decode(bad, fx.refs), InputError);
  }
}

TEST_CASE("exact hit dominates single-node sampling") {
  Fixture fx(2, 1);
  const auto chain =
      mps::build_mps(fx.slices, gate_matrix(GateId::T));
  Options opts;
  opts.seed = 3;
  const auto batch = sampler::sample(chain, 10000, opts);
  std::map<std::uint32_t, int> freq;
  for (std::size_t i = 0; i < batch.k; ++i) freq[batch.tuple(i)[0]] += 1;
  const auto most = std::max_element(
      freq.begin(), freq.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  CHECK(fx.br.table.entry(most->first).sequence.str() == "T");
}

TEST_CASE("implied distribution equals |t|^2 / Z") {
  Fixture fx(0, 2);  // 24 x 24
  Rng rng(12);
  const Unitary2 u = haar_random_unitary(rng);
  const auto chain = mps::build_mps(fx.slices, u);
  const auto implied = sampler::exact_distribution(chain);
  const auto amps = mps::full_contraction(chain);
  double z = 0.0;
  for (const cplx& a : amps) z += std::norm(a);
  REQUIRE(implied.size() == amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    CHECK(std::abs(implied[i] - std::norm(amps[i]) / z) < 1e-9);
  }
}

TEST_CASE("two-node empirical frequencies pass chi-square") {
  Fixture fx(1, 2);
  const Unitary2 u = haar_random_unitary(1001);
  const auto chain = mps::build_mps(fx.slices, u);

  const auto amps = mps::full_contraction(chain);
  double z = 0.0;
  for (const cplx& a : amps) z += std::norm(a);
  std::vector<double> prob(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) prob[i] = std::norm(amps[i]) / z;

  Options opts;
  opts.seed = 2024;
  const std::size_t k = 200000;
  const auto batch = sampler::sample(chain, k, opts);
  REQUIRE(batch.k == k);
  std::vector<std::uint64_t> counts(amps.size(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto t = batch.tuple(i);
    counts[t[0] * 96 + t[1]] += 1;
  }
  const auto res = test_stats::chi2_test(counts, prob, k);
  INFO("chi2 = ", res.stat, " critical(0.01) = ", res.critical99);
  CHECK(res.pass);
}

TEST_CASE("topk returns the strongest tuples in order") {
  Fixture fx(2, 1);
  Rng rng(9);
  const Unitary2 u = haar_random_unitary(rng);
  const auto chain = mps::build_mps(fx.slices, u);
  Options opts;
  opts.mode = Mode::TopK;
  const auto batch = sampler::sample(chain, 10, opts);
  REQUIRE(batch.k == 10);
  for (std::size_t i = 1; i < batch.k; ++i) {
    CHECK(std::abs(batch.trace_values[i]) <=
          std::abs(batch.trace_values[i - 1]) + 1e-12);
  }
  // Head of the ranking equals the lookup argmax.
  const auto hit = tables::lookup_nearest(fx.br.table, u);
  CHECK(hit.index == batch.tuple(0)[0]);

  // Asking for more tuples than the space holds returns the whole space.
  const auto all = sampler::sample(chain, 10 * fx.br.table.size(), opts);
  CHECK(all.k == fx.br.table.size());
}

TEST_CASE("one pass per node and O(p k l) work") {
  Fixture fx(1, 3);
  const Unitary2 u = haar_random_unitary(55);
  const auto chain = mps::build_mps(fx.slices, u);
  const std::size_t k = 500;
  for (Mode mode : {Mode::Stochastic, Mode::TopK}) {
    Options opts;
    opts.mode = mode;
    opts.seed = 4;
    sampler::SampleStats st;
    (void)sampler::sample(chain, k, opts, &st);
    CHECK(st.node_passes == 3);
    const std::size_t p = fx.br.table.size();
    CHECK(st.weight_ops <= 3 * std::max(k, p) * p);
  }
}

TEST_CASE("exponent knob biases stochastic draws") {
  Fixture fx(1, 1);
  const Unitary2 u = haar_random_unitary(21);
  const auto chain = mps::build_mps(fx.slices, u);
  Options flat;
  flat.seed = 6;
  flat.exponent = 0.0;  // uniform over nonzero-weight entries
  const auto batch = sampler::sample(chain, 20000, flat);
  std::vector<std::uint64_t> counts(fx.br.table.size(), 0);
  for (std::size_t i = 0; i < batch.k; ++i) counts[batch.tuple(i)[0]] += 1;
  std::uint64_t nonzero = 0;
  for (auto c : counts) nonzero += (c > 0);
  // At exponent 0 nearly every entry should be visited.
  CHECK(nonzero > fx.br.table.size() * 9 / 10);
}
