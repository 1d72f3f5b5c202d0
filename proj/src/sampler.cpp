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

#include "tsyn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <unordered_set>

#include "tsyn/errors.hpp"
#include "tsyn/kernels.hpp"

namespace tsyn::sampler {

namespace {

struct Branch {
  std::uint32_t count = 1;  // multiplicity (stochastic mode)
  std::vector<std::uint32_t> path;
  std::vector<cplx> v;  // carried bond vector, unnormalized
};

// Contract a carried vector with one physical slice of a node.
std::vector<cplx> project(const mps::MpsNode& nd, const std::vector<cplx>& v,
                          std::uint32_t x) {
  std::vector<cplx> out(nd.b, 0.0);
  for (std::size_t bb = 0; bb < nd.b; ++bb) {
    cplx acc = 0.0;
    for (std::size_t aa = 0; aa < nd.a; ++aa) acc += v[aa] * nd.at(x, aa, bb);
    out[bb] = acc;
  }
  return out;
}

void apply_exponent(std::vector<double>& w, double exponent) {
  if (exponent == 2.0) return;
  const double half = exponent / 2.0;
  for (double& x : w) x = (x > 0.0) ? std::pow(x, half) : 0.0;
}

// Multinomial draw of `tokens` over unnormalized weights, by inverse CDF.
std::vector<std::pair<std::uint32_t, std::uint32_t>> multinomial(
    const std::vector<double>& w, std::uint32_t tokens, Rng& rng) {
  std::vector<double> cdf(w.size());
  double run = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    run += w[i];
    cdf[i] = run;
  }
  if (!(run > 0.0) || run < 1e-300) {
    throw DegenerateDistributionError("sampling mass vanished");
  }
  std::vector<std::uint32_t> counts(w.size(), 0);
  for (std::uint32_t t = 0; t < tokens; ++t) {
    const double u = rng.uniform() * run;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= w.size()) idx = w.size() - 1;
    counts[idx] += 1;
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) out.emplace_back(static_cast<std::uint32_t>(i), counts[i]);
  }
  return out;
}

// Candidate ordering for the beam: larger weight wins; ties prefer the
// earlier (branch, index) pair so results never depend on scan order.
struct Cand {
  double w;
  std::uint32_t branch;
  std::uint32_t x;
  cplx amp;              // last node only
  std::uint64_t fp = 0;  // carried-vector class (middle nodes only)
};

bool stronger(const Cand& a, const Cand& b) {
  if (a.w != b.w) return a.w > b.w;
  if (a.branch != b.branch) return a.branch < b.branch;
  return a.x < b.x;
}

// Phase-canonicalized, scale-normalized quantization of a carried vector.
// Prefixes whose products agree up to a global phase carry the same bond
// vector up to phase, so they collide here; prefixes with different
// futures do not.
std::uint64_t vector_class_fingerprint(const std::vector<cplx>& v) {
  double n2 = 0.0;
  double maxn = 0.0;
  for (const cplx& c : v) {
    n2 += std::norm(c);
    maxn = std::max(maxn, std::norm(c));
  }
  if (n2 <= 0.0) return 0;
  const double inv = 1.0 / std::sqrt(n2);
  cplx rot(1.0, 0.0);
  for (const cplx& c : v) {
    if (std::norm(c) >= 0.25 * maxn) {
      rot = std::conj(c) / std::abs(c);
      break;
    }
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto mix = [&h](double x) {
    const std::int64_t q = std::llround(x * 1e9);
    const auto* b = reinterpret_cast<const unsigned char*>(&q);
    for (int i = 0; i < 8; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  };
  for (const cplx& c : v) {
    const cplx z = c * rot * inv;
    mix(z.real());
    mix(z.imag());
  }
  return h;
}

// Keeps the k strongest candidates seen.
class TopKHeap {
 public:
  explicit TopKHeap(std::size_t k) : k_(k) {}

  void offer(const Cand& c) {
    if (heap_.size() < k_) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end(), stronger);
    } else if (stronger(c, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), stronger);
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end(), stronger);
    }
  }

  std::vector<Cand> take() {
    std::vector<Cand> out = std::move(heap_);
    std::sort(out.begin(), out.end(), stronger);
    return out;
  }

  double floor_weight() const {
    return heap_.size() < k_ ? -1.0 : heap_.front().w;
  }

 private:
  std::size_t k_;
  std::vector<Cand> heap_;  // min-heap under `stronger`
};

// Beam selection for non-terminal nodes: keeps the k strongest candidates
// with pairwise-distinct carried-vector classes. Without the dedup,
// gauge-equivalent prefixes (same product matrix via different indices)
// flood the beam with copies and collapse its effective width.
class DedupTopK {
 public:
  explicit DedupTopK(std::size_t k) : k_(k) {}

  // fp_fn materializes the candidate's carried-vector fingerprint; it is
  // only invoked once the cheap weight test passes.
  template <typename FpFn>
  void offer(Cand c, FpFn&& fp_fn) {
    if (heap_.size() == k_ && !stronger(c, heap_.front())) return;
    c.fp = fp_fn();
    // Scan order is ascending (branch, x), so an already-present class
    // member is the stronger tie and the newcomer is dropped.
    if (seen_.contains(c.fp)) return;
    if (heap_.size() < k_) {
      seen_.insert(c.fp);
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end(), stronger);
    } else {
      seen_.erase(heap_.front().fp);
      seen_.insert(c.fp);
      std::pop_heap(heap_.begin(), heap_.end(), stronger);
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end(), stronger);
    }
  }

  double floor_weight() const {
    return heap_.size() < k_ ? -1.0 : heap_.front().w;
  }

  std::vector<Cand> take() {
    std::vector<Cand> out = std::move(heap_);
    std::sort(out.begin(), out.end(), stronger);
    return out;
  }

 private:
  std::size_t k_;
  std::vector<Cand> heap_;  // min-heap under `stronger`
  std::unordered_set<std::uint64_t> seen_;
};

SampleBatch run_stochastic(const mps::Mps& m, std::size_t k,
                           const Options& opts, SampleStats& st) {
  const std::size_t l = m.length();
  Rng rng(opts.seed);
  SampleBatch out;
  out.tuple_len = l;

  std::vector<Branch> branches;
  {
    const mps::MpsNode& nd = m.nodes[0];
    const std::vector<cplx> unit{1.0};
    std::vector<double> w(nd.p);
    kernels::branch_weights(nd.data.data(), nd.p, nd.a, nd.b, unit.data(),
                            w.data());
    st.node_passes += 1;
    st.weight_ops += nd.p;
    apply_exponent(w, opts.exponent);
    if (l == 1) {
      // Single node: weights are |amplitude|^2 already.
      std::vector<cplx> amp(nd.p);
      kernels::branch_amplitudes(nd.data.data(), nd.p, nd.a, unit.data(),
                                 amp.data());
      for (auto [x, c] : multinomial(w, static_cast<std::uint32_t>(k), rng)) {
        for (std::uint32_t i = 0; i < c; ++i) {
          out.indices.push_back(x);
          out.trace_values.push_back(amp[x]);
        }
      }
      out.k = out.trace_values.size();
      return out;
    }
    for (auto [x, c] : multinomial(w, static_cast<std::uint32_t>(k), rng)) {
      Branch b;
      b.count = c;
      b.path = {x};
      b.v = project(nd, unit, x);
      branches.push_back(std::move(b));
    }
  }

  for (std::size_t i = 1; i + 1 < l; ++i) {
    const mps::MpsNode& nd = m.nodes[i];
    std::vector<Branch> next;
    std::vector<double> w(nd.p);
    for (const Branch& br : branches) {
      kernels::branch_weights(nd.data.data(), nd.p, nd.a, nd.b, br.v.data(),
                              w.data());
      st.weight_ops += nd.p;
      apply_exponent(w, opts.exponent);
      for (auto [x, c] : multinomial(w, br.count, rng)) {
        Branch b;
        b.count = c;
        b.path = br.path;
        b.path.push_back(x);
        b.v = project(nd, br.v, x);
        next.push_back(std::move(b));
      }
    }
    st.node_passes += 1;
    branches.swap(next);
  }

  {
    const mps::MpsNode& nd = m.nodes[l - 1];
    std::vector<cplx> amp(nd.p);
    std::vector<double> w(nd.p);
    for (const Branch& br : branches) {
      kernels::branch_amplitudes(nd.data.data(), nd.p, nd.a, br.v.data(),
                                 amp.data());
      st.weight_ops += nd.p;
      for (std::size_t x = 0; x < nd.p; ++x) w[x] = std::norm(amp[x]);
      apply_exponent(w, opts.exponent);
      for (auto [x, c] : multinomial(w, br.count, rng)) {
        for (std::uint32_t j = 0; j < c; ++j) {
          out.indices.insert(out.indices.end(), br.path.begin(),
                             br.path.end());
          out.indices.push_back(x);
          out.trace_values.push_back(amp[x]);
        }
      }
    }
    st.node_passes += 1;
  }
  out.k = out.trace_values.size();
  return out;
}

SampleBatch run_topk(const mps::Mps& m, std::size_t k, SampleStats& st) {
  const std::size_t l = m.length();
  SampleBatch out;
  out.tuple_len = l;

  std::vector<Branch> branches;
  {
    const mps::MpsNode& nd = m.nodes[0];
    const std::vector<cplx> unit{1.0};
    if (l == 1) {
      std::vector<cplx> amp(nd.p);
      kernels::branch_amplitudes(nd.data.data(), nd.p, nd.a, unit.data(),
                                 amp.data());
      st.node_passes += 1;
      st.weight_ops += nd.p;
      TopKHeap heap(k);
      for (std::size_t x = 0; x < nd.p; ++x) {
        heap.offer({std::norm(amp[x]), 0, static_cast<std::uint32_t>(x),
                    amp[x]});
      }
      for (const Cand& c : heap.take()) {
        out.indices.push_back(c.x);
        out.trace_values.push_back(c.amp);
      }
      out.k = out.trace_values.size();
      return out;
    }
    std::vector<double> w(nd.p);
    kernels::branch_weights(nd.data.data(), nd.p, nd.a, nd.b, unit.data(),
                            w.data());
    st.node_passes += 1;
    st.weight_ops += nd.p;
    TopKHeap heap(k);
    for (std::size_t x = 0; x < nd.p; ++x) {
      if (w[x] > 0.0) heap.offer({w[x], 0, static_cast<std::uint32_t>(x), 0.0});
    }
    auto kept = heap.take();
    std::sort(kept.begin(), kept.end(),
              [](const Cand& a, const Cand& b) { return a.x < b.x; });
    for (const Cand& c : kept) {
      Branch b;
      b.path = {c.x};
      b.v = project(nd, unit, c.x);
      branches.push_back(std::move(b));
    }
  }

  for (std::size_t i = 1; i + 1 < l; ++i) {
    const mps::MpsNode& nd = m.nodes[i];
    DedupTopK heap(k);
    std::vector<double> w(nd.p);
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
      kernels::branch_weights(nd.data.data(), nd.p, nd.a, nd.b,
                              branches[bi].v.data(), w.data());
      st.weight_ops += nd.p;
      for (std::size_t x = 0; x < nd.p; ++x) {
        if (w[x] > heap.floor_weight() && w[x] > 0.0) {
          heap.offer({w[x], static_cast<std::uint32_t>(bi),
                      static_cast<std::uint32_t>(x), 0.0, 0},
                     [&] {
                       return vector_class_fingerprint(
                           project(nd, branches[bi].v,
                                   static_cast<std::uint32_t>(x)));
                     });
        }
      }
    }
    st.node_passes += 1;
    auto kept = heap.take();
    std::sort(kept.begin(), kept.end(), [](const Cand& a, const Cand& b) {
      return std::tie(a.branch, a.x) < std::tie(b.branch, b.x);
    });
    std::vector<Branch> next;
    next.reserve(kept.size());
    for (const Cand& c : kept) {
      Branch b;
      b.path = branches[c.branch].path;
      b.path.push_back(c.x);
      b.v = project(nd, branches[c.branch].v, c.x);
      next.push_back(std::move(b));
    }
    branches.swap(next);
  }

  {
    const mps::MpsNode& nd = m.nodes[l - 1];
    TopKHeap heap(k);
    std::vector<cplx> amp(nd.p);
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
      kernels::branch_amplitudes(nd.data.data(), nd.p, nd.a,
                                 branches[bi].v.data(), amp.data());
      st.weight_ops += nd.p;
      const double floor = heap.floor_weight();
      for (std::size_t x = 0; x < nd.p; ++x) {
        const double w = std::norm(amp[x]);
        if (w > floor) {
          heap.offer({w, static_cast<std::uint32_t>(bi),
                      static_cast<std::uint32_t>(x), amp[x]});
        }
      }
    }
    st.node_passes += 1;
    for (const Cand& c : heap.take()) {
      out.indices.insert(out.indices.end(), branches[c.branch].path.begin(),
                         branches[c.branch].path.end());
      out.indices.push_back(c.x);
      out.trace_values.push_back(c.amp);
    }
  }
  out.k = out.trace_values.size();
  return out;
}

}  // namespace

SampleBatch sample(const mps::Mps& m, std::size_t k, const Options& opts,
                   SampleStats* stats) {
  if (!m.canonical) throw NotCanonicalError("MPS is not in canonical form");
  if (k < 1) throw InputError("sample count must be >= 1");
  if (m.length() == 0) throw DimensionMismatchError("empty MPS");
  SampleStats local;
  SampleStats& st = stats ? *stats : local;
  return opts.mode == Mode::Stochastic ? run_stochastic(m, k, opts, st)
                                       : run_topk(m, k, st);
}

GateSequence decode(std::span<const std::uint32_t> tuple,
                    std::span<const SliceRef> slices) {
  if (tuple.size() != slices.size()) {
    throw DimensionMismatchError("tuple length != slice count");
  }
  GateSequence seq;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const SliceRef& s = slices[i];
    if (tuple[i] >= s.count) throw InputError("physical index out of range");
    seq.append(s.table->entry(s.offset + tuple[i]).sequence);
  }
  return seq;
}

std::vector<double> exact_distribution(const mps::Mps& m,
                                       std::size_t max_elems) {
  if (!m.canonical) throw NotCanonicalError("MPS is not in canonical form");
  std::size_t total = 1;
  for (const auto& nd : m.nodes) {
    if (total > max_elems / nd.p) {
      throw TooLargeError("exact distribution too large");
    }
    total *= nd.p;
  }
  std::vector<double> out(total, 0.0);

  // Chain-rule enumeration: joint = prod of conditionals computed exactly
  // the way the sampler computes them.
  std::function<void(std::size_t, const std::vector<cplx>&, double,
                     std::size_t)>
      walk = [&](std::size_t node, const std::vector<cplx>& v, double prob,
                 std::size_t flat) {
        const mps::MpsNode& nd = m.nodes[node];
        const bool last = node + 1 == m.length();
        std::vector<double> w(nd.p);
        if (last) {
          std::vector<cplx> amp(nd.p);
          kernels::branch_amplitudes(nd.data.data(), nd.p, nd.a, v.data(),
                                     amp.data());
          for (std::size_t x = 0; x < nd.p; ++x) w[x] = std::norm(amp[x]);
        } else {
          kernels::branch_weights(nd.data.data(), nd.p, nd.a, nd.b, v.data(),
                                  w.data());
        }
        double z = 0.0;
        for (double x : w) z += x;
        if (z <= 0.0) return;
        for (std::size_t x = 0; x < nd.p; ++x) {
          if (w[x] <= 0.0) continue;
          const double px = prob * (w[x] / z);
          if (last) {
            out[flat + x] = px;
          } else {
            walk(node + 1, project(nd, v, static_cast<std::uint32_t>(x)), px,
                 (flat + x) * m.nodes[node + 1].p);
          }
        }
      };
  walk(0, {1.0}, 1.0, 0);
  return out;
}

}  // namespace tsyn::sampler
