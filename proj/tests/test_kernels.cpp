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

#include <cmath>
#include <vector>

#include "tsyn/core.hpp"
#include "tsyn/kernels.hpp"

using namespace tsyn;
using kernels::cplx;

namespace {

std::vector<cplx> random_cplx(Rng& rng, std::size_t n) {
  std::vector<cplx> out(n);
  for (auto& c : out) c = cplx(rng.normal(), rng.normal());
  return out;
}

// Naive reference written independently of the kernel implementations.
cplx naive_frobenius(const cplx* w, const cplx* m) {
  cplx acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += std::conj(w[k]) * m[k];
  return acc;
}

double naive_weight(const cplx* node, std::size_t A, std::size_t B,
                    const cplx* v) {
  double acc = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < A; ++a) s += v[a] * node[a * B + b];
    acc += std::norm(s);
  }
  return acc;
}

}  // namespace

TEST_CASE("batch_frobenius matches the naive loop") {
  Rng rng(1);
  const std::size_t n = 257;
  const auto w = random_cplx(rng, 4);
  const auto mats = random_cplx(rng, 4 * n);
  std::vector<cplx> out(n);
  kernels::batch_frobenius(w.data(), mats.data(), n, out.data());
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ref = naive_frobenius(w.data(), mats.data() + 4 * i);
    CHECK(std::abs(out[i] - ref) < 1e-12 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("branch kernels match the naive loops") {
  Rng rng(2);
  for (std::size_t A : {1u, 2u, 3u, 4u}) {
    for (std::size_t B : {1u, 2u, 4u}) {
      const std::size_t p = 131;
      const auto node = random_cplx(rng, p * A * B);
      const auto v = random_cplx(rng, A);
      std::vector<double> w(p);
      kernels::branch_weights(node.data(), p, A, B, v.data(), w.data());
      for (std::size_t x = 0; x < p; ++x) {
        const double ref = naive_weight(node.data() + x * A * B, A, B, v.data());
        CHECK(w[x] == doctest::Approx(ref).epsilon(1e-12));
      }
    }
    const std::size_t p = 77;
    const auto node = random_cplx(rng, p * A);
    const auto v = random_cplx(rng, A);
    std::vector<cplx> amp(p);
    kernels::branch_amplitudes(node.data(), p, A, v.data(), amp.data());
    for (std::size_t x = 0; x < p; ++x) {
      cplx ref = 0.0;
      for (std::size_t a = 0; a < A; ++a) ref += v[a] * node[x * A + a];
      CHECK(std::abs(amp[x] - ref) < 1e-12 * (1.0 + std::abs(ref)));
    }
  }
}

TEST_CASE("scalar and AVX2 backends agree") {
  if (!kernels::avx2::available()) {
    MESSAGE("AVX2 unavailable; equivalence vacuous on this host");
    return;
  }
  Rng rng(3);
  const std::size_t n = 1000;
  const auto w = random_cplx(rng, 4);
  const auto mats = random_cplx(rng, 4 * n);
  std::vector<cplx> a(n), b(n);
  kernels::scalar::batch_frobenius(w.data(), mats.data(), n, a.data());
  kernels::avx2::batch_frobenius(w.data(), mats.data(), n, b.data());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(a[i] - b[i]) < 1e-13 * (1.0 + std::abs(a[i])));
  }

  for (std::size_t A : {1u, 2u, 4u}) {
    const std::size_t p = 513;
    const auto node = random_cplx(rng, p * A * 4);
    const auto v = random_cplx(rng, A);
    std::vector<double> ws(p), wa(p);
    kernels::scalar::branch_weights(node.data(), p, A, 4, v.data(), ws.data());
    kernels::avx2::branch_weights(node.data(), p, A, 4, v.data(), wa.data());
    for (std::size_t x = 0; x < p; ++x) {
      CHECK(ws[x] == doctest::Approx(wa[x]).epsilon(1e-13));
    }
  }
  {
    const std::size_t p = 513;
    const auto node = random_cplx(rng, p * 4);
    const auto v = random_cplx(rng, 4);
    std::vector<cplx> as(p), aa(p);
    kernels::scalar::branch_amplitudes(node.data(), p, 4, v.data(), as.data());
    kernels::avx2::branch_amplitudes(node.data(), p, 4, v.data(), aa.data());
    for (std::size_t x = 0; x < p; ++x) {
      CHECK(std::abs(as[x] - aa[x]) < 1e-13 * (1.0 + std::abs(as[x])));
    }
  }
}

TEST_CASE("backend dispatch can be forced") {
  const auto original = kernels::active_backend();
  kernels::force_backend(kernels::Backend::Scalar);
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  kernels::reset_backend();
  CHECK(kernels::active_backend() == original);
}
