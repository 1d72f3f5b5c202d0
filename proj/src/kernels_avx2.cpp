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

#include "tsyn/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define TSYN_X86 1
#include <immintrin.h>
#else
#define TSYN_X86 0
#endif

namespace tsyn::kernels::avx2 {

#if TSYN_X86

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#define TSYN_AVX2 __attribute__((target("avx2,fma")))

namespace {

// Horizontal sum of 4 doubles.
TSYN_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Lanes hold two interleaved complex values [re0, im0, re1, im1]; reduce to
// a single complex.
TSYN_AVX2 inline cplx creduce(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  alignas(16) double tmp[2];
  _mm_store_pd(tmp, lo);
  return {tmp[0], tmp[1]};
}

}  // namespace

TSYN_AVX2
void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out) {
  const double* wd = reinterpret_cast<const double*>(w);
  const double* m = reinterpret_cast<const double*>(mats);
  // conj(w)*z: even lanes wr*zr + wi*zi, odd lanes wr*zi - wi*zr.
  const __m256d wr01 = _mm256_set_pd(wd[2], wd[2], wd[0], wd[0]);
  const __m256d wi01 = _mm256_set_pd(wd[3], wd[3], wd[1], wd[1]);
  const __m256d wr23 = _mm256_set_pd(wd[6], wd[6], wd[4], wd[4]);
  const __m256d wi23 = _mm256_set_pd(wd[7], wd[7], wd[5], wd[5]);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = m + 8 * i;
    const __m256d m01 = _mm256_loadu_pd(p);
    const __m256d m23 = _mm256_loadu_pd(p + 4);
    const __m256d s01 = _mm256_permute_pd(m01, 0x5);
    const __m256d s23 = _mm256_permute_pd(m23, 0x5);
    const __m256d a01 =
        _mm256_fmsubadd_pd(wr01, m01, _mm256_mul_pd(wi01, s01));
    const __m256d a23 =
        _mm256_fmsubadd_pd(wr23, m23, _mm256_mul_pd(wi23, s23));
    out[i] = creduce(_mm256_add_pd(a01, a23));
  }
}

TSYN_AVX2
static void branch_weights_b4(const double* nd, std::size_t p, std::size_t A,
                              const double* vd, double* w) {
  for (std::size_t x = 0; x < p; ++x) {
    const double* base = nd + 8 * x * A;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t a = 0; a < A; ++a) {
      const __m256d vr = _mm256_set1_pd(vd[2 * a]);
      const __m256d vi = _mm256_set1_pd(vd[2 * a + 1]);
      const __m256d r0 = _mm256_loadu_pd(base + 8 * a);
      const __m256d r1 = _mm256_loadu_pd(base + 8 * a + 4);
      // v*z: even lanes vr*zr - vi*zi, odd lanes vr*zi + vi*zr.
      acc0 = _mm256_add_pd(
          acc0, _mm256_fmaddsub_pd(
                    vr, r0, _mm256_mul_pd(vi, _mm256_permute_pd(r0, 0x5))));
      acc1 = _mm256_add_pd(
          acc1, _mm256_fmaddsub_pd(
                    vr, r1, _mm256_mul_pd(vi, _mm256_permute_pd(r1, 0x5))));
    }
    const __m256d sq =
        _mm256_fmadd_pd(acc0, acc0, _mm256_mul_pd(acc1, acc1));
    w[x] = hsum(sq);
  }
}

TSYN_AVX2
void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w) {
  const double* nd = reinterpret_cast<const double*>(node);
  const double* vd = reinterpret_cast<const double*>(v);
  if (B == 4) {
    branch_weights_b4(nd, p, A, vd, w);
    return;
  }
  scalar::branch_weights(node, p, A, B, v, w);
}

TSYN_AVX2
static void branch_amplitudes_a4(const double* nd, std::size_t p,
                                 const double* vd, cplx* out) {
  const __m256d vr01 = _mm256_set_pd(vd[2], vd[2], vd[0], vd[0]);
  const __m256d vi01 = _mm256_set_pd(vd[3], vd[3], vd[1], vd[1]);
  const __m256d vr23 = _mm256_set_pd(vd[6], vd[6], vd[4], vd[4]);
  const __m256d vi23 = _mm256_set_pd(vd[7], vd[7], vd[5], vd[5]);
  for (std::size_t x = 0; x < p; ++x) {
    const double* base = nd + 8 * x;
    const __m256d n01 = _mm256_loadu_pd(base);
    const __m256d n23 = _mm256_loadu_pd(base + 4);
    const __m256d a01 = _mm256_fmaddsub_pd(
        vr01, n01, _mm256_mul_pd(vi01, _mm256_permute_pd(n01, 0x5)));
    const __m256d a23 = _mm256_fmaddsub_pd(
        vr23, n23, _mm256_mul_pd(vi23, _mm256_permute_pd(n23, 0x5)));
    out[x] = creduce(_mm256_add_pd(a01, a23));
  }
}

TSYN_AVX2
void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out) {
  if (A == 4) {
    branch_amplitudes_a4(reinterpret_cast<const double*>(node), p,
                         reinterpret_cast<const double*>(v), out);
    return;
  }
  scalar::branch_amplitudes(node, p, A, v, out);
}

#else  // !TSYN_X86

bool available() { return false; }

void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out) {
  scalar::batch_frobenius(w, mats, n, out);
}
void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w) {
  scalar::branch_weights(node, p, A, B, v, w);
}
void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out) {
  scalar::branch_amplitudes(node, p, A, v, out);
}

#endif  // TSYN_X86

}  // namespace tsyn::kernels::avx2
