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

#include <complex>
#include <cstddef>

// Data-parallel inner loops shared by the table lookup, the brute-force
// oracle and the MPS sampler. Each kernel has a scalar reference
// implementation and an AVX2 variant; the variant actually used is selected
// once at runtime from CPU capabilities. All layouts are interleaved
// complex<double> (re, im), row-major.

namespace tsyn::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

/// Backend chosen by CPU detection (or overridden via force_backend).
Backend active_backend();

/// Test hook: force a specific backend. Throws if the requested backend is
/// unavailable on this CPU.
void force_backend(Backend b);
void reset_backend();

/// out[i] = sum_k conj(w[k]) * mats[4*i + k]  (= Tr(W† M_i) for 2x2
/// row-major W, M_i).
void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out);

/// Weights of a non-terminal MPS node against a carried bond vector:
///   w[x] = sum_b | sum_a v[a] * node[(x*A + a)*B + b] |^2
/// for x in [0, p). A and B are the left/right bond sizes (<= 4).
void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w);

/// Amplitudes of a terminal MPS node (right bond 1):
///   out[x] = sum_a v[a] * node[x*A + a].
void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out);

namespace scalar {
void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out);
void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w);
void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out);
}  // namespace scalar

namespace avx2 {
bool available();
void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out);
void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w);
void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out);
}  // namespace avx2

}  // namespace tsyn::kernels
