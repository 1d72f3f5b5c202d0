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

#include "tsyn/errors.hpp"

namespace tsyn::kernels {

namespace {

Backend detect() { return avx2::available() ? Backend::Avx2 : Backend::Scalar; }

Backend& current() {
  static Backend b = detect();
  return b;
}

}  // namespace

Backend active_backend() { return current(); }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2::available()) {
    throw Error("AVX2 backend not available on this CPU");
  }
  current() = b;
}

void reset_backend() { current() = detect(); }

void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out) {
  if (current() == Backend::Avx2) {
    avx2::batch_frobenius(w, mats, n, out);
  } else {
    scalar::batch_frobenius(w, mats, n, out);
  }
}

void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w) {
  if (current() == Backend::Avx2) {
    avx2::branch_weights(node, p, A, B, v, w);
  } else {
    scalar::branch_weights(node, p, A, B, v, w);
  }
}

void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out) {
  if (current() == Backend::Avx2) {
    avx2::branch_amplitudes(node, p, A, v, out);
  } else {
    scalar::branch_amplitudes(node, p, A, v, out);
  }
}

}  // namespace tsyn::kernels
