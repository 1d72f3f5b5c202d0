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

namespace tsyn::kernels::scalar {

void batch_frobenius(const cplx* w, const cplx* mats, std::size_t n,
                     cplx* out) {
  // Work on raw doubles so the compiler is free to vectorize; std::complex
  // multiplication carries NaN-handling branches we do not want here.
  const double wr0 = w[0].real(), wi0 = w[0].imag();
  const double wr1 = w[1].real(), wi1 = w[1].imag();
  const double wr2 = w[2].real(), wi2 = w[2].imag();
  const double wr3 = w[3].real(), wi3 = w[3].imag();
  const double* m = reinterpret_cast<const double*>(mats);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = m + 8 * i;
    double re = wr0 * p[0] + wi0 * p[1] + wr1 * p[2] + wi1 * p[3] +
                wr2 * p[4] + wi2 * p[5] + wr3 * p[6] + wi3 * p[7];
    double im = wr0 * p[1] - wi0 * p[0] + wr1 * p[3] - wi1 * p[2] +
                wr2 * p[5] - wi2 * p[4] + wr3 * p[7] - wi3 * p[6];
    out[i] = cplx(re, im);
  }
}

void branch_weights(const cplx* node, std::size_t p, std::size_t A,
                    std::size_t B, const cplx* v, double* w) {
  const double* nd = reinterpret_cast<const double*>(node);
  const double* vd = reinterpret_cast<const double*>(v);
  for (std::size_t x = 0; x < p; ++x) {
    const double* base = nd + 2 * x * A * B;
    double acc = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
      double re = 0.0, im = 0.0;
      for (std::size_t a = 0; a < A; ++a) {
        const double vr = vd[2 * a], vi = vd[2 * a + 1];
        const double nr = base[2 * (a * B + b)];
        const double ni = base[2 * (a * B + b) + 1];
        re += vr * nr - vi * ni;
        im += vr * ni + vi * nr;
      }
      acc += re * re + im * im;
    }
    w[x] = acc;
  }
}

void branch_amplitudes(const cplx* node, std::size_t p, std::size_t A,
                       const cplx* v, cplx* out) {
  const double* nd = reinterpret_cast<const double*>(node);
  const double* vd = reinterpret_cast<const double*>(v);
  for (std::size_t x = 0; x < p; ++x) {
    const double* base = nd + 2 * x * A;
    double re = 0.0, im = 0.0;
    for (std::size_t a = 0; a < A; ++a) {
      const double vr = vd[2 * a], vi = vd[2 * a + 1];
      const double nr = base[2 * a], ni = base[2 * a + 1];
      re += vr * nr - vi * ni;
      im += vr * ni + vi * nr;
    }
    out[x] = cplx(re, im);
  }
}

}  // namespace tsyn::kernels::scalar
