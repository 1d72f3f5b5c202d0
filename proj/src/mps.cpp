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

#include "tsyn/mps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsyn/errors.hpp"

namespace tsyn::mps {

// ---------------------------------------------------------------------------
// SVD
// ---------------------------------------------------------------------------

namespace {

// Orthogonalizes the nc columns of b (nr x nc, row-major) in place with
// complex Hestenes rotations, accumulating them into j (nc x nc, row-major,
// starts as identity).
void jacobi_orthogonalize(std::vector<cplx>& b, std::size_t nr,
                          std::size_t nc, std::vector<cplx>& j) {
  constexpr double kOffTol = 1e-14;
  constexpr int kMaxSweeps = 60;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < nc; ++p) {
      for (std::size_t q = p + 1; q < nc; ++q) {
        double app = 0.0, aqq = 0.0;
        cplx apq = 0.0;
        for (std::size_t r = 0; r < nr; ++r) {
          const cplx bp = b[r * nc + p], bq = b[r * nc + q];
          app += std::norm(bp);
          aqq += std::norm(bq);
          apq += std::conj(bp) * bq;
        }
        const double scale = std::sqrt(app * aqq);
        if (scale == 0.0 || std::abs(apq) <= kOffTol * scale) continue;
        worst = std::max(worst, std::abs(apq) / scale);

        const double phi = std::arg(apq);
        const cplx ph = std::polar(1.0, -phi);  // e^{-i phi}
        const double g = std::abs(apq);
        const double zeta = (aqq - app) / (2.0 * g);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;

        for (std::size_t r = 0; r < nr; ++r) {
          const cplx bp = b[r * nc + p];
          const cplx bq = ph * b[r * nc + q];
          b[r * nc + p] = cs * bp - sn * bq;
          b[r * nc + q] = sn * bp + cs * bq;
        }
        for (std::size_t r = 0; r < nc; ++r) {
          const cplx jp = j[r * nc + p];
          const cplx jq = ph * j[r * nc + q];
          j[r * nc + p] = cs * jp - sn * jq;
          j[r * nc + q] = sn * jp + cs * jq;
        }
      }
    }
    if (worst <= kOffTol) return;
  }
  throw ConvergenceError("one-sided Jacobi SVD did not converge");
}

}  // namespace

SvdResult svd_small(const cplx* a, std::size_t m, std::size_t n,
                    double cutoff) {
  if (m == 0 || n == 0) throw DimensionMismatchError("svd of empty matrix");

  const bool wide = m <= n;
  // Columns to orthogonalize: A† (n x m) when wide, A itself when tall.
  const std::size_t nr = wide ? n : m;
  const std::size_t nc = wide ? m : n;

  std::vector<cplx> b(nr * nc);
  if (wide) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < m; ++c) b[r * nc + c] = std::conj(a[c * n + r]);
    }
  } else {
    b.assign(a, a + m * n);
  }

  std::vector<cplx> j(nc * nc, 0.0);
  for (std::size_t i = 0; i < nc; ++i) j[i * nc + i] = 1.0;

  jacobi_orthogonalize(b, nr, nc, j);

  std::vector<double> sig(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    double s2 = 0.0;
    for (std::size_t r = 0; r < nr; ++r) s2 += std::norm(b[r * nc + c]);
    sig[c] = std::sqrt(s2);
  }
  std::vector<std::size_t> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  const double smax = sig[order[0]];
  std::size_t r = 0;
  while (r < nc && sig[order[r]] > cutoff * smax && sig[order[r]] > 0.0) ++r;

  SvdResult out;
  out.m = m;
  out.n = n;
  out.r = r;
  out.s.resize(r);
  out.u.assign(m * r, 0.0);
  out.vt.assign(r * n, 0.0);

  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t c = order[k];
    out.s[k] = sig[c];
    const double inv = 1.0 / sig[c];
    if (wide) {
      // A = J Q†: U columns from J (exactly unitary), V† rows from Q.
      for (std::size_t i = 0; i < m; ++i) out.u[i * r + k] = j[i * nc + c];
      for (std::size_t i = 0; i < n; ++i) {
        out.vt[k * n + i] = std::conj(b[i * nc + c]) * inv;
      }
    } else {
      // A = Q J†: U columns from Q, V† rows from J's columns conjugated.
      for (std::size_t i = 0; i < m; ++i) out.u[i * r + k] = b[i * nc + c] * inv;
      for (std::size_t i = 0; i < n; ++i) {
        out.vt[k * n + i] = std::conj(j[i * nc + c]);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// MPS construction
// ---------------------------------------------------------------------------

Mps build_mps(std::span<const Slice> slices, const Unitary2& target,
              BuildStats* stats) {
  if (slices.empty()) throw DimensionMismatchError("build_mps needs >= 1 slice");
  for (const Slice& s : slices) {
    if (s.count == 0 || s.mats == nullptr) {
      throw DimensionMismatchError("malformed table slice");
    }
  }
  BuildStats local;
  BuildStats& st = stats ? *stats : local;

  const std::size_t l = slices.size();
  // Normalization by the dimension is folded into the attached target, so
  // amplitudes are trace values |Tr(U†V)|/2 directly.
  const Unitary2 w = cplx(0.5, 0.0) * target.adjoint();

  Mps out;
  out.nodes.resize(l);

  if (l == 1) {
    MpsNode& nd = out.nodes[0];
    const Slice& s = slices[0];
    nd.p = s.count;
    nd.a = nd.b = 1;
    nd.t_budget = s.t_budget;
    nd.data.resize(s.count);
    for (std::size_t x = 0; x < s.count; ++x) {
      const cplx* m = s.mats + 4 * x;
      // Tr(W M) over 2x2 row-major entries.
      nd.data[x] = w.e[0] * m[0] + w.e[1] * m[2] + w.e[2] * m[1] +
                   w.e[3] * m[3];
    }
    st.muladds += 4 * s.count;
    out.canonical = true;
    return out;
  }

  // Carried tensor T[x, a, c, b]: a = matrix column leg of the current
  // node's slice, c = the target leg being shifted to the front, b = bond
  // to the already-canonicalized right part.
  std::vector<cplx> carry;
  std::size_t cb = 1;  // current right-bond size

  {
    // Rightmost node absorbs W over the matrix row leg:
    //   T[x, a, c] = sum_j W[c, j] M_x[j, a].
    const Slice& s = slices[l - 1];
    carry.resize(s.count * 2 * 2 * 1);
    for (std::size_t x = 0; x < s.count; ++x) {
      const cplx* m = s.mats + 4 * x;
      for (int aa = 0; aa < 2; ++aa) {
        for (int c = 0; c < 2; ++c) {
          carry[(x * 2 + aa) * 2 + c] =
              w.at(c, 0) * m[0 * 2 + aa] + w.at(c, 1) * m[1 * 2 + aa];
        }
      }
    }
    st.muladds += 8 * s.count;
  }

  for (std::size_t i = l - 1; i >= 1; --i) {
    const std::size_t p = slices[i].count;
    // Reshape to (a*c) x (p*b) and split; the right factor becomes node i.
    const std::size_t rows = 2 * 2;
    const std::size_t cols = p * cb;
    std::vector<cplx> mat(rows * cols);
    for (std::size_t x = 0; x < p; ++x) {
      for (std::size_t aa = 0; aa < 2; ++aa) {
        for (std::size_t c = 0; c < 2; ++c) {
          for (std::size_t bb = 0; bb < cb; ++bb) {
            mat[(aa * 2 + c) * cols + x * cb + bb] =
                carry[((x * 2 + aa) * 2 + c) * cb + bb];
          }
        }
      }
    }
    const SvdResult svd = svd_small(mat.data(), rows, cols);
    st.svds += 1;
    st.muladds += 12 * rows * cols;  // sweep-dominated, proportional cost
    if (svd.r == 0) throw Error("MPS split produced an empty bond");

    MpsNode& nd = out.nodes[i];
    nd.p = p;
    nd.a = svd.r;
    nd.b = cb;
    nd.t_budget = slices[i].t_budget;
    nd.data.resize(p * svd.r * cb);
    for (std::size_t al = 0; al < svd.r; ++al) {
      for (std::size_t x = 0; x < p; ++x) {
        for (std::size_t bb = 0; bb < cb; ++bb) {
          nd.at(x, al, bb) = svd.vt[al * cols + x * cb + bb];
        }
      }
    }

    // Carry U * diag(s) into the next node to the left:
    //   T'[x, a', c, al] = sum_a M'_x[a, a'] * (U[(a,c), al] * s[al]).
    const Slice& left = slices[i - 1];
    std::vector<cplx> next(left.count * 2 * 2 * svd.r);
    for (std::size_t x = 0; x < left.count; ++x) {
      const cplx* m = left.mats + 4 * x;
      for (std::size_t ap = 0; ap < 2; ++ap) {
        for (std::size_t c = 0; c < 2; ++c) {
          for (std::size_t al = 0; al < svd.r; ++al) {
            cplx acc = 0.0;
            for (std::size_t aa = 0; aa < 2; ++aa) {
              acc += m[aa * 2 + ap] *
                     (svd.u[(aa * 2 + c) * svd.r + al] * svd.s[al]);
            }
            next[((x * 2 + ap) * 2 + c) * svd.r + al] = acc;
          }
        }
      }
    }
    st.muladds += left.count * 2 * 2 * svd.r * 2;
    carry.swap(next);
    cb = svd.r;
  }

  {
    // Leftmost node closes the trace: contract the carried target leg with
    // the remaining matrix column leg.
    const Slice& s = slices[0];
    MpsNode& nd = out.nodes[0];
    nd.p = s.count;
    nd.a = 1;
    nd.b = cb;
    nd.t_budget = s.t_budget;
    nd.data.resize(s.count * cb);
    for (std::size_t x = 0; x < s.count; ++x) {
      for (std::size_t bb = 0; bb < cb; ++bb) {
        nd.at(x, 0, bb) = carry[((x * 2 + 0) * 2 + 0) * cb + bb] +
                          carry[((x * 2 + 1) * 2 + 1) * cb + bb];
      }
    }
    st.muladds += 2 * s.count * cb;
  }

  out.canonical = true;
  return out;
}

// ---------------------------------------------------------------------------
// Verification helpers
// ---------------------------------------------------------------------------

cplx amplitude(const Mps& m, std::span<const std::uint32_t> tuple) {
  if (tuple.size() != m.length()) {
    throw DimensionMismatchError("tuple length != chain length");
  }
  std::vector<cplx> v{1.0};
  for (std::size_t i = 0; i < m.length(); ++i) {
    const MpsNode& nd = m.nodes[i];
    if (tuple[i] >= nd.p) throw InputError("physical index out of range");
    std::vector<cplx> nv(nd.b, 0.0);
    for (std::size_t bb = 0; bb < nd.b; ++bb) {
      cplx acc = 0.0;
      for (std::size_t aa = 0; aa < nd.a; ++aa) {
        acc += v[aa] * nd.at(tuple[i], aa, bb);
      }
      nv[bb] = acc;
    }
    v.swap(nv);
  }
  return v[0];
}

std::vector<cplx> full_contraction(const Mps& m, std::size_t max_elems) {
  std::size_t total = 1;
  for (const auto& nd : m.nodes) {
    if (total > max_elems / nd.p) throw TooLargeError("full contraction too large");
    total *= nd.p;
  }
  std::vector<cplx> out(total);
  std::vector<std::uint32_t> tuple(m.length(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t i = m.length(); i-- > 0;) {
      tuple[i] = static_cast<std::uint32_t>(rem % m.nodes[i].p);
      rem /= m.nodes[i].p;
    }
    out[idx] = amplitude(m, tuple);
  }
  return out;
}

double isometry_defect(const Mps& m) {
  double worst = 0.0;
  for (std::size_t i = 1; i < m.length(); ++i) {
    const MpsNode& nd = m.nodes[i];
    for (std::size_t a1 = 0; a1 < nd.a; ++a1) {
      for (std::size_t a2 = 0; a2 < nd.a; ++a2) {
        cplx acc = 0.0;
        for (std::size_t x = 0; x < nd.p; ++x) {
          for (std::size_t bb = 0; bb < nd.b; ++bb) {
            acc += nd.at(x, a1, bb) * std::conj(nd.at(x, a2, bb));
          }
        }
        const cplx expect = (a1 == a2) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        worst = std::max(worst, std::abs(acc - expect));
      }
    }
  }
  return worst;
}

}  // namespace tsyn::mps
