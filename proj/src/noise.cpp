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

#include "tsyn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tsyn/errors.hpp"

namespace tsyn::noise {

namespace {

// Superoperator in the |i><j| basis: S[(i,j),(k,l)] with row 2i+j. The
// Choi matrix is the reshuffle C[(a,b),(c,d)] = S[(a,c),(b,d)] / 2.
using Super = std::array<cplx, 16>;

Super identity_super() {
  Super s{};
  for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(i * 4 + i)] = 1.0;
  return s;
}

Super unitary_super(const Unitary2& u) {
  Super s{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          s[static_cast<std::size_t>((2 * i + j) * 4 + (2 * k + l))] =
              u.at(i, k) * std::conj(u.at(j, l));
        }
      }
    }
  }
  return s;
}

Super depolarizing_super(double p) {
  Super s{};
  for (int i = 0; i < 4; ++i) {
    s[static_cast<std::size_t>(i * 4 + i)] = 1.0 - p;
  }
  // + (p/2) |vec I><vec I|, vec(I)[(i,j)] = delta_ij.
  for (int i : {0, 3}) {
    for (int k : {0, 3}) {
      s[static_cast<std::size_t>(i * 4 + k)] += 0.5 * p;
    }
  }
  return s;
}

Super multiply(const Super& a, const Super& b) {
  Super out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < 4; ++k) {
        acc += a[static_cast<std::size_t>(r * 4 + k)] *
               b[static_cast<std::size_t>(k * 4 + c)];
      }
      out[static_cast<std::size_t>(r * 4 + c)] = acc;
    }
  }
  return out;
}

Channel2 choi_of(const Super& s) {
  Channel2 ch;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          ch.at(2 * a + b, 2 * c + d) =
              0.5 * s[static_cast<std::size_t>((2 * a + c) * 4 + (2 * b + d))];
        }
      }
    }
  }
  return ch;
}

Super super_of(const Channel2& ch) {
  Super s{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          s[static_cast<std::size_t>((2 * a + c) * 4 + (2 * b + d))] =
              2.0 * ch.at(2 * a + b, 2 * c + d);
        }
      }
    }
  }
  return s;
}

}  // namespace

Channel2 unitary_channel(const Unitary2& u) { return choi_of(unitary_super(u)); }

Channel2 depolarizing_channel(double p) {
  if (p < 0.0 || p > 1.0) throw InputError("depolarizing rate outside [0,1]");
  return choi_of(depolarizing_super(p));
}

Channel2 compose(const Channel2& later, const Channel2& earlier) {
  return choi_of(multiply(super_of(later), super_of(earlier)));
}

Channel2 sequence_channel(const GateSequence& seq, double p,
                          double t_rate_multiplier) {
  if (p < 0.0 || p >= 1.0) throw InputError("depolarizing rate outside [0,1)");
  const double pt = std::min(1.0, p * t_rate_multiplier);
  Super acc = identity_super();
  const Super kick = depolarizing_super(pt);
  for (GateId g : seq.gates) {
    acc = multiply(unitary_super(gate_matrix(g)), acc);
    if (g == GateId::T) acc = multiply(kick, acc);
  }
  return choi_of(acc);
}

double process_fidelity(const Unitary2& ideal, const Channel2& noisy) {
  // <Psi_U| C |Psi_U> with Psi_U[(a,b)] = U[a,b]/sqrt(2).
  cplx acc = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          acc += std::conj(ideal.at(a, b)) * noisy.at(2 * a + b, 2 * c + d) *
                 ideal.at(c, d);
        }
      }
    }
  }
  return 0.5 * acc.real();
}

// ---------------------------------------------------------------------------
// Tradeoff sweep and fit
// ---------------------------------------------------------------------------

std::vector<TradeoffPoint> tradeoff_sweep(
    std::span<const Unitary2> targets, std::span<const double> thresholds,
    std::span<const double> rates, const synth::SynthesisConfig& base,
    const tables::UniqueTable& table, const tables::RewriteTable& rewrites) {
  std::vector<TradeoffPoint> out;
  for (double thr : thresholds) {
    // Synthesis depends only on the threshold; reuse across rates.
    std::vector<GateSequence> seqs;
    std::vector<double> tcounts;
    seqs.reserve(targets.size());
    for (const Unitary2& u : targets) {
      synth::SynthesisConfig cfg = base;
      cfg.epsilon = thr;
      const synth::SynthesisResult r =
          synth::synthesize(u, cfg, table, rewrites);
      seqs.push_back(r.sequence);
      tcounts.push_back(static_cast<double>(r.sequence.t_count()));
    }
    for (double rate : rates) {
      TradeoffPoint pt;
      pt.synthesis_threshold = thr;
      pt.logical_rate = rate;
      double sum = 0.0, sum2 = 0.0, tsum = 0.0;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const Channel2 ch = sequence_channel(seqs[i], rate);
        const double infid = 1.0 - process_fidelity(targets[i], ch);
        sum += infid;
        sum2 += infid * infid;
        tsum += tcounts[i];
      }
      const double n = static_cast<double>(targets.size());
      pt.mean_process_infidelity = sum / n;
      pt.std = std::sqrt(std::max(0.0, sum2 / n - (sum / n) * (sum / n)));
      pt.mean_t_count = tsum / n;
      out.push_back(pt);
    }
  }
  return out;
}

PowerLawFit fit_optimal_threshold(std::span<const TradeoffPoint> points) {
  std::map<double, std::vector<std::pair<double, double>>> by_rate;
  for (const TradeoffPoint& p : points) {
    by_rate[p.logical_rate].emplace_back(p.synthesis_threshold,
                                         p.mean_process_infidelity);
  }

  std::vector<std::pair<double, double>> samples;  // (log rate, log thr*)
  for (auto& [rate, curve] : by_rate) {
    std::sort(curve.begin(), curve.end());
    if (curve.size() < 3) continue;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].second < curve[arg].second) arg = i;
    }
    if (arg == 0 || arg + 1 == curve.size()) continue;  // boundary minimum

    // Quadratic refinement in log-threshold around the grid minimum.
    const double x1 = std::log(curve[arg - 1].first), y1 = curve[arg - 1].second;
    const double x2 = std::log(curve[arg].first), y2 = curve[arg].second;
    const double x3 = std::log(curve[arg + 1].first), y3 = curve[arg + 1].second;
    const double num =
        (x2 - x1) * (x2 - x1) * (y2 - y3) - (x2 - x3) * (x2 - x3) * (y2 - y1);
    const double den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
    double xs = x2;
    if (std::abs(den) > 1e-300) {
      const double cand = x2 - 0.5 * num / den;
      if (cand > std::min(x1, x3) && cand < std::max(x1, x3)) xs = cand;
    }
    samples.emplace_back(std::log(rate), xs);
  }

  if (samples.size() < 3) {
    throw InsufficientDataError(
        "need >= 3 rates with interior optimal thresholds");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : samples) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(samples.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

}  // namespace tsyn::noise
