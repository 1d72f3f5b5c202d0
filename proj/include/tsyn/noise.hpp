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

#include <array>
#include <span>
#include <vector>

#include "tsyn/core.hpp"
#include "tsyn/synth.hpp"
#include "tsyn/tables.hpp"

namespace tsyn::noise {

/// A single-qubit channel as its Choi matrix (4x4, row-major over the
/// (out, in) double index, trace-normalized to 1). Positive semidefinite
/// and trace-preserving for every channel built here.
struct Channel2 {
  std::array<cplx, 16> choi{};

  cplx& at(int r, int c) { return choi[4 * r + c]; }
  const cplx& at(int r, int c) const { return choi[4 * r + c]; }
};

Channel2 unitary_channel(const Unitary2& u);
/// rho -> (1-p) rho + p I/2.
Channel2 depolarizing_channel(double p);
/// Composition: `later` after `earlier`.
Channel2 compose(const Channel2& later, const Channel2& earlier);

/// Channel of a gate sequence under the logical-error model: every gate is
/// its ideal unitary, followed by a depolarizing kick of rate
/// p * t_rate_multiplier after each T gate. Clifford gates are error-free.
Channel2 sequence_channel(const GateSequence& seq, double p,
                          double t_rate_multiplier = 1.0);

/// Overlap of the channel's Choi state with the ideal unitary's pure Choi
/// state. Equals trace_value(u, v)^2 when the channel is unitary v.
double process_fidelity(const Unitary2& ideal, const Channel2& noisy);

// ---------------------------------------------------------------------------
// Synthesis-vs-logical-error tradeoff
// ---------------------------------------------------------------------------

struct TradeoffPoint {
  double synthesis_threshold = 0.0;
  double logical_rate = 0.0;
  double mean_process_infidelity = 0.0;
  double std = 0.0;
  double mean_t_count = 0.0;
};

/// For each (threshold, rate) cell: synthesize every target at that
/// threshold (cached across rates) and average the process infidelity of
/// the noisy synthesized channel against the ideal target.
std::vector<TradeoffPoint> tradeoff_sweep(
    std::span<const Unitary2> targets, std::span<const double> thresholds,
    std::span<const double> rates, const synth::SynthesisConfig& base,
    const tables::UniqueTable& table, const tables::RewriteTable& rewrites);

struct PowerLawFit {
  double exponent = 0.0;
  double coefficient = 0.0;  // threshold ~ coefficient * rate^exponent
};

/// Least-squares power law through the per-rate optimal thresholds (grid
/// minimum refined by quadratic interpolation in log-threshold). Throws
/// InsufficientDataError without >= 3 rates carrying interior minima.
PowerLawFit fit_optimal_threshold(std::span<const TradeoffPoint> points);

}  // namespace tsyn::noise
