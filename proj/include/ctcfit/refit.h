// Copyright 2026 The ctcfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Modifications of the fitting target and gradient:
//
//  * alpha: rescale the pseudo ground truth so that non-blank classes hold a
//    fraction alpha of the total mass, then renormalize every frame.
//  * gamma: reweight each frame's gradient by w_t^gamma, where
//    w_t = max_k (y'^t_k - y^t_k), normalized so the factors average 1.
//
// When both are enabled alpha runs first and the frame weights are taken
// against the rescaled target.

#ifndef CTCFIT_REFIT_H_
#define CTCFIT_REFIT_H_

#include <optional>
#include <utility>
#include <vector>

#include "ctcfit/ctc_loss.h"
#include "ctcfit/lattice.h"

namespace ctcfit {

enum class RescaleScope { kPerSequence, kPerBatch };

struct ModConfig {
  std::optional<double> alpha;  // in (0, 1)
  std::optional<double> gamma;  // >= 0
  RescaleScope rescale_scope = RescaleScope::kPerBatch;

  // Throws std::invalid_argument on out-of-range values.
  void Validate() const;
};

struct RescaleStats {
  std::vector<double> totals;  // V_k = sum_t y'^t_k
  std::vector<int> counts;     // N_k; counts[blank] holds U for diagnostics

  // Accumulates V and N for one sequence. Summation order is call order.
  void Accumulate(const PseudoGT& pseudo_gt, const LabelSequence& l,
                  const Alphabet& alphabet);
  int NonBlankCount(const Alphabet& alphabet) const;
};

RescaleStats ComputeRescaleStats(const PseudoGT& pseudo_gt, const LabelSequence& l,
                                 const Alphabet& alphabet);

// Per-class multipliers applied before row normalization: blank gets
// (1 - alpha) * sum N / V_blank, non-blank k gets alpha * N_k / V_k, classes
// without mass get 1. Throws DegenerateProportion when sum N = 0.
std::vector<double> AlphaScaleFactors(const RescaleStats& stats, double alpha,
                                      const Alphabet& alphabet);

// Scales columns by AlphaScaleFactors without renormalizing rows.
Matrix AlphaScaleUnnormalized(const PseudoGT& pseudo_gt, const RescaleStats& stats,
                              double alpha, const Alphabet& alphabet);

PseudoGT AlphaRescale(const PseudoGT& pseudo_gt, const RescaleStats& stats, double alpha,
                      const Alphabet& alphabet);

struct FrameWeights {
  double gamma = 0.0;
  std::vector<double> raw;         // w_t
  std::vector<double> normalized;  // w_t^gamma / mean(w^gamma), 0^0 = 1

  bool all_zero() const;
};

FrameWeights ComputeFrameWeights(const ProbMatrix& probs, const Matrix& pseudo_gt,
                                 double gamma);

// Multiplies gradient row t by weights.normalized[t]. gamma = 0 returns the
// gradient untouched. If every w_t is zero with gamma > 0 the gradient is
// already zero and is also returned untouched.
Matrix GammaReweight(const Matrix& gradient, const FrameWeights& weights, double gamma);

struct Batch {
  std::vector<std::pair<LogitsMatrix, LabelSequence>> items;
};

// Plain CTC per item, followed by the configured modifications. loss and
// log_prob stay the unmodified CTC values; pseudo_gt and gradient reflect
// the modifications. Item failures rethrow with the item index attached.
std::vector<LossResult> ModifiedLossGrad(const Batch& batch, const ModConfig& config,
                                         const Alphabet& alphabet);

}  // namespace ctcfit

#endif  // CTCFIT_REFIT_H_
