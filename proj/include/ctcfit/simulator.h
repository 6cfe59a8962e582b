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

// Desk-scale training simulator. The "network output" is a free logits
// matrix updated by plain gradient descent under (modified) CTC, which
// exposes the suppression and peaking phases of CTC convergence.

#ifndef CTCFIT_SIMULATOR_H_
#define CTCFIT_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ctcfit/ctc_loss.h"
#include "ctcfit/errors.h"
#include "ctcfit/lattice.h"
#include "ctcfit/refit.h"

namespace ctcfit {

struct SimConfig {
  int frames = 50;
  Alphabet alphabet{4, 0};
  LabelSequence label_sequence;
  std::uint64_t init_seed = 1;
  double init_stddev = 0.01;
  double learning_rate = 0.05;
  int iterations = 5000;
  int snapshot_every = 50;
  ModConfig mods;

  // Defaults with labels 1, 2, 3 over a 4-class alphabet with blank 0.
  static SimConfig Default();

  void Validate() const;
};

struct SnapshotMetrics {
  double nonblank_mass_fraction = 0.0;  // 1 - sum_t y^t_blank / T
  double blank_argmax_fraction = 0.0;   // frames whose argmax is blank, / T
  double max_frame_weight = 0.0;        // max_t max_k (y'^t_k - y^t_k)
};

SnapshotMetrics ComputeMetrics(const ProbMatrix& probs, const Matrix& pseudo_gt,
                               const Alphabet& alphabet);

struct SimSnapshot {
  int iteration = 0;  // number of updates applied before this state
  ProbMatrix probs;
  PseudoGT pseudo_gt;
  double loss = 0.0;
  SnapshotMetrics metrics;
};

struct SimTrajectory {
  SimConfig config;
  // The untrained state (iteration 0). Not part of `snapshots`.
  SimSnapshot initial;
  std::vector<SimSnapshot> snapshots;
  // Loss of every evaluated state, index = iteration.
  std::vector<double> loss_history;
  std::optional<int> phase_boundary;  // snapshot index, see FindPhaseBoundary
};

// Thrown by Run when a step hits ZeroProbability. Carries everything
// recorded up to the failing iteration.
class SimulationAborted : public ZeroProbability {
 public:
  SimulationAborted(const std::string& what, int iteration, SimTrajectory partial)
      : ZeroProbability(what), iteration_(iteration), partial_(std::move(partial)) {}

  int iteration() const { return iteration_; }
  const SimTrajectory& partial() const { return partial_; }

 private:
  int iteration_;
  SimTrajectory partial_;
};

// T x C logits drawn i.i.d. from Normal(0, stddev^2) with a seeded
// mt19937_64.
LogitsMatrix InitState(const SimConfig& config);

// One gradient-descent update on a batch of one (per-sequence rescaling).
// The snapshot describes the state before the update.
std::pair<LogitsMatrix, SimSnapshot> Step(const LogitsMatrix& state, const SimConfig& config,
                                          int iteration);

// Applies `iterations` updates. Snapshots are taken after every
// snapshot_every updates and after the final one.
SimTrajectory Run(const SimConfig& config);

// Index into snapshots of the suppression-to-peaking transition: the first
// global minimum of nonblank_mass_fraction, provided it is below the
// initial value and followed by a sustained rise, meaning every snapshot
// in the trailing kPhaseTrailingShare of the run sits at least
// kPhaseRiseFactor times above the minimum.
inline constexpr double kPhaseRiseFactor = 1.1;
inline constexpr double kPhaseTrailingShare = 0.1;
std::optional<int> FindPhaseBoundary(double initial_fraction,
                                     const std::vector<SimSnapshot>& snapshots);

// First iteration whose loss is <= target, if any.
std::optional<int> FirstIterationReaching(const std::vector<double>& loss_history,
                                          double target);

}  // namespace ctcfit

#endif  // CTCFIT_SIMULATOR_H_
