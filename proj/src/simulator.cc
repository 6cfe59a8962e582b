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

#include "ctcfit/simulator.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace ctcfit {

SimConfig SimConfig::Default() {
  SimConfig config;
  config.label_sequence = LabelSequence({1, 2, 3}, config.alphabet);
  return config;
}

void SimConfig::Validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  if (!(init_stddev >= 0.0)) throw std::invalid_argument("init_stddev must be >= 0");
  if (frames < 1) throw std::invalid_argument("T must be >= 1");
  for (int k : label_sequence.labels()) {
    if (!alphabet.contains(k) || alphabet.is_blank(k)) {
      throw std::invalid_argument("label sequence does not fit the alphabet");
    }
  }
  if (frames < MinFrames(label_sequence)) {
    throw std::invalid_argument("T = " + std::to_string(frames) + " is below the " +
                                std::to_string(MinFrames(label_sequence)) +
                                " frames the label sequence needs");
  }
  mods.Validate();
}

SnapshotMetrics ComputeMetrics(const ProbMatrix& probs, const Matrix& pseudo_gt,
                               const Alphabet& alphabet) {
  SnapshotMetrics m;
  const int frames = probs.rows();
  const auto blank = static_cast<size_t>(alphabet.blank());
  double blank_mass = 0.0;
  int blank_wins = 0;
  for (int t = 0; t < frames; ++t) {
    auto y = probs.row(t);
    auto target = pseudo_gt.row(t);
    blank_mass += y[blank];
    const auto best = static_cast<size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    blank_wins += best == blank;
    for (size_t k = 0; k < y.size(); ++k) {
      m.max_frame_weight = std::max(m.max_frame_weight, target[k] - y[k]);
    }
  }
  m.nonblank_mass_fraction = 1.0 - blank_mass / frames;
  m.blank_argmax_fraction = static_cast<double>(blank_wins) / frames;
  return m;
}

LogitsMatrix InitState(const SimConfig& config) {
  Matrix values(config.frames, config.alphabet.num_classes());
  if (config.init_stddev > 0.0) {
    std::mt19937_64 rng(config.init_seed);
    std::normal_distribution<double> normal(0.0, config.init_stddev);
    for (double& v : values.data()) v = normal(rng);
  }
  return LogitsMatrix(std::move(values));
}

std::pair<LogitsMatrix, SimSnapshot> Step(const LogitsMatrix& state, const SimConfig& config,
                                          int iteration) {
  Batch batch;
  batch.items.emplace_back(state, config.label_sequence);
  ModConfig mods = config.mods;
  mods.rescale_scope = RescaleScope::kPerSequence;
  LossResult result = std::move(ModifiedLossGrad(batch, mods, config.alphabet).front());

  Matrix next = state;
  auto a = next.data();
  auto g = result.gradient.data();
  for (size_t i = 0; i < a.size(); ++i) a[i] -= config.learning_rate * g[i];

  SimSnapshot snap;
  snap.iteration = iteration;
  snap.metrics = ComputeMetrics(result.probs, result.pseudo_gt, config.alphabet);
  snap.loss = result.loss;
  snap.probs = std::move(result.probs);
  snap.pseudo_gt = std::move(result.pseudo_gt);
  return {LogitsMatrix(std::move(next)), std::move(snap)};
}

SimTrajectory Run(const SimConfig& config) {
  config.Validate();
  SimTrajectory traj;
  traj.config = config;
  traj.loss_history.reserve(static_cast<size_t>(config.iterations) + 1);
  LogitsMatrix state = InitState(config);
  // State i has had i updates applied; the last one is evaluated but not
  // updated further.
  for (int i = 0; i <= config.iterations; ++i) {
    std::pair<LogitsMatrix, SimSnapshot> out;
    try {
      out = Step(state, config, i);
    } catch (const ZeroProbability& e) {
      traj.phase_boundary =
          FindPhaseBoundary(traj.initial.metrics.nonblank_mass_fraction, traj.snapshots);
      throw SimulationAborted("iteration " + std::to_string(i) + ": " + e.what(), i,
                              std::move(traj));
    }
    traj.loss_history.push_back(out.second.loss);
    if (i == 0) {
      traj.initial = std::move(out.second);
    } else if (i % config.snapshot_every == 0 || i == config.iterations) {
      traj.snapshots.push_back(std::move(out.second));
    }
    state = std::move(out.first);
  }
  traj.phase_boundary =
      FindPhaseBoundary(traj.initial.metrics.nonblank_mass_fraction, traj.snapshots);
  return traj;
}

std::optional<int> FindPhaseBoundary(double initial_fraction,
                                     const std::vector<SimSnapshot>& snapshots) {
  const int n = static_cast<int>(snapshots.size());
  if (n < 2) return std::nullopt;
  auto fraction = [&](int i) {
    return snapshots[static_cast<size_t>(i)].metrics.nonblank_mass_fraction;
  };
  int lowest = 0;
  for (int i = 1; i < n; ++i) {
    if (fraction(i) < fraction(lowest)) lowest = i;
  }
  if (!(fraction(lowest) < initial_fraction)) return std::nullopt;
  const int trailing = std::max(1, static_cast<int>(kPhaseTrailingShare * n));
  if (lowest >= n - trailing) return std::nullopt;
  for (int i = n - trailing; i < n; ++i) {
    if (fraction(i) < kPhaseRiseFactor * fraction(lowest)) return std::nullopt;
  }
  return lowest;
}

std::optional<int> FirstIterationReaching(const std::vector<double>& loss_history,
                                          double target) {
  for (size_t i = 0; i < loss_history.size(); ++i) {
    if (loss_history[i] <= target) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace ctcfit
