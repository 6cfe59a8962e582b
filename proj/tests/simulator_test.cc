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
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "test_util.h"

namespace ctcfit {
namespace {

SimConfig Small(int iterations = 200) {
  SimConfig config = SimConfig::Default();
  config.frames = 12;
  config.iterations = iterations;
  config.snapshot_every = 20;
  return config;
}

SimSnapshot WithFraction(double fraction) {
  SimSnapshot s;
  s.metrics.nonblank_mass_fraction = fraction;
  return s;
}

std::vector<SimSnapshot> Series(std::initializer_list<double> fractions) {
  std::vector<SimSnapshot> out;
  for (double f : fractions) out.push_back(WithFraction(f));
  return out;
}

TEST(SimConfigTest, Validation) {
  EXPECT_NO_THROW(SimConfig::Default().Validate());
  auto bad = [](auto mutate) {
    SimConfig c = SimConfig::Default();
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](SimConfig& c) { c.frames = 2; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.learning_rate = 0.0; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.iterations = 0; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.snapshot_every = 0; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.init_stddev = -1.0; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.mods.alpha = 1.0; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.mods.gamma = -0.5; }).Validate(), std::invalid_argument);
  EXPECT_THROW(bad([](SimConfig& c) { c.alphabet = Alphabet(3, 0); }).Validate(),
               std::invalid_argument);
}

TEST(InitStateTest, ZeroSpreadIsUniform) {
  SimConfig config = SimConfig::Default();
  config.init_stddev = 0.0;
  auto probs = Softmax(InitState(config));
  for (double v : probs.data()) EXPECT_EQ(v, 0.25);
}

TEST(InitStateTest, SeededAndNearUniform) {
  SimConfig config = SimConfig::Default();
  EXPECT_EQ(InitState(config), InitState(config));
  SimConfig other = config;
  other.init_seed = 2;
  EXPECT_FALSE(InitState(config) == InitState(other));

  auto probs = Softmax(InitState(config));
  double entropy = 0.0;
  for (double v : probs.data()) entropy -= v * std::log(v);
  EXPECT_NEAR(entropy / probs.rows(), std::log(4.0), 1e-3);
}

TEST(StepTest, OneStepFromUniform) {
  // y = (1/2, 1/2), y' = (1/3, 2/3) on both frames, so the gradient is
  // (1/6, -1/6).
  SimConfig config;
  config.frames = 2;
  config.alphabet = Alphabet(2, 0);
  config.label_sequence = testing::Labels("a", 2);
  config.learning_rate = 1.0;
  auto [next, snap] = Step(LogitsMatrix(Matrix(2, 2)), config, 0);
  for (int t = 0; t < 2; ++t) {
    EXPECT_NEAR(next(t, 0), -1.0 / 6, 1e-15);
    EXPECT_NEAR(next(t, 1), 1.0 / 6, 1e-15);
  }
  EXPECT_EQ(snap.iteration, 0);
  EXPECT_NEAR(snap.loss, -std::log(0.75), 1e-15);
  EXPECT_EQ(snap.metrics.nonblank_mass_fraction, 0.5);
}

TEST(StepTest, ZeroGradientLeavesStateInPlace) {
  SimConfig config;
  config.frames = 2;
  config.alphabet = Alphabet(2, 0);
  config.label_sequence = testing::Labels("a", 2);
  config.learning_rate = 1.0;
  config.mods.alpha = 0.5;
  const LogitsMatrix start(Matrix(2, 2));
  auto [next, snap] = Step(start, config, 0);
  EXPECT_LT(MaxAbsDiff(next, start), 1e-15);
}

TEST(RunTest, SnapshotSchedule) {
  SimConfig config = Small(130);
  config.snapshot_every = 50;
  auto traj = ctcfit::Run(config);
  EXPECT_EQ(traj.initial.iteration, 0);
  ASSERT_EQ(traj.snapshots.size(), 3u);
  EXPECT_EQ(traj.snapshots[0].iteration, 50);
  EXPECT_EQ(traj.snapshots[1].iteration, 100);
  EXPECT_EQ(traj.snapshots[2].iteration, 130);
  EXPECT_EQ(traj.loss_history.size(), 131u);
  EXPECT_EQ(traj.loss_history[50], traj.snapshots[0].loss);
  EXPECT_EQ(traj.loss_history[0], traj.initial.loss);
}

TEST(RunTest, DefaultRunShape) {
  auto traj = ctcfit::Run(SimConfig::Default());
  ASSERT_EQ(traj.snapshots.size(), 100u);
  EXPECT_EQ(traj.snapshots.back().iteration, 5000);
  EXPECT_EQ(traj.loss_history.size(), 5001u);
  // Losses trend down: the trailing tenth sits below the leading tenth.
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  const auto& h = traj.loss_history;
  const std::vector<double> head(h.begin(), h.begin() + 500);
  const std::vector<double> tail(h.end() - 500, h.end());
  EXPECT_LT(median(tail), median(head));
}

TEST(RunTest, StoredMetricsMatchRecomputation) {
  auto traj = ctcfit::Run(Small());
  const Alphabet& a = traj.config.alphabet;
  for (const auto& s : traj.snapshots) {
    double blank = 0.0;
    int blank_wins = 0;
    for (int t = 0; t < s.probs.rows(); ++t) {
      auto y = s.probs.row(t);
      blank += y[0];
      blank_wins += std::max_element(y.begin(), y.end()) == y.begin();
    }
    const double frames = s.probs.rows();
    EXPECT_NEAR(s.metrics.nonblank_mass_fraction, 1.0 - blank / frames, 1e-12);
    EXPECT_NEAR(s.metrics.blank_argmax_fraction, blank_wins / frames, 1e-12);
    auto again = CtcLossGradFromProbs(s.probs, traj.config.label_sequence, a);
    EXPECT_NEAR(again.loss, s.loss, 1e-9);
    EXPECT_LT(MaxAbsDiff(again.pseudo_gt, s.pseudo_gt), 1e-9);
  }
}

TEST(RunTest, DeterministicForFixedSeed) {
  auto a = ctcfit::Run(Small());
  auto b = ctcfit::Run(Small());
  EXPECT_EQ(a.loss_history, b.loss_history);
  for (size_t i = 0; i < a.snapshots.size(); ++i) {
    EXPECT_EQ(a.snapshots[i].probs, b.snapshots[i].probs);
    EXPECT_EQ(a.snapshots[i].pseudo_gt, b.snapshots[i].pseudo_gt);
  }
}

TEST(RunTest, ZeroGammaMatchesVanilla) {
  SimConfig zero = Small();
  zero.mods.gamma = 0.0;
  EXPECT_EQ(ctcfit::Run(Small()).loss_history, ctcfit::Run(zero).loss_history);
}

TEST(RunTest, AlphaHoldsNonBlankShare) {
  SimConfig config = Small(2000);
  config.mods.alpha = 0.5;
  auto traj = ctcfit::Run(config);
  EXPECT_NEAR(traj.snapshots.back().metrics.nonblank_mass_fraction, 0.5, 0.1);
}

TEST(RunTest, AbortCarriesPartialTrajectory) {
  SimConfig config = SimConfig::Default();
  config.init_stddev = 1.0;
  config.learning_rate = 1e4;
  config.iterations = 50;
  try {
    ctcfit::Run(config);
    FAIL() << "expected SimulationAborted";
  } catch (const SimulationAborted& e) {
    EXPECT_EQ(e.iteration(), 1);
    EXPECT_EQ(e.partial().loss_history.size(), 1u);
    EXPECT_TRUE(e.partial().snapshots.empty());
  }
}

TEST(PhaseBoundaryTest, DipThenRise) {
  EXPECT_EQ(FindPhaseBoundary(0.75, Series({0.5, 0.2, 0.1, 0.15, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3})),
            2);
}

TEST(PhaseBoundaryTest, Rejections) {
  // Never below the starting share.
  EXPECT_EQ(FindPhaseBoundary(0.05, Series({0.5, 0.2, 0.1, 0.3, 0.3})), std::nullopt);
  // Still falling at the end.
  EXPECT_EQ(FindPhaseBoundary(0.75, Series({0.5, 0.4, 0.3, 0.2, 0.1})), std::nullopt);
  // Recovery smaller than the rise factor.
  EXPECT_EQ(FindPhaseBoundary(0.75, Series({0.5, 0.1, 0.105, 0.105, 0.105})), std::nullopt);
  EXPECT_EQ(FindPhaseBoundary(0.75, Series({0.1})), std::nullopt);
}

TEST(PhaseBoundaryTest, FirstOfTiedMinima) {
  EXPECT_EQ(FindPhaseBoundary(0.75, Series({0.5, 0.1, 0.3, 0.1, 0.3, 0.3})), 1);
}

TEST(FirstIterationReachingTest, Basics) {
  const std::vector<double> h = {3.0, 2.0, 2.5, 1.0, 1.0};
  EXPECT_EQ(FirstIterationReaching(h, 2.0), 1);
  EXPECT_EQ(FirstIterationReaching(h, 1.0), 3);
  EXPECT_EQ(FirstIterationReaching(h, 0.5), std::nullopt);
}

}  // namespace
}  // namespace ctcfit
