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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ctcfit/cli/commands.h"
#include "ctcfit/ctc_loss.h"
#include "ctcfit/oracle.h"
#include "ctcfit/refit.h"
#include "ctcfit/simulator.h"
#include "test_util.h"

namespace ctcfit {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool Close(double a, double b, double tol) {
  const double diff = std::abs(a - b);
  return diff <= tol || diff <= tol * std::max(std::abs(a), std::abs(b));
}

constexpr int kSeeds = 5;

Outcome OracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20261);
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto inst = testing::RandomInstance(rng, 8, 4, 3);
    auto probs = Softmax(inst.logits);
    auto result = CtcLossGradFromProbs(probs, inst.labels, inst.alphabet);
    const double brute = oracle::BruteProb(probs, inst.labels, inst.alphabet);
    const double dp = std::exp(result.log_prob);
    bool ok = Close(dp, brute, 1e-10);
    worst = std::max(worst, std::abs(dp - brute) / brute);
    auto posterior = oracle::BrutePosterior(probs, inst.labels, inst.alphabet);
    for (int t = 0; t < probs.rows(); ++t) {
      for (int k = 0; k < probs.cols(); ++k) {
        ok &= Close(result.pseudo_gt(t, k), posterior(t, k), 1e-10);
        worst = std::max(worst, std::abs(result.pseudo_gt(t, k) - posterior(t, k)));
      }
    }
    if (!ok) ++bad;
  }
  const double elapsed = Seconds(start);
  return {bad == 0 && elapsed < 60.0,
          Fmt("%.0f/1000 mismatches, worst error %.2e, %.2f s", bad, worst, elapsed)};
}

Outcome GradientIdentity() {
  std::mt19937_64 rng(20262);
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = testing::RandomInstance(rng, 6, 4, 3);
    auto result = CtcLossGrad(inst.logits, inst.labels, inst.alphabet);
    auto fd = oracle::FdGradient(inst.logits, inst.labels, inst.alphabet);
    const double err = MaxAbsDiff(result.gradient, fd);
    worst = std::max(worst, err);
    if (err > 1e-6) ++bad;
  }
  return {bad == 0, Fmt("%.0f/200 over tolerance, worst error %.2e", bad, worst)};
}

Outcome SpikeConstruction() {
  const Alphabet alphabet(2, 0);
  const auto probs = testing::SpikeConstruction();
  const auto l = testing::Labels("a", 2);
  auto result = CtcLossGradFromProbs(probs, l, alphabet);
  int admissible = 0;
  bool quarters = true;
  oracle::EnumeratePaths(probs, l, alphabet, [&](const Path&, double p, bool ok) {
    if (!ok || p == 0.0) return;
    ++admissible;
    quarters &= std::abs(p - 0.25) <= 1e-12;
  });
  const double p = std::exp(result.log_prob);
  const double grad = MaxAbsDiff(result.gradient, Matrix(probs.rows(), probs.cols()));
  const bool pass = std::abs(p - 1.0) <= 1e-12 && admissible == 4 && quarters &&
                    std::abs(result.loss) <= 1e-12 && grad <= 1e-12;
  return {pass, Fmt("p=%.15g, %.0f admissible paths, max |grad| %.1e", p, admissible, grad) +
                    (quarters ? ", each 0.25" : ", not all 0.25")};
}

double NonBlankFraction(const Matrix& m, const Alphabet& alphabet) {
  double nonblank = 0.0, total = 0.0;
  for (int t = 0; t < m.rows(); ++t) {
    for (int k = 0; k < m.cols(); ++k) {
      total += m(t, k);
      if (!alphabet.is_blank(k)) nonblank += m(t, k);
    }
  }
  return nonblank / total;
}

SimConfig SeededConfig(std::uint64_t seed) {
  SimConfig config = SimConfig::Default();
  config.init_seed = seed;
  return config;
}

Outcome AlphaTargeting() {
  std::mt19937_64 rng(20264);
  std::uniform_real_distribution<double> pick_alpha(0.1, 0.9);
  int instances = 0, exact_bad = 0, approx_bad = 0;
  double worst_exact = 0.0, worst_approx = 0.0;
  while (instances < 1000) {
    auto inst = testing::RandomInstance(rng, 50, 6, 10);
    if (inst.labels.empty()) continue;
    auto r = CtcLossGrad(inst.logits, inst.labels, inst.alphabet);
    const auto stats = ComputeRescaleStats(r.pseudo_gt, inst.labels, inst.alphabet);
    // Without blank mass there is nothing to trade against.
    if (stats.totals[static_cast<size_t>(inst.alphabet.blank())] == 0.0) continue;
    ++instances;
    const double alpha = pick_alpha(rng);
    const double exact = std::abs(
        NonBlankFraction(AlphaScaleUnnormalized(r.pseudo_gt, stats, alpha, inst.alphabet),
                         inst.alphabet) - alpha);
    const double approx = std::abs(
        NonBlankFraction(AlphaRescale(r.pseudo_gt, stats, alpha, inst.alphabet), inst.alphabet) -
        alpha);
    worst_exact = std::max(worst_exact, exact);
    worst_approx = std::max(worst_approx, approx);
    if (exact > 1e-12) ++exact_bad;
    if (approx > 0.05) ++approx_bad;
  }
  int sim_ok = 0;
  std::string finals;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    SimConfig config = SeededConfig(seed);
    config.mods.alpha = 0.5;
    const auto traj = Run(config);
    const double final_fraction = traj.snapshots.back().metrics.nonblank_mass_fraction;
    if (final_fraction >= 0.4 && final_fraction <= 0.6) ++sim_ok;
    finals += Fmt(" %.3f", final_fraction);
  }
  const bool pass = exact_bad == 0 && approx_bad == 0 && sim_ok >= 4;
  return {pass, Fmt("unnormalized worst %.1e, normalized worst %.3f, ", worst_exact,
                    worst_approx) +
                    Fmt("%.0f/1000 outside 0.05; simulator %.0f/5 in [0.4, 0.6]:", approx_bad,
                        sim_ok) +
                    finals};
}

Batch RandomBatch(std::mt19937_64& rng, int size, int frames, const Alphabet& alphabet,
                  int labels) {
  Batch batch;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick(1, alphabet.num_classes() - 1);
  for (int i = 0; i < size; ++i) {
    Matrix logits(frames, alphabet.num_classes());
    for (double& v : logits.data()) v = normal(rng);
    std::vector<int> l(static_cast<size_t>(labels));
    for (int& k : l) k = pick(rng);
    batch.items.emplace_back(LogitsMatrix(std::move(logits)), LabelSequence(l, alphabet));
  }
  return batch;
}

Outcome GammaIdentityAndAcceleration() {
  std::mt19937_64 rng(20265);
  int mismatched = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Alphabet alphabet(5, 0);
    const Batch batch = RandomBatch(rng, 4, 20, alphabet, 4);
    ModConfig config;
    config.gamma = 0.0;
    const auto modified = ModifiedLossGrad(batch, config, alphabet);
    for (size_t i = 0; i < batch.items.size(); ++i) {
      const auto plain = CtcLossGrad(batch.items[i].first, batch.items[i].second, alphabet);
      if (!(modified[i].gradient == plain.gradient)) ++mismatched;
    }
  }
  int faster = 0;
  std::string detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto vanilla = Run(SeededConfig(seed));
    SimConfig config = SeededConfig(seed);
    config.mods.gamma = 1.0;
    const auto weighted = Run(config);
    const double target = vanilla.loss_history.back();
    const int vanilla_at = *FirstIterationReaching(vanilla.loss_history, target);
    const auto weighted_at = FirstIterationReaching(weighted.loss_history, target);
    if (weighted_at && *weighted_at < vanilla_at) ++faster;
    detail += Fmt(" %.0f vs %.0f;", weighted_at ? *weighted_at : -1.0, vanilla_at);
  }
  return {mismatched == 0 && faster >= 4,
          Fmt("gamma=0 bitwise mismatches %.0f/200; gamma=1 faster on %.0f/5:", mismatched,
              faster) +
              detail};
}

Outcome SpikyReproduction() {
  int ok = 0;
  std::string detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto traj = Run(SeededConfig(seed));
    const double blank_argmax = traj.snapshots.back().metrics.blank_argmax_fraction;
    const bool dip = traj.phase_boundary.has_value();
    if (blank_argmax > 0.5 && dip) ++ok;
    detail += Fmt(" blank_argmax %.2f dip at iteration %.0f;", blank_argmax,
                  dip ? traj.snapshots[static_cast<size_t>(*traj.phase_boundary)].iteration : -1.0);
  }
  return {ok >= 4, Fmt("%.0f/5 seeds spiky with dip:", ok) + detail};
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

Outcome ComplexityRatio() {
  std::mt19937_64 rng(20267);
  const Alphabet alphabet(40, 0);
  const Batch batch = RandomBatch(rng, 32, 500, alphabet, 20);
  ModConfig mods{0.5, 1.0, RescaleScope::kPerBatch};
  double sink = 0.0;
  auto plain = [&] {
    for (const auto& [logits, l] : batch.items) sink += CtcLossGrad(logits, l, alphabet).loss;
  };
  auto modified = [&] { sink += ModifiedLossGrad(batch, mods, alphabet)[0].loss; };
  plain();
  modified();
  std::vector<double> plain_times, modified_times;
  for (int run = 0; run < 20; ++run) {
    auto start = Clock::now();
    plain();
    plain_times.push_back(Seconds(start));
    start = Clock::now();
    modified();
    modified_times.push_back(Seconds(start));
  }
  const double ratio = Median(modified_times) / Median(plain_times);
  return {ratio <= 1.25 && std::isfinite(sink),
          Fmt("median %.1f ms vs %.1f ms, ratio %.3f", Median(modified_times) * 1e3,
              Median(plain_times) * 1e3, ratio)};
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("ctcfit_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path config = root / "sim.cfg";
  std::ofstream(config) << "# default run with both modifications\nalpha = 0.5\ngamma = 1\n";
  std::ostringstream out, err;
  const int first = cli::CmdSimulate(config.string(), (root / "a").string(), out, err);
  const int second = cli::CmdSimulate(config.string(), (root / "b").string(), out, err);
  bool same = first == 0 && second == 0;
  std::string detail;
  for (const char* name : {"trajectory.csv", "metrics.csv"}) {
    const auto a = Slurp(root / "a" / name);
    const auto b = Slurp(root / "b" / name);
    same &= !a.empty() && a == b;
    detail += std::string(name) + Fmt(" %.0f bytes ", static_cast<double>(a.size())) +
              (a == b ? "identical" : "differ") + "; ";
  }
  fs::remove_all(root);
  if (first != 0 || second != 0) detail += "simulate failed: " + err.str();
  return {same, detail};
}

}  // namespace
}  // namespace ctcfit

int main() {
  using ctcfit::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", ctcfit::OracleEquivalence},
      {"gradient identity", ctcfit::GradientIdentity},
      {"spike construction", ctcfit::SpikeConstruction},
      {"alpha targeting", ctcfit::AlphaTargeting},
      {"gamma identity and acceleration", ctcfit::GammaIdentityAndAcceleration},
      {"spiky reproduction", ctcfit::SpikyReproduction},
      {"complexity ratio", ctcfit::ComplexityRatio},
      {"determinism", ctcfit::Determinism},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
