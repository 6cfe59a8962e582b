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

#include "ctcfit/cli/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "ctcfit/cli/class_map.h"
#include "ctcfit/cli/config.h"
#include "ctcfit/cli/csv.h"
#include "ctcfit/cli/svg.h"
#include "ctcfit/ctc_loss.h"
#include "ctcfit/errors.h"
#include "ctcfit/oracle.h"
#include "ctcfit/simulator.h"

namespace ctcfit::cli {
namespace fs = std::filesystem;

namespace {

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string SnapshotFigureName(int iteration) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "figures/snapshot_%05d.svg", iteration);
  return buf;
}

}  // namespace

int CmdSimulate(const std::string& config_path, const std::string& out_dir, std::ostream& out,
                std::ostream& err) {
  const std::string started = UtcNow();
  SimulationSetup setup;
  try {
    setup = LoadSimulationConfig(config_path);
  } catch (const ConfigError& e) {
    err << "config error in " << config_path << ": " << e.what() << '\n';
    return kExitInputError;
  }

  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "figures", ec);
  if (ec) {
    err << "cannot create " << (root / "figures").string() << ": " << ec.message() << '\n';
    return kExitInputError;
  }

  SimTrajectory traj;
  std::optional<int> aborted_at;
  try {
    traj = Run(setup.config);
  } catch (const SimulationAborted& e) {
    err << "simulation aborted: " << e.what() << '\n';
    traj = e.partial();
    aborted_at = e.iteration();
  }

  std::vector<std::pair<std::string, std::string>> outputs;
  try {
    std::ostringstream csv;
    WriteTrajectoryCsv(csv, traj.snapshots);
    WriteFile(root / "trajectory.csv", csv.str());
    outputs.emplace_back("trajectory", "trajectory.csv");

    csv.str("");
    WriteMetricsCsv(csv, traj.snapshots);
    WriteFile(root / "metrics.csv", csv.str());
    outputs.emplace_back("metrics", "metrics.csv");

    WriteFile(root / "figures/metrics.svg", RenderMetricsSvg(traj.snapshots));
    outputs.emplace_back("figure.metrics", "figures/metrics.svg");
    for (const SimSnapshot& s : traj.snapshots) {
      const std::string name = SnapshotFigureName(s.iteration);
      WriteFile(root / name, RenderSnapshotSvg(s, setup.class_map));
      char key[32];
      std::snprintf(key, sizeof(key), "figure.%05d", s.iteration);
      outputs.emplace_back(key, name);
    }

    std::ostringstream manifest;
    manifest << "# ctcfit run manifest; usable as a simulate config\n"
             << "tool_version=" << kToolVersion << '\n'
             << "started_at=" << started << '\n'
             << "finished_at=" << UtcNow() << '\n'
             << "status=" << (aborted_at ? "aborted" : "ok") << '\n';
    if (aborted_at) manifest << "aborted_at_iteration=" << *aborted_at << '\n';
    manifest << SerializeSimulationConfig(setup);
    manifest << "output.manifest=manifest.txt\n";
    for (const auto& [key, path] : outputs) manifest << "output." << key << '=' << path << '\n';
    WriteFile(root / "manifest.txt", manifest.str());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitInputError;
  }

  out << "snapshots: " << traj.snapshots.size() << '\n';
  if (!traj.snapshots.empty()) {
    const SimSnapshot& last = traj.snapshots.back();
    out << "final iteration: " << last.iteration << '\n'
        << "final loss: " << FormatDouble(last.loss) << '\n'
        << "final nonblank_mass_fraction: " << FormatDouble(last.metrics.nonblank_mass_fraction)
        << '\n'
        << "final blank_argmax_fraction: " << FormatDouble(last.metrics.blank_argmax_fraction)
        << '\n';
  }
  if (traj.phase_boundary) {
    out << "phase boundary: iteration "
        << traj.snapshots[static_cast<size_t>(*traj.phase_boundary)].iteration << '\n';
  } else {
    out << "phase boundary: none\n";
  }
  return aborted_at ? kExitNoAlignment : kExitOk;
}

int CmdCheck(const CheckOptions& options, std::ostream& out, std::ostream& err) {
  if (options.max_frames < 1 || options.max_classes < 2 || options.max_labels < 0 ||
      options.trials < 0) {
    err << "check: need max-t >= 1, max-c >= 2, max-u >= 0, trials >= 0\n";
    return kExitInputError;
  }
  std::uint64_t paths = 1;
  for (int t = 0; t < options.max_frames; ++t) {
    paths *= static_cast<std::uint64_t>(options.max_classes);
    if (paths > oracle::kMaxPaths) {
      err << "check: max-c^max-t exceeds the oracle limit of " << oracle::kMaxPaths << '\n';
      return kExitInputError;
    }
  }

  double worst_prob = 0.0, worst_posterior = 0.0, worst_fd = 0.0;
  int failures = 0;
  for (int trial = 0; trial < options.trials; ++trial) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    const int frames = std::uniform_int_distribution<int>(1, options.max_frames)(rng);
    const int classes = std::uniform_int_distribution<int>(2, options.max_classes)(rng);
    const Alphabet alphabet(classes, 0);
    std::uniform_int_distribution<int> pick_label(1, classes - 1);
    std::vector<int> labels;
    do {
      labels.assign(static_cast<size_t>(
                        std::uniform_int_distribution<int>(0, options.max_labels)(rng)),
                    0);
      for (int& k : labels) k = pick_label(rng);
    } while (MinFrames(LabelSequence(labels, alphabet)) > frames);
    const LabelSequence l(labels, alphabet);
    Matrix raw(frames, classes);
    std::normal_distribution<double> normal(0.0, 1.5);
    for (double& v : raw.data()) v = normal(rng);
    const LogitsMatrix logits(std::move(raw));

    LossResult result = CtcLossGrad(logits, l, alphabet);
    if (options.corrupt_gradient) {
      for (double& g : result.gradient.data()) g += 1e-3;
    }
    const double brute = oracle::BruteProb(result.probs, l, alphabet);
    const double prob_err = std::abs(std::exp(result.log_prob) - brute) / brute;
    const double posterior_err =
        MaxAbsDiff(result.pseudo_gt, oracle::BrutePosterior(result.probs, l, alphabet));
    double fd_err = 0.0;
    const bool run_fd = frames <= kFdMaxFrames;
    if (run_fd) fd_err = MaxAbsDiff(result.gradient, oracle::FdGradient(logits, l, alphabet));

    worst_prob = std::max(worst_prob, prob_err);
    worst_posterior = std::max(worst_posterior, posterior_err);
    worst_fd = std::max(worst_fd, fd_err);
    const bool ok = prob_err <= kOracleTolerance && posterior_err <= kOracleTolerance &&
                    fd_err <= kFdTolerance;
    out << "trial " << trial << " seed " << seed << " T=" << frames << " C=" << classes
        << " U=" << l.size() << " prob_rel_err=" << prob_err
        << " posterior_abs_err=" << posterior_err;
    if (run_fd) out << " fd_abs_err=" << fd_err;
    out << (ok ? " ok" : " FAIL") << '\n';
    if (!ok) {
      ++failures;
      err << "tolerance violated at trial " << trial << " (seed " << seed << ")\n";
    }
  }
  out << "trials: " << options.trials << " failures: " << failures
      << " max_prob_rel_err: " << worst_prob << " max_posterior_abs_err: " << worst_posterior
      << " max_fd_abs_err: " << worst_fd << '\n';
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

int CmdEval(const std::string& probs_path, const std::string& labels, const std::string& classes,
            int blank_index, std::ostream& out, std::ostream& err) {
  Matrix values;
  {
    std::ifstream in(probs_path);
    if (!in) {
      err << "cannot open " << probs_path << '\n';
      return kExitInputError;
    }
    try {
      values = ReadNumericCsv(in);
    } catch (const std::exception& e) {
      err << probs_path << ": " << e.what() << '\n';
      return kExitInputError;
    }
  }

  std::optional<ClassMap> class_map;
  LabelSequence l;
  try {
    class_map = classes.empty() ? ClassMap::Default(values.cols(), blank_index)
                                : ClassMap(classes, blank_index);
    if (class_map->alphabet().num_classes() != values.cols()) {
      err << "classes \"" << class_map->classes() << "\" name "
          << class_map->alphabet().num_classes() << " classes but the CSV has " << values.cols()
          << " columns\n";
      return kExitInputError;
    }
    l = class_map->Labels(labels);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitInputError;
  }

  for (int t = 0; t < values.rows(); ++t) {
    double sum = 0.0;
    for (double v : values.row(t)) {
      if (!(v >= 0.0 && v <= 1.0)) {
        err << probs_path << ": row " << t + 1 << " has an entry outside [0, 1]\n";
        return kExitInputError;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      err << probs_path << ": row " << t + 1 << " sums to " << FormatDouble(sum) << '\n';
      return kExitInputError;
    }
    for (double& v : values.row(t)) v /= sum;
  }

  const Alphabet& alphabet = class_map->alphabet();
  const ProbMatrix probs(std::move(values));
  LossResult result;
  try {
    result = CtcLossGradFromProbs(probs, l, alphabet);
  } catch (const InfeasibleSequence& e) {
    err << "infeasible label sequence: " << e.what() << '\n';
    return kExitNoAlignment;
  } catch (const ZeroProbability& e) {
    err << "zero probability: " << e.what() << '\n';
    return kExitNoAlignment;
  }

  out << "loss=" << FormatDouble(result.loss) << '\n'
      << "decoded=" << class_map->Format(BestPathDecode(probs, alphabet)) << '\n'
      << 't';
  for (int k = 0; k < alphabet.num_classes(); ++k) out << ',' << class_map->name(k);
  out << '\n';
  for (int t = 0; t < result.pseudo_gt.rows(); ++t) {
    out << t;
    for (double v : result.pseudo_gt.row(t)) out << ',' << FormatDouble(v);
    out << '\n';
  }
  return kExitOk;
}

}  // namespace ctcfit::cli
