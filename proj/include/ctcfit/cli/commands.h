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

// Subcommands of the ctcfit tool. Each returns the process exit code and
// writes to the given streams only.

#ifndef CTCFIT_CLI_COMMANDS_H_
#define CTCFIT_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ctcfit::cli {

inline constexpr const char* kToolVersion = "ctcfit 0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNoAlignment = 2,  // infeasible labels or zero sequence probability
  kExitCheckFailed = 3,
};

// Writes trajectory.csv, metrics.csv, manifest.txt and figures/*.svg.
int CmdSimulate(const std::string& config_path, const std::string& out_dir, std::ostream& out,
                std::ostream& err);

struct CheckOptions {
  int max_frames = 6;
  int max_classes = 3;
  int max_labels = 2;
  int trials = 1000;
  std::uint64_t seed = 7;
  // Test hook: perturbs every analytic gradient before comparison.
  bool corrupt_gradient = false;
};

inline constexpr double kOracleTolerance = 1e-10;
inline constexpr double kFdTolerance = 1e-6;
// Finite differences run on trials with at most this many frames.
inline constexpr int kFdMaxFrames = 6;

int CmdCheck(const CheckOptions& options, std::ostream& out, std::ostream& err);

// classes empty -> ClassMap::Default for the CSV's column count.
int CmdEval(const std::string& probs_path, const std::string& labels, const std::string& classes,
            int blank_index, std::ostream& out, std::ostream& err);

}  // namespace ctcfit::cli

#endif  // CTCFIT_CLI_COMMANDS_H_
