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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ctcfit/cli/commands.h"

int main(int argc, char** argv) {
  using namespace ctcfit::cli;

  CLI::App app{"CTC loss toolkit: training simulator, oracle checks, evaluation"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* simulate = app.add_subcommand("simulate", "Run the training simulator");
  simulate->add_option("--config", config_path, "key=value config file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  CheckOptions check_options;
  auto* check = app.add_subcommand("check", "Compare DP results against brute-force enumeration");
  check->add_option("--max-t", check_options.max_frames, "Maximum frames")
      ->capture_default_str();
  check->add_option("--max-c", check_options.max_classes, "Maximum classes incl. blank")
      ->capture_default_str();
  check->add_option("--max-u", check_options.max_labels, "Maximum label length")
      ->capture_default_str();
  check->add_option("--trials", check_options.trials, "Number of random instances")
      ->capture_default_str();
  check->add_option("--seed", check_options.seed, "Seed of the first trial")
      ->capture_default_str();
  check->add_flag("--corrupt-gradient", check_options.corrupt_gradient)->group("");

  std::string probs_path, labels, classes;
  int blank = 0;
  auto* eval = app.add_subcommand("eval", "Loss, pseudo ground truth and best-path decoding");
  eval->add_option("--probs", probs_path, "CSV with one row of probabilities per frame")
      ->required();
  eval->add_option("--labels", labels, "Label string, e.g. aab")->required();
  eval->add_option("--classes", classes, "Class names by index, e.g. -abc");
  eval->add_option("--blank", blank, "Blank class index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (*simulate) return CmdSimulate(config_path, out_dir, std::cout, std::cerr);
  if (*check) return CmdCheck(check_options, std::cout, std::cerr);
  return CmdEval(probs_path, labels, classes, blank, std::cout, std::cerr);
}
