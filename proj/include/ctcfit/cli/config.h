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

// Flat key=value configuration files for the simulator.
//
//   # comment
//   T=50
//   classes=-abc
//   labels=abc
//   alpha=0.5
//
// One key per line, unknown keys rejected. Run manifests reuse the format,
// so a manifest can be fed back as a config.

#ifndef CTCFIT_CLI_CONFIG_H_
#define CTCFIT_CLI_CONFIG_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "ctcfit/cli/class_map.h"
#include "ctcfit/simulator.h"

namespace ctcfit::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct SimulationSetup {
  SimConfig config;
  ClassMap class_map{"-abc", 0};
};

SimulationSetup ParseSimulationConfig(std::string_view text);
SimulationSetup LoadSimulationConfig(const std::string& path);

// Every config key, in a fixed order; parses back to the same setup.
std::string SerializeSimulationConfig(const SimulationSetup& setup);

}  // namespace ctcfit::cli

#endif  // CTCFIT_CLI_CONFIG_H_
