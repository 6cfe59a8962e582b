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

#include "ctcfit/cli/config.h"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ctcfit/cli/csv.h"

namespace ctcfit::cli {
namespace {

struct Entry {
  std::string value;
  int line = 0;
};

const std::set<std::string, std::less<>> kConfigKeys = {
    "T",          "classes",       "blank_index", "labels", "init_seed",
    "init_stddev", "learning_rate", "iterations",  "snapshot_every",
    "alpha",      "gamma",         "rescale_scope"};

// Written by the simulate command; accepted and ignored so that a manifest
// parses as a config.
const std::set<std::string, std::less<>> kManifestKeys = {
    "tool_version", "started_at", "finished_at", "status", "aborted_at_iteration"};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const Entry& e) {
  T value{};
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(e.line, key, "cannot parse \"" + e.value + "\" as a number");
  }
  return value;
}

std::optional<double> ParseOptional(const std::string& key, const Entry& e) {
  if (e.value == "none" || e.value.empty()) return std::nullopt;
  return ParseNumber<double>(key, e);
}

}  // namespace

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

SimulationSetup ParseSimulationConfig(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, std::string(line), "expected key=value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (kManifestKeys.contains(key) || key.starts_with("output.")) continue;
    if (!kConfigKeys.contains(key)) throw ConfigError(line_no, key, "unknown key");
    if (entries.contains(key)) throw ConfigError(line_no, key, "duplicate key");
    entries.emplace(std::move(key), Entry{std::move(value), line_no});
  }

  SimulationSetup setup;
  SimConfig& config = setup.config;
  auto find = [&](std::string_view key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto wrap = [&](std::string_view key, auto&& fn) {
    const Entry* e = find(key);
    if (!e) return;
    try {
      fn(*e);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(e->line, std::string(key), ex.what());
    }
  };

  std::string classes = "-abc";
  int blank = 0;
  wrap("classes", [&](const Entry& e) { classes = e.value; });
  wrap("blank_index", [&](const Entry& e) { blank = ParseNumber<int>("blank_index", e); });
  try {
    setup.class_map = ClassMap(classes, blank);
  } catch (const std::exception& ex) {
    const char* key = find("classes") ? "classes" : "blank_index";
    const Entry* e = find(key);
    throw ConfigError(e ? e->line : 0, key, ex.what());
  }
  config.alphabet = setup.class_map.alphabet();
  if (find("labels")) {
    wrap("labels",
         [&](const Entry& e) { config.label_sequence = setup.class_map.Labels(e.value); });
  } else if (classes == "-abc" && blank == 0) {
    config.label_sequence = setup.class_map.Labels("abc");
  } else {
    throw ConfigError(0, "labels", "required unless classes is the default \"-abc\"");
  }
  wrap("T", [&](const Entry& e) { config.frames = ParseNumber<int>("T", e); });
  wrap("init_seed",
       [&](const Entry& e) { config.init_seed = ParseNumber<std::uint64_t>("init_seed", e); });
  wrap("init_stddev",
       [&](const Entry& e) { config.init_stddev = ParseNumber<double>("init_stddev", e); });
  wrap("learning_rate",
       [&](const Entry& e) { config.learning_rate = ParseNumber<double>("learning_rate", e); });
  wrap("iterations",
       [&](const Entry& e) { config.iterations = ParseNumber<int>("iterations", e); });
  wrap("snapshot_every",
       [&](const Entry& e) { config.snapshot_every = ParseNumber<int>("snapshot_every", e); });
  wrap("alpha", [&](const Entry& e) { config.mods.alpha = ParseOptional("alpha", e); });
  wrap("gamma", [&](const Entry& e) { config.mods.gamma = ParseOptional("gamma", e); });
  wrap("rescale_scope", [&](const Entry& e) {
    if (e.value == "per_batch") {
      config.mods.rescale_scope = RescaleScope::kPerBatch;
    } else if (e.value == "per_sequence") {
      config.mods.rescale_scope = RescaleScope::kPerSequence;
    } else {
      throw ConfigError(e.line, "rescale_scope", "expected per_batch or per_sequence");
    }
  });

  // Attribute cross-field failures to the most specific key available.
  try {
    config.Validate();
  } catch (const std::invalid_argument& ex) {
    const std::string msg = ex.what();
    std::string field = "T";
    for (const char* key : {"iterations", "learning_rate", "snapshot_every", "init_stddev",
                            "alpha", "gamma"}) {
      if (msg.find(key) != std::string::npos) field = key;
    }
    const Entry* e = find(field);
    throw ConfigError(e ? e->line : 0, field, msg);
  }
  return setup;
}

SimulationSetup LoadSimulationConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "config", "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseSimulationConfig(buffer.str());
}

std::string SerializeSimulationConfig(const SimulationSetup& setup) {
  const SimConfig& c = setup.config;
  std::ostringstream out;
  out << "T=" << c.frames << '\n'
      << "classes=" << setup.class_map.classes() << '\n'
      << "blank_index=" << c.alphabet.blank() << '\n'
      << "labels=" << setup.class_map.Format(c.label_sequence) << '\n'
      << "init_seed=" << c.init_seed << '\n'
      << "init_stddev=" << FormatDouble(c.init_stddev) << '\n'
      << "learning_rate=" << FormatDouble(c.learning_rate) << '\n'
      << "iterations=" << c.iterations << '\n'
      << "snapshot_every=" << c.snapshot_every << '\n'
      << "alpha=" << (c.mods.alpha ? FormatDouble(*c.mods.alpha) : "none") << '\n'
      << "gamma=" << (c.mods.gamma ? FormatDouble(*c.mods.gamma) : "none") << '\n'
      << "rescale_scope="
      << (c.mods.rescale_scope == RescaleScope::kPerBatch ? "per_batch" : "per_sequence")
      << '\n';
  return out.str();
}

}  // namespace ctcfit::cli
