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

#include "ctcfit/cli/class_map.h"

#include <stdexcept>
#include <vector>

namespace ctcfit::cli {
namespace {

constexpr std::string_view kDefaultNames = "-abcdefghijklmnopqrstuvwxyz0123456789";

std::string Validated(std::string classes) {
  for (size_t i = 0; i < classes.size(); ++i) {
    const char c = classes[i];
    if (c == ',' || c == '\n' || c == '\r' || c == '=' || c == '#') {
      throw std::invalid_argument("classes: character '" + std::string(1, c) + "' is reserved");
    }
    if (classes.find(c, i + 1) != std::string::npos) {
      throw std::invalid_argument("classes: duplicate character '" + std::string(1, c) + "'");
    }
  }
  return classes;
}

}  // namespace

ClassMap::ClassMap(std::string classes, int blank_index)
    : classes_(Validated(std::move(classes))),
      alphabet_(static_cast<int>(classes_.size()), blank_index) {}

ClassMap ClassMap::Default(int num_classes, int blank_index) {
  if (num_classes < 2 || num_classes > static_cast<int>(kDefaultNames.size())) {
    throw std::invalid_argument("no default class names for " + std::to_string(num_classes) +
                                " classes; pass --classes");
  }
  std::string names(kDefaultNames.substr(0, static_cast<size_t>(num_classes)));
  if (blank_index > 0 && blank_index < num_classes) {
    std::swap(names[0], names[static_cast<size_t>(blank_index)]);
  }
  return ClassMap(names, blank_index);
}

LabelSequence ClassMap::Labels(std::string_view text) const {
  std::vector<int> labels;
  labels.reserve(text.size());
  for (char c : text) {
    const size_t k = classes_.find(c);
    if (k == std::string::npos) {
      throw std::invalid_argument("label '" + std::string(1, c) + "' is not in classes \"" +
                                  classes_ + "\"");
    }
    if (alphabet_.is_blank(static_cast<int>(k))) {
      throw std::invalid_argument("labels may not contain the blank '" + std::string(1, c) + "'");
    }
    labels.push_back(static_cast<int>(k));
  }
  return LabelSequence(std::move(labels), alphabet_);
}

std::string ClassMap::Format(const LabelSequence& l) const {
  std::string text;
  for (int k : l.labels()) text.push_back(name(k));
  return text;
}

Path ClassMap::ParsePath(std::string_view text) const {
  std::vector<int> symbols;
  for (char c : text) {
    const size_t k = classes_.find(c);
    if (k == std::string::npos) {
      throw std::invalid_argument("symbol '" + std::string(1, c) + "' is not in classes");
    }
    symbols.push_back(static_cast<int>(k));
  }
  return Path(std::move(symbols), alphabet_);
}

}  // namespace ctcfit::cli
