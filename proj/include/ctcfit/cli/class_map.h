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

#ifndef CTCFIT_CLI_CLASS_MAP_H_
#define CTCFIT_CLI_CLASS_MAP_H_

#include <string>
#include <string_view>

#include "ctcfit/lattice.h"

namespace ctcfit::cli {

// Character names for class indices: position i of `classes` names class i.
// For example "-abc" with blank 0 is a 4-class alphabet whose blank prints
// as '-'.
class ClassMap {
 public:
  explicit ClassMap(std::string classes, int blank_index = 0);

  // "-" followed by a-z then 0-9, truncated to num_classes characters.
  static ClassMap Default(int num_classes, int blank_index = 0);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::string& classes() const { return classes_; }
  char name(int k) const { return classes_[static_cast<size_t>(k)]; }

  // Throws std::invalid_argument on unknown or blank characters.
  LabelSequence Labels(std::string_view text) const;
  std::string Format(const LabelSequence& l) const;
  Path ParsePath(std::string_view text) const;

 private:
  std::string classes_;
  Alphabet alphabet_;
};

}  // namespace ctcfit::cli

#endif  // CTCFIT_CLI_CLASS_MAP_H_
