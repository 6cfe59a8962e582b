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

#ifndef CTCFIT_ERRORS_H_
#define CTCFIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ctcfit {

// Base of all domain errors raised by the library. Argument validation
// failures (malformed matrices, out-of-range labels) use
// std::invalid_argument instead.
class CtcError : public std::runtime_error {
 public:
  explicit CtcError(const std::string& what, int item_index = -1)
      : std::runtime_error(what), item_index_(item_index) {}

  // Index of the offending batch item, or -1 outside batch evaluation.
  int item_index() const { return item_index_; }

 private:
  int item_index_;
};

// T is smaller than the minimum number of frames needed to emit the labels.
class InfeasibleSequence : public CtcError {
 public:
  using CtcError::CtcError;
};

// Every admissible path has probability zero, so ln p(l|Y) = -inf.
class ZeroProbability : public CtcError {
 public:
  using CtcError::CtcError;
};

// Non-blank proportion rescaling requested for a batch with no labels.
class DegenerateProportion : public CtcError {
 public:
  using CtcError::CtcError;
};

// Exhaustive enumeration exceeds the oracle's size guard.
class TooLarge : public CtcError {
 public:
  using CtcError::CtcError;
};

}  // namespace ctcfit

#endif  // CTCFIT_ERRORS_H_
