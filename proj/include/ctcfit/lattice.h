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

// Core lattice types: the label alphabet with its blank, logits and
// probability matrices, label sequences, paths, and the collapse map that
// turns a frame-level path into a label sequence.

#ifndef CTCFIT_LATTICE_H_
#define CTCFIT_LATTICE_H_

#include <vector>

#include "ctcfit/matrix.h"

namespace ctcfit {

// The label set L' = L + {blank}. Classes are integer indices in
// [0, num_classes); one of them is reserved for blank.
class Alphabet {
 public:
  explicit Alphabet(int num_classes, int blank_index = 0);

  int num_classes() const { return num_classes_; }
  int blank() const { return blank_; }
  bool is_blank(int k) const { return k == blank_; }
  bool contains(int k) const { return k >= 0 && k < num_classes_; }

  bool operator==(const Alphabet&) const = default;

 private:
  int num_classes_;
  int blank_;
};

// Unnormalized network outputs, T frames by C classes. Entries are finite.
class LogitsMatrix : public Matrix {
 public:
  LogitsMatrix() = default;
  explicit LogitsMatrix(Matrix values);

  int frames() const { return rows(); }
};

// Per-frame distributions over L'. Rows are nonnegative and sum to 1.
class ProbMatrix : public Matrix {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  ProbMatrix() = default;
  // Validates row stochasticity; throws std::invalid_argument otherwise.
  explicit ProbMatrix(Matrix values, double tolerance = kRowSumTolerance);

  int frames() const { return rows(); }
};

// A label sequence l in L^U. Never contains blank.
class LabelSequence {
 public:
  LabelSequence() = default;
  LabelSequence(std::vector<int> labels, const Alphabet& alphabet);

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }
  int operator[](int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

  bool operator==(const LabelSequence&) const = default;

 private:
  std::vector<int> labels_;
};

// l' of length 2U+1: blanks at even positions, labels at odd positions.
class ExtendedLabelSequence {
 public:
  int size() const { return static_cast<int>(symbols_.size()); }
  int operator[](int s) const { return symbols_[static_cast<size_t>(s)]; }
  const std::vector<int>& symbols() const { return symbols_; }
  int blank() const { return blank_; }
  // Number of labels U.
  int label_count() const { return (size() - 1) / 2; }

  bool operator==(const ExtendedLabelSequence&) const = default;

 private:
  friend ExtendedLabelSequence Extend(const LabelSequence& l, const Alphabet& alphabet);
  std::vector<int> symbols_;
  int blank_ = 0;
};

// A frame-level assignment pi of one class per frame.
class Path {
 public:
  Path() = default;
  Path(std::vector<int> symbols, const Alphabet& alphabet);

  int size() const { return static_cast<int>(symbols_.size()); }
  int operator[](int t) const { return symbols_[static_cast<size_t>(t)]; }
  const std::vector<int>& symbols() const { return symbols_; }

  bool operator==(const Path&) const = default;

 private:
  std::vector<int> symbols_;
};

// Row-wise softmax, stabilized by subtracting each row's maximum.
ProbMatrix Softmax(const LogitsMatrix& logits);

// The collapse map: merge runs of identical symbols, then drop blanks.
LabelSequence Collapse(const Path& path, const Alphabet& alphabet);

// [-, l1, -, l2, -, ..., lU, -].
ExtendedLabelSequence Extend(const LabelSequence& l, const Alphabet& alphabet);

// U plus the number of adjacent equal label pairs; a path of length T
// collapsing to l exists iff T >= MinFrames(l).
int MinFrames(const LabelSequence& l);
int MinFrames(const ExtendedLabelSequence& l_ext);

// One explicit path of length `frames` that collapses to l: labels with a
// blank between repeated neighbours, padded with trailing blanks. Throws
// InfeasibleSequence when frames < MinFrames(l).
Path ConstructPath(const LabelSequence& l, const Alphabet& alphabet, int frames);

}  // namespace ctcfit

#endif  // CTCFIT_LATTICE_H_
