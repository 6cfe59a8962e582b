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

#include "ctcfit/lattice.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ctcfit/errors.h"

namespace ctcfit {

Alphabet::Alphabet(int num_classes, int blank_index)
    : num_classes_(num_classes), blank_(blank_index) {
  if (num_classes < 2) throw std::invalid_argument("Alphabet: need at least 2 classes");
  if (blank_index < 0 || blank_index >= num_classes) {
    throw std::invalid_argument("Alphabet: blank index out of range");
  }
}

LogitsMatrix::LogitsMatrix(Matrix values) : Matrix(std::move(values)) {
  if (rows() < 1) throw std::invalid_argument("LogitsMatrix: need at least one frame");
  for (double v : data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("LogitsMatrix: non-finite entry");
  }
}

ProbMatrix::ProbMatrix(Matrix values, double tolerance) : Matrix(std::move(values)) {
  if (rows() < 1) throw std::invalid_argument("ProbMatrix: need at least one frame");
  for (int t = 0; t < rows(); ++t) {
    double sum = 0.0;
    for (double v : row(t)) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("ProbMatrix: entry outside [0, 1] in row " +
                                    std::to_string(t));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream msg;
      msg << "ProbMatrix: row " << t << " sums to " << sum;
      throw std::invalid_argument(msg.str());
    }
  }
}

LabelSequence::LabelSequence(std::vector<int> labels, const Alphabet& alphabet)
    : labels_(std::move(labels)) {
  for (int k : labels_) {
    if (!alphabet.contains(k)) throw std::invalid_argument("LabelSequence: label out of range");
    if (alphabet.is_blank(k)) throw std::invalid_argument("LabelSequence: blank in labels");
  }
}

Path::Path(std::vector<int> symbols, const Alphabet& alphabet) : symbols_(std::move(symbols)) {
  for (int k : symbols_) {
    if (!alphabet.contains(k)) throw std::invalid_argument("Path: symbol out of range");
  }
}

ProbMatrix Softmax(const LogitsMatrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int t = 0; t < logits.rows(); ++t) {
    auto in = logits.row(t);
    auto dst = out.row(t);
    const double max = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (size_t k = 0; k < in.size(); ++k) {
      dst[k] = std::exp(in[k] - max);
      sum += dst[k];
    }
    for (double& v : dst) v /= sum;
  }
  return ProbMatrix(std::move(out), 1e-12);
}

LabelSequence Collapse(const Path& path, const Alphabet& alphabet) {
  std::vector<int> labels;
  int prev = -1;
  for (int k : path.symbols()) {
    if (k != prev && !alphabet.is_blank(k)) labels.push_back(k);
    prev = k;
  }
  return LabelSequence(std::move(labels), alphabet);
}

ExtendedLabelSequence Extend(const LabelSequence& l, const Alphabet& alphabet) {
  ExtendedLabelSequence ext;
  ext.blank_ = alphabet.blank();
  ext.symbols_.reserve(2 * l.labels().size() + 1);
  ext.symbols_.push_back(alphabet.blank());
  for (int k : l.labels()) {
    ext.symbols_.push_back(k);
    ext.symbols_.push_back(alphabet.blank());
  }
  return ext;
}

int MinFrames(const LabelSequence& l) {
  int repeats = 0;
  for (int i = 1; i < l.size(); ++i) repeats += l[i] == l[i - 1];
  return l.size() + repeats;
}

int MinFrames(const ExtendedLabelSequence& l_ext) {
  const int labels = l_ext.label_count();
  int repeats = 0;
  for (int s = 3; s < l_ext.size(); s += 2) repeats += l_ext[s] == l_ext[s - 2];
  return labels + repeats;
}

Path ConstructPath(const LabelSequence& l, const Alphabet& alphabet, int frames) {
  const int needed = MinFrames(l);
  if (frames < needed) {
    throw InfeasibleSequence("ConstructPath: " + std::to_string(frames) + " frames < " +
                             std::to_string(needed));
  }
  std::vector<int> symbols;
  symbols.reserve(static_cast<size_t>(frames));
  for (int i = 0; i < l.size(); ++i) {
    if (i > 0 && l[i] == l[i - 1]) symbols.push_back(alphabet.blank());
    symbols.push_back(l[i]);
  }
  symbols.resize(static_cast<size_t>(frames), alphabet.blank());
  return Path(std::move(symbols), alphabet);
}

}  // namespace ctcfit
