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

#include "ctcfit/oracle.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctcfit/errors.h"

namespace ctcfit::oracle {
namespace {

void CheckSize(int frames, int classes) {
  std::uint64_t paths = 1;
  for (int t = 0; t < frames; ++t) {
    paths *= static_cast<std::uint64_t>(classes);
    if (paths > kMaxPaths) {
      throw TooLarge(std::to_string(classes) + "^" + std::to_string(frames) +
                     " paths exceed the enumeration limit");
    }
  }
}

// Collapses on the fly and compares against l without allocating.
bool CollapsesTo(const std::vector<int>& path, const std::vector<int>& labels, int blank) {
  size_t next = 0;
  int prev = -1;
  for (int k : path) {
    if (k != prev && k != blank) {
      if (next == labels.size() || labels[next] != k) return false;
      ++next;
    }
    prev = k;
  }
  return next == labels.size();
}

// Odometer over all C^T paths.
template <typename Visit>
void ForEachPath(const ProbMatrix& probs, const LabelSequence& l, const Alphabet& alphabet,
                 Visit&& visit) {
  const int frames = probs.rows();
  const int classes = probs.cols();
  if (classes != alphabet.num_classes()) {
    throw std::invalid_argument("oracle: column count differs from alphabet size");
  }
  CheckSize(frames, classes);
  std::vector<int> path(static_cast<size_t>(frames), 0);
  while (true) {
    double p = 1.0;
    for (int t = 0; t < frames; ++t) p *= probs(t, path[static_cast<size_t>(t)]);
    visit(path, p, CollapsesTo(path, l.labels(), alphabet.blank()));
    int t = frames - 1;
    while (t >= 0 && ++path[static_cast<size_t>(t)] == classes) {
      path[static_cast<size_t>(t)] = 0;
      --t;
    }
    if (t < 0) break;
  }
}

ProbMatrix NaiveSoftmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int t = 0; t < logits.rows(); ++t) {
    double z = 0.0;
    for (int k = 0; k < logits.cols(); ++k) z += std::exp(logits(t, k));
    for (int k = 0; k < logits.cols(); ++k) out(t, k) = std::exp(logits(t, k)) / z;
  }
  return ProbMatrix(std::move(out));
}

}  // namespace

void EnumeratePaths(const ProbMatrix& probs, const LabelSequence& l, const Alphabet& alphabet,
                    const std::function<void(const Path&, double, bool)>& visit) {
  ForEachPath(probs, l, alphabet, [&](const std::vector<int>& path, double p, bool ok) {
    visit(Path(path, alphabet), p, ok);
  });
}

double BruteProb(const ProbMatrix& probs, const LabelSequence& l, const Alphabet& alphabet) {
  double total = 0.0;
  ForEachPath(probs, l, alphabet, [&](const std::vector<int>&, double p, bool ok) {
    if (ok) total += p;
  });
  return total;
}

PseudoGT BrutePosterior(const ProbMatrix& probs, const LabelSequence& l,
                        const Alphabet& alphabet) {
  Matrix mass(probs.rows(), probs.cols());
  double total = 0.0;
  ForEachPath(probs, l, alphabet, [&](const std::vector<int>& path, double p, bool ok) {
    if (!ok) return;
    total += p;
    for (size_t t = 0; t < path.size(); ++t) mass(static_cast<int>(t), path[t]) += p;
  });
  if (total == 0.0) throw ZeroProbability("no admissible path has nonzero probability");
  for (double& v : mass.data()) v /= total;
  return PseudoGT(std::move(mass));
}

Matrix FdGradient(const LogitsMatrix& logits, const LabelSequence& l, const Alphabet& alphabet,
                  double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw std::invalid_argument("FdGradient: h outside [1e-7, 1e-3]");
  auto loss = [&](const Matrix& a) {
    const double p = BruteProb(NaiveSoftmax(a), l, alphabet);
    if (p == 0.0) throw ZeroProbability("finite difference at a zero-probability point");
    return -std::log(p);
  };
  Matrix grad(logits.rows(), logits.cols());
  Matrix shifted = logits;
  for (int t = 0; t < logits.rows(); ++t) {
    for (int k = 0; k < logits.cols(); ++k) {
      const double a = logits(t, k);
      shifted(t, k) = a + h;
      const double up = loss(shifted);
      shifted(t, k) = a - h;
      const double down = loss(shifted);
      shifted(t, k) = a;
      grad(t, k) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace ctcfit::oracle
