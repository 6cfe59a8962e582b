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

#include "ctcfit/refit.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctcfit/errors.h"

namespace ctcfit {

void ModConfig::Validate() const {
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (gamma && !(*gamma >= 0.0 && std::isfinite(*gamma))) {
    throw std::invalid_argument("gamma must be a finite value >= 0");
  }
}

void RescaleStats::Accumulate(const PseudoGT& pseudo_gt, const LabelSequence& l,
                              const Alphabet& alphabet) {
  const auto classes = static_cast<size_t>(alphabet.num_classes());
  if (totals.empty()) {
    totals.assign(classes, 0.0);
    counts.assign(classes, 0);
  }
  if (totals.size() != classes || static_cast<size_t>(pseudo_gt.cols()) != classes) {
    throw std::invalid_argument("RescaleStats: class count mismatch");
  }
  for (int t = 0; t < pseudo_gt.rows(); ++t) {
    auto r = pseudo_gt.row(t);
    for (size_t k = 0; k < classes; ++k) totals[k] += r[k];
  }
  for (int k : l.labels()) ++counts[static_cast<size_t>(k)];
  counts[static_cast<size_t>(alphabet.blank())] += l.size();
}

int RescaleStats::NonBlankCount(const Alphabet& alphabet) const {
  int n = 0;
  for (size_t k = 0; k < counts.size(); ++k) {
    if (static_cast<int>(k) != alphabet.blank()) n += counts[k];
  }
  return n;
}

RescaleStats ComputeRescaleStats(const PseudoGT& pseudo_gt, const LabelSequence& l,
                                 const Alphabet& alphabet) {
  RescaleStats stats;
  stats.Accumulate(pseudo_gt, l, alphabet);
  return stats;
}

std::vector<double> AlphaScaleFactors(const RescaleStats& stats, double alpha,
                                      const Alphabet& alphabet) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const auto classes = static_cast<size_t>(alphabet.num_classes());
  if (stats.totals.size() != classes || stats.counts.size() != classes) {
    throw std::invalid_argument("AlphaScaleFactors: stats do not match alphabet");
  }
  const int label_total = stats.NonBlankCount(alphabet);
  if (label_total == 0) {
    throw DegenerateProportion("non-blank proportion is undefined for empty label sequences");
  }
  std::vector<double> factors(classes, 1.0);
  for (size_t k = 0; k < classes; ++k) {
    const double v = stats.totals[k];
    if (v <= 0.0) continue;  // no mass to move
    if (static_cast<int>(k) == alphabet.blank()) {
      factors[k] = (1.0 - alpha) * label_total / v;
    } else {
      if (stats.counts[k] == 0) {
        throw std::invalid_argument("AlphaScaleFactors: class " + std::to_string(k) +
                                    " has pseudo-GT mass but no occurrences in the labels");
      }
      factors[k] = alpha * stats.counts[k] / v;
    }
  }
  return factors;
}

Matrix AlphaScaleUnnormalized(const PseudoGT& pseudo_gt, const RescaleStats& stats,
                              double alpha, const Alphabet& alphabet) {
  const std::vector<double> factors = AlphaScaleFactors(stats, alpha, alphabet);
  Matrix scaled = pseudo_gt;
  for (int t = 0; t < scaled.rows(); ++t) {
    auto r = scaled.row(t);
    for (size_t k = 0; k < r.size(); ++k) r[k] *= factors[k];
  }
  return scaled;
}

PseudoGT AlphaRescale(const PseudoGT& pseudo_gt, const RescaleStats& stats, double alpha,
                      const Alphabet& alphabet) {
  Matrix scaled = AlphaScaleUnnormalized(pseudo_gt, stats, alpha, alphabet);
  for (int t = 0; t < scaled.rows(); ++t) {
    auto r = scaled.row(t);
    double sum = 0.0;
    for (double v : r) sum += v;
    for (double& v : r) v /= sum;
  }
  return PseudoGT(std::move(scaled));
}

bool FrameWeights::all_zero() const {
  return std::all_of(raw.begin(), raw.end(), [](double w) { return w == 0.0; });
}

FrameWeights ComputeFrameWeights(const ProbMatrix& probs, const Matrix& pseudo_gt,
                                 double gamma) {
  if (probs.rows() != pseudo_gt.rows() || probs.cols() != pseudo_gt.cols()) {
    throw std::invalid_argument("ComputeFrameWeights: shape mismatch");
  }
  FrameWeights weights;
  weights.gamma = gamma;
  const int frames = probs.rows();
  weights.raw.resize(static_cast<size_t>(frames));
  weights.normalized.resize(static_cast<size_t>(frames));
  double sum = 0.0;
  for (int t = 0; t < frames; ++t) {
    auto y = probs.row(t);
    auto target = pseudo_gt.row(t);
    double w = 0.0;
    for (size_t k = 0; k < y.size(); ++k) w = std::max(w, target[k] - y[k]);
    weights.raw[static_cast<size_t>(t)] = w;
    // pow(0, 0) == 1
    const double f = std::pow(w, gamma);
    weights.normalized[static_cast<size_t>(t)] = f;
    sum += f;
  }
  if (sum > 0.0) {
    const double mean = sum / frames;
    for (double& f : weights.normalized) f /= mean;
  }
  return weights;
}

Matrix GammaReweight(const Matrix& gradient, const FrameWeights& weights, double gamma) {
  if (static_cast<int>(weights.normalized.size()) != gradient.rows()) {
    throw std::invalid_argument("GammaReweight: weight count differs from frame count");
  }
  if (weights.gamma != gamma) {
    throw std::invalid_argument("GammaReweight: weights were computed for another gamma");
  }
  if (gamma == 0.0 || weights.all_zero()) return gradient;
  Matrix out = gradient;
  for (int t = 0; t < out.rows(); ++t) {
    const double f = weights.normalized[static_cast<size_t>(t)];
    for (double& g : out.row(t)) g *= f;
  }
  return out;
}

namespace {

void SetGradient(LossResult& result) {
  auto y = result.probs.data();
  auto target = result.pseudo_gt.data();
  auto grad = result.gradient.data();
  for (size_t i = 0; i < grad.size(); ++i) grad[i] = y[i] - target[i];
}

}  // namespace

std::vector<LossResult> ModifiedLossGrad(const Batch& batch, const ModConfig& config,
                                         const Alphabet& alphabet) {
  config.Validate();
  if (batch.items.empty()) throw std::invalid_argument("ModifiedLossGrad: empty batch");

  std::vector<LossResult> results;
  results.reserve(batch.items.size());
  for (size_t i = 0; i < batch.items.size(); ++i) {
    const auto& [logits, labels] = batch.items[i];
    const int index = static_cast<int>(i);
    try {
      results.push_back(CtcLossGrad(logits, labels, alphabet));
    } catch (const InfeasibleSequence& e) {
      throw InfeasibleSequence("batch item " + std::to_string(i) + ": " + e.what(), index);
    } catch (const ZeroProbability& e) {
      throw ZeroProbability("batch item " + std::to_string(i) + ": " + e.what(), index);
    }
  }

  if (config.alpha) {
    if (config.rescale_scope == RescaleScope::kPerBatch) {
      RescaleStats stats;
      for (size_t i = 0; i < results.size(); ++i) {
        stats.Accumulate(results[i].pseudo_gt, batch.items[i].second, alphabet);
      }
      for (auto& r : results) {
        r.pseudo_gt = AlphaRescale(r.pseudo_gt, stats, *config.alpha, alphabet);
        SetGradient(r);
      }
    } else {
      for (size_t i = 0; i < results.size(); ++i) {
        auto& r = results[i];
        const RescaleStats stats = ComputeRescaleStats(r.pseudo_gt, batch.items[i].second, alphabet);
        r.pseudo_gt = AlphaRescale(r.pseudo_gt, stats, *config.alpha, alphabet);
        SetGradient(r);
      }
    }
  }

  if (config.gamma && *config.gamma != 0.0) {
    for (auto& r : results) {
      const FrameWeights weights = ComputeFrameWeights(r.probs, r.pseudo_gt, *config.gamma);
      r.gradient = GammaReweight(r.gradient, weights, *config.gamma);
    }
  }
  return results;
}

}  // namespace ctcfit
