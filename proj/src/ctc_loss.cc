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

#include "ctcfit/ctc_loss.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ctcfit/errors.h"

namespace ctcfit {
namespace {

constexpr double kRenormTolerance = 1e-9;
constexpr double kProbFloor = 1e-300;

double LogSumExp3(double a, double b, double c) {
  const double m = std::max({a, b, c});
  if (m == kLogZero) return kLogZero;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

// Transition s-2 -> s is allowed for a non-blank symbol differing from the
// one two positions back.
bool CanSkip(const ExtendedLabelSequence& l_ext, int s) {
  return s >= 2 && l_ext[s] != l_ext.blank() && l_ext[s] != l_ext[s - 2];
}

}  // namespace

double LogSumExp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double ForwardBackwardTables::LogProbForward() const {
  const int last = log_alpha.rows() - 1;
  const int s = log_alpha.cols();
  double lp = log_alpha(last, s - 1);
  if (s >= 2) lp = LogSumExp(lp, log_alpha(last, s - 2));
  return lp;
}

double ForwardBackwardTables::LogProbBackward(const ProbMatrix& probs) const {
  double lp = std::log(probs(0, l_ext[0])) + log_beta(0, 0);
  if (l_ext.size() >= 2) lp = LogSumExp(lp, std::log(probs(0, l_ext[1])) + log_beta(0, 1));
  return lp;
}

ForwardBackwardTables ForwardBackward(const ProbMatrix& probs,
                                      const ExtendedLabelSequence& l_ext) {
  const int frames = probs.rows();
  const int states = l_ext.size();
  if (frames < MinFrames(l_ext)) {
    std::ostringstream msg;
    msg << "label sequence needs " << MinFrames(l_ext) << " frames, got " << frames;
    throw InfeasibleSequence(msg.str());
  }
  for (int s = 0; s < states; ++s) {
    if (l_ext[s] < 0 || l_ext[s] >= probs.cols()) {
      throw std::invalid_argument("ForwardBackward: symbol outside probability columns");
    }
  }

  // Emission log-probabilities along l', laid out T x S.
  Matrix log_emit(frames, states);
  for (int t = 0; t < frames; ++t) {
    for (int s = 0; s < states; ++s) log_emit(t, s) = std::log(probs(t, l_ext[s]));
  }

  ForwardBackwardTables tables{l_ext, Matrix(frames, states, kLogZero),
                               Matrix(frames, states, kLogZero)};
  Matrix& alpha = tables.log_alpha;
  Matrix& beta = tables.log_beta;

  alpha(0, 0) = log_emit(0, 0);
  if (states > 1) alpha(0, 1) = log_emit(0, 1);
  for (int t = 1; t < frames; ++t) {
    // States further than 2(t+1) positions in cannot have been reached yet.
    const int reach = std::min(states, 2 * (t + 1));
    for (int s = 0; s < reach; ++s) {
      const double stay = alpha(t - 1, s);
      const double advance = s >= 1 ? alpha(t - 1, s - 1) : kLogZero;
      const double skip = CanSkip(l_ext, s) ? alpha(t - 1, s - 2) : kLogZero;
      const double sum = LogSumExp3(stay, advance, skip);
      alpha(t, s) = sum == kLogZero ? kLogZero : sum + log_emit(t, s);
    }
  }

  beta(frames - 1, states - 1) = 0.0;
  if (states > 1) beta(frames - 1, states - 2) = 0.0;
  for (int t = frames - 2; t >= 0; --t) {
    // Only the last 2(T-t) states can still complete l'.
    const int first = std::max(0, states - 2 * (frames - t));
    for (int s = first; s < states; ++s) {
      const double stay = beta(t + 1, s) + log_emit(t + 1, s);
      const double advance =
          s + 1 < states ? beta(t + 1, s + 1) + log_emit(t + 1, s + 1) : kLogZero;
      const double skip = s + 2 < states && CanSkip(l_ext, s + 2)
                              ? beta(t + 1, s + 2) + log_emit(t + 1, s + 2)
                              : kLogZero;
      beta(t, s) = LogSumExp3(stay, advance, skip);
    }
  }

  if (tables.LogProbForward() == kLogZero) {
    throw ZeroProbability("every admissible path has probability zero");
  }
  return tables;
}

PseudoGT Posterior(const ProbMatrix& probs, const ForwardBackwardTables& tables) {
  const double log_prob = tables.LogProbForward();
  if (log_prob == kLogZero) throw ZeroProbability("posterior of a zero-probability sequence");
  const int frames = probs.rows();
  const int states = tables.l_ext.size();
  Matrix values(frames, probs.cols());
  for (int t = 0; t < frames; ++t) {
    auto out = values.row(t);
    for (int s = 0; s < states; ++s) {
      const double joint = tables.log_alpha(t, s) + tables.log_beta(t, s);
      if (joint == kLogZero) continue;
      out[static_cast<size_t>(tables.l_ext[s])] += std::exp(joint - log_prob);
    }
    double sum = 0.0;
    for (double v : out) sum += v;
    if (std::abs(sum - 1.0) > kRenormTolerance) {
      std::ostringstream msg;
      msg << "posterior row " << t << " sums to " << sum << " before renormalization";
      throw std::logic_error(msg.str());
    }
    for (double& v : out) v /= sum;
  }
  return PseudoGT(std::move(values));
}

LossResult CtcLossGradFromProbs(const ProbMatrix& probs, const LabelSequence& l,
                                const Alphabet& alphabet) {
  if (probs.cols() != alphabet.num_classes()) {
    throw std::invalid_argument("CtcLossGrad: column count differs from alphabet size");
  }
  const ForwardBackwardTables tables = ForwardBackward(probs, Extend(l, alphabet));
  LossResult result;
  // p <= 1; clamp rounding so that loss >= 0.
  result.log_prob = std::min(tables.LogProbForward(), 0.0);
  result.loss = 0.0 - result.log_prob;  // never -0
  result.pseudo_gt = Posterior(probs, tables);
  result.gradient = Matrix(probs.rows(), probs.cols());
  auto y = probs.data();
  auto target = result.pseudo_gt.data();
  auto grad = result.gradient.data();
  for (size_t i = 0; i < grad.size(); ++i) grad[i] = y[i] - target[i];
  result.probs = probs;
  return result;
}

LossResult CtcLossGrad(const LogitsMatrix& logits, const LabelSequence& l,
                       const Alphabet& alphabet) {
  return CtcLossGradFromProbs(Softmax(logits), l, alphabet);
}

double CrossEntropy(const Matrix& target, const ProbMatrix& probs) {
  if (target.rows() != probs.rows() || target.cols() != probs.cols()) {
    throw std::invalid_argument("CrossEntropy: shape mismatch");
  }
  double total = 0.0;
  auto p = probs.data();
  auto q = target.data();
  for (size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) continue;
    total -= q[i] * std::log(std::max(p[i], kProbFloor));
  }
  return total;
}

LabelSequence BestPathDecode(const ProbMatrix& probs, const Alphabet& alphabet) {
  std::vector<int> best(static_cast<size_t>(probs.rows()));
  for (int t = 0; t < probs.rows(); ++t) {
    auto r = probs.row(t);
    best[static_cast<size_t>(t)] =
        static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return Collapse(Path(std::move(best), alphabet), alphabet);
}

}  // namespace ctcfit
