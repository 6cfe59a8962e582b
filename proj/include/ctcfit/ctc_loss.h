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

// CTC loss computed as a frame-wise fitting problem.
//
// The forward-backward recursion yields, besides ln p(l|Y), the posterior
// y'^t_k = p(pi_t = k | l, Y) of every frame taking every class. Treated as
// a constant target for the current iteration, this "pseudo ground truth"
// turns the CTC gradient into the plain cross-entropy gradient y - y'.
//
// All recursions run in log space; zero probabilities are exact -inf.

#ifndef CTCFIT_CTC_LOSS_H_
#define CTCFIT_CTC_LOSS_H_

#include <limits>

#include "ctcfit/lattice.h"
#include "ctcfit/matrix.h"

namespace ctcfit {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// ln(e^a + e^b) with -inf as the additive identity.
double LogSumExp(double a, double b);

// Per-frame target distributions. Rows sum to 1; only blank and classes
// occurring in l carry mass.
class PseudoGT : public Matrix {
 public:
  PseudoGT() = default;
  explicit PseudoGT(Matrix values) : Matrix(std::move(values)) {}

  int frames() const { return rows(); }
};

// log_alpha(t, s): log probability of all path prefixes pi_1..pi_t that end
// in state s of l' and are consistent with l'_1..l'_s, including frame t's
// emission. log_beta(t, s): log probability of all suffixes pi_{t+1}..pi_T
// that complete l' from state s, excluding frame t's emission. So
// alpha(t, s) * beta(t, s) sums the paths through s at frame t.
struct ForwardBackwardTables {
  ExtendedLabelSequence l_ext;
  Matrix log_alpha;  // T x (2U+1)
  Matrix log_beta;   // T x (2U+1)

  // ln p(l|Y) from the last forward row.
  double LogProbForward() const;
  // ln p(l|Y) from the first backward row; needs the emissions of frame 0.
  double LogProbBackward(const ProbMatrix& probs) const;
};

struct LossResult {
  double log_prob = 0.0;  // ln p(l|Y)
  double loss = 0.0;      // -ln p(l|Y)
  ProbMatrix probs;       // y, the softmax of the logits
  PseudoGT pseudo_gt;     // y'
  Matrix gradient;        // d loss / d a^t_k = y - y'
};

// Throws InfeasibleSequence if T < MinFrames(l), ZeroProbability if
// every admissible path has probability 0.
ForwardBackwardTables ForwardBackward(const ProbMatrix& probs,
                                      const ExtendedLabelSequence& l_ext);

// y'^t_k = sum over states s of l' with symbol k of alpha(t,s) beta(t,s) / p.
// Rows are renormalized; a correction above 1e-9 is a logic error.
PseudoGT Posterior(const ProbMatrix& probs, const ForwardBackwardTables& tables);

// -ln p(l|Y) with gradient y - y' with respect to the logits.
LossResult CtcLossGrad(const LogitsMatrix& logits, const LabelSequence& l,
                       const Alphabet& alphabet);

// Same computation starting from probabilities; the gradient is still with
// respect to the (implicit) logits.
LossResult CtcLossGradFromProbs(const ProbMatrix& probs, const LabelSequence& l,
                                const Alphabet& alphabet);

// sum_t CE(y'_t, y_t) = -sum_t sum_k y'^t_k ln y^t_k, with y floored at
// 1e-300 before the log.
double CrossEntropy(const Matrix& target, const ProbMatrix& probs);

// Per-frame argmax (ties to the lowest index), then collapse.
LabelSequence BestPathDecode(const ProbMatrix& probs, const Alphabet& alphabet);

}  // namespace ctcfit

#endif  // CTCFIT_CTC_LOSS_H_
