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

// Exhaustive path enumeration. Slow by construction; used only to check
// the dynamic-programming results on small instances.

#ifndef CTCFIT_ORACLE_H_
#define CTCFIT_ORACLE_H_

#include <cstdint>
#include <functional>

#include "ctcfit/ctc_loss.h"
#include "ctcfit/lattice.h"

namespace ctcfit::oracle {

inline constexpr std::uint64_t kMaxPaths = 10'000'000;

// Calls visit(path, probability, admissible) for each of the C^T paths, in
// lexicographic order. Throws TooLarge when C^T > kMaxPaths.
void EnumeratePaths(const ProbMatrix& probs, const LabelSequence& l, const Alphabet& alphabet,
                    const std::function<void(const Path&, double, bool)>& visit);

// Sum of prod_t y^t_{pi_t} over all paths collapsing to l.
double BruteProb(const ProbMatrix& probs, const LabelSequence& l, const Alphabet& alphabet);

// Admissible-path mass with pi_t = k, divided by BruteProb. Throws
// ZeroProbability when no admissible path has mass.
PseudoGT BrutePosterior(const ProbMatrix& probs, const LabelSequence& l,
                        const Alphabet& alphabet);

// Central differences of -ln BruteProb(softmax(logits), l) per logit.
// h must lie in [1e-7, 1e-3].
Matrix FdGradient(const LogitsMatrix& logits, const LabelSequence& l, const Alphabet& alphabet,
                  double h = 1e-5);

}  // namespace ctcfit::oracle

#endif  // CTCFIT_ORACLE_H_
