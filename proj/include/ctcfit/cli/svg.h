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

#ifndef CTCFIT_CLI_SVG_H_
#define CTCFIT_CLI_SVG_H_

#include <string>

#include "ctcfit/cli/class_map.h"
#include "ctcfit/simulator.h"

namespace ctcfit::cli {

// Activation of every class along the time axis. Solid lines are the
// outputs y, dashed lines the pseudo ground truth; blank is drawn in grey.
std::string RenderSnapshotSvg(const SimSnapshot& snapshot, const ClassMap& class_map);

// Loss (normalized to its maximum), non-blank mass fraction and blank argmax
// fraction against iteration, one point per snapshot.
std::string RenderMetricsSvg(const std::vector<SimSnapshot>& snapshots);

}  // namespace ctcfit::cli

#endif  // CTCFIT_CLI_SVG_H_
