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

#ifndef CTCFIT_CLI_CSV_H_
#define CTCFIT_CLI_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ctcfit/matrix.h"
#include "ctcfit/simulator.h"

namespace ctcfit::cli {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

// Header: iteration,t,class,y,y_pseudo. One row per snapshot, frame, class.
void WriteTrajectoryCsv(std::ostream& out, const std::vector<SimSnapshot>& snapshots);

// Header: iteration,loss,nonblank_mass_fraction,blank_argmax_fraction.
void WriteMetricsCsv(std::ostream& out, const std::vector<SimSnapshot>& snapshots);

struct TrajectoryRecord {
  int iteration = 0;
  Matrix probs;
  Matrix pseudo_gt;
};

// Inverse of WriteTrajectoryCsv. Throws std::runtime_error on bad input.
std::vector<TrajectoryRecord> ReadTrajectoryCsv(std::istream& in);

// Headerless numeric CSV, one row per frame. Blank lines and '#' lines are
// skipped. Throws std::runtime_error with a line number on bad input.
Matrix ReadNumericCsv(std::istream& in);

}  // namespace ctcfit::cli

#endif  // CTCFIT_CLI_CSV_H_
