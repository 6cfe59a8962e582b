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

#include "ctcfit/cli/csv.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ctcfit::cli {
namespace {

std::vector<std::string_view> Split(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T Parse(std::string_view field, int line) {
  field = Trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw std::runtime_error("line " + std::to_string(line) + ": cannot parse \"" +
                             std::string(field) + "\"");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("FormatDouble: buffer too small");
  return std::string(buf.data(), ptr);
}

void WriteTrajectoryCsv(std::ostream& out, const std::vector<SimSnapshot>& snapshots) {
  out << "iteration,t,class,y,y_pseudo\n";
  for (const SimSnapshot& s : snapshots) {
    for (int t = 0; t < s.probs.rows(); ++t) {
      for (int k = 0; k < s.probs.cols(); ++k) {
        out << s.iteration << ',' << t << ',' << k << ',' << FormatDouble(s.probs(t, k)) << ','
            << FormatDouble(s.pseudo_gt(t, k)) << '\n';
      }
    }
  }
}

void WriteMetricsCsv(std::ostream& out, const std::vector<SimSnapshot>& snapshots) {
  out << "iteration,loss,nonblank_mass_fraction,blank_argmax_fraction\n";
  for (const SimSnapshot& s : snapshots) {
    out << s.iteration << ',' << FormatDouble(s.loss) << ','
        << FormatDouble(s.metrics.nonblank_mass_fraction) << ','
        << FormatDouble(s.metrics.blank_argmax_fraction) << '\n';
  }
}

std::vector<TrajectoryRecord> ReadTrajectoryCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || Trim(line) != "iteration,t,class,y,y_pseudo") {
    throw std::runtime_error("trajectory CSV: missing header");
  }
  struct Row {
    int iteration, t, k;
    double y, target;
  };
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = Split(line);
    if (f.size() != 5) throw std::runtime_error("line " + std::to_string(line_no) + ": 5 fields expected");
    rows.push_back({Parse<int>(f[0], line_no), Parse<int>(f[1], line_no), Parse<int>(f[2], line_no),
                    Parse<double>(f[3], line_no), Parse<double>(f[4], line_no)});
  }

  std::vector<TrajectoryRecord> records;
  size_t i = 0;
  while (i < rows.size()) {
    const int iteration = rows[i].iteration;
    size_t j = i;
    int frames = 0, classes = 0;
    while (j < rows.size() && rows[j].iteration == iteration) {
      frames = std::max(frames, rows[j].t + 1);
      classes = std::max(classes, rows[j].k + 1);
      ++j;
    }
    if (static_cast<size_t>(frames) * classes != j - i) {
      throw std::runtime_error("trajectory CSV: incomplete block for iteration " +
                               std::to_string(iteration));
    }
    TrajectoryRecord rec{iteration, Matrix(frames, classes), Matrix(frames, classes)};
    for (size_t r = i; r < j; ++r) {
      if (rows[r].t < 0 || rows[r].k < 0) throw std::runtime_error("trajectory CSV: negative index");
      rec.probs(rows[r].t, rows[r].k) = rows[r].y;
      rec.pseudo_gt(rows[r].t, rows[r].k) = rows[r].target;
    }
    records.push_back(std::move(rec));
    i = j;
  }
  return records;
}

Matrix ReadNumericCsv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<double> values;
    for (std::string_view field : Split(trimmed)) values.push_back(Parse<double>(field, line_no));
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(rows.front().size()) + " columns, got " +
                               std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error("no data rows");
  return Matrix::FromRows(rows);
}

}  // namespace ctcfit::cli
