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

#include "ctcfit/cli/svg.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "ctcfit/cli/csv.h"

namespace ctcfit::cli {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 360;
constexpr double kLeft = 60;
constexpr double kRight = 620;
constexpr double kTop = 40;
constexpr double kBottom = 320;

constexpr std::array<std::string_view, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr std::string_view kBlankColor = "#7f7f7f";

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

double MapX(double x, double x_max) {
  return x_max <= 0 ? kLeft : kLeft + (kRight - kLeft) * x / x_max;
}
double MapY(double y) { return kBottom - (kBottom - kTop) * std::clamp(y, 0.0, 1.0); }

void Header(std::ostream& out, std::string_view title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << Escape(title) << "</text>\n";
}

void Axes(std::ostream& out, double x_max, std::string_view x_label, int x_ticks) {
  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (double y : {0.0, 0.5, 1.0}) {
    out << "<text x=\"" << kLeft - 28 << "\" y=\"" << Num(MapY(y) + 3) << "\">" << Num(y)
        << "</text>\n";
  }
  for (int i = 0; i <= x_ticks; ++i) {
    const double x = x_max * i / x_ticks;
    char label[32];
    std::snprintf(label, sizeof(label), "%g", x);
    out << "<text x=\"" << Num(MapX(x, x_max) - 6) << "\" y=\"" << kBottom + 14 << "\">" << label
        << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kRight) / 2 - 20 << "\" y=\"" << kBottom + 30 << "\">"
      << Escape(x_label) << "</text>\n</g>\n";
}

void Polyline(std::ostream& out, const std::vector<std::pair<double, double>>& points,
              std::string_view color, bool dashed, double width = 1.5) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << '"';
  if (dashed) out << " stroke-dasharray=\"5,3\"";
  out << " points=\"";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i) out << ' ';
    out << Num(points[i].first) << ',' << Num(points[i].second);
  }
  out << "\"/>\n";
}

}  // namespace

std::string RenderSnapshotSvg(const SimSnapshot& snapshot, const ClassMap& class_map) {
  std::ostringstream out;
  const int frames = snapshot.probs.rows();
  const double x_max = std::max(1, frames - 1);
  Header(out, "iteration " + std::to_string(snapshot.iteration) + ", loss " +
                  FormatDouble(snapshot.loss));
  Axes(out, x_max, "frame", std::min(5, static_cast<int>(x_max)));

  const Alphabet& alphabet = class_map.alphabet();
  int color_index = 0;
  for (int k = 0; k < snapshot.probs.cols(); ++k) {
    const bool blank = alphabet.is_blank(k);
    const std::string_view color =
        blank ? kBlankColor : kPalette[static_cast<size_t>(color_index++) % kPalette.size()];
    std::vector<std::pair<double, double>> output, target;
    for (int t = 0; t < frames; ++t) {
      output.emplace_back(MapX(t, x_max), MapY(snapshot.probs(t, k)));
      target.emplace_back(MapX(t, x_max), MapY(snapshot.pseudo_gt(t, k)));
    }
    out << "<g id=\"class-" << k << "\">\n";
    Polyline(out, output, color, false, blank ? 1.0 : 1.5);
    Polyline(out, target, color, true, blank ? 1.0 : 1.5);
    out << "</g>\n";
    out << "<text x=\"" << kRight - 40 << "\" y=\"" << kTop + 12 * (k + 1)
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"" << color << "\">"
        << Escape(std::string(1, class_map.name(k))) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string RenderMetricsSvg(const std::vector<SimSnapshot>& snapshots) {
  std::ostringstream out;
  Header(out, "loss / max loss (black), non-blank mass (blue), blank argmax (red)");
  const double x_max = snapshots.empty() ? 1.0 : std::max(1, snapshots.back().iteration);
  Axes(out, x_max, "iteration", 5);
  double max_loss = 0.0;
  for (const auto& s : snapshots) max_loss = std::max(max_loss, s.loss);
  std::vector<std::pair<double, double>> loss, nonblank, blank;
  for (const auto& s : snapshots) {
    const double x = MapX(s.iteration, x_max);
    loss.emplace_back(x, MapY(max_loss > 0 ? s.loss / max_loss : 0.0));
    nonblank.emplace_back(x, MapY(s.metrics.nonblank_mass_fraction));
    blank.emplace_back(x, MapY(s.metrics.blank_argmax_fraction));
  }
  Polyline(out, loss, "black", false);
  Polyline(out, nonblank, kPalette[0], false);
  Polyline(out, blank, kPalette[1], true);
  out << "</svg>\n";
  return out.str();
}

}  // namespace ctcfit::cli
