#pragma once

// SVG bar charts and CSV tables for evaluation reports. Output is plain
// text with fixed number formatting, so it diffs cleanly.

#include <algorithm>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>

#include "blm/experiments.hpp"

namespace blm {

inline constexpr double kChanceLevel = 0.2;

namespace report_detail {

inline std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bar {
  std::string label;
  double value;
};

// Vertical bars on a 0..1 axis, optional dashed chance line.
inline std::string bar_chart(std::string_view title, std::span<const Bar> bars, bool chance_line) {
  constexpr double kTop = 40, kPlot = 300, kLeft = 60, kBarW = 48, kGap = 24;
  const double width = kLeft + static_cast<double>(bars.size()) * (kBarW + kGap) + kGap;
  const double base = kTop + kPlot;
  auto y_of = [&](double v) { return base - v * kPlot; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width, 0) << "\" height=\"" << fmt(base + 60, 0)
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "  <title>" << xml_escape(title) << "</title>\n";
  s << "  <text x=\"" << fmt(width / 2, 1) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << xml_escape(title) << "</text>\n";
  for (int tick = 0; tick <= 10; tick += 2) {
    const double v = tick / 10.0;
    s << "  <line class=\"grid\" x1=\"" << fmt(kLeft, 1) << "\" y1=\"" << fmt(y_of(v), 1) << "\" x2=\""
      << fmt(width - kGap / 2, 1) << "\" y2=\"" << fmt(y_of(v), 1) << "\" stroke=\"#e0e0e0\"/>\n";
    s << "  <text x=\"" << fmt(kLeft - 6, 1) << "\" y=\"" << fmt(y_of(v) + 4, 1) << "\" text-anchor=\"end\">"
      << fmt(v, 1) << "</text>\n";
  }
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double v = std::clamp(bars[i].value, 0.0, 1.0);
    const double x = kLeft + kGap + static_cast<double>(i) * (kBarW + kGap);
    s << "  <rect class=\"bar\" data-label=\"" << xml_escape(bars[i].label) << "\" data-value=\""
      << fmt(bars[i].value, 6) << "\" x=\"" << fmt(x, 1) << "\" y=\"" << fmt(y_of(v), 1) << "\" width=\""
      << fmt(kBarW, 1) << "\" height=\"" << fmt(v * kPlot, 1) << "\" fill=\"#4c72b0\"/>\n";
    s << "  <text x=\"" << fmt(x + kBarW / 2, 1) << "\" y=\"" << fmt(y_of(v) - 4, 1)
      << "\" text-anchor=\"middle\">" << fmt(bars[i].value) << "</text>\n";
    s << "  <text x=\"" << fmt(x + kBarW / 2, 1) << "\" y=\"" << fmt(base + 16, 1)
      << "\" text-anchor=\"middle\">" << xml_escape(bars[i].label) << "</text>\n";
  }
  if (chance_line) {
    s << "  <line class=\"chance\" data-value=\"" << fmt(kChanceLevel, 6) << "\" x1=\"" << fmt(kLeft, 1)
      << "\" y1=\"" << fmt(y_of(kChanceLevel), 1) << "\" x2=\"" << fmt(width - kGap / 2, 1) << "\" y2=\""
      << fmt(y_of(kChanceLevel), 1) << "\" stroke=\"#808080\" stroke-dasharray=\"4,4\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace report_detail

// One bar per report, labelled by condition (and language when mixed).
inline std::string f1_chart_svg(std::span<const EvaluationReport> reports, std::string_view title = "F1") {
  bool mixed = false;
  for (const auto& r : reports) mixed |= r.condition.language != reports.front().condition.language;
  std::vector<report_detail::Bar> bars;
  for (const auto& r : reports) {
    bars.push_back({mixed ? to_string(r.condition.language) + " " + r.condition.name() : r.condition.name(), r.f1});
  }
  return report_detail::bar_chart(title, bars, true);
}

// Error probability per error label for one condition.
inline std::string error_chart_svg(const EvaluationReport& r) {
  std::vector<report_detail::Bar> bars;
  for (auto label : kErrorLabels) {
    auto it = r.error_distribution.find(label);
    bars.push_back({to_string(label), it == r.error_distribution.end() ? 0.0 : it->second});
  }
  return report_detail::bar_chart("Errors " + to_string(r.condition.language) + " " + r.condition.name(), bars,
                                  false);
}

inline std::string f1_csv(std::span<const EvaluationReport> reports) {
  std::string s = "language,condition,provider,f1,accuracy,macro_f1,n_test\n";
  for (const auto& r : reports) {
    s += to_string(r.condition.language) + "," + r.condition.name() + "," + r.condition.provider_id + "," +
         report_detail::fmt(r.f1, 6) + "," + report_detail::fmt(r.accuracy, 6) + "," +
         report_detail::fmt(r.macro_f1, 6) + "," + std::to_string(r.n_test) + "\n";
  }
  return s;
}

inline std::string errors_csv(std::span<const EvaluationReport> reports) {
  std::string s = "language,condition,label,probability\n";
  for (const auto& r : reports) {
    for (auto label : kErrorLabels) {
      auto it = r.error_distribution.find(label);
      s += to_string(r.condition.language) + "," + r.condition.name() + "," + to_string(label) + "," +
           report_detail::fmt(it == r.error_distribution.end() ? 0.0 : it->second, 6) + "\n";
    }
  }
  return s;
}

}  // namespace blm
