//
// Copyright 2026 The FGWS Authors
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
//

// CSV tables and self-contained SVG charts.

#ifndef FGWS_REPORT_HPP_
#define FGWS_REPORT_HPP_

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "fgws/stats.hpp"

namespace fgws {

inline std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline std::string optional_fixed(const std::optional<double>& v,
                                  int digits = 4) {
  return v ? fixed(*v, digits) : std::string();
}

inline std::string freq_stats_csv(const std::vector<FreqStatsRow>& rows) {
  std::ostringstream os;
  os << "attack,pairs,replaced_mean,replaced_sd,subst_mean,subst_sd,subst_d,"
        "subst_log10_bf10,non_oov_n,non_oov_mean,non_oov_sd,non_oov_d,"
        "non_oov_log10_bf10\n";
  auto bf = [](const SampleSummary& s) {
    return s.bf ? fixed(s.bf->log10_bf10, 3) : std::string();
  };
  for (const auto& r : rows) {
    os << r.attack << ',' << r.pairs << ',' << fixed(r.replaced.mean) << ','
       << fixed(r.replaced.sd) << ',' << fixed(r.substituted.mean) << ','
       << fixed(r.substituted.sd) << ',' << optional_fixed(r.substituted.d)
       << ',' << bf(r.substituted) << ',' << r.non_oov.n << ','
       << fixed(r.non_oov.mean) << ',' << fixed(r.non_oov.sd) << ','
       << optional_fixed(r.non_oov.d) << ',' << bf(r.non_oov) << '\n';
  }
  return os.str();
}

struct DetectionRow {
  std::string attack;
  std::string method;
  DetectionMetrics metrics;
};

inline std::string detection_csv(const std::vector<DetectionRow>& rows) {
  std::ostringstream os;
  os << "attack,method,after_attack_accuracy,restored_accuracy,tpr,fpr,"
        "precision,f1\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    os << r.attack << ',' << r.method << ',' << fixed(m.after_attack_accuracy, 2)
       << ',' << fixed(m.restored_accuracy, 2) << ',' << fixed(m.tpr, 2) << ','
       << fixed(m.fpr, 2) << ',' << fixed(m.precision, 2) << ','
       << fixed(m.f1, 2) << '\n';
  }
  return os.str();
}

struct SweepSeries {
  std::string label;
  std::vector<SweepPoint> points;
};

inline std::string sweep_csv(const std::vector<SweepSeries>& series) {
  std::ostringstream os;
  os << "attack,budget,gamma,tpr\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      os << s.label << ',' << fixed(p.budget, 4) << ',' << fixed(p.gamma, 6)
         << ',' << fixed(p.tpr, 2) << '\n';
    }
  }
  return os.str();
}

namespace detail {

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                 "#66a61e", "#e6ab02"};
  return colors[i % 6];
}

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Line chart of TPR (%) against the FPR budget.
inline std::string sweep_svg(const std::vector<SweepSeries>& series) {
  constexpr double W = 520, H = 360, L = 60, R = 140, T = 30, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  double max_budget = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) max_budget = std::max(max_budget, p.budget);
  }
  if (max_budget <= 0.0) max_budget = 1.0;
  auto x = [&](double b) { return L + pw * b / max_budget; };
  auto y = [&](double tpr) { return T + ph * (1.0 - tpr / 100.0); };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw
     << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L
     << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 100; tick += 25) {
    os << "<text x=\"" << L - 6 << "\" y=\"" << y(tick) + 4
       << "\" text-anchor=\"end\">" << tick << "</text>\n";
  }
  if (!series.empty()) {
    for (const auto& p : series.front().points) {
      os << "<text x=\"" << x(p.budget) << "\" y=\"" << T + ph + 16
         << "\" text-anchor=\"middle\">" << fixed(p.budget, 2) << "</text>\n";
    }
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\">FPR budget</text>\n";
  os << "<text x=\"16\" y=\"" << T + ph / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << T + ph / 2
     << ")\">TPR (%)</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    os << "<polyline fill=\"none\" stroke=\"" << detail::palette(i)
       << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : s.points) os << x(p.budget) << ',' << y(p.tpr) << ' ';
    os << "\"/>\n";
    for (const auto& p : s.points) {
      os << "<circle cx=\"" << x(p.budget) << "\" cy=\"" << y(p.tpr)
         << "\" r=\"3\" fill=\"" << detail::palette(i) << "\"/>\n";
    }
    const double ly = T + 14.0 * static_cast<double>(i) + 6;
    os << "<rect x=\"" << L + pw + 12 << "\" y=\"" << ly - 8
       << "\" width=\"10\" height=\"10\" fill=\"" << detail::palette(i)
       << "\"/>\n";
    os << "<text x=\"" << L + pw + 26 << "\" y=\"" << ly + 1 << "\">"
       << detail::svg_escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os << "bin_lower,bin_upper,replaced,substituted\n";
  for (const auto& b : bins) {
    os << fixed(b.lower, 2) << ',' << fixed(b.upper, 2) << ',' << b.replaced
       << ',' << b.substituted << '\n';
  }
  return os.str();
}

// Grouped bar chart: replaced vs substituted counts per log-frequency bin.
inline std::string histogram_svg(const std::vector<HistogramBin>& bins,
                                 const std::string& title) {
  constexpr double W = 560, H = 340, L = 50, R = 20, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  std::size_t max_count = 1;
  for (const auto& b : bins) {
    max_count = std::max({max_count, b.replaced, b.substituted});
  }
  const double slot = bins.empty() ? pw : pw / static_cast<double>(bins.size());
  const double bar = slot * 0.4;
  auto height = [&](std::size_t c) {
    return ph * static_cast<double>(c) / static_cast<double>(max_count);
  };
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">"
     << detail::svg_escape(title) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw
     << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">"
     << max_count << "</text>\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double x0 = L + slot * static_cast<double>(i) + slot * 0.1;
    const double hr = height(bins[i].replaced), hs = height(bins[i].substituted);
    os << "<rect x=\"" << x0 << "\" y=\"" << T + ph - hr << "\" width=\"" << bar
       << "\" height=\"" << hr << "\" fill=\"" << detail::palette(0) << "\"/>\n";
    os << "<rect x=\"" << x0 + bar << "\" y=\"" << T + ph - hs
       << "\" width=\"" << bar << "\" height=\"" << hs << "\" fill=\""
       << detail::palette(1) << "\"/>\n";
    os << "<text x=\"" << x0 + bar << "\" y=\"" << T + ph + 14
       << "\" text-anchor=\"middle\">" << fixed(bins[i].lower, 0) << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\">log frequency</text>\n";
  os << "<rect x=\"" << W - 150 << "\" y=\"28\" width=\"10\" height=\"10\" fill=\""
     << detail::palette(0) << "\"/><text x=\"" << W - 136
     << "\" y=\"37\">replaced</text>\n";
  os << "<rect x=\"" << W - 80 << "\" y=\"28\" width=\"10\" height=\"10\" fill=\""
     << detail::palette(1) << "\"/><text x=\"" << W - 66
     << "\" y=\"37\">substituted</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace fgws

#endif  // FGWS_REPORT_HPP_
