#include "qaw/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qaw {

using nlohmann::json;

std::string approx_report_csv(const ApproxReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "index";
  for (const auto& c : report.curves) os << ",error_" << c.target_name;
  os << "\n";
  for (std::size_t i = 0; i < report.schedule.size(); ++i) {
    os << report.schedule[i];
    for (const auto& c : report.curves) os << "," << c.errors[i];
    os << "\n";
  }
  return os.str();
}

std::string approx_report_json(const ApproxReport& report) {
  json j;
  j["family"] = report.family == ApproxFamily::Polynomial ? "polynomial"
                                                          : "trigonometric";
  j["schedule"] = report.schedule;
  if (!report.spectral_set.empty()) j["spectral_set"] = report.spectral_set;
  j["grid"] = {{"lo", report.grid_lo},
               {"hi", report.grid_hi},
               {"count", report.grid_count}};
  j["weight_verdict"] = json::parse(verdict_to_json(report.weight_verdict));
  json curves = json::array();
  for (const auto& c : report.curves) {
    curves.push_back({{"target", c.target_name},
                      {"errors", c.errors},
                      {"duality_gaps", c.duality_gaps},
                      {"plateau", c.plateau}});
  }
  j["curves"] = curves;
  return j.dump(2);
}

std::string approx_report_svg(const ApproxReport& report, int width,
                              int height) {
  const int margin = 48;
  double x0 = margin, x1 = width - margin;
  double y0 = height - margin, y1 = margin;

  double lo = 1e300, hi = 1e-300;
  for (const auto& c : report.curves)
    for (double e : c.errors) {
      double v = std::max(e, 1e-300);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (lo >= hi) {
    lo = hi / 10.0;
  }
  double llo = std::log10(lo), lhi = std::log10(hi);
  if (lhi - llo < 1.0) llo = lhi - 1.0;

  double smin = report.schedule.front(), smax = report.schedule.back();
  auto px = [&](double s) {
    return x0 + (x1 - x0) * (s - smin) / std::max(smax - smin, 1.0);
  };
  auto py = [&](double e) {
    double le = std::log10(std::max(e, 1e-300));
    return y0 - (y0 - y1) * (le - llo) / (lhi - llo);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
     << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
     << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (width / 2) << "\" y=\"" << (height - 12)
     << "\" text-anchor=\"middle\" font-size=\"12\">"
     << (report.family == ApproxFamily::Polynomial ? "degree"
                                                   : "frequency count")
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << (height / 2)
     << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
     << (height / 2) << ")\">weighted sup error (log10)</text>\n";

  int color = 0;
  for (const auto& c : report.curves) {
    os << "<polyline fill=\"none\" stroke=\"" << palette[color % 6]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < report.schedule.size(); ++i)
      os << px(report.schedule[i]) << "," << py(c.errors[i]) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << (x0 + 8) << "\" y=\"" << (y1 + 14 + 14 * color)
       << "\" font-size=\"11\" fill=\"" << palette[color % 6] << "\">"
       << c.target_name << (c.plateau ? " (plateau)" : "") << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
  return os.str();
}

std::string series_csv(const std::string& index_name,
                       const std::string& value_name,
                       const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  std::ostringstream os;
  os.precision(17);
  os << index_name << "," << value_name << "\n";
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    os << xs[i] << "," << ys[i] << "\n";
  return os.str();
}

}  // namespace qaw
