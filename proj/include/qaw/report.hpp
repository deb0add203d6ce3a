#pragma once

#include <string>
#include <vector>

#include "qaw/approx.hpp"

// Plain-text artifact emission: CSV curves, JSON headers, and a static
// SVG line chart (no rendering dependency).

namespace qaw {

std::string approx_report_csv(const ApproxReport& report);
std::string approx_report_json(const ApproxReport& report);

/// Log-scale line chart of the error curves, one polyline per target.
std::string approx_report_svg(const ApproxReport& report, int width = 640,
                              int height = 400);

/// Generic single-series CSV (index, value).
std::string series_csv(const std::string& index_name,
                       const std::string& value_name,
                       const std::vector<double>& xs,
                       const std::vector<double>& ys);

}  // namespace qaw
