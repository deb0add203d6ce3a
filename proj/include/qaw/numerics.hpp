#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

// Small shared numeric kernels: lower convex hulls, golden-section search,
// least-squares line fits, adaptive Gauss-Kronrod quadrature, monotone
// interpolation.

namespace qaw {

/// A point (x, y) for hull computations.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Lower convex hull of a set of points with strictly increasing x,
/// returned as hull vertices left to right. Input y may not contain NaN;
/// +-inf are not allowed here (filter before calling).
std::vector<Point2> lower_convex_hull(const std::vector<Point2>& pts);

/// Evaluates the piecewise-linear function through hull vertices at x.
/// Left of the first vertex the first segment is extended with slope
/// `left_slope` (default: constant), right of the last vertex with
/// `right_slope` (default: last segment slope).
double hull_interpolate(const std::vector<Point2>& hull, double x,
                        std::optional<double> left_slope = 0.0,
                        std::optional<double> right_slope = std::nullopt);

/// Maximizes a unimodal function on [a, b] by golden-section search.
/// Returns (argmax, max). `f` is never called outside [a, b].
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b, double xtol = 1e-12,
                                     int max_iter = 200);

/// Ordinary least squares fit y ~= intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;        // coefficient of determination
  double rms = 0.0;       // root mean square residual
  std::size_t n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Adaptive Gauss7/Kronrod15 quadrature of f over the finite interval
/// [a, b]. Subdivides until the local error estimate is below
/// abs_tol + rel_tol * |integral|; depth-limited.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-10, double rel_tol = 1e-8,
                    int max_depth = 18);

/// Values of the monotone cubic smoothstep rising from y0 at x0 to y1 at
/// x1 (C1, derivative zero at both ends); clamped outside.
double smoothstep(double x, double x0, double x1, double y0, double y1);

/// n equally spaced values from a to b inclusive (n >= 2).
std::vector<double> linspace(double a, double b, std::size_t n);

/// Chebyshev-distributed points on [a, b] (n >= 2, endpoints included).
std::vector<double> chebyshev_points(double a, double b, std::size_t n);

}  // namespace qaw
