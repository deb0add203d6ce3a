#include "qaw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaw {

std::vector<Point2> lower_convex_hull(const std::vector<Point2>& pts) {
  std::vector<Point2> hull;
  hull.reserve(pts.size());
  for (const Point2& p : pts) {
    // pop while the last two vertices and p make a non-left turn from below
    while (hull.size() >= 2) {
      const Point2& a = hull[hull.size() - 2];
      const Point2& b = hull[hull.size() - 1];
      double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    if (!hull.empty() && hull.back().x == p.x) {
      if (p.y < hull.back().y) hull.back() = p;
      continue;
    }
    hull.push_back(p);
  }
  return hull;
}

double hull_interpolate(const std::vector<Point2>& hull, double x,
                        std::optional<double> left_slope,
                        std::optional<double> right_slope) {
  if (hull.empty()) throw std::invalid_argument("hull_interpolate: empty hull");
  if (hull.size() == 1) return hull.front().y;
  if (x <= hull.front().x) {
    double s = left_slope ? *left_slope
                          : (hull[1].y - hull[0].y) / (hull[1].x - hull[0].x);
    return hull.front().y + s * (x - hull.front().x);
  }
  if (x >= hull.back().x) {
    const Point2& a = hull[hull.size() - 2];
    const Point2& b = hull.back();
    double s = right_slope ? *right_slope : (b.y - a.y) / (b.x - a.x);
    return b.y + s * (x - b.x);
  }
  auto it = std::upper_bound(hull.begin(), hull.end(), x,
                             [](double v, const Point2& p) { return v < p.x; });
  const Point2& b = *it;
  const Point2& a = *(it - 1);
  double u = (x - a.x) / (b.x - a.x);
  return a.y + u * (b.y - a.y);
}

std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b, double xtol,
                                     int max_iter) {
  constexpr double phi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > xtol * (1.0 + std::abs(a)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  fit.n = x.size();
  if (x.size() != y.size() || x.size() < 2) return fit;
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.rms = std::sqrt(ss_res / n);
  // nearly constant data is a perfect fit for our purposes
  fit.r2 = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

// Gauss7/Kronrod15 nodes and weights on [-1, 1].
constexpr double kNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kWeightsK[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299786, 0.0229353220105292,
};
constexpr double kWeightsG[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double f0 = f(c);
  double gauss = kWeightsG[0] * f0;
  double kron = kWeightsK[0] * f0;
  for (int i = 1; i < 8; ++i) {
    double dx = h * kNodes[i];
    double fs = f(c + dx) + f(c - dx);
    kron += kWeightsK[i] * fs;
    if (i % 2 == 0) gauss += kWeightsG[i / 2] * fs;
  }
  gauss *= h;
  kron *= h;
  double err = std::abs(kron - gauss);
  err = err * std::sqrt(err) * 200.0;  // standard QUADPACK-style sharpening
  return {kron, err};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int depth) {
  GkResult r = gk15(f, a, b);
  if (depth <= 0 || r.error <= abs_tol + rel_tol * std::abs(r.value))
    return r.value;
  double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, abs_tol * 0.5, rel_tol, depth - 1) +
         integrate_rec(f, c, b, abs_tol * 0.5, rel_tol, depth - 1);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  return integrate_rec(f, a, b, abs_tol, rel_tol, max_depth);
}

double smoothstep(double x, double x0, double x1, double y0, double y1) {
  if (x <= x0) return y0;
  if (x >= x1) return y1;
  double u = (x - x0) / (x1 - x0);
  double s = u * u * (3.0 - 2.0 * u);
  return y0 + s * (y1 - y0);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> chebyshev_points(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double theta = M_PI * static_cast<double>(i) / static_cast<double>(n - 1);
    double u = -std::cos(theta);  // -1 .. 1 increasing
    v[i] = 0.5 * (a + b) + 0.5 * (b - a) * u;
  }
  v.front() = a;
  v.back() = b;
  return v;
}

}  // namespace qaw
