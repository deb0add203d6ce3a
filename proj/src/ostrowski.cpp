#include "qaw/ostrowski.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qaw/errors.hpp"

namespace qaw {

PiecewiseWeight1D PiecewiseWeight1D::from_sequence(const MomentSequence& a) {
  if (a.size() < 2)
    throw ParameterError("weight_from_sequence: need length >= 2");
  if (!a.log_convex)
    throw ParameterError(
        "weight_from_sequence: sequence is not certified log-convex; apply "
        "log_convex_envelope first");
  PiecewiseWeight1D w;
  const auto& lv = a.log_values;

  bool positive_tail_missing = false;
  for (std::size_t m = 1; m < lv.size(); ++m)
    if (is_neg_inf(lv[m])) positive_tail_missing = true;
  if (is_neg_inf(lv[0]) || positive_tail_missing) {
    // not strictly positive: the point-supported weight of the construction
    w.point_supported_ = true;
    w.log_coeffs_ = {lv[0]};
    return w;
  }

  // keep the finite prefix; +inf entries never achieve the infimum
  std::size_t last = lv.size() - 1;
  for (std::size_t m = 0; m < lv.size(); ++m) {
    if (is_pos_inf(lv[m])) {
      last = m - 1;
      break;
    }
  }
  w.log_coeffs_.assign(lv.begin(), lv.begin() + static_cast<long>(last) + 1);
  for (std::size_t m = 1; m < w.log_coeffs_.size(); ++m)
    w.transitions_.push_back(std::exp(w.log_coeffs_[m] - w.log_coeffs_[m - 1]));
  return w;
}

double PiecewiseWeight1D::log_value(double t) const {
  double at = std::abs(t);
  if (point_supported_) return at == 0.0 ? log_coeffs_[0] : kNegInf;
  auto it = std::upper_bound(transitions_.begin(), transitions_.end(), at);
  std::size_t m = static_cast<std::size_t>(it - transitions_.begin());
  return log_coeffs_[m] - pow_log(log_ext(at), static_cast<double>(m));
}

double PiecewiseWeight1D::support_radius() const {
  if (point_supported_) return 0.0;
  if (transitions_.empty()) return kInf;
  return transitions_.back();
}

std::string PiecewiseWeight1D::to_csv(std::size_t points) const {
  std::ostringstream os;
  os.precision(17);
  os << "t,value\n";
  if (point_supported_) {
    os << 0.0 << "," << head_value() << "\n";
    return os.str();
  }
  double lo = transitions_.empty() ? 1e-3 : transitions_.front() * 0.25;
  double hi = transitions_.empty() ? 1e3 : transitions_.back() * 4.0;
  lo = std::max(lo, 1e-300);
  for (std::size_t i = 0; i < points; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(points - 1);
    double t = lo * std::pow(hi / lo, u);
    os << t << "," << value(t) << "\n";
  }
  return os.str();
}

PiecewiseWeight1D weight_from_sequence(const MomentSequence& a) {
  return PiecewiseWeight1D::from_sequence(a);
}

PiecewiseWeight1D even_majorant(const WeightExpr& w, int m_max,
                                const MomentOptions& opts) {
  if (w.dimension() != 1)
    throw DimensionError("even_majorant: weight must be one-dimensional");
  if (m_max < 1) throw ParameterError("even_majorant: m_max must be >= 1");
  std::vector<double> lv;
  lv.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    MomentResult r = moment_detail(w, Vec{1.0}, m, opts);
    if (r.unbounded || is_pos_inf(r.log_value))
      throw NotRapidlyDecreasingError(
          "even_majorant: infinite moment at order " + std::to_string(m));
    lv.push_back(r.log_value);
  }
  MomentSequence seq = MomentSequence::from_log_values(std::move(lv),
                                                       Provenance::GridSup);
  // grid noise can leave the certificate marginally unset
  if (!seq.log_convex) seq = log_convex_envelope(seq);
  return PiecewiseWeight1D::from_sequence(seq);
}

double support_radius(const WeightExpr& w) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          return n.profile.support_radius();
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          double sq = 0.0;
          for (const auto& f : n.factors) {
            double r = f.support_radius();
            if (is_pos_inf(r)) return kInf;
            sq += r * r;
          }
          return std::sqrt(sq);
        } else if constexpr (std::is_same_v<T, AffineNode>) {
          double inner = support_radius(w.child(0));
          if (is_pos_inf(inner)) return kInf;
          double fro = 0.0;
          for (int i = 0; i < n.map.dim(); ++i)
            for (int j = 0; j < n.map.dim(); ++j)
              fro += n.map.linear.at(i, j) * n.map.linear.at(i, j);
          return std::sqrt(fro) * inner + norm2(n.map.translation);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return n.c == 0.0 ? 0.0 : support_radius(w.child(0));
        } else if constexpr (std::is_same_v<T, MinNode>) {
          return std::min(support_radius(w.child(0)),
                          support_radius(w.child(1)));
        } else if constexpr (std::is_same_v<T, SumNode>) {
          return std::max(support_radius(w.child(0)),
                          support_radius(w.child(1)));
        } else {
          return n.samples.support_radius();
        }
      },
      w.node());
}

RegularizedWeight convex_regularization_of(
    const std::function<double(double)>& log_w,
    const RegularizationOptions& opts) {
  std::vector<double> s_grid = linspace(opts.s_min, opts.s_max, opts.points);
  std::vector<Point2> finite;
  double last_finite_s = kNegInf;
  for (double s : s_grid) {
    double t = std::exp(s);
    double h = -std::max(log_w(t), log_w(-t));
    if (!is_pos_inf(h)) {
      finite.push_back({s, h});
      last_finite_s = s;
    }
  }
  if (finite.empty())
    return RegularizedWeight({}, 0.0, true, opts.s_min);

  std::vector<Point2> hull = lower_convex_hull(finite);
  // the constant extension of h to the left forces a nondecreasing
  // envelope: flatten everything left of the hull minimum
  std::size_t arg = 0;
  for (std::size_t i = 1; i < hull.size(); ++i)
    if (hull[i].y <= hull[arg].y) arg = i;
  std::vector<Point2> knots(hull.begin() + static_cast<long>(arg), hull.end());

  double right_slope = 0.0;
  if (knots.size() >= 2) {
    const Point2& a = knots[knots.size() - 2];
    const Point2& b = knots.back();
    right_slope = (b.y - a.y) / (b.x - a.x);
  }
  bool zero_tail = last_finite_s < s_grid.back();
  return RegularizedWeight(std::move(knots), right_slope, zero_tail,
                           last_finite_s);
}

RegularizedWeight convex_regularization(const WeightExpr& w,
                                        const RegularizationOptions& opts) {
  if (w.dimension() != 1)
    throw DimensionError("convex_regularization: weight must be 1D");
  return convex_regularization_of(
      [&w](double t) { return w.log_evaluate1(t); }, opts);
}

double RegularizedWeight::log_value(double t) const {
  if (knots_.empty()) return kNegInf;
  double at = std::abs(t);
  double s = log_ext(at);
  if (s <= knots_.front().x) return -knots_.front().y;
  if (zero_tail_ && s > zero_from_s_) return kNegInf;
  if (s >= knots_.back().x)
    return -(knots_.back().y + right_slope_ * (s - knots_.back().x));
  return -hull_interpolate(knots_, s, 0.0, right_slope_);
}

bool RegularizedWeight::is_log_log_convex(double slack) const {
  double prev_slope = 0.0;  // constant-left extension
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    double slope = (knots_[i].y - knots_[i - 1].y) /
                   (knots_[i].x - knots_[i - 1].x);
    if (slope < prev_slope - slack) return false;
    prev_slope = slope;
  }
  if (!zero_tail_ && !knots_.empty() && right_slope_ < prev_slope - slack)
    return false;
  return true;
}

std::string RegularizedWeight::to_csv(std::size_t points) const {
  std::ostringstream os;
  os.precision(17);
  os << "t,value\n";
  if (knots_.empty()) return os.str();
  double lo = std::exp(knots_.front().x);
  double hi = std::exp(zero_tail_ ? zero_from_s_ : knots_.back().x + 2.0);
  for (std::size_t i = 0; i < points; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(points - 1);
    double t = lo * std::pow(hi / lo, u);
    os << t << "," << value(t) << "\n";
  }
  return os.str();
}

Profile1D smooth_majorant_rho(const WeightExpr& w, int m_max,
                              const MomentOptions& opts) {
  if (w.dimension() != 1)
    throw DimensionError("smooth_majorant_rho: weight must be 1D");

  WeightExpr base = w;
  double delta = support_radius(w);
  if (!is_pos_inf(delta)) {
    // bounded support: majorize by C exp(-|t|) first, as in the
    // classification proof, so the construction stays strictly positive
    double C = w.upper_bound() * std::exp(delta);
    base = WeightExpr::radial(Profile1D::exp_decay(std::max(C, 1e-300), 1.0));
  }

  PiecewiseWeight1D tilde = even_majorant(base, m_max, opts);
  if (tilde.point_supported())
    throw NotRapidlyDecreasingError(
        "smooth_majorant_rho: weight has point support");

  // slope staircase of s -> -log(2 wtilde(e^s)): slope m past log t_m
  const auto& trans = tilde.transitions();
  struct Step {
    double u;       // s-position of the jump
    int level_to;   // slope after the jump
  };
  std::vector<Step> steps;
  for (std::size_t m = 0; m < trans.size(); ++m) {
    double u = std::log(trans[m]);
    int level = static_cast<int>(m) + 1;
    if (!steps.empty() && u <= steps.back().u + 1e-12 * (1.0 + std::abs(u)))
      steps.back().level_to = level;  // coincident transitions merge
    else
      steps.push_back({u, level});
  }
  if (steps.empty())
    throw NotRapidlyDecreasingError("smooth_majorant_rho: constant majorant");

  // left-anchored monotone cubic steps; rising early keeps the smoothed
  // graph above -log(2 wtilde) while the shrinking area budget keeps it
  // below -log(wtilde)
  const double ln2 = std::log(2.0);
  std::vector<double> win_lo(steps.size());
  int prev_level = 0;
  double budget_scale = 1.0;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    double gap = j == 0 ? 1.0 : steps[j].u - steps[j - 1].u;
    double dl = steps[j].level_to - prev_level;
    budget_scale *= 0.5;
    double eps = std::min(gap, ln2 * budget_scale / dl);
    eps = std::max(eps, 1e-9);
    eps = std::min(eps, gap);  // never overlap the previous window
    win_lo[j] = steps[j].u - eps;
    prev_level = steps[j].level_to;
  }

  auto rho_hat = [&](double s) -> double {
    double level = 0.0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      double from = j == 0 ? 0.0 : steps[j - 1].level_to;
      if (s < win_lo[j]) break;
      level = smoothstep(s, win_lo[j], steps[j].u, from, steps[j].level_to);
      if (s < steps[j].u) break;
    }
    return level;
  };

  // sample rho as a function of the radius r = e^s
  std::vector<double> svals;
  svals.push_back(win_lo[0] - 0.5);
  svals.push_back(win_lo[0] - 0.25);
  for (std::size_t j = 0; j < steps.size(); ++j) {
    for (int i = 0; i <= 32; ++i)
      svals.push_back(win_lo[j] +
                      (steps[j].u - win_lo[j]) * static_cast<double>(i) / 32.0);
    if (j + 1 < steps.size() && win_lo[j + 1] > steps[j].u)
      svals.push_back(0.5 * (steps[j].u + win_lo[j + 1]));
  }
  svals.push_back(steps.back().u + 1.0);
  svals.push_back(steps.back().u + 2.0);
  std::sort(svals.begin(), svals.end());
  svals.erase(std::unique(svals.begin(), svals.end()), svals.end());

  std::vector<double> r_grid, rho_vals;
  double prev_r = 0.0;
  for (double s : svals) {
    double r = std::exp(s);
    if (r <= prev_r * (1.0 + 1e-14)) continue;
    r_grid.push_back(r);
    double v = rho_hat(s);
    if (!rho_vals.empty() && v < rho_vals.back()) v = rho_vals.back();
    rho_vals.push_back(v);
    prev_r = r;
  }

  double R = std::exp(win_lo[0] - 0.5);
  double wR = 2.0 * exp_ext(tilde.log_coefficients()[0]);
  return Profile1D::rho_form(wR, R, std::move(r_grid), std::move(rho_vals));
}

namespace {

Profile1D sample_log_range(const std::function<double(double)>& value,
                           double lo, double hi, std::size_t points) {
  lo = std::max(lo, 1e-300);
  std::vector<double> grid, values;
  grid.reserve(points);
  values.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(points - 1);
    double t = lo * std::pow(hi / lo, u);
    if (!grid.empty() && t <= grid.back()) continue;
    grid.push_back(t);
    values.push_back(value(t));
  }
  return Profile1D::sampled(std::move(grid), std::move(values),
                            Extrapolation::Zero);
}

}  // namespace

Profile1D to_sampled_profile(const PiecewiseWeight1D& w, std::size_t points) {
  if (w.point_supported()) {
    double v = w.head_value();
    return Profile1D::sampled({-1e-12, 0.0, 1e-12}, {0.0, v, 0.0},
                              Extrapolation::Zero);
  }
  double lo = w.transitions().empty() ? 1e-3 : w.transitions().front() * 0.25;
  double hi = w.transitions().empty() ? 1e3 : w.transitions().back() * 4.0;
  return sample_log_range([&w](double t) { return w.value(t); }, lo, hi,
                          points);
}

Profile1D to_sampled_profile(const RegularizedWeight& w, std::size_t points) {
  if (w.identically_zero())
    return Profile1D::sampled({0.0, 1.0}, {0.0, 0.0}, Extrapolation::Zero);
  double lo = std::exp(w.knots().front().x) * 0.5;
  double hi = std::exp(w.zero_tail() ? w.zero_from_s()
                                     : w.knots().back().x + 2.0);
  return sample_log_range([&w](double t) { return w.value(t); }, lo, hi,
                          points);
}

}  // namespace qaw
