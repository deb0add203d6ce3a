#include "qaw/profile.hpp"

#include <algorithm>
#include <cmath>

#include "qaw/errors.hpp"

namespace qaw {

namespace {

// Smallest x with log_j(x) >= 1: tower_1 = e, tower_j = exp(tower_{j-1});
// tower_0 = 1 since log_0 x = x.
double log_tower(int j) {
  double v = 1.0;
  for (int i = 0; i < j; ++i) {
    if (v > 700.0) return kInf;
    v = std::exp(v);
  }
  return v;
}

// log_j(x) for x large enough that every intermediate log is defined.
double iterated_log(int j, double x) {
  double v = x;
  for (int i = 0; i < j; ++i) v = std::log(v);
  return v;
}

double interp_linear(const std::vector<double>& xs,
                     const std::vector<double>& ys, double x,
                     Extrapolation ex) {
  if (x < xs.front() || x > xs.back()) {
    if (ex == Extrapolation::Zero) return 0.0;
    return x < xs.front() ? ys.front() : ys.back();
  }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  double u = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + u * (ys[i] - ys[i - 1]);
}

double replog_exponent(const RepLogParams& rp, double t) {
  // t^2 / prod_j log_j^{p_j}(a_j t), valid for t >= threshold
  double log_prod = 0.0;
  for (std::size_t j = 0; j < rp.p.size(); ++j) {
    if (rp.p[j] == 0.0) continue;
    double lj = iterated_log(static_cast<int>(j), rp.a[j] * t);
    log_prod += rp.p[j] * std::log(lj);
  }
  return std::exp(2.0 * std::log(t) - log_prod);
}

}  // namespace

Profile1D Profile1D::exp_decay(double C, double eps) {
  if (!(C > 0.0)) throw ParameterError("expdecay: C must be positive");
  if (!(eps > 0.0)) throw ParameterError("expdecay: eps must be positive");
  return Profile1D(ExpDecayParams{C, eps});
}

Profile1D Profile1D::gaussian(double C, double sigma) {
  if (!(C > 0.0)) throw ParameterError("gaussian: C must be positive");
  if (!(sigma > 0.0)) throw ParameterError("gaussian: sigma must be positive");
  return Profile1D(GaussianParams{C, sigma});
}

Profile1D Profile1D::rep_log(double C, std::vector<double> a,
                             std::vector<double> p, std::optional<int> order) {
  if (!(C > 0.0)) throw ParameterError("replog: C must be positive");
  if (a.size() != p.size())
    throw ParameterError("replog: a and p must have equal length");
  if (a.empty()) throw ParameterError("replog: parameter lists are empty");
  for (double aj : a)
    if (!(aj > 0.0)) throw ParameterError("replog: a_j must be positive");
  int ord = order.value_or(static_cast<int>(p.size()) - 1);
  if (ord < 0 || ord >= static_cast<int>(p.size()))
    throw ParameterError("replog: order out of range");
  for (std::size_t j = static_cast<std::size_t>(ord) + 1; j < p.size(); ++j)
    if (p[j] != 0.0)
      throw ParameterError("replog: p nonzero beyond the stated order");

  RepLogParams rp;
  rp.C = C;
  rp.a = std::move(a);
  rp.p = std::move(p);
  rp.order = ord;
  double t0 = 0.0;
  for (std::size_t j = 0; j < rp.p.size(); ++j) {
    if (rp.p[j] == 0.0) continue;
    double tower = log_tower(static_cast<int>(j));
    if (is_pos_inf(tower))
      throw ParameterError("replog: iterated-log order too deep for doubles");
    t0 = std::max(t0, tower / rp.a[j]);
  }
  rp.threshold = t0;
  rp.log_value_at_threshold =
      t0 > 0.0 ? std::log(rp.C) - replog_exponent(rp, t0) : std::log(rp.C);
  return Profile1D(std::move(rp));
}

Profile1D Profile1D::rho_form(double wR, double R, std::vector<double> grid,
                              std::vector<double> rho) {
  if (!(wR > 0.0)) throw ParameterError("rhoform: w(R) must be positive");
  if (!(R > 0.0)) throw ParameterError("rhoform: R must be positive");
  if (grid.size() != rho.size() || grid.empty())
    throw ParameterError("rhoform: grid/rho length mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ParameterError("rhoform: grid must be strictly increasing");
    if (!(rho[i] >= 0.0)) throw ParameterError("rhoform: rho must be >= 0");
    if (i > 0 && rho[i] < rho[i - 1] * (1.0 - 1e-12) - 1e-300)
      throw ParameterError("rhoform: rho must be nondecreasing");
  }
  if (!(grid.front() >= R))
    throw ParameterError("rhoform: grid must start at or after R");
  return Profile1D(RhoFormParams{wR, R, std::move(grid), std::move(rho)});
}

Profile1D Profile1D::indicator(double radius) {
  if (!(radius > 0.0)) throw ParameterError("indicator: radius must be > 0");
  return Profile1D(IndicatorParams{radius});
}

Profile1D Profile1D::sampled(std::vector<double> grid,
                             std::vector<double> values, Extrapolation ex) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw ParameterError("sampled: need >= 2 grid points matching values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ParameterError("sampled: grid must be strictly increasing");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw ParameterError("sampled: values must be finite and >= 0");
  }
  return Profile1D(SampledParams{std::move(grid), std::move(values), ex});
}

namespace {

// rho(s) of a RhoForm profile on [R, inf): linear inside the grid, constant
// left, linear right with the last segment slope (clamped nonnegative).
double rhoform_rho(const RhoFormParams& rf, double s) {
  const auto& xs = rf.grid;
  const auto& ys = rf.rho;
  if (s <= xs.front()) return ys.front();
  if (s >= xs.back()) {
    if (xs.size() < 2) return ys.back();
    double slope = (ys.back() - ys[ys.size() - 2]) /
                   (xs.back() - xs[xs.size() - 2]);
    slope = std::max(slope, 0.0);
    return ys.back() + slope * (s - xs.back());
  }
  return interp_linear(xs, ys, s, Extrapolation::LastValue);
}

// int_R^t rho(s)/s ds, exact per linear-rho segment:
// int (alpha + beta s)/s ds = alpha log s + beta s.
double rhoform_integral(const RhoFormParams& rf, double t) {
  if (t <= rf.R) return 0.0;
  double total = 0.0;
  // knots of the piecewise-linear rho restricted to [R, t]
  std::vector<double> knots;
  knots.push_back(rf.R);
  for (double g : rf.grid)
    if (g > rf.R && g < t) knots.push_back(g);
  knots.push_back(t);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double s0 = knots[i], s1 = knots[i + 1];
    double r0 = rhoform_rho(rf, s0), r1 = rhoform_rho(rf, s1);
    double beta = (r1 - r0) / (s1 - s0);
    double alpha = r0 - beta * s0;
    total += alpha * (std::log(s1) - std::log(s0)) + beta * (s1 - s0);
  }
  return total;
}

}  // namespace

double Profile1D::log_value(double t) const {
  double at = std::abs(t);
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpDecayParams>) {
          return std::log(p.C) - p.eps * at;
        } else if constexpr (std::is_same_v<T, GaussianParams>) {
          return std::log(p.C) - (at / p.sigma) * (at / p.sigma);
        } else if constexpr (std::is_same_v<T, RepLogParams>) {
          if (at <= p.threshold) return p.log_value_at_threshold;
          return std::log(p.C) - replog_exponent(p, at);
        } else if constexpr (std::is_same_v<T, RhoFormParams>) {
          return std::log(p.wR) - rhoform_integral(p, at);
        } else if constexpr (std::is_same_v<T, IndicatorParams>) {
          return at <= p.radius ? 0.0 : kNegInf;
        } else {
          // Sampled: interpolate values, signed argument
          return log_ext(interp_linear(p.grid, p.values, t, p.extrapolation));
        }
      },
      params_);
}

double Profile1D::upper_bound() const {
  return std::visit(
      [Self = this](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpDecayParams>) {
          return p.C;
        } else if constexpr (std::is_same_v<T, GaussianParams>) {
          return p.C;
        } else if constexpr (std::is_same_v<T, RepLogParams>) {
          // exponent >= 0 above the threshold; constant below it
          return std::max(p.C, std::exp(p.log_value_at_threshold));
        } else if constexpr (std::is_same_v<T, RhoFormParams>) {
          return p.wR;
        } else if constexpr (std::is_same_v<T, IndicatorParams>) {
          return 1.0;
        } else {
          return *std::max_element(p.values.begin(), p.values.end());
        }
      },
      params_);
}

double Profile1D::support_radius() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IndicatorParams>) {
          return p.radius;
        } else if constexpr (std::is_same_v<T, SampledParams>) {
          if (p.extrapolation == Extrapolation::LastValue &&
              (p.values.front() > 0.0 || p.values.back() > 0.0))
            return kInf;
          double r = 0.0;
          for (std::size_t i = 0; i < p.grid.size(); ++i) {
            // the open end of a segment with a nonzero endpoint is support
            if (p.values[i] > 0.0) {
              r = std::max(r, std::abs(p.grid[i]));
              if (i + 1 < p.grid.size())
                r = std::max(r, std::abs(p.grid[i + 1]));
              if (i > 0) r = std::max(r, std::abs(p.grid[i - 1]));
            }
          }
          return r;
        } else {
          return kInf;  // strictly positive families
        }
      },
      params_);
}

bool Profile1D::is_even() const {
  return !std::holds_alternative<SampledParams>(params_);
}

std::optional<Profile1D> Profile1D::pow(double nu) const {
  if (!(nu > 0.0)) return std::nullopt;
  return std::visit(
      [&](const auto& p) -> std::optional<Profile1D> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpDecayParams>) {
          return exp_decay(std::pow(p.C, nu), nu * p.eps);
        } else if constexpr (std::is_same_v<T, GaussianParams>) {
          return gaussian(std::pow(p.C, nu), p.sigma / std::sqrt(nu));
        } else if constexpr (std::is_same_v<T, RepLogParams>) {
          // nu * t^2/prod absorbs into a_0 when p_0 != 0:
          // nu / (a_0 t)^{p_0} = 1 / (a_0 nu^{-1/p_0} t)^{p_0}
          if (p.p.empty() || p.p[0] == 0.0) return std::nullopt;
          auto a = p.a;
          a[0] *= std::pow(nu, -1.0 / p.p[0]);
          return rep_log(std::pow(p.C, nu), std::move(a), p.p, p.order);
        } else if constexpr (std::is_same_v<T, RhoFormParams>) {
          auto rho = p.rho;
          for (double& r : rho) r *= nu;
          return rho_form(std::pow(p.wR, nu), p.R, p.grid, std::move(rho));
        } else if constexpr (std::is_same_v<T, IndicatorParams>) {
          return indicator(p.radius);
        } else {
          auto values = p.values;
          for (double& v : values) v = std::pow(v, nu);
          return sampled(p.grid, std::move(values), p.extrapolation);
        }
      },
      params_);
}

}  // namespace qaw
