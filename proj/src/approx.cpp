#include "qaw/approx.hpp"

#include <algorithm>
#include <cmath>

#include "qaw/errors.hpp"
#include "qaw/numerics.hpp"
#include "qaw/simplex.hpp"

namespace qaw {

double bernstein_norm(const TargetFn& f, const WeightExpr& w,
                      const std::vector<double>& grid) {
  if (w.dimension() != 1)
    throw DimensionError("bernstein_norm: weight must be 1D");
  double best = 0.0;
  for (double t : grid) best = std::max(best, std::abs(f(t)) * w.evaluate1(t));
  return best;
}

std::vector<double> default_grid(const WeightExpr& w, std::size_t count,
                                 double floor_ratio) {
  if (w.dimension() != 1) throw DimensionError("default_grid: 1D weights only");
  double sup = 0.0;
  for (double t = 0.0; t <= 16.0; t += 0.0625)
    sup = std::max({sup, w.evaluate1(t), w.evaluate1(-t)});
  sup = std::max(sup, 1e-300);
  double T = 1.0;
  while (T < 1e9) {
    double tail = 0.0;
    for (int i = 0; i < 8; ++i) {
      double t = T * (1.0 + i / 8.0);
      tail = std::max({tail, w.evaluate1(t), w.evaluate1(-t)});
    }
    if (tail <= floor_ratio * sup) break;
    T *= 2.0;
  }
  return chebyshev_points(-T, T, count);
}

namespace {

// Chebyshev polynomials of the grid interval, by recurrence
struct ChebBasis {
  double a, b;
  int degree;
  std::size_t size() const { return static_cast<std::size_t>(degree) + 1; }
  void eval(double t, std::vector<double>& out) const {
    double u = (2.0 * t - a - b) / (b - a);
    out.resize(size());
    out[0] = 1.0;
    if (degree >= 1) out[1] = u;
    for (int k = 2; k <= degree; ++k)
      out[static_cast<std::size_t>(k)] =
          2.0 * u * out[static_cast<std::size_t>(k - 1)] -
          out[static_cast<std::size_t>(k - 2)];
  }
};

struct TrigBasis {
  std::vector<double> lambdas;  // deduplicated
  std::size_t size() const {
    std::size_t n = 0;
    for (double l : lambdas) n += l == 0.0 ? 1 : 2;
    return n;
  }
  void eval(double t, std::vector<double>& out) const {
    out.clear();
    for (double l : lambdas) {
      if (l == 0.0) {
        out.push_back(1.0);
      } else {
        out.push_back(std::cos(l * t));
        out.push_back(std::sin(l * t));
      }
    }
  }
};

// Discretized minimax via the dual in standard form:
//   max  fw'(u - v)
//   s.t. Phi_w'(u - v) = 0,  1'(u + v) = 1,  u, v >= 0,
// whose equality multipliers recover the primal coefficients and error.
template <typename Basis>
MinimaxResult minimax_fit(const TargetFn& target, const WeightExpr& w,
                          const Basis& basis, const std::vector<double>& grid,
                          const MinimaxOptions& opts) {
  if (w.dimension() != 1)
    throw DimensionError("minimax: weight must be one-dimensional");
  if (grid.size() < basis.size() + 1)
    throw ParameterError("minimax: grid smaller than the basis");

  // C_w membership proxy at the grid endpoints
  std::vector<double> weights(grid.size());
  std::vector<double> fw(grid.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    weights[i] = w.evaluate1(grid[i]);
    fw[i] = std::abs(target(grid[i])) * weights[i];
    peak = std::max(peak, fw[i]);
  }
  if (peak > 0.0) {
    double edge = std::max(fw.front(), fw.back());
    if (edge > opts.endpoint_ratio * peak)
      throw ParameterError(
          "minimax: target * w does not vanish at the grid endpoints "
          "(C_w membership proxy failed)");
  }

  // LP support: weights far below the grid maximum produce numerically
  // duplicate columns; the gap check below still covers those points
  double wmax = 0.0;
  for (double wt : weights) wmax = std::max(wmax, wt);
  if (wmax <= 0.0)
    throw ParameterError("minimax: weight vanishes on the whole grid");
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (weights[i] >= opts.support_floor * wmax) active.push_back(i);
  if (active.size() < basis.size() + 1)
    throw ParameterError("minimax: too few grid points with positive weight");
  double row_scale = 1.0 / wmax;

  std::size_t K = basis.size();
  std::size_t N = active.size();
  LpProblem lp;
  lp.rows = K + 1;
  lp.cols = 2 * N;
  lp.A.assign(lp.rows * lp.cols, 0.0);
  lp.b.assign(lp.rows, 0.0);
  lp.b[K] = 1.0;
  lp.c.assign(lp.cols, 0.0);

  std::vector<double> phi;
  for (std::size_t col = 0; col < N; ++col) {
    double t = grid[active[col]];
    double wt = weights[active[col]] * row_scale;
    basis.eval(t, phi);
    double ft = target(t) * wt;
    for (std::size_t j = 0; j < K; ++j) {
      lp.at(j, col) = phi[j] * wt;
      lp.at(j, N + col) = -phi[j] * wt;
    }
    lp.at(K, col) = 1.0;
    lp.at(K, N + col) = 1.0;
    lp.c[col] = -ft;     // maximize fw'(u - v)
    lp.c[N + col] = ft;
  }

  LpResult sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw Error("minimax: LP solve failed (status " +
                std::to_string(static_cast<int>(sol.status)) + ")");

  MinimaxResult out;
  out.coefficients.resize(K);
  for (std::size_t j = 0; j < K; ++j) out.coefficients[j] = -sol.y[j];
  out.dual_value = -sol.objective / row_scale;  // the minimax value

  // achieved weighted sup error of the recovered coefficients, over the
  // full positive-weight grid (not only the LP support)
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    double t = grid[i];
    basis.eval(t, phi);
    double p = 0.0;
    for (std::size_t j = 0; j < K; ++j) p += out.coefficients[j] * phi[j];
    err = std::max(err, std::abs(target(t) - p) * weights[i]);
  }
  out.error = err;
  out.duality_gap = std::abs(out.error - out.dual_value);
  return out;
}

}  // namespace

MinimaxResult best_poly_approx(const TargetFn& target, const WeightExpr& w,
                               int degree, const std::vector<double>& grid,
                               const MinimaxOptions& opts) {
  if (degree < 0) throw ParameterError("best_poly_approx: degree must be >= 0");
  if (degree > opts.degree_cap)
    throw ParameterError(
        "best_poly_approx: degree beyond the conditioning cap " +
        std::to_string(opts.degree_cap));
  ChebBasis basis{grid.front(), grid.back(), degree};
  return minimax_fit(target, w, basis, grid, opts);
}

MinimaxResult best_trig_approx(const TargetFn& target, const WeightExpr& w,
                               const std::vector<double>& spectral_set,
                               const std::vector<double>& grid,
                               const MinimaxOptions& opts) {
  if (spectral_set.empty())
    throw ParameterError("best_trig_approx: empty spectral set");
  TrigBasis basis;
  basis.lambdas = spectral_set;
  std::sort(basis.lambdas.begin(), basis.lambdas.end());
  basis.lambdas.erase(
      std::unique(basis.lambdas.begin(), basis.lambdas.end()),
      basis.lambdas.end());
  return minimax_fit(target, w, basis, grid, opts);
}

ApproxReport density_experiment(const WeightExpr& w,
                                const std::vector<NamedTarget>& targets,
                                ApproxFamily family,
                                const std::vector<int>& schedule,
                                const std::vector<double>& grid,
                                const std::vector<double>& spectral_set,
                                const MinimaxOptions& opts) {
  if (schedule.empty())
    throw ParameterError("density_experiment: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw ParameterError("density_experiment: schedule must increase");
  if (family == ApproxFamily::Trigonometric &&
      spectral_set.size() < static_cast<std::size_t>(schedule.back()))
    throw ParameterError(
        "density_experiment: spectral set shorter than the schedule");

  ApproxReport report;
  report.family = family;
  report.schedule = schedule;
  report.spectral_set = spectral_set;
  report.grid_lo = grid.front();
  report.grid_hi = grid.back();
  report.grid_count = grid.size();
  report.weight_verdict = classify(w);

  for (const NamedTarget& target : targets) {
    ApproxCurve curve;
    curve.target_name = target.name;
    double prev = kInf;
    for (int s : schedule) {
      MinimaxResult r;
      if (family == ApproxFamily::Polynomial) {
        r = best_poly_approx(target.fn, w, s, grid, opts);
      } else {
        std::vector<double> prefix(
            spectral_set.begin(),
            spectral_set.begin() + static_cast<std::ptrdiff_t>(s));
        r = best_trig_approx(target.fn, w, prefix, grid, opts);
      }
      // the families are nested, so the minimum cannot increase; the
      // clamp absorbs last-digit solver dither
      double err = std::min(r.error, prev);
      curve.errors.push_back(err);
      curve.duality_gaps.push_back(r.duality_gap);
      prev = err;
    }
    if (schedule.size() >= 2) {
      int smax = schedule.back();
      // reference entry nearest to s_max / 4 from below
      std::size_t ref = 0;
      for (std::size_t i = 0; i < schedule.size(); ++i)
        if (schedule[i] * 4 <= smax) ref = i;
      curve.plateau = curve.errors.back() > 0.5 * curve.errors[ref];
    }
    report.curves.push_back(std::move(curve));
  }
  return report;
}

}  // namespace qaw
