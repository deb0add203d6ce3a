#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qaw/classifier.hpp"
#include "qaw/weight.hpp"

// Empirical density lab for the Bernstein space C_w^0: best weighted
// sup-norm approximation of a target by polynomials (Chebyshev basis) or
// by trigonometric spans with a restricted spectral set, solved exactly
// on a grid as a linear program. The error curves are the desk-scale
// companion of the density predictions: quasi-analytic weights admit
// polynomial approximation, weights failing Hall's condition plateau.

namespace qaw {

using TargetFn = std::function<double(double)>;

/// max over the grid of |f(t)| w(t): the Bernstein-space seminorm proxy.
double bernstein_norm(const TargetFn& f, const WeightExpr& w,
                      const std::vector<double>& grid);

/// Chebyshev-distributed grid on [-T, T] where T is the smallest dyadic
/// radius with w below `floor_ratio` of its sup outside.
std::vector<double> default_grid(const WeightExpr& w,
                                 std::size_t count = 2001,
                                 double floor_ratio = 1e-14);

struct MinimaxOptions {
  /// proxy for C_w membership: |target w| at the grid endpoints must stay
  /// below this fraction of its maximum
  double endpoint_ratio = 1e-10;
  int degree_cap = 60;  // conditioning limit of the Chebyshev basis
  /// grid points with w below this fraction of the grid maximum are left
  /// out of the LP; the achieved error is still evaluated on all points,
  /// so the duality gap certifies the omission was harmless
  double support_floor = 1e-12;
};

struct MinimaxResult {
  std::vector<double> coefficients;
  double error = 0.0;       // achieved weighted sup error on the grid
  double dual_value = 0.0;  // LP dual objective
  double duality_gap = 0.0; // |error - dual_value|, strong duality check
};

/// Minimizes max_i |target(t_i) - p(t_i)| w(t_i) over polynomials of
/// degree <= d, parameterized in the Chebyshev basis of the grid
/// interval. Exact on the discretized problem via the dual simplex form.
MinimaxResult best_poly_approx(const TargetFn& target, const WeightExpr& w,
                               int degree, const std::vector<double>& grid,
                               const MinimaxOptions& opts = {});

/// Same over span{1 or cos(l t), sin(l t) : l in spectral_set}.
MinimaxResult best_trig_approx(const TargetFn& target, const WeightExpr& w,
                               const std::vector<double>& spectral_set,
                               const std::vector<double>& grid,
                               const MinimaxOptions& opts = {});

enum class ApproxFamily { Polynomial, Trigonometric };

struct ApproxCurve {
  std::string target_name;
  std::vector<double> errors;        // per schedule entry
  std::vector<double> duality_gaps;
  bool plateau = false;  // error(s_max) > 0.5 error(s_max/4)
};

struct ApproxReport {
  ApproxFamily family = ApproxFamily::Polynomial;
  std::vector<int> schedule;  // degrees, or frequency counts
  std::vector<double> spectral_set;  // trigonometric family only
  std::vector<ApproxCurve> curves;
  Verdict weight_verdict;
  double grid_lo = 0.0, grid_hi = 0.0;
  std::size_t grid_count = 0;
};

struct NamedTarget {
  std::string name;
  TargetFn fn;
};

/// Sweeps the schedule for each target, with the classifier verdict for w
/// attached. Error sequences are nonincreasing along the nested families.
ApproxReport density_experiment(const WeightExpr& w,
                                const std::vector<NamedTarget>& targets,
                                ApproxFamily family,
                                const std::vector<int>& schedule,
                                const std::vector<double>& grid,
                                const std::vector<double>& spectral_set = {},
                                const MinimaxOptions& opts = {});

}  // namespace qaw
