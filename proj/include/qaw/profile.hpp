#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qaw/extended.hpp"

// One-dimensional weight profiles: the named families plus sampled data.
// All families are even functions of t; Sampled may be asymmetric.
// Profiles evaluate in log space so that deep tails stay meaningful far
// beyond the underflow point of double.

namespace qaw {

enum class Extrapolation { Zero, LastValue };

/// C * exp(-eps * |t|). The holomorphic family; tau_w = eps.
struct ExpDecayParams {
  double C = 1.0;
  double eps = 1.0;
};

/// C * exp(-t^2 / sigma^2).
struct GaussianParams {
  double C = 1.0;
  double sigma = 1.0;
};

/// C * exp(-t^2 * (prod_j log_j^{p_j}(a_j |t|))^{-1}) for |t| above the
/// validity threshold (every iterated log argument >= 1 there), held
/// constant at the threshold value below it. log_0 t = t,
/// log_j t = log(log_{j-1} t).
struct RepLogParams {
  double C = 1.0;
  std::vector<double> a;  // a_0 .. a_k, all > 0
  std::vector<double> p;  // p_0 .. p_k; p_j = 0 for j > order
  int order = 0;          // highest index with meaningful p
  double threshold = 0.0;       // computed on construction
  double log_value_at_threshold = 0.0;
};

/// w(t) = w(R) * exp(-int_R^{|t|} rho(s)/s ds) with rho sampled on a grid,
/// nonnegative and nondecreasing; constant w(R) on [0, R]. rho is
/// interpolated linearly on its grid, constant to the left and extended
/// linearly (slope of the last segment, clamped at >= 0) to the right.
struct RhoFormParams {
  double wR = 1.0;
  double R = 1.0;
  std::vector<double> grid;  // increasing radii >= R
  std::vector<double> rho;   // nonnegative, nondecreasing
};

/// Characteristic profile of [-radius, radius].
struct IndicatorParams {
  double radius = 1.0;
};

/// Piecewise-linear interpolation of (grid, values); outside the grid the
/// extrapolation policy applies (Zero or LastValue = nearest endpoint).
struct SampledParams {
  std::vector<double> grid;
  std::vector<double> values;
  Extrapolation extrapolation = Extrapolation::Zero;
};

class Profile1D {
 public:
  using Params = std::variant<ExpDecayParams, GaussianParams, RepLogParams,
                              RhoFormParams, IndicatorParams, SampledParams>;

  static Profile1D exp_decay(double C, double eps);
  static Profile1D gaussian(double C, double sigma);
  static Profile1D rep_log(double C, std::vector<double> a,
                           std::vector<double> p,
                           std::optional<int> order = std::nullopt);
  static Profile1D rho_form(double wR, double R, std::vector<double> grid,
                            std::vector<double> rho);
  static Profile1D indicator(double radius);
  static Profile1D sampled(std::vector<double> grid,
                           std::vector<double> values, Extrapolation ex);

  double value(double t) const { return exp_ext(log_value(t)); }
  double log_value(double t) const;

  /// Certified global upper bound (the closed-form sup of the family).
  double upper_bound() const;

  /// sup{|t| : value(t) != 0}; infinity for the strictly positive families.
  double support_radius() const;

  /// true for families that are even functions of t.
  bool is_even() const;

  const Params& params() const { return params_; }

  /// Pointwise power profile^nu (nu > 0) where the family is closed under
  /// powers; nullopt otherwise (RepLog with p_0 = 0 has no slot to absorb
  /// the exponent).
  std::optional<Profile1D> pow(double nu) const;

 private:
  explicit Profile1D(Params p) : params_(std::move(p)) {}
  Params params_;
};

}  // namespace qaw
