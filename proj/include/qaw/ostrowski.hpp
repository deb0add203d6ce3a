#pragma once

#include <vector>

#include "qaw/moment.hpp"
#include "qaw/numerics.hpp"
#include "qaw/weight.hpp"

// Ostrowski's construction: the even weight inf_m a(m)/|t|^m attached to a
// log-convex sequence, the even majorant of a 1D weight built from its
// moment sequence, support radii, the convex (log-log) regularization, and
// the smooth rho-form majorant.

namespace qaw {

/// Even piecewise weight w(t) = inf_{0<=m<=M} a(m)/|t|^m for a log-convex
/// sequence a, realized through its transition points t_m = a(m)/a(m-1).
/// On [t_m, t_{m+1}] the value is a(m)/|t|^m; beyond the last transition
/// the construction from a finite sequence carries the power tail
/// a(M)/|t|^M. The support radius field is sup_m a(m)/a(m-1), the radius
/// Delta of the construction as visible from the given data.
class PiecewiseWeight1D {
 public:
  /// Sequence must be log-convex (certificate set) with length >= 2.
  static PiecewiseWeight1D from_sequence(const MomentSequence& a);

  double value(double t) const { return exp_ext(log_value(t)); }
  double log_value(double t) const;

  bool point_supported() const { return point_supported_; }
  double head_value() const { return exp_ext(log_coeffs_.at(0)); }
  /// log a(m) for the orders the construction retains.
  const std::vector<double>& log_coefficients() const { return log_coeffs_; }
  /// Transition points t_m = a(m)/a(m-1), m = 1..M (nondecreasing).
  const std::vector<double>& transitions() const { return transitions_; }
  std::size_t max_order() const { return log_coeffs_.size() - 1; }
  double support_radius() const;

  /// CSV samples (t, value) on a log-spaced grid covering the transitions.
  std::string to_csv(std::size_t points = 512) const;

 private:
  std::vector<double> log_coeffs_;   // log a(0) .. log a(M)
  std::vector<double> transitions_;  // log-convexity makes these nondecreasing
  bool point_supported_ = false;
};

/// Builds the weight of eq. inf_m a(m)/|t|^m from a log-convex sequence.
/// Rejects sequences whose log-convexity certificate is unset (apply
/// log_convex_envelope first).
PiecewiseWeight1D weight_from_sequence(const MomentSequence& a);

/// Even majorant of a 1D weight: inf_{m<=M_max} M_w(e,m)/|t|^m. Throws
/// NotRapidlyDecreasing when a moment up to M_max is infinite.
PiecewiseWeight1D even_majorant(const WeightExpr& w, int m_max,
                                const MomentOptions& opts = {});

/// Delta_w = sup{ |t| : w(t) != 0 }: exact for Indicator and tables,
/// infinity for the strictly positive families; a certified upper bound
/// for affine/min combinations.
double support_radius(const WeightExpr& w);

/// Result of the convex regularization: an even weight, log-log convex,
/// stored as the piecewise-linear graph of s -> -log wbar(e^s). Constant
/// to the left of the first knot; beyond the last knot the final slope
/// continues, or the weight is identically zero when the input vanished
/// at the tail of the grid.
class RegularizedWeight {
 public:
  RegularizedWeight(std::vector<Point2> knots, double right_slope,
                    bool zero_tail, double zero_from_s)
      : knots_(std::move(knots)),
        right_slope_(right_slope),
        zero_tail_(zero_tail),
        zero_from_s_(zero_from_s) {}

  double value(double t) const { return exp_ext(log_value(t)); }
  double log_value(double t) const;

  /// Knots (s, h) of the envelope h(s) = -log wbar(e^s).
  const std::vector<Point2>& knots() const { return knots_; }
  double right_slope() const { return right_slope_; }
  bool zero_tail() const { return zero_tail_; }
  /// wbar vanishes for log t > this when zero_tail() holds.
  double zero_from_s() const { return zero_from_s_; }
  bool identically_zero() const { return knots_.empty(); }

  /// Discrete convexity of -log wbar(e^s) over the stored knots.
  bool is_log_log_convex(double slack = 1e-9) const;

  std::string to_csv(std::size_t points = 512) const;

 private:
  std::vector<Point2> knots_;
  double right_slope_ = 0.0;
  bool zero_tail_ = false;
  double zero_from_s_ = 0.0;
};

struct RegularizationOptions {
  double s_min = -6.907755278982137;  // log 1e-3
  double s_max = 13.815510557964274;  // log 1e6
  std::size_t points = 4096;
};

/// Smallest even majorant of w that is convex in log-log coordinates,
/// computed on the s-grid: h(s) = -log max(w(e^s), w(-e^s)), extended
/// constantly to the left, lower convex envelope, exp(-.) back.
RegularizedWeight convex_regularization(const WeightExpr& w,
                                        const RegularizationOptions& opts = {});

/// Same, for an arbitrary 1D log-weight callable (used for idempotence
/// checks on already-regularized data).
RegularizedWeight convex_regularization_of(
    const std::function<double(double)>& log_w,
    const RegularizationOptions& opts = {});

/// Strictly positive even majorant in rho-form (classification condition:
/// w(t) <= C exp(-int_0^|t| rho(s)/s ds) with rho nondecreasing, zero on
/// an initial segment). Builds 2 * even_majorant(w), then smooths the
/// slope staircase of s -> -log(2 wtilde(e^s)) with monotone cubic steps
/// kept inside the factor-2 band. Bounded-support weights are first
/// majorized by C exp(-|t|) as in the classification proof.
Profile1D smooth_majorant_rho(const WeightExpr& w, int m_max = 60,
                              const MomentOptions& opts = {});

/// Sampled-profile renderings for the weight-spec JSON schema.
Profile1D to_sampled_profile(const PiecewiseWeight1D& w,
                             std::size_t points = 1024);
Profile1D to_sampled_profile(const RegularizedWeight& w,
                             std::size_t points = 1024);

}  // namespace qaw
