#pragma once

#include <cmath>
#include <limits>

// Conventions for the extended nonnegative reals [0, inf]:
// 0 * inf = 0, 0^0 = inf^0 = 1, log 0 = -inf.
// Most computations run in log space; a value v >= 0 is represented by
// log v in [-inf, +inf].

namespace qaw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_pos_inf(double x) { return std::isinf(x) && x > 0; }
inline bool is_neg_inf(double x) { return std::isinf(x) && x < 0; }

/// log of a nonnegative value, with log 0 = -inf.
inline double log_ext(double v) {
  if (v == 0.0) return kNegInf;
  return std::log(v);
}

/// exp saturating to [0, inf]; exp(-inf) = 0, exp(+inf) = inf.
inline double exp_ext(double lv) {
  if (is_neg_inf(lv)) return 0.0;
  if (is_pos_inf(lv)) return kInf;
  return std::exp(lv);
}

/// log(e^a + e^b) stable in log space; honors -inf as absorbing zero.
inline double log_add_exp(double a, double b) {
  if (is_neg_inf(a)) return b;
  if (is_neg_inf(b)) return a;
  if (is_pos_inf(a) || is_pos_inf(b)) return kInf;
  double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// m * log|t| with the 0^0 = 1 convention (m = 0 gives 0 even at t = 0).
inline double pow_log(double log_abs_t, double m) {
  if (m == 0.0) return 0.0;  // x^0 = 1 for every x in [0, inf]
  if (is_neg_inf(log_abs_t)) return kNegInf;
  return m * log_abs_t;
}

}  // namespace qaw
