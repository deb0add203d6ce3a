#pragma once

#include <functional>
#include <vector>

#include "qaw/weight.hpp"

// Moment quantities M_w(v, m) = sup_x |(v, x)|^m w(x), their sequences,
// log-convex envelopes, and the divergence quantities mu(m) =
// min_{k >= m} M(k)^{1/k}. Values live in [0, inf] and are stored in log
// space so that sequences like m! or exp(2 m log m) stay representable.

namespace qaw {

enum class Provenance { ClosedForm, GridSup };

struct MomentSequence {
  std::vector<double> log_values;  // log of entries in [0, inf]
  Provenance provenance = Provenance::ClosedForm;
  bool log_convex = false;  // certificate, see check_log_convex

  static MomentSequence from_values(std::vector<double> values,
                                    Provenance prov = Provenance::ClosedForm);
  static MomentSequence from_log_values(
      std::vector<double> lv, Provenance prov = Provenance::ClosedForm);

  std::size_t size() const { return log_values.size(); }
  double log_value(std::size_t m) const { return log_values.at(m); }
  /// Entry in [0, inf]; saturates to inf when exp overflows.
  double value(std::size_t m) const { return exp_ext(log_values.at(m)); }
  std::vector<double> values() const;

  /// a(m)^2 <= a(m-1) a(m+1) (1 + rtol) for interior m, in [0, inf]
  /// arithmetic with 0 * inf = 0.
  bool check_log_convex(double rtol = 1e-9) const;

  /// CSV with columns m,value,log_value.
  std::string to_csv() const;
};

struct MomentOptions {
  double initial_domain = 8.0;   // starting half-width of the search domain
  std::size_t samples = 4096;    // grid samples per stage
  double rtol = 1e-9;            // doubling stops when sup gains less
  double domain_cap = 1048576.0; // 2^20; past this the sup is reported as inf
  double unbounded_log = 690.0;  // ~log(1e300): larger sups count as inf
  bool force_grid = false;       // disable closed forms (oracle cross-checks)
};

struct MomentResult {
  double log_value = kNegInf;
  bool unbounded = false;  // domain doubling did not stabilize below the cap
  Provenance provenance = Provenance::ClosedForm;
};

/// M_w(v, m) in [0, inf]. v must be nonzero, m >= 0.
double moment(const WeightExpr& w, const Vec& v, int m,
              const MomentOptions& opts = {});
MomentResult moment_detail(const WeightExpr& w, const Vec& v, int m,
                           const MomentOptions& opts = {});

/// values[m] = M_w(v, m) for m = 0..m_max, with the log-convexity
/// certificate attached. Grid domains are reused monotonically in m.
MomentSequence moment_sequence(const WeightExpr& w, const Vec& v, int m_max,
                               const MomentOptions& opts = {});

/// Largest log-convex minorant: lower convex hull of (m, log a(m)), with
/// log 0 = -inf forcing the envelope to zero from the first vanishing
/// entry onward. Idempotent; equals the input on log-convex data.
MomentSequence log_convex_envelope(const MomentSequence& a);

/// mu(m) = min_{k in [m, K]} M(k)^{1/k} for m = m_lo..m_hi, where K is the
/// last index of M. Requires K >= m_hi + tail_window (else Truncated).
std::vector<double> mu_sequence(const MomentSequence& M, int m_lo, int m_hi,
                                int tail_window = 8);

/// sup_t |t|^m g(t) for a 1D weight given as t -> log g(t), by the same
/// doubling grid search the engine uses. `even` restricts the scan to
/// t >= 0.
MomentResult log_moment_of_callable(const std::function<double(double)>& log_g,
                                    int m, bool even,
                                    const MomentOptions& opts = {});

}  // namespace qaw
