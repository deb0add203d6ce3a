#include "qaw/moment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qaw/errors.hpp"
#include "qaw/numerics.hpp"

namespace qaw {

MomentSequence MomentSequence::from_values(std::vector<double> values,
                                           Provenance prov) {
  MomentSequence s;
  s.log_values.reserve(values.size());
  for (double v : values) {
    if (!(v >= 0.0) && !is_pos_inf(v))
      throw ParameterError("moment sequence entries must lie in [0, inf]");
    s.log_values.push_back(log_ext(v));
  }
  s.provenance = prov;
  s.log_convex = s.check_log_convex();
  return s;
}

MomentSequence MomentSequence::from_log_values(std::vector<double> lv,
                                               Provenance prov) {
  MomentSequence s;
  s.log_values = std::move(lv);
  s.provenance = prov;
  s.log_convex = s.check_log_convex();
  return s;
}

std::vector<double> MomentSequence::values() const {
  std::vector<double> v;
  v.reserve(log_values.size());
  for (double lv : log_values) v.push_back(exp_ext(lv));
  return v;
}

bool MomentSequence::check_log_convex(double rtol) const {
  double slack = std::log1p(rtol);
  for (std::size_t m = 1; m + 1 < log_values.size(); ++m) {
    double mid = log_values[m];
    double lo = log_values[m - 1], hi = log_values[m + 1];
    if (is_neg_inf(mid)) continue;  // a(m) = 0 satisfies anything
    if (is_neg_inf(lo) || is_neg_inf(hi)) return false;  // 0 * x = 0 < a(m)^2
    if (is_pos_inf(lo) || is_pos_inf(hi)) continue;
    if (is_pos_inf(mid)) return false;
    if (2.0 * mid > lo + hi + slack) return false;
  }
  return true;
}

std::string MomentSequence::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "m,value,log_value\n";
  for (std::size_t m = 0; m < log_values.size(); ++m)
    os << m << "," << exp_ext(log_values[m]) << "," << log_values[m] << "\n";
  return os.str();
}

namespace {

constexpr int kMaxGridDimension = 4;

// ---------------------------------------------------------------------
// 1D sup kernel: maximize fn(t) = log g(t) over candidate points with
// golden refinement between the neighbors of the best sample.

struct SupState {
  double arg = 0.0;
  double log_sup = kNegInf;
};

SupState scan_candidates(const std::function<double(double)>& fn,
                         std::vector<double>& ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  SupState best;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double v = fn(ts[i]);
    if (v > best.log_sup) {
      best.log_sup = v;
      best.arg = ts[i];
      best_i = i;
    }
  }
  if (is_neg_inf(best.log_sup)) return best;
  double lo = best_i > 0 ? ts[best_i - 1] : ts[best_i];
  double hi = best_i + 1 < ts.size() ? ts[best_i + 1] : ts[best_i];
  if (hi > lo) {
    auto [arg, val] = golden_max(fn, lo, hi);
    if (val > best.log_sup) {
      best.log_sup = val;
      best.arg = arg;
    }
  }
  return best;
}

// Candidate grid on [lo, hi]: uniform samples plus log-spaced ones toward
// zero, so peaks far below the domain scale are not skipped.
std::vector<double> make_grid(double lo, double hi, std::size_t samples) {
  std::vector<double> ts = linspace(lo, hi, samples);
  double a = std::max(std::min(std::abs(lo), std::abs(hi)), hi * 1e-9);
  if (lo <= 0.0 && hi > 0.0) a = hi * 1e-9;
  std::size_t extra = samples / 4;
  for (std::size_t i = 0; i < extra; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(extra - 1);
    double t = a * std::pow(hi / a, u);
    if (t >= lo && t <= hi) ts.push_back(t);
    if (-t >= lo && -t <= hi) ts.push_back(-t);
  }
  return ts;
}

// sup of fn over [0, T] or [-T, T] with domain doubling per the module
// contract: stop when a doubling improves the running sup by less than
// rtol and the argmax is interior. The final domain is fed back through
// `domain_feedback` so sequences reuse it monotonically in m.
MomentResult doubling_sup(const std::function<double(double)>& fn, bool even,
                          const MomentOptions& opts, double domain_hint,
                          double* domain_feedback = nullptr) {
  double T = std::max(opts.initial_domain, domain_hint);
  SupState best;
  bool have_prev = false;
  double prev_sup = kNegInf;
  while (true) {
    std::vector<double> ts = make_grid(even ? 0.0 : -T, T, opts.samples);
    SupState s = scan_candidates(fn, ts);
    if (s.log_sup > best.log_sup) best = s;
    if (domain_feedback) *domain_feedback = T;
    if (best.log_sup > opts.unbounded_log)
      return {kInf, true, Provenance::GridSup};
    bool interior = std::abs(best.arg) <= 0.75 * T;
    if (have_prev && interior &&
        best.log_sup - prev_sup < std::log1p(opts.rtol))
      return {best.log_sup, false, Provenance::GridSup};
    prev_sup = best.log_sup;
    have_prev = true;
    if (T >= opts.domain_cap) {
      // never stabilized below the cap
      if (!interior || is_pos_inf(best.log_sup))
        return {kInf, true, Provenance::GridSup};
      return {best.log_sup, false, Provenance::GridSup};
    }
    T *= 2.0;
  }
}

// ---------------------------------------------------------------------
// closed forms: log sup_{t>=0} t^m p(t) for the families that admit one

std::optional<double> profile_closed_log_moment(const Profile1D& p, int m) {
  if (const auto* e = std::get_if<ExpDecayParams>(&p.params())) {
    if (m == 0) return std::log(e->C);
    double md = m;
    return std::log(e->C) + md * (std::log(md) - 1.0 - std::log(e->eps));
  }
  if (const auto* g = std::get_if<GaussianParams>(&p.params())) {
    if (m == 0) return std::log(g->C);
    double md = m;
    return std::log(g->C) + 0.5 * md * (std::log(0.5 * md) - 1.0) +
           md * std::log(g->sigma);
  }
  if (const auto* ind = std::get_if<IndicatorParams>(&p.params())) {
    return m * std::log(ind->radius);
  }
  return std::nullopt;
}

// Tables with a positive constant tail have infinite positive-order moments.
bool sampled_has_positive_tail(const Profile1D& p) {
  const auto* sp = std::get_if<SampledParams>(&p.params());
  if (!sp || sp->extrapolation != Extrapolation::LastValue) return false;
  return sp->values.front() > 0.0 || sp->values.back() > 0.0;
}

// ---------------------------------------------------------------------
// radial reduction: a weight whose restriction to shells depends only on
// the radius is handled through a 1D callable.

using LogRadialFn = std::function<double(double)>;  // r >= 0 -> log w(shell r)

std::optional<LogRadialFn> as_radial(const WeightExpr& w);

std::optional<LogRadialFn> combine_radial(const WeightExpr& w, bool is_min) {
  auto a = as_radial(w.child(0));
  auto b = as_radial(w.child(1));
  if (!a || !b) return std::nullopt;
  if (is_min)
    return [a = *a, b = *b](double r) { return std::min(a(r), b(r)); };
  return [a = *a, b = *b](double r) { return log_add_exp(a(r), b(r)); };
}

std::optional<LogRadialFn> as_radial(const WeightExpr& w) {
  if (const auto* rn = std::get_if<RadialNode>(&w.node())) {
    Profile1D p = rn->profile;
    return [p](double r) { return p.log_value(r); };
  }
  if (const auto* sn = std::get_if<ScaleNode>(&w.node())) {
    auto inner = as_radial(w.child(0));
    if (!inner) return std::nullopt;
    double lc = log_ext(sn->c);
    return [lc, inner = *inner](double r) {
      return is_neg_inf(lc) ? kNegInf : lc + inner(r);
    };
  }
  if (std::holds_alternative<MinNode>(w.node())) return combine_radial(w, true);
  if (std::holds_alternative<SumNode>(w.node())) return combine_radial(w, false);
  return std::nullopt;
}

// ---------------------------------------------------------------------
// generic n-D fallback: coarse grid + cyclic coordinate refinement inside
// a domain-doubling loop.

MomentResult nd_sup(const WeightExpr& w, const Vec& v, double shift, int m,
                    const MomentOptions& opts) {
  int n = w.dimension();
  if (n > kMaxGridDimension)
    throw Error("moment: grid sup is not supported beyond dimension 4");
  auto objective = [&](const Vec& x) {
    double lw = w.log_evaluate(x);
    if (is_neg_inf(lw)) return kNegInf;
    return pow_log(log_ext(std::abs(dot(v, x) + shift)), m) + lw;
  };
  std::size_t per_axis = n == 2 ? 129 : (n == 3 ? 33 : 17);
  double T = opts.initial_domain;
  double best_val = kNegInf;
  Vec best_x(static_cast<std::size_t>(n), 0.0);
  bool have_prev = false;
  double prev = kNegInf;
  while (true) {
    std::vector<double> axis = linspace(-T, T, per_axis);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    Vec x(static_cast<std::size_t>(n), 0.0);
    while (true) {
      for (int j = 0; j < n; ++j)
        x[static_cast<std::size_t>(j)] = axis[idx[static_cast<std::size_t>(j)]];
      double val = objective(x);
      if (val > best_val) {
        best_val = val;
        best_x = x;
      }
      int j = 0;
      for (; j < n; ++j) {
        std::size_t& k = idx[static_cast<std::size_t>(j)];
        if (++k < axis.size()) break;
        k = 0;
      }
      if (j == n) break;
    }
    // cyclic golden refinement along coordinates
    for (int sweep = 0; sweep < 6; ++sweep) {
      double before = best_val;
      for (int j = 0; j < n; ++j) {
        Vec probe = best_x;
        auto line = [&](double t) {
          probe[static_cast<std::size_t>(j)] = t;
          return objective(probe);
        };
        auto [arg, val] = golden_max(line, -T, T);
        if (val > best_val) {
          best_val = val;
          best_x[static_cast<std::size_t>(j)] = arg;
        }
      }
      if (best_val - before < std::log1p(opts.rtol)) break;
    }
    if (best_val > opts.unbounded_log) return {kInf, true, Provenance::GridSup};
    double linf = 0.0;
    for (double c : best_x) linf = std::max(linf, std::abs(c));
    bool interior = linf <= 0.75 * T;
    if (have_prev && interior && best_val - prev < std::log1p(opts.rtol))
      return {best_val, false, Provenance::GridSup};
    prev = best_val;
    have_prev = true;
    if (T >= opts.domain_cap)
      return interior ? MomentResult{best_val, false, Provenance::GridSup}
                      : MomentResult{kInf, true, Provenance::GridSup};
    T *= 2.0;
  }
}

// ---------------------------------------------------------------------
// structural recursion on sup_x |(v,x) + shift|^m w(x)

struct MomentContext {
  MomentOptions opts;
  double domain_hint = 0.0;
};

MomentResult log_moment_rec(const WeightExpr& w, const Vec& v, double shift,
                            int m, MomentContext& ctx) {
  const MomentOptions& opts = ctx.opts;

  if (const auto* sn = std::get_if<ScaleNode>(&w.node())) {
    if (sn->c == 0.0) return {kNegInf, false, Provenance::ClosedForm};
    MomentResult r = log_moment_rec(w.child(0), v, shift, m, ctx);
    r.log_value = is_neg_inf(r.log_value) ? kNegInf
                                          : r.log_value + std::log(sn->c);
    return r;
  }

  if (const auto* an = std::get_if<AffineNode>(&w.node())) {
    // sup |(v,x)+c|^m w(A^{-1}x) = sup_z |(L^t v, z) + c + (v,y)|^m w(z)
    Vec vt = an->map.linear.transpose().apply(v);
    double c2 = shift + dot(v, an->map.translation);
    return log_moment_rec(w.child(0), vt, c2, m, ctx);
  }

  if (const auto* rn = std::get_if<RadialNode>(&w.node())) {
    double nv = norm2(v);
    if (shift == 0.0 && !opts.force_grid) {
      auto cf = profile_closed_log_moment(rn->profile, m);
      if (cf) return {*cf + m * std::log(nv), false, Provenance::ClosedForm};
    }
    // sup over the shell of radius r of |(v,x)+c| is nv * r + |c|
    Profile1D p = rn->profile;
    auto fn = [p, nv, shift, m](double r) {
      double lp = p.log_value(r);
      if (is_neg_inf(lp)) return kNegInf;
      return pow_log(log_ext(nv * r + std::abs(shift)), m) + lp;
    };
    return doubling_sup(fn, true, opts, ctx.domain_hint, &ctx.domain_hint);
  }

  if (const auto* tn = std::get_if<TensorNode>(&w.node())) {
    int axis = -1;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] != 0.0) {
        if (axis >= 0) {
          axis = -2;  // more than one nonzero component
          break;
        }
        axis = static_cast<int>(j);
      }
    }
    if (axis >= 0) {
      double total = 0.0;
      bool any_unbounded = false;
      Provenance prov = Provenance::ClosedForm;
      for (std::size_t j = 0; j < tn->factors.size(); ++j) {
        const Profile1D& p = tn->factors[j];
        MomentResult rj;
        if (static_cast<int>(j) == axis) {
          if (m >= 1 && sampled_has_positive_tail(p))
            return {kInf, true, Provenance::ClosedForm};
          double vj = v[j];
          if (shift == 0.0 && !opts.force_grid && p.is_even()) {
            auto cf = profile_closed_log_moment(p, m);
            if (cf) {
              total += *cf + m * std::log(std::abs(vj));
              continue;
            }
          }
          auto fn = [&p, vj, shift, m](double t) {
            double lp = p.log_value(t);
            if (is_neg_inf(lp)) return kNegInf;
            return pow_log(log_ext(std::abs(vj * t + shift)), m) + lp;
          };
          rj = doubling_sup(fn, false, opts, ctx.domain_hint,
                            &ctx.domain_hint);
        } else {
          auto fn = [&p](double t) { return p.log_value(t); };
          rj = doubling_sup(fn, false, opts, 0.0);
        }
        if (rj.unbounded) any_unbounded = true;
        prov = Provenance::GridSup;
        if (is_neg_inf(rj.log_value)) return {kNegInf, false, prov};
        total += rj.log_value;
      }
      return {total, any_unbounded, prov};
    }
    return nd_sup(w, v, shift, m, opts);
  }

  if (const auto* tb = std::get_if<TableNode>(&w.node())) {
    if (m >= 1 && sampled_has_positive_tail(tb->samples))
      return {kInf, true, Provenance::ClosedForm};
    Profile1D p = tb->samples;
    double v0 = v.at(0);
    auto fn = [p, v0, shift, m](double t) {
      double lp = p.log_value(t);
      if (is_neg_inf(lp)) return kNegInf;
      return pow_log(log_ext(std::abs(v0 * t + shift)), m) + lp;
    };
    return doubling_sup(fn, false, opts, ctx.domain_hint, &ctx.domain_hint);
  }

  // Min / Sum: reduce to a 1D radial scan when both sides are radial
  if (w.dimension() >= 1) {
    if (auto rf = as_radial(w)) {
      double nv = norm2(v);
      auto fn = [rf = *rf, nv, shift, m](double r) {
        double lw = rf(r);
        if (is_neg_inf(lw)) return kNegInf;
        return pow_log(log_ext(nv * r + std::abs(shift)), m) + lw;
      };
      return doubling_sup(fn, true, opts, ctx.domain_hint, &ctx.domain_hint);
    }
    if (w.dimension() == 1) {
      double v0 = v.at(0);
      auto fn = [&w, v0, shift, m](double t) {
        double lw = w.log_evaluate1(t);
        if (is_neg_inf(lw)) return kNegInf;
        return pow_log(log_ext(std::abs(v0 * t + shift)), m) + lw;
      };
      return doubling_sup(fn, false, opts, ctx.domain_hint, &ctx.domain_hint);
    }
  }
  return nd_sup(w, v, shift, m, opts);
}

}  // namespace

MomentResult moment_detail(const WeightExpr& w, const Vec& v, int m,
                           const MomentOptions& opts) {
  if (static_cast<int>(v.size()) != w.dimension())
    throw DimensionError("moment: vector dimension mismatch");
  if (norm2(v) == 0.0) throw ParameterError("moment: v must be nonzero");
  if (m < 0) throw ParameterError("moment: order must be >= 0");
  MomentContext ctx{opts, 0.0};
  return log_moment_rec(w, v, 0.0, m, ctx);
}

double moment(const WeightExpr& w, const Vec& v, int m,
              const MomentOptions& opts) {
  return exp_ext(moment_detail(w, v, m, opts).log_value);
}

MomentSequence moment_sequence(const WeightExpr& w, const Vec& v, int m_max,
                               const MomentOptions& opts) {
  if (m_max < 1) throw ParameterError("moment_sequence: m_max must be >= 1");
  std::vector<double> lv;
  lv.reserve(static_cast<std::size_t>(m_max) + 1);
  Provenance prov = Provenance::ClosedForm;
  MomentContext ctx{opts, 0.0};
  for (int m = 0; m <= m_max; ++m) {
    MomentResult r = log_moment_rec(w, v, 0.0, m, ctx);
    if (r.provenance == Provenance::GridSup) prov = Provenance::GridSup;
    lv.push_back(r.log_value);
  }
  MomentSequence s = MomentSequence::from_log_values(std::move(lv), prov);
  return s;
}

MomentSequence log_convex_envelope(const MomentSequence& a) {
  if (a.size() < 2)
    throw ParameterError("log_convex_envelope: need length >= 2");
  const auto& lv = a.log_values;
  std::vector<double> env(lv.size(), kNegInf);

  if (is_neg_inf(lv[0])) {
    // a(0) = 0 cascades through the whole sequence
    return MomentSequence::from_log_values(std::move(env), a.provenance);
  }
  bool has_zero = false;
  for (std::size_t m = 1; m < lv.size(); ++m)
    if (is_neg_inf(lv[m])) has_zero = true;
  if (has_zero) {
    // any vanishing entry forces the largest log-convex minorant to vanish
    // from index 1 on (a(m)^2 <= a(m-1) a(m+1) cascades backwards)
    env[0] = lv[0];
    return MomentSequence::from_log_values(std::move(env), a.provenance);
  }

  std::vector<Point2> finite;
  for (std::size_t m = 0; m < lv.size(); ++m)
    if (!is_pos_inf(lv[m]))
      finite.push_back({static_cast<double>(m), lv[m]});
  if (finite.empty())
    return MomentSequence::from_log_values(std::vector<double>(lv),
                                           a.provenance);
  std::vector<Point2> hull = lower_convex_hull(finite);
  for (std::size_t m = 0; m < lv.size(); ++m) {
    double md = static_cast<double>(m);
    if (md < finite.front().x || md > finite.back().x) {
      env[m] = lv[m];  // leading/trailing +inf entries are unconstrained
    } else {
      double h = hull_interpolate(hull, md, std::nullopt, std::nullopt);
      env[m] = std::min(h, lv[m]);
    }
  }
  return MomentSequence::from_log_values(std::move(env), a.provenance);
}

std::vector<double> mu_sequence(const MomentSequence& M, int m_lo, int m_hi,
                                int tail_window) {
  if (m_lo < 1 || m_hi < m_lo)
    throw ParameterError("mu_sequence: need 1 <= m_lo <= m_hi");
  int K = static_cast<int>(M.size()) - 1;
  if (K < m_hi + tail_window)
    throw TruncatedError("mu_sequence: window too short (need K >= m_hi + " +
                         std::to_string(tail_window) + ")");
  std::vector<double> mu;
  mu.reserve(static_cast<std::size_t>(m_hi - m_lo) + 1);
  for (int m = m_lo; m <= m_hi; ++m) {
    double best = kInf;
    for (int k = m; k <= K; ++k) {
      double term = std::pow(M.value(static_cast<std::size_t>(k)),
                             1.0 / static_cast<double>(k));
      if (term < best) best = term;
    }
    mu.push_back(best);
  }
  return mu;
}

MomentResult log_moment_of_callable(const std::function<double(double)>& log_g,
                                    int m, bool even,
                                    const MomentOptions& opts) {
  auto fn = [&log_g, m](double t) {
    double lw = log_g(t);
    if (is_neg_inf(lw)) return kNegInf;
    return pow_log(log_ext(std::abs(t)), m) + lw;
  };
  return doubling_sup(fn, even, opts, 0.0);
}

}  // namespace qaw
