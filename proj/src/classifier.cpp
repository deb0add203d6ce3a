#include "qaw/classifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "qaw/errors.hpp"
#include "qaw/numerics.hpp"

namespace qaw {

const char* to_string(WeightClass c) {
  switch (c) {
    case WeightClass::QuasiAnalytic: return "QuasiAnalytic";
    case WeightClass::NotQuasiAnalytic: return "NotQuasiAnalytic";
    default: return "Inconclusive";
  }
}

const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::Diverges: return "Diverges";
    case Conclusion::Converges: return "Converges";
    default: return "Undetermined";
  }
}

const char* to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::SeriesPartialSums: return "SeriesPartialSums";
    case EvidenceKind::LogIntegralTail: return "LogIntegralTail";
    case EvidenceKind::SymbolicRule: return "SymbolicRule";
    case EvidenceKind::HallIntegral: return "HallIntegral";
    default: return "LineRestriction";
  }
}

namespace {

double saturate(double v) {
  if (is_pos_inf(v)) return 1e300;
  if (is_neg_inf(v)) return -1e300;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------
// series test

EvidenceRecord series_test(const MomentSequence& M, int m_max,
                           const SeriesTestOptions& opts) {
  if (m_max < 20) throw ParameterError("series_test: need m_max >= 20");
  if (static_cast<int>(M.size()) <= m_max)
    throw ParameterError("series_test: sequence shorter than m_max");

  EvidenceRecord ev;
  ev.kind = EvidenceKind::SeriesPartialSums;

  // log terms: log M(m)^{-1/m} = -log M(m) / m
  std::vector<double> log_terms(static_cast<std::size_t>(m_max) + 1, 0.0);
  double partial = 0.0;
  int stride = std::max(1, m_max / 32);
  for (int m = 1; m <= m_max; ++m) {
    double lM = M.log_value(static_cast<std::size_t>(m));
    if (is_neg_inf(lM)) {
      // zero moment: the term is infinite and the series diverges
      ev.conclusion = Conclusion::Diverges;
      ev.rule = "zero-moment: 0^{-1/m} = inf at m = " + std::to_string(m);
      ev.payload.push_back(saturate(kInf));
      return ev;
    }
    double lt = is_pos_inf(lM) ? kNegInf : -lM / static_cast<double>(m);
    log_terms[static_cast<std::size_t>(m)] = lt;
    partial += exp_ext(std::min(lt, 690.0));
    if (m % stride == 0) ev.payload.push_back(saturate(partial));
  }
  if (ev.payload.empty()) ev.payload.push_back(saturate(partial));

  // infinite moments zero the tail: only finitely many nonzero terms
  bool tail_zero = is_pos_inf(M.log_value(static_cast<std::size_t>(m_max)));
  if (tail_zero) {
    ev.conclusion = Conclusion::Converges;
    ev.rule = "infinite-moment-tail: inf^{-1/m} = 0";
    return ev;
  }

  // fitting window: the last two dyadic blocks
  int lo = std::max(2, m_max / 4);
  std::vector<double> xs, ys;
  for (int m = lo; m <= m_max; ++m) {
    double lt = log_terms[static_cast<std::size_t>(m)];
    if (is_neg_inf(lt)) continue;
    xs.push_back(std::log(static_cast<double>(m)));
    ys.push_back(lt);
  }
  if (xs.size() < 8) {
    ev.conclusion = Conclusion::Undetermined;
    ev.rule = "too few usable terms in the fit window";
    return ev;
  }

  // nondecreasing positive terms diverge outright
  bool nondecreasing = true;
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (ys[i] < ys[i - 1] - 1e-12) nondecreasing = false;
  if (nondecreasing) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule = "nondecreasing-terms";
    return ev;
  }

  // geometric ratio certificate for fast decay
  double max_ratio = 0.0;
  for (std::size_t i = 1; i < ys.size(); ++i)
    max_ratio = std::max(max_ratio, std::exp(ys[i] - ys[i - 1]));
  if (max_ratio <= opts.geometric_ratio) {
    ev.conclusion = Conclusion::Converges;
    ev.rule = "geometric-ratio <= " + std::to_string(opts.geometric_ratio);
    return ev;
  }

  // model A: log u = alpha - p log m (payload diagnostics + fast path)
  LineFit fit_a = fit_line(xs, ys);
  double p = -fit_a.slope;
  bool a_ok = fit_a.r2 >= opts.fit_r2 || fit_a.rms <= opts.fit_rms;

  // model B: log u = alpha - log m - q log L(m) against the
  // self-consistent scale L(m) = 1 - log u_m. For terms u_m ~ c / t*(m)
  // coming from a sup at t*, L is log t* up to a constant, which removes
  // the slow finite-m bias of fitting against log log m; for plain powers
  // both scales agree asymptotically.
  auto fit_q = [&](int win_lo, int win_hi, double& q_out, bool& ok_out) {
    std::vector<double> xw, yw;
    bool self_scale = true;
    for (int m = win_lo; m <= win_hi; ++m) {
      double lt = log_terms[static_cast<std::size_t>(m)];
      if (is_neg_inf(lt)) continue;
      if (1.0 - lt <= 0.5) self_scale = false;
      xw.push_back(std::log(static_cast<double>(m)));
      yw.push_back(lt);
    }
    if (xw.size() < 6) {
      ok_out = false;
      return;
    }
    std::vector<double> xb, yb;
    for (std::size_t i = 0; i < xw.size(); ++i) {
      xb.push_back(self_scale ? std::log(1.0 - yw[i]) : std::log(xw[i]));
      yb.push_back(yw[i] + xw[i]);  // log (m u_m)
    }
    LineFit f = fit_line(xb, yb);
    q_out = -f.slope;
    ok_out = f.r2 >= opts.fit_r2 || f.rms <= opts.fit_rms;
  };

  double q = 0.0, q_early = 0.0;
  bool b_ok = false, early_ok = false;
  fit_q(lo, m_max, q, b_ok);
  fit_q(std::max(2, m_max / 16), std::max(3, m_max / 4), q_early, early_ok);

  char buf[160];
  std::snprintf(buf, sizeof buf, "fits: p=%.3f (r2=%.4f) q=%.3f (early %.3f)",
                p, fit_a.r2, q, early_ok ? q_early : q);
  ev.rule = buf;

  if (a_ok && p <= 0.95) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule += "; power decay slower than harmonic";
    return ev;
  }
  if (b_ok) {
    // the early-window fit must land on the same side of the decision:
    // a disagreement means the terms have not reached their asymptotic
    // regime within the probed orders
    if (q <= opts.diverge_q &&
        (!early_ok || q_early <= opts.diverge_q)) {
      ev.conclusion = Conclusion::Diverges;
      return ev;
    }
    if (q >= opts.converge_q &&
        (!early_ok || q_early >= opts.converge_q)) {
      ev.conclusion = Conclusion::Converges;
      return ev;
    }
    if ((q <= opts.diverge_q || q >= opts.converge_q) && early_ok) {
      ev.rule += "; windows disagree, regime not established";
    }
  }
  ev.conclusion = Conclusion::Undetermined;
  return ev;
}

// ---------------------------------------------------------------------
// integral tests

namespace {

// conclusion from I(T_k) values at doubling T_k (payload gets the I's)
void conclude_from_integrals(EvidenceRecord& ev,
                             const std::vector<double>& s_log_T,
                             const std::vector<double>& I,
                             const IntegralTestOptions& opts) {
  for (double v : I) ev.payload.push_back(saturate(v));
  for (double v : I) {
    if (std::abs(v) >= opts.diverge_threshold) {
      ev.conclusion = Conclusion::Diverges;
      ev.rule += "|I(T)| beyond threshold";
      return;
    }
  }
  if (I.size() < 4) {
    ev.conclusion = Conclusion::Undetermined;
    ev.rule += "too few doublings";
    return;
  }
  std::size_t n = I.size();
  bool cauchy = true;
  for (std::size_t i = n - 3; i < n; ++i)
    if (std::abs(I[i] - I[i - 1]) > opts.cauchy_tol) cauchy = false;
  if (cauchy) {
    ev.conclusion = Conclusion::Converges;
    ev.rule += "Cauchy across the last three doublings";
    return;
  }
  // fit log |dI| against log log T over the trailing increments, with an
  // early-window consistency check: a decision only stands when both
  // windows land on the same side of it
  auto fit_window = [&](std::size_t w_lo, std::size_t w_hi, double& slope_out,
                        bool& ok_out) {
    std::vector<double> xs, ys;
    for (std::size_t i = std::max<std::size_t>(w_lo, 1); i < w_hi; ++i) {
      double d = std::abs(I[i] - I[i - 1]);
      if (d <= 0.0 || s_log_T[i] <= 1.0) continue;
      xs.push_back(std::log(s_log_T[i]));
      ys.push_back(std::log(d));
    }
    if (xs.size() < 4) {
      ok_out = false;
      return;
    }
    LineFit fit = fit_line(xs, ys);
    slope_out = fit.slope;
    ok_out = fit.r2 >= 0.9 || fit.rms <= 1e-3;
  };

  double slope = 0.0, slope_early = 0.0;
  bool late_ok = false, early_ok = false;
  fit_window(n > 8 ? n - 8 : 1, n, slope, late_ok);
  fit_window(1, n > 8 ? n - 8 : n, slope_early, early_ok);
  if (late_ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "increment slope %.3f (early %.3f)", slope,
                  early_ok ? slope_early : slope);
    ev.rule += buf;
    if (slope >= opts.diverge_slope &&
        (!early_ok || slope_early >= opts.diverge_slope)) {
      ev.conclusion = Conclusion::Diverges;
      return;
    }
    if (slope <= opts.converge_slope &&
        (!early_ok || slope_early <= opts.converge_slope)) {
      ev.conclusion = Conclusion::Converges;
      return;
    }
  } else {
    ev.rule += "increments not fittable";
  }
  ev.conclusion = Conclusion::Undetermined;
}

}  // namespace

EvidenceRecord log_integral_test(const RegularizedWeight& wbar, double R,
                                 const IntegralTestOptions& opts) {
  if (!(R > 0.0)) throw ParameterError("log_integral_test: R must be > 0");
  EvidenceRecord ev;
  ev.kind = EvidenceKind::LogIntegralTail;

  if (wbar.identically_zero() || wbar.zero_tail()) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule = "regularization vanishes at the tail (log 0 = -inf)";
    ev.payload.push_back(saturate(kNegInf));
    return ev;
  }
  double T_max = std::exp(wbar.knots().back().x);
  if (R >= T_max)
    throw ParameterError("log_integral_test: R exceeds the sampled range");

  auto integrand_s = [&wbar](double s) {
    double t = std::exp(s);
    // log wbar(t)/(1+t^2) dt in the variable s = log t
    return wbar.log_value(t) * t / (1.0 + t * t);
  };
  std::vector<double> sT, I;
  double acc = 0.0;
  double prev_s = std::log(R);
  double T = 2.0 * R;
  while (T <= T_max * (1.0 + 1e-12)) {
    double s = std::log(T);
    acc += integrate_gk(integrand_s, prev_s, s, 1e-12, 1e-10);
    sT.push_back(s);
    I.push_back(acc);
    prev_s = s;
    T *= 2.0;
  }
  conclude_from_integrals(ev, sT, I, opts);
  return ev;
}

namespace {

// shared driver for Hall / line-restriction integrals of a raw 1D section
// g; integrates log g(t)/(1+t^2) over [R, T] one-sided with doubling T.
EvidenceRecord one_sided_log_integral(const std::function<double(double)>& log_g,
                                      double R, double T_cap, EvidenceKind kind,
                                      const IntegralTestOptions& opts) {
  EvidenceRecord ev;
  ev.kind = kind;

  // scan for zeros of g; log 0 = -inf makes the integral diverge
  bool any_zero = false, all_zero = true;
  {
    double T = R;
    for (int k = 0; k < 24 && T < T_cap; ++k, T *= 2.0) {
      for (int i = 0; i < 32; ++i) {
        double t = T * (1.0 + static_cast<double>(i) / 32.0);
        double lg = log_g(t);
        if (is_neg_inf(lg))
          any_zero = true;
        else
          all_zero = false;
      }
    }
  }
  if (any_zero) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule = all_zero ? "identically zero restriction (log 0 = -inf)"
                       : "vanishing set of positive sampled measure";
    ev.payload.push_back(saturate(kNegInf));
    return ev;
  }

  auto integrand_s = [&log_g](double s) {
    double t = std::exp(s);
    return log_g(t) * t / (1.0 + t * t);
  };
  std::vector<double> sT, I;
  double acc = 0.0;
  double prev_s = std::log(R);
  double T = 2.0 * R;
  bool overflow = false;
  while (T <= T_cap * (1.0 + 1e-12)) {
    double s = std::log(T);
    acc += integrate_gk(integrand_s, prev_s, s, 1e-12, 1e-10);
    sT.push_back(s);
    I.push_back(acc);
    prev_s = s;
    if (std::abs(acc) >= opts.diverge_threshold) {
      overflow = true;
      break;
    }
    T *= 2.0;
  }
  (void)overflow;
  conclude_from_integrals(ev, sT, I, opts);
  return ev;
}

double default_integral_start(const WeightExpr& w);

}  // namespace

EvidenceRecord hall_test(const WeightExpr& w, const IntegralTestOptions& opts) {
  if (w.dimension() != 1)
    throw DimensionError("hall_test: weight must be one-dimensional");
  if (decay_class(w, std::nullopt).membership == Membership::NotIn)
    throw ParameterError("hall_test: weight is not rapidly decreasing");
  EvidenceRecord ev;
  ev.kind = EvidenceKind::HallIntegral;

  double delta = support_radius(w);
  if (!is_pos_inf(delta)) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule = "bounded support: log w = -inf on the tail";
    ev.payload.push_back(saturate(kNegInf));
    return ev;
  }

  double R = default_integral_start(w);
  double T_cap = R * 1048576.0;
  // both sides together: sum of the one-sided integrals
  auto log_g_pos = [&w](double t) { return w.log_evaluate1(t); };
  auto log_g_neg = [&w](double t) { return w.log_evaluate1(-t); };
  EvidenceRecord pos = one_sided_log_integral(log_g_pos, R, T_cap,
                                              EvidenceKind::HallIntegral, opts);
  EvidenceRecord neg = one_sided_log_integral(log_g_neg, R, T_cap,
                                              EvidenceKind::HallIntegral, opts);
  ev.payload = pos.payload;
  for (std::size_t i = 0; i < neg.payload.size() && i < ev.payload.size(); ++i)
    ev.payload[i] = saturate(ev.payload[i] + neg.payload[i]);
  if (pos.conclusion == Conclusion::Diverges ||
      neg.conclusion == Conclusion::Diverges) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule = "one side diverges: " + pos.rule + " / " + neg.rule;
  } else if (pos.conclusion == Conclusion::Converges &&
             neg.conclusion == Conclusion::Converges) {
    ev.conclusion = Conclusion::Converges;
    ev.rule = "both sides converge; polynomials are not dense";
  } else {
    ev.conclusion = Conclusion::Undetermined;
    ev.rule = "sides: " + pos.rule + " / " + neg.rule;
  }
  return ev;
}

EvidenceRecord line_restriction_test(const WeightExpr& w, const Vec& x,
                                     const Vec& y,
                                     const IntegralTestOptions& opts) {
  if (static_cast<int>(x.size()) != w.dimension() || x.size() != y.size())
    throw DimensionError("line_restriction_test: dimension mismatch");
  if (norm2(y) == 0.0)
    throw ParameterError("line_restriction_test: y must be nonzero");

  auto section = [&](double t) {
    Vec p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] + t * y[i];
    return w.log_evaluate(p);
  };
  double R = 1.0;
  double T_cap = R * 1048576.0;
  EvidenceRecord pos = one_sided_log_integral(
      [&](double t) { return section(t); }, R, T_cap,
      EvidenceKind::LineRestriction, opts);
  EvidenceRecord neg = one_sided_log_integral(
      [&](double t) { return section(-t); }, R, T_cap,
      EvidenceKind::LineRestriction, opts);

  EvidenceRecord ev;
  ev.kind = EvidenceKind::LineRestriction;
  ev.payload = pos.payload;
  ev.payload.insert(ev.payload.end(), neg.payload.begin(), neg.payload.end());
  if (pos.conclusion == Conclusion::Converges ||
      neg.conclusion == Conclusion::Converges) {
    // a convergent side certifies that w is not quasi-analytic
    ev.conclusion = Conclusion::Converges;
    ev.rule = "convergent one-sided logarithmic integral along the line";
  } else if (pos.conclusion == Conclusion::Diverges &&
             neg.conclusion == Conclusion::Diverges) {
    ev.conclusion = Conclusion::Diverges;
    ev.rule = "both one-sided integrals diverge";
  } else {
    ev.conclusion = Conclusion::Undetermined;
    ev.rule = "sides: " + pos.rule + " / " + neg.rule;
  }
  return ev;
}

// ---------------------------------------------------------------------
// symbolic classification

namespace {

enum class ProfileClass { Holomorphic, QA, NotQA, Unknown };

struct ProfileVerdict {
  ProfileClass cls = ProfileClass::Unknown;
  std::string rule;
  std::vector<double> payload;
};

double rhoform_tail_slope(const RhoFormParams& rf) {
  if (rf.grid.size() < 2) return 0.0;
  double slope = (rf.rho.back() - rf.rho[rf.rho.size() - 2]) /
                 (rf.grid.back() - rf.grid[rf.grid.size() - 2]);
  return std::max(slope, 0.0);
}

ProfileVerdict classify_profile(const Profile1D& p) {
  ProfileVerdict out;
  if (const auto* e = std::get_if<ExpDecayParams>(&p.params())) {
    out.cls = ProfileClass::Holomorphic;
    out.rule = "holomorphic family C exp(-eps |t|)";
    out.payload = {e->eps};
    return out;
  }
  if (std::holds_alternative<GaussianParams>(p.params())) {
    out.cls = ProfileClass::Holomorphic;
    out.rule = "gaussian is dominated by C exp(-|t|)";
    out.payload = {1.0};
    return out;
  }
  if (const auto* r = std::get_if<RepLogParams>(&p.params())) {
    // j0 = first index with p_j != 1; entries beyond the list are zero
    std::size_t j0 = 0;
    while (j0 < r->p.size() && r->p[j0] == 1.0) ++j0;
    double pj0 = j0 < r->p.size() ? r->p[j0] : 0.0;
    out.payload = {static_cast<double>(j0), pj0};
    if (pj0 < 1.0) {
      out.cls = ProfileClass::QA;
      out.rule = "repeated-log family with p_{j0} < 1";
    } else {
      out.cls = ProfileClass::NotQA;
      out.rule = "repeated-log family with p_{j0} > 1";
    }
    return out;
  }
  if (std::holds_alternative<IndicatorParams>(p.params())) {
    out.cls = ProfileClass::QA;
    out.rule = "bounded support";
    out.payload = {p.support_radius()};
    return out;
  }
  if (const auto* rf = std::get_if<RhoFormParams>(&p.params())) {
    double beta = rhoform_tail_slope(*rf);
    out.payload = {beta, rf->rho.back()};
    if (beta > 0.0) {
      // the verdict must come from the data, not from the linear
      // extrapolation: a decelerating (concave) sampled rho with an
      // incidentally positive end slope stays symbolic-silent
      double chord = 0.0;
      if (rf->grid.size() >= 3) {
        std::size_t mid = rf->grid.size() / 2;
        chord = (rf->rho.back() - rf->rho[mid]) /
                (rf->grid.back() - rf->grid[mid]);
      }
      if (beta + 1e-15 >= 0.5 * chord) {
        out.cls = ProfileClass::QA;
        out.rule = "rho-form with divergent int rho(s)/s^2 ds";
      } else {
        out.cls = ProfileClass::Unknown;
        out.rule = "rho-form growth decelerates within the sampled range";
      }
    } else if (rf->rho.back() == 0.0) {
      out.cls = ProfileClass::NotQA;
      out.rule = "rho-form constant weight (no decay)";
    } else {
      // rho tends to a constant c: power decay t^{-c}, convergent integral
      out.cls = ProfileClass::NotQA;
      out.rule = "rho-form with convergent int rho(s)/s^2 ds";
    }
    return out;
  }
  // Sampled
  double sr = p.support_radius();
  if (!is_pos_inf(sr)) {
    out.cls = ProfileClass::QA;
    out.rule = "bounded support";
    out.payload = {sr};
  } else {
    out.cls = ProfileClass::NotQA;
    out.rule = "sampled profile with nonvanishing constant tail";
    out.payload = {1.0};
  }
  return out;
}

Verdict make_symbolic_verdict(WeightClass cls, BasisScope scope,
                              std::optional<BasisSpec> basis,
                              const std::string& rule,
                              std::vector<double> payload,
                              std::optional<bool> holomorphic) {
  Verdict v;
  v.cls = cls;
  v.scope = scope;
  v.basis = std::move(basis);
  v.holomorphic = holomorphic;
  EvidenceRecord ev;
  ev.kind = EvidenceKind::SymbolicRule;
  ev.conclusion = cls == WeightClass::QuasiAnalytic ? Conclusion::Diverges
                                                    : Conclusion::Converges;
  ev.rule = rule;
  ev.payload = payload.empty() ? std::vector<double>{1.0} : std::move(payload);
  v.evidence.push_back(std::move(ev));
  return v;
}

BasisSpec transport_basis(const BasisSpec& b, const Mat& linear) {
  // the action A w is quasi-analytic w.r.t. (A^{-1})^t v_j
  Mat m = linear.inverse().transpose();
  std::vector<Vec> vs;
  for (const Vec& v : b.vectors) vs.push_back(m.apply(v));
  return BasisSpec(std::move(vs));
}

}  // namespace

std::optional<Verdict> symbolic_classify(const WeightExpr& w) {
  int n = w.dimension();
  return std::visit(
      [&](const auto& node) -> std::optional<Verdict> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          ProfileVerdict pv = classify_profile(node.profile);
          switch (pv.cls) {
            case ProfileClass::Holomorphic:
              return make_symbolic_verdict(
                  WeightClass::QuasiAnalytic, BasisScope::AllBases,
                  BasisSpec::standard(n), "radial: " + pv.rule, pv.payload,
                  true);
            case ProfileClass::QA:
              return make_symbolic_verdict(
                  WeightClass::QuasiAnalytic, BasisScope::AllBases,
                  BasisSpec::standard(n), "radial: " + pv.rule, pv.payload,
                  std::nullopt);
            case ProfileClass::NotQA:
              return make_symbolic_verdict(WeightClass::NotQuasiAnalytic,
                                           BasisScope::AllBases, std::nullopt,
                                           "radial: " + pv.rule, pv.payload,
                                           std::nullopt);
            default:
              return std::nullopt;
          }
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          bool all_qa = true, all_holo = true;
          for (std::size_t j = 0; j < node.factors.size(); ++j) {
            ProfileVerdict pv = classify_profile(node.factors[j]);
            if (pv.cls == ProfileClass::NotQA) {
              // the other factors are positive somewhere, so the line
              // restriction along this axis has a convergent integral
              return make_symbolic_verdict(
                  WeightClass::NotQuasiAnalytic, BasisScope::AllBases,
                  std::nullopt,
                  "tensor factor " + std::to_string(j) +
                      " fails the line-restriction criterion: " + pv.rule,
                  pv.payload, std::nullopt);
            }
            if (pv.cls == ProfileClass::Unknown) all_qa = false;
            if (pv.cls != ProfileClass::Holomorphic) all_holo = false;
          }
          if (!all_qa) return std::nullopt;
          return make_symbolic_verdict(
              WeightClass::QuasiAnalytic, BasisScope::SpecificBasis,
              BasisSpec::standard(n),
              "tensor of quasi-analytic factors (standard basis)", {},
              all_holo ? std::optional<bool>(true) : std::nullopt);
        } else if constexpr (std::is_same_v<T, AffineNode>) {
          auto inner = symbolic_classify(w.child(0));
          if (!inner) return std::nullopt;
          if (inner->basis)
            inner->basis = transport_basis(*inner->basis, node.map.linear);
          inner->evidence.front().rule =
              "affine transport of: " + inner->evidence.front().rule;
          return inner;
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          if (node.c == 0.0)
            return make_symbolic_verdict(
                WeightClass::QuasiAnalytic, BasisScope::AllBases,
                BasisSpec::standard(n), "zero weight (all moments vanish)", {},
                true);
          auto inner = symbolic_classify(w.child(0));
          if (inner)
            inner->evidence.front().rule =
                "scaling-invariant: " + inner->evidence.front().rule;
          return inner;
        } else if constexpr (std::is_same_v<T, MinNode>) {
          for (std::size_t side = 0; side < 2; ++side) {
            auto sv = symbolic_classify(w.child(side));
            if (sv && sv->cls == WeightClass::QuasiAnalytic) {
              sv->evidence.front().rule =
                  "pointwise min majorized by a quasi-analytic weight: " +
                  sv->evidence.front().rule;
              return sv;
            }
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          // sums deliberately fall through: W_qa is not closed under
          // addition
          return std::nullopt;
        } else {
          ProfileVerdict pv = classify_profile(node.samples);
          if (pv.cls == ProfileClass::QA)
            return make_symbolic_verdict(
                WeightClass::QuasiAnalytic, BasisScope::AllBases,
                BasisSpec::standard(n), "table: " + pv.rule, pv.payload,
                std::nullopt);
          if (pv.cls == ProfileClass::NotQA)
            return make_symbolic_verdict(WeightClass::NotQuasiAnalytic,
                                         BasisScope::AllBases, std::nullopt,
                                         "table: " + pv.rule, pv.payload,
                                         std::nullopt);
          return std::nullopt;
        }
      },
      w.node());
}

// ---------------------------------------------------------------------
// combined classification

namespace {

// smallest R for integral tests: beyond RepLog validity thresholds
double default_integral_start_profile(const Profile1D& p) {
  if (const auto* r = std::get_if<RepLogParams>(&p.params()))
    return 2.0 * r->threshold;
  return 0.0;
}

double default_integral_start(const WeightExpr& w) {
  double R = 1.0;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          R = std::max(R, default_integral_start_profile(node.profile));
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          for (const auto& f : node.factors)
            R = std::max(R, default_integral_start_profile(f));
        } else if constexpr (std::is_same_v<T, TableNode>) {
          (void)node;
        } else {
          for (std::size_t i = 0; i < w.child_count(); ++i)
            R = std::max(R, default_integral_start(w.child(i)));
        }
      },
      w.node());
  return R;
}

bool is_radial_structure(const WeightExpr& w) {
  if (std::holds_alternative<RadialNode>(w.node())) return true;
  if (std::holds_alternative<ScaleNode>(w.node()))
    return is_radial_structure(w.child(0));
  if (std::holds_alternative<MinNode>(w.node()) ||
      std::holds_alternative<SumNode>(w.node()))
    return is_radial_structure(w.child(0)) && is_radial_structure(w.child(1));
  if (w.dimension() == 1)
    return !std::holds_alternative<AffineNode>(w.node()) ||
           is_radial_structure(w.child(0));
  return false;
}

std::vector<BasisSpec> derive_candidates(const WeightExpr& w) {
  std::vector<BasisSpec> out;
  out.push_back(BasisSpec::standard(w.dimension()));
  if (const auto* an = std::get_if<AffineNode>(&w.node())) {
    out.push_back(
        transport_basis(BasisSpec::standard(w.dimension()), an->map.linear));
  }
  return out;
}

struct BasisNumeric {
  Conclusion overall = Conclusion::Undetermined;  // Diverges = QA w.r.t. it
  std::vector<EvidenceRecord> records;
};

BasisNumeric numeric_basis_test(const WeightExpr& w, const BasisSpec& basis,
                                const ClassifyOptions& opts) {
  BasisNumeric out;
  bool all_diverge = true, any_converge = false;
  for (const Vec& v : basis.vectors) {
    MomentSequence M =
        moment_sequence(w, v, opts.series_m_max, opts.moments);
    EvidenceRecord ev = series_test(M, opts.series_m_max, opts.series);
    if (ev.conclusion != Conclusion::Diverges) all_diverge = false;
    if (ev.conclusion == Conclusion::Converges) any_converge = true;
    out.records.push_back(std::move(ev));
  }
  if (all_diverge)
    out.overall = Conclusion::Diverges;
  else if (any_converge)
    out.overall = Conclusion::Converges;
  return out;
}

}  // namespace

Verdict classify(const WeightExpr& w, const std::vector<BasisSpec>& candidates,
                 const ClassifyOptions& opts) {
  std::vector<BasisSpec> bases =
      candidates.empty() ? derive_candidates(w) : candidates;
  for (const BasisSpec& b : bases)
    if (b.dim() != w.dimension())
      throw DimensionError("classify: candidate basis dimension mismatch");

  std::optional<Verdict> symbolic = symbolic_classify(w);

  // numeric series path per candidate basis
  std::vector<BasisNumeric> numeric;
  numeric.reserve(bases.size());
  for (const BasisSpec& b : bases)
    numeric.push_back(numeric_basis_test(w, b, opts));

  // numeric integral path on the real line
  std::optional<Conclusion> integral;
  std::vector<EvidenceRecord> integral_records;
  if (w.dimension() == 1) {
    RegularizedWeight wbar = convex_regularization(w);
    double R = default_integral_start(w);
    EvidenceRecord at_R = log_integral_test(wbar, R, opts.integral);
    EvidenceRecord at_4R = log_integral_test(wbar, 4.0 * R, opts.integral);
    // the classification requires divergence for every R: test at R and
    // 4R and require agreement
    if (at_R.conclusion == at_4R.conclusion) integral = at_R.conclusion;
    integral_records.push_back(std::move(at_R));
    integral_records.push_back(std::move(at_4R));
  }

  // fold the numeric observations into a single numeric verdict
  bool radial_structure = is_radial_structure(w);
  std::optional<int> qa_basis;
  bool all_bases_converge = !numeric.empty();
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    if (numeric[i].overall == Conclusion::Diverges && !qa_basis)
      qa_basis = static_cast<int>(i);
    if (numeric[i].overall != Conclusion::Converges) all_bases_converge = false;
  }
  WeightClass numeric_cls = WeightClass::Inconclusive;
  if (qa_basis && (!integral || *integral != Conclusion::Converges)) {
    numeric_cls = WeightClass::QuasiAnalytic;
  } else if (!qa_basis && all_bases_converge) {
    // definite negative only where converging candidates settle it: on
    // the line, or for radially structured weights (basis-independent)
    bool definite = w.dimension() == 1 || radial_structure;
    if (definite && (!integral || *integral != Conclusion::Diverges))
      numeric_cls = WeightClass::NotQuasiAnalytic;
  } else if (integral && w.dimension() == 1 && !qa_basis) {
    if (*integral == Conclusion::Converges)
      numeric_cls = WeightClass::NotQuasiAnalytic;
  }

  auto collect_evidence = [&](Verdict& v) {
    for (auto& bn : numeric)
      for (auto& ev : bn.records) v.evidence.push_back(ev);
    for (auto& ev : integral_records) v.evidence.push_back(ev);
  };

  if (symbolic) {
    // definite numeric verdicts must not contradict the symbolic one
    if (symbolic->cls == WeightClass::QuasiAnalytic) {
      bool conflict = false;
      if (numeric_cls == WeightClass::NotQuasiAnalytic) {
        if (symbolic->scope == BasisScope::AllBases)
          conflict = true;
        else if (w.dimension() == 1 || radial_structure)
          conflict = true;
      }
      if (conflict)
        throw ContradictionError(
            "classify: symbolic QuasiAnalytic contradicted by a definite "
            "numeric verdict (" + symbolic->evidence.front().rule + ")");
    } else if (symbolic->cls == WeightClass::NotQuasiAnalytic) {
      if (numeric_cls == WeightClass::QuasiAnalytic)
        throw ContradictionError(
            "classify: symbolic NotQuasiAnalytic contradicted by a definite "
            "numeric verdict (" + symbolic->evidence.front().rule + ")");
    }
    Verdict v = *symbolic;
    collect_evidence(v);
    return v;
  }

  Verdict v;
  if (numeric_cls == WeightClass::QuasiAnalytic) {
    v.cls = WeightClass::QuasiAnalytic;
    v.basis = bases[static_cast<std::size_t>(*qa_basis)];
    v.scope = BasisScope::SpecificBasis;
  } else if (numeric_cls == WeightClass::NotQuasiAnalytic) {
    v.cls = WeightClass::NotQuasiAnalytic;
  } else {
    v.cls = WeightClass::Inconclusive;
  }
  collect_evidence(v);
  return v;
}

// ---------------------------------------------------------------------
// decay classes

namespace {

// lexicographic test that the replog exponent t^2 / prod diverges
bool replog_exponent_diverges(const RepLogParams& rp) {
  std::vector<double> margins;
  margins.push_back(2.0 - (rp.p.empty() ? 0.0 : rp.p[0]));
  for (std::size_t j = 1; j < rp.p.size(); ++j) margins.push_back(-rp.p[j]);
  for (double m : margins) {
    if (m > 0.0) return true;
    if (m < 0.0) return false;
  }
  return false;  // exponent tends to a finite constant
}

// In/NotIn/Inconclusive membership of a profile in W_d (d = nullopt: W_inf)
Membership profile_decay(const Profile1D& p, std::optional<int> d,
                         std::string& rule) {
  if (std::holds_alternative<ExpDecayParams>(p.params()) ||
      std::holds_alternative<GaussianParams>(p.params())) {
    rule = "exponential decay beats every polynomial";
    return Membership::In;
  }
  if (const auto* rp = std::get_if<RepLogParams>(&p.params())) {
    bool div = replog_exponent_diverges(*rp);
    rule = div ? "replog exponent diverges" : "replog exponent stays bounded";
    return div ? Membership::In : Membership::NotIn;
  }
  if (std::holds_alternative<IndicatorParams>(p.params())) {
    rule = "bounded support";
    return Membership::In;
  }
  if (const auto* rf = std::get_if<RhoFormParams>(&p.params())) {
    double beta = rhoform_tail_slope(*rf);
    if (beta > 0.0) {
      rule = "rho grows linearly or better";
      return Membership::In;
    }
    double c = rf->rho.back();
    if (!d) {
      rule = "rho tends to a constant: power decay only";
      return Membership::NotIn;
    }
    rule = "power decay t^{-rho_inf}";
    return static_cast<double>(*d) < c ? Membership::In : Membership::NotIn;
  }
  double sr = p.support_radius();
  if (!is_pos_inf(sr)) {
    rule = "bounded support";
    return Membership::In;
  }
  rule = "nonvanishing constant tail";
  return Membership::NotIn;
}

Membership decay_structural(const WeightExpr& w, std::optional<int> d,
                            std::string& rule) {
  return std::visit(
      [&](const auto& node) -> Membership {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          return profile_decay(node.profile, d, rule);
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          Membership acc = Membership::In;
          for (const auto& f : node.factors) {
            std::string frule;
            Membership m = profile_decay(f, d, frule);
            if (m == Membership::NotIn) {
              rule = "tensor factor without the required decay: " + frule;
              return Membership::NotIn;
            }
            if (m == Membership::Inconclusive) acc = Membership::Inconclusive;
          }
          if (acc == Membership::In) rule = "all tensor factors decay";
          return acc;
        } else if constexpr (std::is_same_v<T, AffineNode>) {
          return decay_structural(w.child(0), d, rule);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          if (node.c == 0.0) {
            rule = "zero weight";
            return Membership::In;
          }
          return decay_structural(w.child(0), d, rule);
        } else if constexpr (std::is_same_v<T, MinNode>) {
          std::string r1, r2;
          Membership a = decay_structural(w.child(0), d, r1);
          Membership b = decay_structural(w.child(1), d, r2);
          if (a == Membership::In || b == Membership::In) {
            rule = "min dominated by a decaying side";
            return Membership::In;
          }
          if (a == Membership::NotIn && b == Membership::NotIn)
            return Membership::Inconclusive;  // min can still decay
          return Membership::Inconclusive;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::string r1, r2;
          Membership a = decay_structural(w.child(0), d, r1);
          Membership b = decay_structural(w.child(1), d, r2);
          if (a == Membership::In && b == Membership::In) {
            rule = "both summands decay";
            return Membership::In;
          }
          if (a == Membership::NotIn || b == Membership::NotIn) {
            rule = "a summand lacks the required decay";
            return Membership::NotIn;
          }
          return Membership::Inconclusive;
        } else {
          return profile_decay(node.samples, d, rule);
        }
      },
      w.node());
}

}  // namespace

DecayVerdict decay_class(const WeightExpr& w, std::optional<int> d) {
  if (d && *d < 0) throw ParameterError("decay_class: d must be >= 0");
  DecayVerdict out;
  out.order = d;

  std::string rule;
  Membership m = decay_structural(w, d, rule);
  if (m != Membership::Inconclusive) {
    out.membership = m;
    EvidenceRecord ev;
    ev.kind = EvidenceKind::SymbolicRule;
    ev.conclusion =
        m == Membership::In ? Conclusion::Diverges : Conclusion::Converges;
    ev.rule = rule;
    ev.payload = {d ? static_cast<double>(*d) : kInf};
    ev.payload[0] = saturate(ev.payload[0]);
    out.evidence.push_back(std::move(ev));
    return out;
  }

  // tail sampling on doubling shells
  int dd = d ? *d : 8;  // heuristic working order for W_inf
  EvidenceRecord ev;
  ev.kind = EvidenceKind::SymbolicRule;
  ev.rule = "shell sampling of ||x||^d w";
  int n = w.dimension();
  std::vector<Vec> dirs;
  for (int j = 0; j < n; ++j) {
    Vec e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    dirs.push_back(e);
    Vec me = e;
    me[static_cast<std::size_t>(j)] = -1.0;
    dirs.push_back(me);
  }
  Vec diag(static_cast<std::size_t>(n), 1.0 / std::sqrt(double(n)));
  dirs.push_back(diag);
  double first = -1.0, last = -1.0;
  bool decreasing = true;
  double prev = kInf;
  for (double Rk = 8.0; Rk <= 1048576.0; Rk *= 2.0) {
    double shell_max = 0.0;
    for (const Vec& dir : dirs) {
      Vec x = dir;
      for (double& c : x) c *= Rk;
      shell_max = std::max(shell_max, w.evaluate(x));
    }
    double val = shell_max * std::pow(Rk, dd);
    ev.payload.push_back(saturate(val));
    if (first < 0.0) first = val;
    last = val;
    if (val > prev * 1.0001) decreasing = false;
    prev = val;
  }
  if (first > 0.0 && last <= 1e-12 * first && decreasing) {
    out.membership = d ? Membership::In : Membership::Inconclusive;
    ev.conclusion = Conclusion::Diverges;
    ev.rule += ": tail vanishes";
  } else if (first >= 0.0 && last >= 0.5 * std::max(first, 1e-300) &&
             last > 0.0) {
    out.membership = Membership::NotIn;
    ev.conclusion = Conclusion::Converges;
    ev.rule += ": tail does not vanish";
  } else {
    out.membership = Membership::Inconclusive;
    ev.conclusion = Conclusion::Undetermined;
  }
  out.evidence.push_back(std::move(ev));
  return out;
}

// ---------------------------------------------------------------------
// serialization

namespace {

nlohmann::json evidence_to_json(const EvidenceRecord& ev) {
  std::vector<double> head = ev.payload;
  if (head.size() > 16) head.resize(16);
  return nlohmann::json{{"kind", to_string(ev.kind)},
                        {"conclusion", to_string(ev.conclusion)},
                        {"payload_summary", head},
                        {"rule", ev.rule}};
}

}  // namespace

std::string verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["class"] = to_string(v.cls);
  if (v.basis) {
    nlohmann::json b = nlohmann::json::array();
    for (const Vec& vec : v.basis->vectors) b.push_back(vec);
    j["basis"] = b;
    j["basis_scope"] =
        v.scope == BasisScope::AllBases ? "all" : "specific";
  } else {
    j["basis"] = nullptr;
  }
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& ev : v.evidence) evs.push_back(evidence_to_json(ev));
  j["evidence"] = evs;
  if (v.holomorphic) j["holomorphic"] = *v.holomorphic;
  return j.dump(2);
}

std::string decay_verdict_to_json(const DecayVerdict& v) {
  nlohmann::json j;
  j["membership"] = v.membership == Membership::In
                        ? "In"
                        : (v.membership == Membership::NotIn ? "NotIn"
                                                             : "Inconclusive");
  if (v.order)
    j["order"] = *v.order;
  else
    j["order"] = "infinity";
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& ev : v.evidence) evs.push_back(evidence_to_json(ev));
  j["evidence"] = evs;
  return j.dump(2);
}

}  // namespace qaw
