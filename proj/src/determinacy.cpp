#include "qaw/determinacy.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "qaw/errors.hpp"
#include "qaw/numerics.hpp"
#include "qaw/ostrowski.hpp"
#include "qaw/weight_json.hpp"

namespace qaw {

using nlohmann::json;

// ---------------------------------------------------------------------
// MeasureSpec

MeasureSpec MeasureSpec::gaussian(Vec mean, double sigma) {
  if (mean.empty()) throw ParameterError("measure: empty mean vector");
  if (!(sigma > 0.0)) throw ParameterError("measure: sigma must be > 0");
  MeasureSpec m;
  m.form_ = Form::Density;
  m.density_family_ = DensityFamily::Gaussian;
  m.dim_ = static_cast<int>(mean.size());
  m.mean_ = std::move(mean);
  m.sigma_ = sigma;
  return m;
}

MeasureSpec MeasureSpec::lognormal() {
  MeasureSpec m;
  m.form_ = Form::Density;
  m.density_family_ = DensityFamily::LogNormal;
  m.dim_ = 1;
  return m;
}

MeasureSpec MeasureSpec::from_weight(WeightExpr density,
                                     std::optional<double> normalization) {
  MeasureSpec m;
  m.form_ = Form::Density;
  m.density_family_ = DensityFamily::Weight;
  m.dim_ = density.dimension();
  m.normalization_ = normalization.value_or(1.0);
  if (!(m.normalization_ > 0.0))
    throw ParameterError("measure: normalization must be > 0");
  m.weight_ = std::move(density);
  return m;
}

MeasureSpec MeasureSpec::atoms(std::vector<Atom> points) {
  if (points.empty()) throw ParameterError("measure: empty atom list");
  MeasureSpec m;
  m.form_ = Form::Atoms;
  m.dim_ = static_cast<int>(points.front().x.size());
  for (const Atom& a : points) {
    if (static_cast<int>(a.x.size()) != m.dim_)
      throw DimensionError("measure: atom dimension mismatch");
    if (!(a.mass > 0.0))
      throw ParameterError("measure: atom masses must be positive");
  }
  m.atoms_ = std::move(points);
  return m;
}

MeasureSpec MeasureSpec::moments(int dimension,
                                 std::map<std::vector<int>, double> entries) {
  if (dimension < 1) throw DimensionError("measure: dimension must be >= 1");
  MeasureSpec m;
  m.form_ = Form::Moments;
  m.dim_ = dimension;
  for (const auto& [alpha, value] : entries) {
    if (static_cast<int>(alpha.size()) != dimension)
      throw DimensionError("measure: multi-index dimension mismatch");
    if (!(value >= 0.0))
      throw ParameterError("measure: absolute moments must be >= 0");
  }
  m.moment_entries_ = std::move(entries);
  return m;
}

double MeasureSpec::log_density(const Vec& x) const {
  if (form_ != Form::Density)
    throw Error("measure: density evaluation on a non-density form");
  if (static_cast<int>(x.size()) != dim_)
    throw DimensionError("measure: point dimension mismatch");
  switch (density_family_) {
    case DensityFamily::Gaussian: {
      double q = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double d = (x[i] - mean_[i]) / sigma_;
        q += d * d;
      }
      double log_norm = -0.5 * dim_ * std::log(2.0 * M_PI) -
                        dim_ * std::log(sigma_);
      return log_norm - 0.5 * q;
    }
    case DensityFamily::LogNormal: {
      if (x[0] <= 0.0) return kNegInf;
      double u = std::log(x[0]);
      // normalization: int exp(-u^2 + u) du = sqrt(pi) e^{1/4}
      double log_norm = -0.25 - 0.5 * std::log(M_PI);
      return log_norm - u * u;
    }
    default:
      return std::log(normalization_) + weight_->log_evaluate(x);
  }
}

MeasureSpec MeasureSpec::parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure spec: invalid JSON: ") + e.what());
  }
  try {
    std::string form = j.at("form").get<std::string>();
    if (form == "density") {
      std::string family = j.at("family").get<std::string>();
      if (family == "gaussian")
        return gaussian(j.at("mean").get<Vec>(), j.value("sigma", 1.0));
      if (family == "lognormal") return lognormal();
      if (family == "weight") {
        std::optional<double> norm;
        if (j.contains("normalization"))
          norm = j["normalization"].get<double>();
        return from_weight(parse_weight_spec(j.at("weight").dump()), norm);
      }
      throw ParseError("measure spec: unknown density family '" + family +
                       "'");
    }
    if (form == "atoms") {
      std::vector<Atom> pts;
      for (const auto& p : j.at("points"))
        pts.push_back({p.at("x").get<Vec>(), p.at("mass").get<double>()});
      return atoms(std::move(pts));
    }
    if (form == "moments") {
      std::map<std::vector<int>, double> entries;
      for (const auto& e : j.at("entries"))
        entries[e.at("alpha").get<std::vector<int>>()] =
            e.at("value").get<double>();
      return moments(j.at("dimension").get<int>(), std::move(entries));
    }
    throw ParseError("measure spec: unknown form '" + form + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure spec: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string("measure spec: ") + e.what());
  }
}

std::string MeasureSpec::to_json() const {
  json j;
  switch (form_) {
    case Form::Density:
      j["form"] = "density";
      if (density_family_ == DensityFamily::Gaussian) {
        j["family"] = "gaussian";
        j["mean"] = mean_;
        j["sigma"] = sigma_;
      } else if (density_family_ == DensityFamily::LogNormal) {
        j["family"] = "lognormal";
      } else {
        j["family"] = "weight";
        j["normalization"] = normalization_;
        j["weight"] = json::parse(serialize_weight_spec(*weight_));
      }
      break;
    case Form::Atoms: {
      j["form"] = "atoms";
      json pts = json::array();
      for (const Atom& a : atoms_)
        pts.push_back({{"x", a.x}, {"mass", a.mass}});
      j["points"] = pts;
      break;
    }
    case Form::Moments: {
      j["form"] = "moments";
      j["dimension"] = dim_;
      json entries = json::array();
      for (const auto& [alpha, value] : moment_entries_)
        entries.push_back({{"alpha", alpha}, {"value", value}});
      j["entries"] = entries;
      break;
    }
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------
// quadrature helpers (log-scaled, robust to huge exponents)

namespace {

// log of int_a^b exp(g(t)) dt
double log_integral_exp(const std::function<double(double)>& g, double a,
                        double b) {
  if (!(b > a)) return kNegInf;
  double c = kNegInf;
  for (int i = 0; i <= 32; ++i)
    c = std::max(c, g(a + (b - a) * i / 32.0));
  if (is_neg_inf(c)) return kNegInf;
  double I = integrate_gk([&](double t) { return std::exp(g(t) - c); }, a, b,
                          1e-12, 1e-10);
  if (I <= 0.0) return kNegInf;
  return c + std::log(I) ;
}

// log of int_0^inf exp(g(t)) dt by dyadic shells with stabilization
double log_improper_integral_exp(const std::function<double(double)>& g,
                                 bool* diverged = nullptr,
                                 double first = 1.0) {
  double total = log_integral_exp(g, 0.0, first);
  double T = first;
  int quiet = 0;
  for (int k = 0; k < 40; ++k) {
    double c = log_integral_exp(g, T, 2.0 * T);
    total = log_add_exp(total, c);
    if (total > 644.0) {  // e^644 ~ 1e280
      if (diverged) *diverged = true;
      return kInf;
    }
    if (c < total - 46.0) {  // shell adds < 1e-20 relative mass
      if (++quiet >= 2) return total;
    } else {
      quiet = 0;
    }
    T *= 2.0;
  }
  if (diverged) *diverged = true;  // never stabilized
  return total;
}

double log_surface_area(int n) {
  // S_{n-1} = 2 pi^{n/2} / Gamma(n/2)
  return std::log(2.0) + 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n);
}

// E |u_j|^m over the unit sphere S^{n-1}
double log_angular_moment(int m, int n) {
  if (n == 1) return 0.0;
  return std::lgamma(0.5 * (m + 1)) + std::lgamma(0.5 * n) -
         0.5 * std::log(M_PI) - std::lgamma(0.5 * (m + n));
}

}  // namespace

// ---------------------------------------------------------------------
// strict positivity repair

namespace {

bool weight_positive_on_samples(const MeasureSpec& mu, const WeightExpr& w) {
  if (mu.form() == MeasureSpec::Form::Atoms) {
    for (const auto& a : mu.atom_list())
      if (is_neg_inf(w.log_evaluate(a.x))) return false;
  }
  // ambient check: the replacement is licensed whenever w has zeros at
  // all, and a strictly positive majorant only strengthens the criterion
  int n = w.dimension();
  for (double R = 0.25; R <= 512.0; R *= 2.0) {
    for (int i = 0; i < 16; ++i) {
      Vec x(static_cast<std::size_t>(n), 0.0);
      double phi = 2.0 * M_PI * i / 16.0;
      x[0] = R * std::cos(phi);
      if (n >= 2) x[1] = R * std::sin(phi);
      if (is_neg_inf(w.log_evaluate(x))) return false;
    }
  }
  return true;
}

WeightExpr positive_majorant(const WeightExpr& w) {
  int n = w.dimension();
  if (const auto* rn = std::get_if<RadialNode>(&w.node())) {
    auto one_d = WeightExpr::radial(rn->profile, 1);
    return WeightExpr::radial(smooth_majorant_rho(one_d), n);
  }
  if (const auto* tn = std::get_if<TensorNode>(&w.node())) {
    std::vector<Profile1D> fs;
    for (const auto& f : tn->factors)
      fs.push_back(smooth_majorant_rho(WeightExpr::radial(f, 1)));
    return WeightExpr::tensor(std::move(fs));
  }
  if (const auto* sn = std::get_if<ScaleNode>(&w.node())) {
    if (sn->c > 0.0)
      return WeightExpr::scale(sn->c, positive_majorant(w.child(0)));
  }
  if (n == 1) return WeightExpr::radial(smooth_majorant_rho(w), 1);
  throw Error(
      "integral_criterion: cannot build a strictly positive majorant for "
      "this weight structure");
}

}  // namespace

// ---------------------------------------------------------------------
// the integral criterion

DeterminacyReport integral_criterion(const MeasureSpec& mu,
                                     const WeightExpr& w,
                                     const ClassifyOptions& opts) {
  if (mu.dimension() != w.dimension())
    throw DimensionError("integral_criterion: dimension mismatch");
  if (mu.form() == MeasureSpec::Form::Moments)
    throw ParameterError(
        "integral_criterion: moment-form measures are handled by "
        "carleman_test");

  DeterminacyReport report;
  WeightExpr weight = w;
  if (!weight_positive_on_samples(mu, w)) {
    weight = positive_majorant(w);
    report.majorant_substituted = true;
  }

  EvidenceRecord ev;
  ev.kind = EvidenceKind::LogIntegralTail;
  ev.rule = report.majorant_substituted
                ? "inverse-weight integral (strictly positive majorant "
                  "substituted); "
                : "inverse-weight integral; ";

  double log_total = kNegInf;
  bool diverged = false;
  if (mu.form() == MeasureSpec::Form::Atoms) {
    for (const auto& a : mu.atom_list()) {
      double lw = weight.log_evaluate(a.x);
      if (is_neg_inf(lw)) {
        diverged = true;
        break;
      }
      log_total = log_add_exp(log_total, std::log(a.mass) - lw);
      ev.payload.push_back(std::min(exp_ext(log_total), 1e300));
    }
    if (log_total > 644.0) diverged = true;
    ev.rule += "atom sum";
  } else {
    int n = mu.dimension();
    bool mu_radial =
        (mu.density_family() == MeasureSpec::DensityFamily::Gaussian &&
         norm2(mu.mean()) == 0.0) ||
        (mu.density_family() == MeasureSpec::DensityFamily::Weight &&
         std::holds_alternative<RadialNode>(mu.weight_density()->node()));
    bool w_radial = std::holds_alternative<RadialNode>(weight.node());
    if (n == 1) {
      auto g_side = [&](double sgn) {
        return [&mu, &weight, sgn](double t) {
          Vec x{sgn * t};
          double ld = mu.log_density(x);
          if (is_neg_inf(ld)) return kNegInf;
          return ld - weight.log_evaluate(x);
        };
      };
      bool d1 = false, d2 = false;
      double pos = log_improper_integral_exp(g_side(1.0), &d1);
      double neg = log_improper_integral_exp(g_side(-1.0), &d2);
      log_total = log_add_exp(pos, neg);
      diverged = d1 || d2 || log_total > 644.0;
      ev.rule += "two-sided dyadic-shell quadrature";
    } else if (mu_radial && w_radial) {
      // int f(||x||)/w(||x||) dx = S_{n-1} int r^{n-1} f(r)/w(r) dr
      double lS = log_surface_area(n);
      auto g = [&](double r) {
        Vec x(static_cast<std::size_t>(n), 0.0);
        x[0] = r;
        double ld = mu.log_density(x);
        if (is_neg_inf(ld)) return kNegInf;
        return (n - 1) * log_ext(r) + ld - weight.log_evaluate(x);
      };
      bool d1 = false;
      log_total = lS + log_improper_integral_exp(g, &d1);
      diverged = d1 || log_total > 644.0;
      ev.rule += "radial reduction quadrature";
    } else if (n == 2) {
      // tensor-grid quadrature over doubling squares
      auto f = [&](double x1, double x2) {
        Vec x{x1, x2};
        double ld = mu.log_density(x);
        if (is_neg_inf(ld)) return kNegInf;
        return ld - weight.log_evaluate(x);
      };
      double T = 2.0;
      double prev = kNegInf;
      int stable = 0;
      for (int k = 0; k < 16; ++k) {
        double c = kNegInf;
        for (int i = 0; i <= 24; ++i)
          for (int j = 0; j <= 24; ++j)
            c = std::max(c, f(-T + 2.0 * T * i / 24.0,
                              -T + 2.0 * T * j / 24.0));
        if (c > 600.0) {
          diverged = true;
          break;
        }
        auto inner = [&](double x1) {
          return integrate_gk(
              [&](double x2) {
                double v = f(x1, x2);
                return is_neg_inf(v) ? 0.0 : std::exp(v - std::max(c, 0.0));
              },
              -T, T, 1e-12, 1e-9, 12);
        };
        double I =
            integrate_gk([&](double x1) { return inner(x1); }, -T, T, 1e-12,
                         1e-9, 12);
        double cur = I > 0.0 ? std::max(c, 0.0) + std::log(I) : kNegInf;
        ev.payload.push_back(std::min(exp_ext(cur), 1e300));
        if (!is_neg_inf(prev) &&
            std::abs(cur - prev) < std::log1p(1e-8)) {
          if (++stable >= 2) {
            log_total = cur;
            break;
          }
        } else {
          stable = 0;
        }
        prev = cur;
        log_total = cur;
        T *= 2.0;
      }
      if (log_total > 644.0) diverged = true;
      ev.rule += "square-domain quadrature";
    } else {
      throw Error(
          "integral_criterion: densities beyond dimension 2 need radial "
          "structure");
    }
  }

  report.integral_value = std::min(exp_ext(log_total), 1e300);
  if (ev.payload.empty())
    ev.payload.push_back(diverged ? 1e300 : report.integral_value);
  ev.conclusion = diverged ? Conclusion::Diverges : Conclusion::Converges;
  if (!diverged && is_neg_inf(log_total)) ev.conclusion = Conclusion::Converges;
  report.integral = ev;

  report.weight_verdict = classify(w, {}, opts);
  report.certified = !diverged &&
                     report.weight_verdict.cls == WeightClass::QuasiAnalytic;
  return report;
}

// ---------------------------------------------------------------------
// moments of a measure

namespace {

double axis_log_moment_1d(const std::function<double(double)>& log_density,
                          int m) {
  auto side = [&](double sgn) {
    return [&log_density, sgn, m](double t) {
      double ld = log_density(sgn * t);
      if (is_neg_inf(ld)) return kNegInf;
      return pow_log(log_ext(t), m) + ld;
    };
  };
  bool d1 = false, d2 = false;
  double pos = log_improper_integral_exp(side(1.0), &d1);
  double neg = log_improper_integral_exp(side(-1.0), &d2);
  if (d1 || d2) return kInf;
  return log_add_exp(pos, neg);
}

}  // namespace

std::vector<MomentSequence> moments_of_measure(const MeasureSpec& mu, int K) {
  if (K < 1) throw ParameterError("moments_of_measure: K must be >= 1");
  int n = mu.dimension();
  std::vector<MomentSequence> out;

  if (mu.form() == MeasureSpec::Form::Moments) {
    for (int j = 0; j < n; ++j) {
      std::vector<double> lv;
      for (int m = 0; m <= K; ++m) {
        std::vector<int> alpha(static_cast<std::size_t>(n), 0);
        alpha[static_cast<std::size_t>(j)] = m;
        auto it = mu.moment_entries().find(alpha);
        if (it == mu.moment_entries().end())
          throw ParameterError(
              "moments_of_measure: missing stored moment of order " +
              std::to_string(m) + " on axis " + std::to_string(j + 1));
        lv.push_back(log_ext(it->second));
      }
      out.push_back(MomentSequence::from_log_values(std::move(lv)));
    }
    return out;
  }

  if (mu.form() == MeasureSpec::Form::Atoms) {
    for (int j = 0; j < n; ++j) {
      std::vector<double> lv;
      for (int m = 0; m <= K; ++m) {
        double acc = kNegInf;
        for (const auto& a : mu.atom_list()) {
          double la = std::log(a.mass) +
                      pow_log(log_ext(std::abs(a.x[static_cast<std::size_t>(j)])),
                              m);
          acc = log_add_exp(acc, la);
        }
        lv.push_back(acc);
      }
      out.push_back(MomentSequence::from_log_values(std::move(lv)));
    }
    return out;
  }

  // densities
  for (int j = 0; j < n; ++j) {
    std::vector<double> lv;
    switch (mu.density_family()) {
      case MeasureSpec::DensityFamily::Gaussian: {
        double mj = mu.mean()[static_cast<std::size_t>(j)];
        double s = mu.sigma();
        auto ld = [mj, s](double t) {
          double d = (t - mj) / s;
          return -0.5 * d * d - 0.5 * std::log(2.0 * M_PI) - std::log(s);
        };
        for (int m = 0; m <= K; ++m) lv.push_back(axis_log_moment_1d(ld, m));
        break;
      }
      case MeasureSpec::DensityFamily::LogNormal: {
        auto ld = [&mu](double t) { return mu.log_density({t}); };
        for (int m = 0; m <= K; ++m) lv.push_back(axis_log_moment_1d(ld, m));
        break;
      }
      case MeasureSpec::DensityFamily::Weight: {
        const WeightExpr& d = *mu.weight_density();
        if (n == 1) {
          auto ld = [&d, &mu](double t) {
            return std::log(mu.normalization()) + d.log_evaluate1(t);
          };
          for (int m = 0; m <= K; ++m) lv.push_back(axis_log_moment_1d(ld, m));
        } else if (std::holds_alternative<RadialNode>(d.node())) {
          double lS = log_surface_area(n);
          for (int m = 0; m <= K; ++m) {
            auto g = [&](double r) {
              Vec x(static_cast<std::size_t>(n), 0.0);
              x[0] = r;
              double ldv = d.log_evaluate(x);
              if (is_neg_inf(ldv)) return kNegInf;
              return (m + n - 1) * log_ext(r) + ldv;
            };
            bool div = false;
            double I = log_improper_integral_exp(g, &div);
            lv.push_back(div ? kInf
                             : std::log(mu.normalization()) + lS +
                                   log_angular_moment(m, n) + I);
          }
        } else if (const auto* tn = std::get_if<TensorNode>(&d.node())) {
          double lrest = 0.0;
          for (std::size_t i = 0; i < tn->factors.size(); ++i) {
            if (static_cast<int>(i) == j) continue;
            const Profile1D& p = tn->factors[i];
            lrest += axis_log_moment_1d(
                [&p](double t) { return p.log_value(t); }, 0);
          }
          const Profile1D& pj = tn->factors[static_cast<std::size_t>(j)];
          for (int m = 0; m <= K; ++m)
            lv.push_back(std::log(mu.normalization()) + lrest +
                         axis_log_moment_1d(
                             [&pj](double t) { return pj.log_value(t); }, m));
        } else {
          throw Error(
              "moments_of_measure: unstructured multivariate densities are "
              "unsupported");
        }
        break;
      }
    }
    out.push_back(MomentSequence::from_log_values(std::move(lv)));
  }
  return out;
}

// ---------------------------------------------------------------------
// Carleman cross-check

EvidenceRecord carleman_test(const MomentSequence& M) {
  int K = (static_cast<int>(M.size()) - 1) / 2;
  if (K < 20)
    throw ParameterError("carleman_test: need even moments to order >= 40");
  // relabel N(k) = M(2k)^{1/2}: then N(k)^{-1/k} = m_{2k}^{-1/2k}
  std::vector<double> lv;
  lv.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k)
    lv.push_back(0.5 * M.log_value(static_cast<std::size_t>(2 * k)));
  EvidenceRecord ev =
      series_test(MomentSequence::from_log_values(std::move(lv)), K);
  ev.rule = "carleman even-order series: " + ev.rule;
  return ev;
}

double carleman_partial_sum(const MomentSequence& M, int k_max) {
  if (static_cast<int>(M.size()) <= 2 * k_max)
    throw ParameterError("carleman_partial_sum: sequence too short");
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double lM = M.log_value(static_cast<std::size_t>(2 * k));
    if (is_neg_inf(lM)) return kInf;
    if (is_pos_inf(lM)) continue;
    sum += std::exp(-lM / (2.0 * k));
  }
  return sum;
}

std::string determinacy_report_to_json(const DeterminacyReport& r) {
  json j;
  j["integral"] = {{"kind", to_string(r.integral.kind)},
                   {"conclusion", r.integral.conclusion == Conclusion::Converges
                                      ? "Finite"
                                      : (r.integral.conclusion ==
                                                 Conclusion::Diverges
                                             ? "Infinite"
                                             : "Undetermined")},
                   {"value", r.integral_value},
                   {"rule", r.integral.rule}};
  j["weight_verdict"] = json::parse(verdict_to_json(r.weight_verdict));
  j["majorant_substituted"] = r.majorant_substituted;
  j["certified"] = r.certified;
  if (r.certified) {
    j["consequences"] = {
        "polynomials dense in L_p(mu) for 1 <= p < inf",
        "trigonometric spans with somewhere dense spectra dense in L_p(mu)",
        "mu is determinate"};
  }
  return j.dump(2);
}

}  // namespace qaw
