#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qaw/errors.hpp"
#include "qaw/moment.hpp"

using namespace qaw;

namespace {

// independent oracle: dense scan of |t|^m w(t) plus local ternary refinement
double brute_sup_1d(const std::function<double(double)>& w, int m, double lo,
                    double hi, std::size_t n = 400000) {
  double best = 0.0, arg = lo;
  for (std::size_t i = 0; i < n; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    double v = std::pow(std::abs(t), m) * w(t);
    if (m == 0) v = w(t);
    if (v > best) {
      best = v;
      arg = t;
    }
  }
  double step = (hi - lo) / static_cast<double>(n - 1);
  double a = std::max(lo, arg - step), b = std::min(hi, arg + step);
  for (int it = 0; it < 200; ++it) {
    double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    auto f = [&](double t) {
      return (m == 0 ? 1.0 : std::pow(std::abs(t), m)) * w(t);
    };
    if (f(m1) < f(m2))
      a = m1;
    else
      b = m2;
  }
  double t = 0.5 * (a + b);
  return std::max(best, (m == 0 ? 1.0 : std::pow(std::abs(t), m)) * w(t));
}

// independent oracle for the largest log-convex minorant: monotone
// constraint iteration in log space (converges from above)
std::vector<double> brute_envelope(const std::vector<double>& vals) {
  std::vector<double> e;
  for (double v : vals) e.push_back(std::log(v));
  for (int sweep = 0; sweep < 20000; ++sweep) {
    for (std::size_t m = 1; m + 1 < e.size(); ++m)
      e[m] = std::min(e[m], 0.5 * (e[m - 1] + e[m + 1]));
  }
  std::vector<double> out;
  for (double le : e) out.push_back(std::exp(le));
  return out;
}

}  // namespace

TEST_CASE("moment closed forms against dense grid oracles") {
  auto gauss = WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 1);
  double m2 = moment(gauss, {1.0}, 2);
  CHECK(m2 == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(m2 == doctest::Approx(0.3678794412).epsilon(1e-9));
  double oracle = brute_sup_1d([](double t) { return std::exp(-t * t); }, 2,
                               0.0, 20.0);
  CHECK(m2 == doctest::Approx(oracle).epsilon(1e-8));

  // zeroth moment is the sup
  auto table = WeightExpr::table({-1.0, 0.0, 3.0}, {0.2, 1.7, 0.0},
                                 Extrapolation::Zero);
  CHECK(moment(table, {1.0}, 0) == doctest::Approx(1.7));

  auto ind = WeightExpr::radial(Profile1D::indicator(1.0), 1);
  double i5 = moment(ind, {1.0}, 5);
  CHECK(i5 == doctest::Approx(1.0));
  double ioracle = brute_sup_1d(
      [](double t) { return std::abs(t) <= 1.0 ? 1.0 : 0.0; }, 5, -2.0, 2.0);
  CHECK(i5 == doctest::Approx(ioracle));
}

TEST_CASE("grid path matches closed forms at tight tolerance") {
  MomentOptions grid_only;
  grid_only.force_grid = true;
  auto gauss = WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 1);
  auto expd = WeightExpr::radial(Profile1D::exp_decay(1.5, 0.7), 1);
  for (int m = 0; m <= 20; ++m) {
    double md = m;
    double cf_gauss =
        m == 0 ? 1.0 : std::pow(0.5 * md, 0.5 * md) * std::exp(-0.5 * md);
    CHECK(moment(gauss, {1.0}, m, grid_only) ==
          doctest::Approx(cf_gauss).epsilon(1e-8));
    double cf_exp =
        1.5 * (m == 0 ? 1.0 : std::pow(md / (std::exp(1.0) * 0.7), md));
    CHECK(moment(expd, {1.0}, m, grid_only) ==
          doctest::Approx(cf_exp).epsilon(1e-8));
  }
}

TEST_CASE("moment_sequence examples") {
  auto expd = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  MomentSequence s = moment_sequence(expd, {1.0}, 3);
  // sup t^m e^{-t} = (m/e)^m, by independent scalar maximization
  std::vector<double> expect = {1.0, std::exp(-1.0), 4.0 * std::exp(-2.0),
                                27.0 * std::exp(-3.0)};
  for (std::size_t m = 0; m < 4; ++m)
    CHECK(s.value(m) == doctest::Approx(expect[m]).epsilon(1e-9));
  CHECK(s.log_convex);

  auto ind = WeightExpr::radial(Profile1D::indicator(1.0), 1);
  MomentSequence si = moment_sequence(ind, {1.0}, 4);
  for (std::size_t m = 0; m < 5; ++m)
    CHECK(si.value(m) == doctest::Approx(1.0));
  CHECK(si.log_convex);
}

TEST_CASE("radial reduction scales by the vector norm") {
  auto g2 = WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 2);
  // M_{w'}(v, m) = ||v||^m M_w(e, m)
  double m3 = moment(g2, {3.0, 4.0}, 3);  // ||v|| = 5
  double base = moment(WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 1),
                       {1.0}, 3);
  CHECK(m3 == doctest::Approx(std::pow(5.0, 3) * base).epsilon(1e-10));
}

TEST_CASE("moment scales linearly under Scale") {
  auto w = WeightExpr::radial(Profile1D::gaussian(2.0, 1.3), 1);
  auto cw = WeightExpr::scale(0.375, w);
  for (int m : {0, 1, 4, 9}) {
    CHECK(moment(cw, {1.0}, m) ==
          doctest::Approx(0.375 * moment(w, {1.0}, m)).epsilon(1e-10));
  }
}

TEST_CASE("translation obeys the binomial root bound") {
  // M_{T_y w}(v,m)^{1/m} <= |(v,y)| + M_w(v,m)^{1/m}
  auto weights = std::vector<WeightExpr>{
      WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1),
      WeightExpr::radial(Profile1D::gaussian(1.0, 2.0), 1),
  };
  for (const auto& w : weights) {
    Vec y{0.7};
    auto tw = WeightExpr::pullback(w, AffineMap::translate(y));
    for (int m : {1, 2, 5, 10}) {
      double lhs = std::pow(moment(tw, {1.0}, m), 1.0 / m);
      double rhs = 0.7 + std::pow(moment(w, {1.0}, m), 1.0 / m);
      if (std::isfinite(lhs) && std::isfinite(rhs) && lhs > 0 && rhs > 0)
        CHECK(lhs <= rhs + 1e-8 * (1.0 + rhs));
    }
  }
}

TEST_CASE("tensor axis moments factor through the other sups") {
  auto w = WeightExpr::tensor(
      {Profile1D::gaussian(2.0, 1.0), Profile1D::exp_decay(3.0, 1.0)});
  // M_w(e_1, m) = sup |t|^m 2 e^{-t^2} * sup 3 e^{-|t|}
  double m4 = moment(w, {1.0, 0.0}, 4);
  double expect = 2.0 * std::pow(2.0, 2) * std::exp(-2.0) * 3.0;
  CHECK(m4 == doctest::Approx(expect).epsilon(1e-8));
  // scaled axis vector
  double m4s = moment(w, {2.0, 0.0}, 4);
  CHECK(m4s == doctest::Approx(expect * 16.0).epsilon(1e-8));
}

TEST_CASE("generic 2D sup agrees with the tensor reduction") {
  auto w = WeightExpr::tensor(
      {Profile1D::gaussian(1.0, 1.0), Profile1D::gaussian(1.0, 1.0)});
  // along v=(1,1): |x1+x2|^m e^{-x1^2-x2^2}; substituting u=(x1+x2)/sqrt2
  // gives ||v|| = sqrt2 times the 1D Gaussian moment
  double got = moment(w, {1.0, 1.0}, 3);
  double base = moment(WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 1),
                       {1.0}, 3);
  CHECK(got == doctest::Approx(std::pow(std::sqrt(2.0), 3) * base)
                   .epsilon(1e-6));
}

TEST_CASE("unbounded moments report infinity") {
  auto lv = WeightExpr::table({0.0, 1.0}, {1.0, 1.0}, Extrapolation::LastValue);
  MomentResult r = moment_detail(lv, {1.0}, 2);
  CHECK(is_pos_inf(r.log_value));
  CHECK(r.unbounded);
  CHECK(moment(lv, {1.0}, 0) == doctest::Approx(1.0));
}

TEST_CASE("log-convexity certificate holds for engine output") {
  auto weights = std::vector<WeightExpr>{
      WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 2),
      WeightExpr::radial(Profile1D::rep_log(1.0, {1.0, 1.0}, {1.0, 0.5}), 1),
      WeightExpr::pointwise_min(
          WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1),
          WeightExpr::radial(Profile1D::gaussian(1.0, 2.0), 1)),
      WeightExpr::table({-2.0, -1.0, 0.0, 1.5}, {0.0, 1.0, 2.0, 0.5},
                        Extrapolation::Zero),
  };
  for (const auto& w : weights) {
    Vec v(static_cast<std::size_t>(w.dimension()), 0.0);
    v[0] = 1.0;
    MomentSequence s = moment_sequence(w, v, 20);
    CHECK(s.check_log_convex(1e-9));
  }
}

TEST_CASE("log_convex_envelope examples") {
  SUBCASE("hull of a spike is the flat chord") {
    MomentSequence a = MomentSequence::from_values({1.0, 10.0, 1.0});
    MomentSequence e = log_convex_envelope(a);
    CHECK(e.value(0) == doctest::Approx(1.0));
    CHECK(e.value(1) == doctest::Approx(1.0));
    CHECK(e.value(2) == doctest::Approx(1.0));
    auto oracle = brute_envelope({1.0, 10.0, 1.0});
    for (std::size_t m = 0; m < 3; ++m)
      CHECK(e.value(m) == doctest::Approx(oracle[m]).epsilon(1e-6));
  }
  SUBCASE("idempotent and identity on log-convex data") {
    MomentSequence a = MomentSequence::from_values({1.0, 1.0, 2.0, 8.0});
    REQUIRE(a.log_convex);
    MomentSequence e = log_convex_envelope(a);
    for (std::size_t m = 0; m < 4; ++m)
      CHECK(e.value(m) == doctest::Approx(a.value(m)));
    MomentSequence e2 = log_convex_envelope(e);
    for (std::size_t m = 0; m < 4; ++m)
      CHECK(e2.log_value(m) == doctest::Approx(e.log_value(m)));
  }
  SUBCASE("zero entries cascade") {
    MomentSequence a = MomentSequence::from_values({1.0, 0.0, 5.0});
    MomentSequence e = log_convex_envelope(a);
    CHECK(e.value(0) == doctest::Approx(1.0));
    CHECK(e.value(1) == 0.0);
    CHECK(e.value(2) == 0.0);
    CHECK(e.log_convex);
  }
  SUBCASE("all zeros stay zero") {
    MomentSequence a = MomentSequence::from_values({0.0, 0.0, 0.0});
    MomentSequence e = log_convex_envelope(a);
    for (std::size_t m = 0; m < 3; ++m) CHECK(e.value(m) == 0.0);
  }
  SUBCASE("random sequences: envelope matches the iteration oracle") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.2, 8.0);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> vals;
      for (int m = 0; m < 12; ++m) vals.push_back(u(rng));
      MomentSequence e = log_convex_envelope(MomentSequence::from_values(vals));
      auto oracle = brute_envelope(vals);
      for (std::size_t m = 0; m < vals.size(); ++m) {
        CHECK(e.value(m) <= vals[m] * (1.0 + 1e-12));
        CHECK(e.value(m) == doctest::Approx(oracle[m]).epsilon(1e-5));
      }
      CHECK(e.log_convex);
    }
  }
}

TEST_CASE("mu_sequence examples") {
  SUBCASE("factorials") {
    std::vector<double> lv;
    double lf = 0.0;
    lv.push_back(0.0);  // 0! = 1
    for (int k = 1; k <= 60; ++k) {
      lf += std::log(static_cast<double>(k));
      lv.push_back(lf);
    }
    MomentSequence M = MomentSequence::from_log_values(lv);
    auto mu = mu_sequence(M, 3, 3);
    // (k!)^{1/k} is increasing, so the min sits at k = 3
    CHECK(mu[0] == doctest::Approx(std::pow(6.0, 1.0 / 3.0)).epsilon(1e-12));
    // brute force over the window, bitwise
    double brute = kInf;
    for (int k = 3; k <= 60; ++k)
      brute = std::min(brute, std::pow(M.value(static_cast<std::size_t>(k)),
                                       1.0 / k));
    CHECK(mu[0] == brute);
  }
  SUBCASE("constant sequence") {
    MomentSequence M =
        MomentSequence::from_values(std::vector<double>(30, 1.0));
    auto mu = mu_sequence(M, 1, 10);
    for (double v : mu) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("a zero dominates the window") {
    std::vector<double> vals(30, 2.0);
    vals[5] = 0.0;
    MomentSequence M = MomentSequence::from_values(vals);
    auto mu = mu_sequence(M, 1, 5);
    for (double v : mu) CHECK(v == 0.0);
  }
  SUBCASE("short window is flagged") {
    MomentSequence M = MomentSequence::from_values({1.0, 1.0, 1.0});
    CHECK_THROWS_AS(mu_sequence(M, 1, 2), TruncatedError);
  }
}

TEST_CASE("roots of moments are nondecreasing when the sup is at most 1") {
  // for ||w||_inf <= 1 the map m -> M(m)^{1/m} is nondecreasing
  auto weights = std::vector<WeightExpr>{
      WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1),
      WeightExpr::radial(Profile1D::gaussian(0.8, 1.3), 1),
      WeightExpr::radial(Profile1D::indicator(0.9), 1),
      WeightExpr::scale(0.5, WeightExpr::table({-2.0, 0.0, 1.0},
                                               {0.3, 1.0, 0.6},
                                               Extrapolation::Zero)),
  };
  for (const auto& w : weights) {
    REQUIRE(w.upper_bound() <= 1.0 + 1e-12);
    MomentSequence M = moment_sequence(w, {1.0}, 25);
    double prev = 0.0;
    for (int m = 1; m <= 25; ++m) {
      double root = std::exp(M.log_value(static_cast<std::size_t>(m)) / m);
      CHECK(root >= prev * (1.0 - 1e-9));
      prev = root;
    }
  }
}
