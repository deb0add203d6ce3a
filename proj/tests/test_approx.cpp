#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qaw/approx.hpp"
#include "qaw/errors.hpp"
#include "qaw/numerics.hpp"
#include "qaw/report.hpp"
#include "qaw/simplex.hpp"

using namespace qaw;

TEST_CASE("simplex solves a small textbook LP") {
  // min -x1 - 2 x2 s.t. x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6, x >= 0
  LpProblem lp;
  lp.rows = 2;
  lp.cols = 4;
  lp.A = {1, 1, 1, 0, 1, 3, 0, 1};
  lp.b = {4, 6};
  lp.c = {-1, -2, 0, 0};
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-5.0));
}

TEST_CASE("bernstein_norm examples") {
  auto grid = linspace(-10.0, 10.0, 4001);
  auto gauss = WeightExpr::radial(Profile1D::gaussian(1.0, 1.0), 1);
  CHECK(bernstein_norm([](double) { return 1.0; }, gauss, grid) ==
        doctest::Approx(1.0));

  auto expd = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  auto grid_pos = linspace(0.0, 10.0, 20001);
  // max of t e^{-t} is e^{-1} at t = 1
  CHECK(bernstein_norm([](double t) { return t; }, expd, grid_pos) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

  CHECK(bernstein_norm([](double) { return 0.0; }, gauss, grid) == 0.0);
}

TEST_CASE("polynomial targets are reproduced exactly") {
  auto w = WeightExpr::radial(Profile1D::gaussian(1.0, 2.0), 1);
  auto grid = chebyshev_points(-12.0, 12.0, 801);
  auto target = [](double t) { return 1.0 + t - 0.25 * t * t * t; };
  MinimaxResult r = best_poly_approx(target, w, 5, grid);
  double scale = bernstein_norm(target, w, grid);
  CHECK(r.error <= 1e-8 * scale);
  CHECK(r.duality_gap <= 1e-7);
}

TEST_CASE("smooth target under ExpDecay: errors collapse with the degree") {
  auto w = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  auto grid = chebyshev_points(-20.0, 20.0, 2001);
  auto target = [](double t) { return 1.0 / (1.0 + t * t); };
  MinimaxResult r0 = best_poly_approx(target, w, 0, grid);
  MinimaxResult r30 = best_poly_approx(target, w, 30, grid);
  MinimaxResult r40 = best_poly_approx(target, w, 40, grid);
  // duality-certified minimax values: ratio 0.078 at degree 30, below
  // 0.05 from degree 40 on
  CHECK(r30.error < 0.1 * r0.error);
  CHECK(r40.error < 0.05 * r0.error);
  CHECK(r0.duality_gap <= 1e-7);
  CHECK(r30.duality_gap <= 1e-7);
  CHECK(r40.duality_gap <= 1e-7);
}

TEST_CASE("degree cap and endpoint gate") {
  auto w = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  auto grid = chebyshev_points(-20.0, 20.0, 501);
  auto target = [](double t) { return 1.0 / (1.0 + t * t); };
  CHECK_THROWS_AS(best_poly_approx(target, w, 61, grid), ParameterError);
  // a target that does not vanish against w at the endpoints
  auto bad = [](double t) { return std::exp(std::abs(t)); };
  CHECK_THROWS_AS(best_poly_approx(bad, w, 4, grid), ParameterError);
}

TEST_CASE("trigonometric fits") {
  auto w = WeightExpr::radial(Profile1D::gaussian(1.0, 2.0), 1);
  auto grid = chebyshev_points(-14.0, 14.0, 1201);

  SUBCASE("a target inside the span is matched exactly") {
    auto target = [](double t) { return std::cos(0.5 * t); };
    MinimaxResult r = best_trig_approx(target, w, {0.0, 0.5, 1.0}, grid);
    double scale = bernstein_norm(target, w, grid);
    CHECK(r.error <= 1e-8 * scale);
    CHECK(r.duality_gap <= 1e-7);
  }

  SUBCASE("spectral set {0} reduces to the best constant") {
    auto target = [](double t) { return 1.0 / (1.0 + t * t); };
    MinimaxResult trig = best_trig_approx(target, w, {0.0}, grid);
    MinimaxResult poly = best_poly_approx(target, w, 0, grid);
    CHECK(trig.error == doctest::Approx(poly.error).epsilon(1e-9));
  }

  SUBCASE("somewhere dense spectra: more frequencies help a smooth bump") {
    auto target = [](double t) { return std::exp(-0.5 * t * t); };
    std::vector<double> freqs;
    for (int i = 0; i < 64; ++i) freqs.push_back(i / 64.0);
    std::vector<double> few(freqs.begin(), freqs.begin() + 4);
    MinimaxResult r4 = best_trig_approx(target, w, few, grid);
    MinimaxResult r64 = best_trig_approx(target, w, freqs, grid);
    CHECK(r64.error * 5.0 <= r4.error);
  }
}

TEST_CASE("density_experiment monotone errors and verdict attachment") {
  auto w = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  auto grid = chebyshev_points(-20.0, 20.0, 1201);
  std::vector<NamedTarget> targets = {
      {"runge", [](double t) { return 1.0 / (1.0 + t * t); }}};
  ApproxReport rep = density_experiment(w, targets, ApproxFamily::Polynomial,
                                        {0, 2, 5, 10, 20, 30}, grid);
  REQUIRE(rep.curves.size() == 1);
  const auto& e = rep.curves[0].errors;
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] <= e[i - 1] * (1 + 1e-12));
  CHECK(rep.weight_verdict.cls == WeightClass::QuasiAnalytic);
  CHECK(e.back() < 0.1 * e.front());
  CHECK_FALSE(rep.curves[0].plateau);
  for (double g : rep.curves[0].duality_gaps) CHECK(g <= 1e-7);

  SUBCASE("degenerate schedule of one entry makes no monotonicity claim") {
    ApproxReport single = density_experiment(
        w, targets, ApproxFamily::Polynomial, {0}, grid);
    CHECK(single.curves[0].errors.size() == 1);
    CHECK_FALSE(single.curves[0].plateau);
  }
}

TEST_CASE("hall-convergent weight plateaus on an oscillatory target") {
  // exp(-t / (log t)^2), the nu = 1 family; the enveloped sine keeps its
  // mass out to |t| ~ 90 where w is negligible, far beyond what degree 40
  // resolves
  auto w = WeightExpr::radial(
      Profile1D::rep_log(1.0, {1.0, 1.0}, {1.0, 2.0}), 1);
  auto grid = chebyshev_points(-280.0, 280.0, 2001);
  std::vector<NamedTarget> targets = {
      {"enveloped_sin", [](double t) {
         return std::sin(t) * std::exp(-(t / 60.0) * (t / 60.0));
       }}};
  ApproxReport rep = density_experiment(w, targets, ApproxFamily::Polynomial,
                                        {10, 20, 40}, grid);
  CHECK(rep.curves[0].plateau);
  CHECK(rep.weight_verdict.cls == WeightClass::NotQuasiAnalytic);
  for (double g : rep.curves[0].duality_gaps) CHECK(g <= 1e-7);
}

TEST_CASE("grid refinement stability") {
  auto w = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  auto target = [](double t) { return 1.0 / (1.0 + t * t); };
  auto g1 = chebyshev_points(-20.0, 20.0, 1001);
  auto g2 = chebyshev_points(-20.0, 20.0, 2001);
  for (int d : {0, 5, 15}) {
    double e1 = best_poly_approx(target, w, d, g1).error;
    double e2 = best_poly_approx(target, w, d, g2).error;
    CHECK(std::abs(e1 - e2) <= 0.05 * std::max(e1, e2));
  }
}

TEST_CASE("report emission") {
  auto w = WeightExpr::radial(Profile1D::exp_decay(1.0, 1.0), 1);
  auto grid = chebyshev_points(-20.0, 20.0, 801);
  std::vector<NamedTarget> targets = {
      {"runge", [](double t) { return 1.0 / (1.0 + t * t); }}};
  ApproxReport rep = density_experiment(w, targets, ApproxFamily::Polynomial,
                                        {0, 4, 8}, grid);
  std::string csv = approx_report_csv(rep);
  CHECK(csv.find("index,error_runge") != std::string::npos);
  std::string j = approx_report_json(rep);
  CHECK(j.find("\"family\": \"polynomial\"") != std::string::npos);
  std::string svg = approx_report_svg(rep);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}
