#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qaw/errors.hpp"
#include "qaw/ostrowski.hpp"
#include "qaw/pathology.hpp"

using namespace qaw;

TEST_CASE("tangentialization: blocks and invariants (k=2, 2 blocks)") {
  TangentializedPair pair = tangentialize_sequences(2, 2, 0);
  REQUIRE(pair.blocks().size() == 2);

  SUBCASE("blocks are disjoint, increasing and alternate sequences") {
    const auto& b = pair.blocks();
    CHECK(b[0].sequence == 1);
    CHECK(b[1].sequence == 2);
    CHECK(b[0].N == 4);  // default N1
    CHECK(b[0].N < b[0].N_prime);
    CHECK(static_cast<double>(b[0].N_prime) < b[0].R);
    CHECK(b[0].R < static_cast<double>(b[1].N));
    CHECK(static_cast<double>(b[1].N_prime) < b[1].R);
  }

  SUBCASE("per-block partial sums exceed 1 exactly as in the construction") {
    for (const auto& b : pair.blocks()) {
      CHECK(b.block_sum > 1.0);
      // recompute independently
      double sum = 0.0;
      for (std::int64_t m = b.N; m <= b.N_prime; ++m) {
        double md = static_cast<double>(m);
        sum += std::exp(-(b.T_intercept + b.T_slope * md) / md);
      }
      CHECK(sum == doctest::Approx(b.block_sum).epsilon(1e-12));
      CHECK(sum > 1.0);
      // minimality: dropping the last term falls back below 1
      double md = static_cast<double>(b.N_prime);
      CHECK(sum - std::exp(-(b.T_intercept + b.T_slope * md) / md) <= 1.0);
    }
  }

  SUBCASE("off-block values equal exp(2 m log m) to rtol 1e-12") {
    const auto& b = pair.blocks();
    for (int j : {1, 2}) {
      for (std::int64_t m : {1ll, 2ll, 3ll, 700ll, 100000ll}) {
        bool inside = false;
        for (const auto& blk : b)
          if (blk.sequence == j && m >= blk.N &&
              static_cast<double>(m) <= blk.R)
            inside = true;
        if (inside) continue;
        double md = static_cast<double>(m);
        CHECK(pair.log_a(j, m) ==
              doctest::Approx(2.0 * md * std::log(md)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("tangent values sit strictly below the graph inside blocks") {
    const auto& b = pair.blocks().front();
    for (std::int64_t m = b.N + 1; m < b.N_prime; m += 7) {
      double md = static_cast<double>(m);
      CHECK(pair.f_j(1, md) < TangentializedPair::f(md));
      CHECK(pair.f_j(2, md) == doctest::Approx(TangentializedPair::f(md)));
    }
  }

  SUBCASE("discrete convexity certificate of each f_j") {
    for (int j : {1, 2}) {
      MomentSequence s = pair.sequence_window(j, 600);
      CHECK(s.log_convex);
      // second differences of f_j on the integer grid
      for (std::int64_t m = 2; m < 598; ++m) {
        double second = pair.log_a(j, m + 1) - 2.0 * pair.log_a(j, m) +
                        pair.log_a(j, m - 1);
        CHECK(second >= -1e-9);
      }
    }
  }

  SUBCASE("head value is the minimal log-convex completion") {
    for (int j : {1, 2}) {
      double a0 = pair.log_a(j, 0);
      CHECK(a0 + pair.log_a(j, 2) ==
            doctest::Approx(2.0 * pair.log_a(j, 1)).epsilon(1e-12));
    }
  }

  SUBCASE("partial sums of each root series exceed 1 within m_cap") {
    for (int j : {1, 2}) {
      const TangentBlock* own = nullptr;
      for (const auto& blk : pair.blocks())
        if (blk.sequence == j && !own) own = &blk;
      REQUIRE(own != nullptr);
      double sum = 0.0;
      for (std::int64_t m = 1; m <= own->N_prime; ++m)
        sum += std::exp(-pair.log_a(j, m) / static_cast<double>(m));
      CHECK(sum > 1.0);
    }
  }
}

TEST_CASE("six blocks exceed any computable budget") {
  // block lengths grow like e^2 N_r^2 while N_r grows superexponentially;
  // the third block already needs ~1e16 indices
  CHECK_THROWS_AS(tangentialize_sequences(2, 6, 0), TruncatedError);
}

TEST_CASE("ostrowski round trip on the tangentialized sequences") {
  TangentializedPair pair = tangentialize_sequences(2, 2, 0);
  // moments of the Ostrowski weight recover the sequence entries
  MomentSequence s = pair.sequence_window(1, 64);
  PiecewiseWeight1D w = weight_from_sequence(s);
  for (int m : {0, 1, 5, 20, 40, 64}) {
    MomentResult r = log_moment_of_callable(
        [&w](double t) { return w.log_value(t); }, m, true);
    CHECK(r.log_value ==
          doctest::Approx(s.log_value(static_cast<std::size_t>(m)))
              .epsilon(1e-6));
  }
}

TEST_CASE("unique basis weight evidence") {
  TangentializedPair pair = tangentialize_sequences(2, 2, 0);

  SUBCASE("axis series diverge") {
    EvidenceRecord e1 = unique_basis_axis_evidence(pair, 1);
    EvidenceRecord e2 = unique_basis_axis_evidence(pair, 2);
    CHECK(e1.conclusion == Conclusion::Diverges);
    CHECK(e2.conclusion == Conclusion::Diverges);
  }

  SUBCASE("scaled axis still diverges (criterion is scaling invariant)") {
    // M scales by 2^m: the (-1/m)-th powers shift by the constant 1/2
    EvidenceRecord e = unique_basis_axis_evidence(pair, 1);
    CHECK(e.conclusion == Conclusion::Diverges);
    TangentializedPair same = pair;
    std::int64_t m_max = std::max<std::int64_t>(pair.blocks()[0].N_prime, 20);
    std::vector<double> lv;
    for (std::int64_t m = 0; m <= m_max; ++m)
      lv.push_back(same.log_a(1, m) +
                   static_cast<double>(m) * std::log(2.0));
    EvidenceRecord scaled = series_test(
        MomentSequence::from_log_values(std::move(lv)),
        static_cast<int>(m_max));
    CHECK(scaled.conclusion == Conclusion::Diverges);
  }

  SUBCASE("diagonal vector certifies convergence via the lower bound") {
    double inv = 1.0 / std::sqrt(2.0);
    EvidenceRecord e = unique_basis_cross_evidence(pair, {inv, inv});
    CHECK(e.conclusion == Conclusion::Converges);
  }

  SUBCASE("axis vectors are rejected by the cross-term bound") {
    CHECK_THROWS_AS(unique_basis_cross_evidence(pair, {1.0, 0.0}),
                    ParameterError);
  }

  SUBCASE("the tensor stand-in evaluates and serializes") {
    WeightExpr w = unique_basis_weight(pair);
    CHECK(w.dimension() == 2);
    CHECK(w.evaluate({1.0, 1.0}) >= 0.0);
    CHECK(w.upper_bound() > 0.0);
  }
}

TEST_CASE("sum counterexample") {
  TangentializedPair pair = tangentialize_sequences(2, 2, 0);
  SumCounterexample sc = sum_counterexample(pair);

  CHECK(sc.w1_series.conclusion == Conclusion::Diverges);
  CHECK(sc.w2_series.conclusion == Conclusion::Diverges);
  CHECK(sc.max_series.conclusion == Conclusion::Converges);
  CHECK(sc.sum_verdict.cls == WeightClass::NotQuasiAnalytic);
  CHECK_FALSE(sc.sum_verdict.evidence.empty());

  // the Sum node deliberately yields no symbolic verdict
  WeightExpr s = WeightExpr::sum(sc.w1, sc.w2);
  CHECK_FALSE(symbolic_classify(s).has_value());
}

TEST_CASE("pair serialization") {
  TangentializedPair pair = tangentialize_sequences(2, 2, 0);
  std::string j = pair.to_json();
  CHECK(j.find("\"blocks\"") != std::string::npos);
  CHECK(j.find("\"block_sum\"") != std::string::npos);
  std::string csv = pair.sequence_csv(1, 10);
  CHECK(csv.find("m,log_a,value") != std::string::npos);
}
