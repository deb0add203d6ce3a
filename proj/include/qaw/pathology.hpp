#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qaw/classifier.hpp"
#include "qaw/moment.hpp"
#include "qaw/weight.hpp"

// Constructive counterexamples: partially tangentialized versions of
// f(x) = 2x log x yield k strictly positive log-convex sequences whose
// root series each diverge while every pairwise max gives a convergent
// root series. These feed the unique-basis weight and the
// sum-of-quasi-analytic-weights counterexample.

namespace qaw {

struct TangentBlock {
  int index = 0;          // r, 1-based
  int sequence = 0;       // owning sequence j = ((r-1) mod k) + 1
  std::int64_t N = 0;      // tangency point of T_r
  std::int64_t N_prime = 0;  // end of the leading tangent segment
  double R = 0.0;          // tangency point of the return tangent T'_r
  double T_slope = 0.0, T_intercept = 0.0;    // T_r(x)
  double Tp_slope = 0.0, Tp_intercept = 0.0;  // T'_r(x)
  double block_sum = 0.0;  // sum_{m=N}^{N'} exp(-T_r(m)/m), > 1
};

struct TangentializeOptions {
  std::int64_t N1 = 4;  // first tangency point; small m_cap, no degenerate
                        // tangents at 1
  std::int64_t hard_cap = std::int64_t(1) << 26;
};

/// k log-convex sequences log a_j(m) = f_j(m) with f_j equal to
/// f(x) = 2x log x off the blocks assigned to j and tangentialized on
/// them. Sequences evaluate lazily in closed form; dense materialization
/// is windowed.
class TangentializedPair {
 public:
  int k() const { return k_; }
  std::int64_t m_cap() const { return m_cap_; }
  const std::vector<TangentBlock>& blocks() const { return blocks_; }

  /// f(x) = 2 x log x.
  static double f(double x);
  /// The tangentialized f_j (j in 1..k) at a real argument >= 1.
  double f_j(int j, double x) const;
  /// log a_j(m); m = 0 returns the smallest head value keeping the
  /// sequence log-convex at m = 1.
  double log_a(int j, std::int64_t m) const;

  /// Dense log-values a_j(0..m_hi) (m_hi capped at 2^22).
  MomentSequence sequence_window(int j, std::int64_t m_hi) const;

  std::string to_json() const;
  std::string sequence_csv(int j, std::int64_t m_hi) const;

  friend TangentializedPair tangentialize_sequences(
      int k, int num_blocks, std::int64_t m_cap,
      const TangentializeOptions& opts);

 private:
  int k_ = 2;
  std::int64_t m_cap_ = 0;
  std::vector<TangentBlock> blocks_;
};

/// Builds the blocks iteratively: tangent at N_r until the partial sum of
/// exp(-T_r(m)/m) exceeds 1, then the return tangent to the graph.
/// m_cap is extended transparently to cover the blocks; beyond the hard
/// cap the construction reports Truncated.
TangentializedPair tangentialize_sequences(
    int k, int num_blocks, std::int64_t m_cap,
    const TangentializeOptions& opts = {});

/// Tensor product of the Ostrowski weights of the k = n sequences. The
/// returned expression is a bounded-order sampled stand-in for evaluation
/// and serialization; certification evidence is computed from the exact
/// log-sequences by the functions below.
WeightExpr unique_basis_weight(const TangentializedPair& pair);

/// Series evidence along a standard basis axis (expected: Diverges). The
/// test window sits inside the first block owned by the axis.
EvidenceRecord unique_basis_axis_evidence(const TangentializedPair& pair,
                                          int axis, int m_max_hint = 0);

/// Series evidence along a vector with at least two nonzero coordinates,
/// via the certified cross-term lower bound
///   M_w(v,m) >= max(a_{j1}(m), a_{j2}(m)) min(|l_{j1}|,|l_{j2}|)^m consts
/// (expected: Converges, so no basis containing v can witness QA).
EvidenceRecord unique_basis_cross_evidence(const TangentializedPair& pair,
                                           const Vec& v, int m_max = 2000);

struct SumCounterexample {
  WeightExpr w1;  // radial stand-in of the first Ostrowski weight
  WeightExpr w2;
  EvidenceRecord w1_series;   // Diverges
  EvidenceRecord w2_series;   // Diverges
  EvidenceRecord max_series;  // Converges: the sum is not quasi-analytic
  Verdict sum_verdict;        // NotQuasiAnalytic with the evidence above
};

/// The two-sequence counterexample: each summand is quasi-analytic but
/// M_{w1+w2}(v,m) >= ||v||^m max(a_1, a_2)(m) has a convergent root
/// series.
SumCounterexample sum_counterexample(const TangentializedPair& pair);

}  // namespace qaw
