#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qaw/moment.hpp"
#include "qaw/ostrowski.hpp"
#include "qaw/weight.hpp"

// Classification of weights into the chain
//   holomorphic < quasi-analytic < rapidly decreasing < W_d < W_0 < W,
// by symbolic rules on the expression structure, the root series
// criterion sum M_w(v,m)^{-1/m}, and logarithmic-integral criteria.
// Numeric conclusions are three-valued: divergence of a series or an
// integral is undecidable from finite data, so fitted tail models decide
// Diverges / Converges only outside a gray zone, and symbolic rules
// provide ground truth where the expression matches a known family.

namespace qaw {

enum class WeightClass { QuasiAnalytic, NotQuasiAnalytic, Inconclusive };
enum class Conclusion { Diverges, Converges, Undetermined };
enum class EvidenceKind {
  SeriesPartialSums,
  LogIntegralTail,
  SymbolicRule,
  HallIntegral,
  LineRestriction,
};
enum class BasisScope { AllBases, SpecificBasis };

const char* to_string(WeightClass c);
const char* to_string(Conclusion c);
const char* to_string(EvidenceKind k);

struct EvidenceRecord {
  EvidenceKind kind = EvidenceKind::SymbolicRule;
  Conclusion conclusion = Conclusion::Undetermined;
  std::vector<double> payload;  // partial sums / integral values / params
  std::string rule;             // rule identifier or fit summary
};

struct Verdict {
  WeightClass cls = WeightClass::Inconclusive;
  std::optional<BasisSpec> basis;  // witnessing basis for QuasiAnalytic
  BasisScope scope = BasisScope::SpecificBasis;
  std::vector<EvidenceRecord> evidence;
  std::optional<bool> holomorphic;
};

enum class Membership { In, NotIn, Inconclusive };

struct DecayVerdict {
  Membership membership = Membership::Inconclusive;
  std::optional<int> order;  // nullopt encodes d = infinity
  std::vector<EvidenceRecord> evidence;
};

struct SeriesTestOptions {
  double diverge_q = 1.0;   // q <= this in the m^{-1} (log m)^{-q} model
  double converge_q = 1.1;  // q >= this concludes convergence
  double fit_r2 = 0.98;      // fit accepted when R^2 clears this...
  double fit_rms = 0.05;     // ...or the residual rms (log units) is below
  double geometric_ratio = 0.9;
};

/// Fitted-decay test of sum_m M(m)^{-1/m}. A zero moment forces
/// divergence (0^{-1/m} = inf); an infinite moment zeroes the tail.
EvidenceRecord series_test(const MomentSequence& M, int m_max,
                           const SeriesTestOptions& opts = {});

struct IntegralTestOptions {
  double diverge_threshold = 1e3;  // |I(T)| beyond this diverges
  double cauchy_tol = 1e-6;        // three stable doublings converge
  double diverge_slope = -1.02;    // increment fit: log|dI| vs log log T
  double converge_slope = -1.35;
};

/// I(T) = int_R^T log wbar(t)/(1+t^2) dt on a doubling sequence of T
/// within the sampled range of the regularization.
EvidenceRecord log_integral_test(const RegularizedWeight& wbar, double R,
                                 const IntegralTestOptions& opts = {});

/// Pattern-matching on the expression: holomorphic families, the
/// repeated-logarithm dichotomy, bounded support, rho-form integrals,
/// majorization through Min, tensor products, affine transport. Sums and
/// unmatched patterns yield nullopt.
std::optional<Verdict> symbolic_classify(const WeightExpr& w);

struct ClassifyOptions {
  int series_m_max = 60;
  MomentOptions moments;
  SeriesTestOptions series;
  IntegralTestOptions integral;
};

/// Full classification: symbolic rule if one fires, numeric series tests
/// per candidate basis, and on R^1 the logarithmic integral of the
/// regularization at R and 4R. Definite symbolic and numeric verdicts
/// must agree; disagreement throws ContradictionError.
Verdict classify(const WeightExpr& w,
                 const std::vector<BasisSpec>& candidates = {},
                 const ClassifyOptions& opts = {});

/// Membership in W_d (d >= 0) or in the rapidly decreasing class
/// (d = nullopt): lim ||x||^d w(x) = 0, symbolic for families, doubling
/// shells otherwise.
DecayVerdict decay_class(const WeightExpr& w, std::optional<int> d);

/// Hall's necessary condition on the raw weight (no regularization):
/// int log w(t)/(1+t^2) dt over [-T, T]. Converges certifies that the
/// polynomials are not dense in the associated space.
EvidenceRecord hall_test(const WeightExpr& w,
                         const IntegralTestOptions& opts = {});

/// One-sided logarithmic integrals of t -> w(x + t y) on [R, inf) and
/// (-inf, -R]. Converges on either side certifies NotQuasiAnalytic.
EvidenceRecord line_restriction_test(const WeightExpr& w, const Vec& x,
                                     const Vec& y,
                                     const IntegralTestOptions& opts = {});

std::string verdict_to_json(const Verdict& v);
std::string decay_verdict_to_json(const DecayVerdict& v);

}  // namespace qaw
