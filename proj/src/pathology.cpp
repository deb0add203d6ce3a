#include "qaw/pathology.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qaw/errors.hpp"
#include "qaw/ostrowski.hpp"

namespace qaw {

namespace {

constexpr std::int64_t kDenseCap = std::int64_t(1) << 22;

double fprime(double x) { return 2.0 * std::log(x) + 2.0; }

// return tangent: the tangent to f at R > x0 passing through (x0, y0),
// i.e. the root of 2 x0 log R + 2 x0 - 2 R = y0 with R > x0
double solve_return_tangent(double x0, double y0) {
  auto g = [&](double R) {
    return 2.0 * x0 * std::log(R) + 2.0 * x0 - 2.0 * R - y0;
  };
  double lo = x0, hi = 2.0 * x0;
  while (g(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error("tangentialize: return tangent diverged");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double TangentializedPair::f(double x) { return 2.0 * x * std::log(x); }

double TangentializedPair::f_j(int j, double x) const {
  if (j < 1 || j > k_) throw ParameterError("pathology: sequence index");
  if (x < 1.0) throw ParameterError("pathology: f_j defined on [1, inf)");
  for (const TangentBlock& b : blocks_) {
    if (b.sequence != j) continue;
    if (x < static_cast<double>(b.N) || x > b.R) continue;
    if (x <= static_cast<double>(b.N_prime))
      return b.T_intercept + b.T_slope * x;
    return b.Tp_intercept + b.Tp_slope * x;
  }
  return f(x);
}

double TangentializedPair::log_a(int j, std::int64_t m) const {
  if (m < 0) throw ParameterError("pathology: m must be >= 0");
  if (m == 0) {
    // smallest head preserving a(0) a(2) >= a(1)^2
    return 2.0 * f_j(j, 1.0) - f_j(j, 2.0);
  }
  return f_j(j, static_cast<double>(m));
}

MomentSequence TangentializedPair::sequence_window(int j,
                                                   std::int64_t m_hi) const {
  if (m_hi < 1) throw ParameterError("pathology: window must reach m >= 1");
  if (m_hi > kDenseCap)
    throw TruncatedError("pathology: dense window beyond 2^22 entries");
  std::vector<double> lv;
  lv.reserve(static_cast<std::size_t>(m_hi) + 1);
  for (std::int64_t m = 0; m <= m_hi; ++m) lv.push_back(log_a(j, m));
  return MomentSequence::from_log_values(std::move(lv));
}

std::string TangentializedPair::to_json() const {
  nlohmann::json j;
  j["k"] = k_;
  j["m_cap"] = m_cap_;
  j["base_function"] = "2 x log x";
  nlohmann::json bl = nlohmann::json::array();
  for (const TangentBlock& b : blocks_) {
    bl.push_back({{"index", b.index},
                  {"sequence", b.sequence},
                  {"N", b.N},
                  {"N_prime", b.N_prime},
                  {"R", b.R},
                  {"tangent", {{"slope", b.T_slope}, {"intercept", b.T_intercept}}},
                  {"return_tangent",
                   {{"slope", b.Tp_slope}, {"intercept", b.Tp_intercept}}},
                  {"block_sum", b.block_sum}});
  }
  j["blocks"] = bl;
  return j.dump(2);
}

std::string TangentializedPair::sequence_csv(int j, std::int64_t m_hi) const {
  std::ostringstream os;
  os.precision(17);
  os << "m,log_a,value\n";
  for (std::int64_t m = 0; m <= m_hi; ++m) {
    double la = log_a(j, m);
    os << m << "," << la << "," << exp_ext(la) << "\n";
  }
  return os.str();
}

TangentializedPair tangentialize_sequences(int k, int num_blocks,
                                           std::int64_t m_cap,
                                           const TangentializeOptions& opts) {
  if (k < 2) throw ParameterError("tangentialize: k must be >= 2");
  if (k > 8) throw ParameterError("tangentialize: k > 8 is unsupported");
  if (num_blocks < k)
    throw ParameterError("tangentialize: numBlocks must be >= k");

  TangentializedPair pair;
  pair.k_ = k;

  std::int64_t next_start = std::max<std::int64_t>(opts.N1, 1);
  std::int64_t needed_cap = 0;
  for (int r = 1; r <= num_blocks; ++r) {
    TangentBlock b;
    b.index = r;
    b.sequence = ((r - 1) % k) + 1;
    b.N = next_start;
    double Nd = static_cast<double>(b.N);
    b.T_slope = fprime(Nd);
    b.T_intercept = TangentializedPair::f(Nd) - b.T_slope * Nd;

    // terms tend to exp(-f'(N)) > 0, so the partial sum crosses 1 after
    // finitely many steps; the step count grows like e^2 N^2
    double sum = 0.0;
    std::int64_t m = b.N;
    while (sum <= 1.0) {
      if (m > opts.hard_cap)
        throw TruncatedError(
            "tangentialize: block " + std::to_string(r) +
            " needs indices beyond the hard cap " +
            std::to_string(opts.hard_cap) +
            " (block lengths grow like e^2 N_r^2 and N_r grows "
            "superexponentially with r)");
      double md = static_cast<double>(m);
      sum += std::exp(-(b.T_intercept + b.T_slope * md) / md);
      ++m;
    }
    b.N_prime = m - 1;
    b.block_sum = sum;

    double x0 = static_cast<double>(b.N_prime);
    double y0 = b.T_intercept + b.T_slope * x0;
    b.R = solve_return_tangent(x0, y0);
    b.Tp_slope = fprime(b.R);
    b.Tp_intercept = TangentializedPair::f(b.R) - b.Tp_slope * b.R;

    next_start = static_cast<std::int64_t>(std::ceil(b.R)) + 1;
    needed_cap = std::max(needed_cap,
                          static_cast<std::int64_t>(std::ceil(b.R)) + 1);
    pair.blocks_.push_back(b);
  }
  if (needed_cap > opts.hard_cap)
    throw TruncatedError("tangentialize: m_cap beyond the hard cap");
  pair.m_cap_ = std::max(m_cap, needed_cap);
  return pair;
}

// ---------------------------------------------------------------------

namespace {

// bounded-order sampled stand-in of the Ostrowski weight of sequence j
Profile1D sampled_standin(const TangentializedPair& pair, int j) {
  std::int64_t m_hi = std::min<std::int64_t>(pair.m_cap(), 4096);
  MomentSequence seq = pair.sequence_window(j, m_hi);
  PiecewiseWeight1D w = weight_from_sequence(seq);
  double t_lo = w.transitions().front() * 0.25;
  double t_hi = w.transitions().back() * 4.0;
  std::vector<double> grid, values;
  std::size_t points = 2048;
  for (std::size_t i = 0; i < points; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(points - 1);
    double t = t_lo * std::pow(t_hi / t_lo, u);
    grid.push_back(t);
    values.push_back(w.value(t));
  }
  return Profile1D::sampled(std::move(grid), std::move(values),
                            Extrapolation::Zero);
}

}  // namespace

WeightExpr unique_basis_weight(const TangentializedPair& pair) {
  std::vector<Profile1D> factors;
  for (int j = 1; j <= pair.k(); ++j)
    factors.push_back(sampled_standin(pair, j));
  return WeightExpr::tensor(std::move(factors));
}

EvidenceRecord unique_basis_axis_evidence(const TangentializedPair& pair,
                                          int axis, int m_max_hint) {
  if (axis < 1 || axis > pair.k())
    throw ParameterError("pathology: axis out of range");
  const TangentBlock* first = nullptr;
  for (const TangentBlock& b : pair.blocks())
    if (b.sequence == axis && !first) first = &b;
  if (!first) throw ParameterError("pathology: axis owns no block");
  // place the fit window inside the leading tangent segment, where the
  // terms exp(-T(m)/m) settle toward the positive constant exp(-f'(N))
  std::int64_t m_max =
      m_max_hint > 0
          ? m_max_hint
          : std::min<std::int64_t>(first->N_prime, std::int64_t(1) << 22);
  m_max = std::max<std::int64_t>(m_max, 20);
  MomentSequence M = pair.sequence_window(axis, m_max);
  return series_test(M, static_cast<int>(m_max));
}

EvidenceRecord unique_basis_cross_evidence(const TangentializedPair& pair,
                                           const Vec& v, int m_max) {
  if (static_cast<int>(v.size()) != pair.k())
    throw DimensionError("pathology: vector dimension must equal k");
  std::vector<int> nonzero;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) nonzero.push_back(static_cast<int>(i) + 1);
  if (nonzero.size() < 2)
    throw ParameterError(
        "pathology: cross evidence needs >= 2 nonzero coordinates");
  int j1 = nonzero[0], j2 = nonzero[1];
  double lmin = std::min(std::abs(v[static_cast<std::size_t>(j1 - 1)]),
                         std::abs(v[static_cast<std::size_t>(j2 - 1)]));
  double head = std::min(pair.log_a(j1, 0), pair.log_a(j2, 0));
  for (int j = 1; j <= pair.k(); ++j)
    if (j != j1 && j != j2) head += pair.log_a(j, 0);

  std::vector<double> lv;
  lv.reserve(static_cast<std::size_t>(m_max) + 1);
  for (std::int64_t m = 0; m <= m_max; ++m) {
    double lb = std::max(pair.log_a(j1, m), pair.log_a(j2, m)) +
                static_cast<double>(m) * std::log(lmin) + head;
    lv.push_back(lb);
  }
  MomentSequence M = MomentSequence::from_log_values(std::move(lv));
  EvidenceRecord ev = series_test(M, m_max);
  ev.rule = "certified cross-term lower bound: " + ev.rule;
  return ev;
}

SumCounterexample sum_counterexample(const TangentializedPair& pair) {
  if (pair.k() != 2)
    throw ParameterError("sum_counterexample: needs a pair with k = 2");

  WeightExpr w1 = WeightExpr::radial(sampled_standin(pair, 1), 1);
  WeightExpr w2 = WeightExpr::radial(sampled_standin(pair, 2), 1);

  EvidenceRecord e1 = unique_basis_axis_evidence(pair, 1);
  EvidenceRecord e2 = unique_basis_axis_evidence(pair, 2);

  // max sequence: equals exp(f) everywhere since blocks are disjoint
  int m_max = 2000;
  std::vector<double> lv;
  for (std::int64_t m = 0; m <= m_max; ++m)
    lv.push_back(std::max(pair.log_a(1, m), pair.log_a(2, m)));
  EvidenceRecord emax =
      series_test(MomentSequence::from_log_values(std::move(lv)), m_max);
  emax.rule = "max(a_1, a_2) lower bound for the sum: " + emax.rule;

  Verdict verdict;
  verdict.cls = WeightClass::NotQuasiAnalytic;
  verdict.evidence = {emax};

  SumCounterexample out{std::move(w1), std::move(w2), std::move(e1),
                        std::move(e2), std::move(emax), std::move(verdict)};
  return out;
}

}  // namespace qaw
