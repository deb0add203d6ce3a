#include "qaw/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaw {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-9;

// dense LU solve of an R x R system built from basis columns
struct BasisSolver {
  std::size_t n = 0;
  std::vector<double> lu;
  std::vector<int> perm;

  // columns: the basis columns of A (including artificials)
  bool factorize(const std::vector<double>& A_ext, std::size_t cols_ext,
                 const std::vector<std::size_t>& basis) {
    n = basis.size();
    lu.assign(n * n, 0.0);
    double scale = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        lu[r * n + k] = A_ext[r * cols_ext + basis[k]];
        scale = std::max(scale, std::abs(lu[r * n + k]));
      }
    double fail_tol = std::max(1e-12 * scale, 1e-300);
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      double best = std::abs(lu[col * n + col]);
      for (std::size_t r = col + 1; r < n; ++r) {
        double v = std::abs(lu[r * n + col]);
        if (v > best) {
          best = v;
          pivot = r;
        }
      }
      if (best < fail_tol) return false;
      if (pivot != col) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(lu[pivot * n + j], lu[col * n + j]);
        std::swap(perm[pivot], perm[col]);
      }
      for (std::size_t r = col + 1; r < n; ++r) {
        double f = lu[r * n + col] / lu[col * n + col];
        lu[r * n + col] = f;
        for (std::size_t j = col + 1; j < n; ++j)
          lu[r * n + j] -= f * lu[col * n + j];
      }
    }
    return true;
  }

  // solve B z = rhs
  std::vector<double> solve(const std::vector<double>& rhs) const {
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[static_cast<std::size_t>(perm[i])];
      for (std::size_t j = 0; j < i; ++j) s -= lu[i * n + j] * z[j];
      z[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = z[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu[i * n + j] * z[j];
      z[i] = s / lu[i * n + i];
    }
    return z;
  }

  // solve B' z = rhs
  std::vector<double> solve_transposed(const std::vector<double>& rhs) const {
    std::vector<double> z(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[i];
      for (std::size_t j = 0; j < i; ++j) s -= lu[j * n + i] * t[j];
      t[i] = s / lu[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = t[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu[j * n + i] * z[j];
      z[i] = s;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(perm[i])] = z[i];
    return out;
  }
};

struct SimplexCore {
  std::size_t rows, cols_ext;
  std::vector<double> A;  // rows x cols_ext, artificials appended
  std::vector<double> b;
  std::vector<std::size_t> basis;
  std::vector<char> in_basis;
  std::vector<double> xB;
  BasisSolver solver;

  bool refactor() {
    in_basis.assign(cols_ext, 0);
    for (std::size_t i = 0; i < rows; ++i) in_basis[basis[i]] = 1;
    if (!solver.factorize(A, cols_ext, basis)) return false;
    xB = solver.solve(b);
    return true;
  }

  // one phase of simplex over columns [0, active_cols) with costs cost;
  // returns true on optimality, false on iteration limit / singularity
  bool run(const std::vector<double>& cost, std::size_t active_cols,
           std::vector<bool>& banned, int max_iter, int& iters,
           bool* unbounded) {
    *unbounded = false;
    int bland_after = std::max(2000, max_iter / 4);
    for (int it = 0; it < max_iter; ++it, ++iters) {
      std::vector<double> cB(rows);
      for (std::size_t i = 0; i < rows; ++i) cB[i] = cost[basis[i]];
      std::vector<double> y = solver.solve_transposed(cB);

      // pricing
      std::size_t enter = cols_ext;
      double best = -kCostTol;
      for (std::size_t j = 0; j < active_cols; ++j) {
        if (banned[j] || in_basis[j]) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < rows; ++i)
          d -= y[i] * A[i * cols_ext + j];
        if (it >= bland_after) {  // Bland's rule: first improving index
          if (d < -kCostTol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter == cols_ext) return true;  // optimal

      std::vector<double> col(rows);
      for (std::size_t i = 0; i < rows; ++i)
        col[i] = A[i * cols_ext + enter];
      std::vector<double> dir = solver.solve(col);

      bool bland = it >= bland_after;
      std::size_t leave = rows;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        if (dir[i] > kPivotTol) {
          double ratio = std::max(xB[i], 0.0) / dir[i];
          bool tie = leave != rows && std::abs(ratio - best_ratio) <= 1e-12;
          // Bland: smallest basis index among ties (anti-cycling);
          // otherwise prefer kicking artificials (largest index)
          bool better = leave == rows || ratio < best_ratio - 1e-12 ||
                        (tie && (bland ? basis[i] < basis[leave]
                                       : basis[i] > basis[leave]));
          if (better) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == rows) {
        *unbounded = true;
        return true;
      }
      std::size_t old = basis[leave];
      basis[leave] = enter;
      if (!refactor()) {
        // the pivot made the basis numerically singular: revert and keep
        // this column out (the caller's gap check covers the relaxation)
        basis[leave] = old;
        banned[enter] = true;
        ++singular_bans;
        if (!refactor()) return false;
      }
    }
    return false;
  }

  int singular_bans = 0;
};

}  // namespace

LpResult solve_lp(const LpProblem& lp, int max_iterations) {
  LpResult out;
  std::size_t R = lp.rows, N = lp.cols;
  if (R == 0 || N == 0) throw std::invalid_argument("solve_lp: empty problem");

  SimplexCore core;
  core.rows = R;
  core.cols_ext = N + R;
  core.A.assign(R * (N + R), 0.0);
  core.b = lp.b;
  // flip rows to make b >= 0, then append the artificial identity
  for (std::size_t r = 0; r < R; ++r) {
    double sgn = core.b[r] < 0.0 ? -1.0 : 1.0;
    core.b[r] *= sgn;
    for (std::size_t j = 0; j < N; ++j)
      core.A[r * core.cols_ext + j] = sgn * lp.at(r, j);
    core.A[r * core.cols_ext + N + r] = 1.0;
  }
  // tiny deterministic perturbation against degenerate stalling; the
  // duals of the final basis are exact for the original problem, and the
  // objective is recovered from them below
  double bnorm = 0.0;
  for (double v : core.b) bnorm = std::max(bnorm, std::abs(v));
  std::vector<double> b_orig = core.b;
  for (std::size_t r = 0; r < R; ++r)
    core.b[r] += 1e-11 * std::max(bnorm, 1.0) *
                 (1.0 + static_cast<double>(r + 1) / static_cast<double>(R));
  core.basis.resize(R);
  for (std::size_t r = 0; r < R; ++r) core.basis[r] = N + r;
  if (!core.refactor()) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  std::vector<bool> banned(core.cols_ext, false);

  // phase 1: minimize the sum of artificials
  std::vector<double> cost1(core.cols_ext, 0.0);
  for (std::size_t r = 0; r < R; ++r) cost1[N + r] = 1.0;
  bool unbounded = false;
  if (!core.run(cost1, core.cols_ext, banned, max_iterations, out.iterations,
                &unbounded)) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  double infeas = 0.0;
  for (std::size_t i = 0; i < R; ++i)
    if (core.basis[i] >= N) infeas += core.xB[i];
  if (infeas > 1e-7) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  // drive leftover artificials out where possible; ban them from phase 2
  for (std::size_t i = 0; i < R; ++i) {
    if (core.basis[i] < N) continue;
    for (std::size_t j = 0; j < N; ++j) {
      if (core.in_basis[j]) continue;
      std::vector<double> col(R);
      for (std::size_t r = 0; r < R; ++r) col[r] = core.A[r * core.cols_ext + j];
      std::vector<double> dir = core.solver.solve(col);
      if (std::abs(dir[i]) > 1e-8) {
        core.basis[i] = j;
        core.refactor();
        break;
      }
    }
  }
  for (std::size_t r = 0; r < R; ++r) banned[N + r] = true;

  // phase 2
  std::vector<double> cost2(core.cols_ext, 0.0);
  for (std::size_t j = 0; j < N; ++j) cost2[j] = lp.c[j];
  if (!core.run(cost2, core.cols_ext, banned, max_iterations, out.iterations,
                &unbounded)) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  if (unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  // re-solve the final basis against the unperturbed right-hand side
  core.b = b_orig;
  core.refactor();
  out.x.assign(N, 0.0);
  for (std::size_t i = 0; i < R; ++i)
    if (core.basis[i] < N) out.x[core.basis[i]] = std::max(core.xB[i], 0.0);
  std::vector<double> cB(R);
  for (std::size_t i = 0; i < R; ++i) cB[i] = cost2[core.basis[i]];
  std::vector<double> y = core.solver.solve_transposed(cB);
  // undo the row sign flips in the reported duals
  out.y.assign(R, 0.0);
  for (std::size_t r = 0; r < R; ++r)
    out.y[r] = lp.b[r] < 0.0 ? -y[r] : y[r];
  // exact for the final basis: c_B' B^{-1} b = y' b
  out.objective = 0.0;
  for (std::size_t r = 0; r < R; ++r) out.objective += out.y[r] * lp.b[r];
  return out;
}

}  // namespace qaw
