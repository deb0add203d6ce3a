#pragma once

#include <cstddef>
#include <vector>

// Dense two-phase revised simplex for standard-form linear programs
//   min c'x  s.t.  A x = b,  x >= 0,
// sized for the discretized minimax problems of the approximation lab
// (few dozen rows, a few thousand columns).

namespace qaw {

struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> A;  // row-major rows x cols
  std::vector<double> b;  // rows
  std::vector<double> c;  // cols

  double& at(std::size_t r, std::size_t col) { return A[r * cols + col]; }
  double at(std::size_t r, std::size_t col) const { return A[r * cols + col]; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;  // primal solution
  std::vector<double> y;  // dual multipliers of the equality rows
  double objective = 0.0;
  int iterations = 0;
};

LpResult solve_lp(const LpProblem& lp, int max_iterations = 50000);

}  // namespace qaw
