#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "qaw/affine.hpp"
#include "qaw/profile.hpp"

// Composable weight expressions w: R^n -> [0, inf), bounded. Values are
// immutable after construction; every node certifies a global upper bound
// at construction time. Evaluation is pure, so expressions are safe to
// share across threads.

namespace qaw {

class WeightExpr;

struct RadialNode {
  Profile1D profile;
};

struct TensorNode {
  std::vector<Profile1D> factors;
};

struct AffineNode {
  AffineMap map;  // w(x) = inner(map^{-1} x)
};

struct ScaleNode {
  double c = 1.0;
};

struct MinNode {};
struct SumNode {};

struct TableNode {
  Profile1D samples;  // Sampled profile, evaluated at the signed argument
};

class WeightExpr {
 public:
  using NodeVariant = std::variant<RadialNode, TensorNode, AffineNode,
                                   ScaleNode, MinNode, SumNode, TableNode>;

  /// w(x) = p(||x||) on R^n.
  static WeightExpr radial(Profile1D p, int dimension = 1);
  /// w(x) = prod_j p_j(x_j).
  static WeightExpr tensor(std::vector<Profile1D> factors);
  /// w(x) = inner(A^{-1} x), the affine action on weights.
  static WeightExpr pullback(WeightExpr inner, AffineMap A);
  static WeightExpr scale(double c, WeightExpr inner);
  static WeightExpr pointwise_min(WeightExpr lhs, WeightExpr rhs);
  static WeightExpr sum(WeightExpr lhs, WeightExpr rhs);
  /// 1D table weight; may be asymmetric.
  static WeightExpr table(std::vector<double> grid, std::vector<double> values,
                          Extrapolation ex = Extrapolation::Zero);

  int dimension() const;
  /// Certified global upper bound B with w(x) <= B everywhere.
  double upper_bound() const;

  double evaluate(const Vec& x) const { return exp_ext(log_evaluate(x)); }
  double log_evaluate(const Vec& x) const;

  /// Convenience for 1D weights.
  double evaluate1(double t) const { return evaluate(Vec{t}); }
  double log_evaluate1(double t) const { return log_evaluate(Vec{t}); }

  const NodeVariant& node() const;
  const WeightExpr& child(std::size_t i) const;  // inner / lhs=0, rhs=1
  std::size_t child_count() const;

  /// Pointwise power w^nu for nu > 0 where the structure is closed under
  /// powers (everything except Sum, and RepLog profiles with p_0 = 0).
  std::optional<WeightExpr> pow(double nu) const;

 private:
  struct Node;
  explicit WeightExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static WeightExpr make_node(NodeVariant payload,
                              std::vector<WeightExpr> children, int dim,
                              double bound);
  std::shared_ptr<const Node> node_;
};

}  // namespace qaw
