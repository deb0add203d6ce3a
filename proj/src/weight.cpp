#include "qaw/weight.hpp"

#include <algorithm>
#include <cmath>

#include "qaw/errors.hpp"

namespace qaw {

struct WeightExpr::Node {
  NodeVariant payload;
  std::vector<WeightExpr> children;
  int dim = 1;
  double bound = 0.0;
};

WeightExpr WeightExpr::make_node(NodeVariant payload,
                                 std::vector<WeightExpr> children, int dim,
                                 double bound) {
  auto n = std::make_shared<Node>(
      Node{std::move(payload), std::move(children), dim, bound});
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::radial(Profile1D p, int dimension) {
  if (dimension < 1) throw DimensionError("radial: dimension must be >= 1");
  double b = p.upper_bound();
  return make_node(RadialNode{std::move(p)}, {}, dimension, b);
}

WeightExpr WeightExpr::tensor(std::vector<Profile1D> factors) {
  if (factors.empty()) throw DimensionError("tensor: needs >= 1 factor");
  double b = 1.0;
  for (const auto& f : factors) b *= f.upper_bound();
  int n = static_cast<int>(factors.size());
  return make_node(TensorNode{std::move(factors)}, {}, n, b);
}

WeightExpr WeightExpr::pullback(WeightExpr inner, AffineMap A) {
  if (A.dim() != inner.dimension())
    throw DimensionError("pullback: map/weight dimension mismatch");
  // collapse nested pullbacks: pulling inner(x)=w(B^{-1}x) back by A gives
  // w(B^{-1}A^{-1}x) = w((A o B)^{-1} x)
  if (const auto* aff = std::get_if<AffineNode>(&inner.node())) {
    AffineMap composed = A.compose(aff->map);
    WeightExpr base = inner.child(0);
    double b = base.upper_bound();
    int n = base.dimension();
    return make_node(AffineNode{std::move(composed)}, {std::move(base)}, n, b);
  }
  double b = inner.upper_bound();
  int n = inner.dimension();
  return make_node(AffineNode{std::move(A)}, {std::move(inner)}, n, b);
}

WeightExpr WeightExpr::scale(double c, WeightExpr inner) {
  if (!(c >= 0.0)) throw ParameterError("scale: factor must be >= 0");
  double b = c * inner.upper_bound();
  int n = inner.dimension();
  return make_node(ScaleNode{c}, {std::move(inner)}, n, b);
}

WeightExpr WeightExpr::pointwise_min(WeightExpr lhs, WeightExpr rhs) {
  if (lhs.dimension() != rhs.dimension())
    throw DimensionError("min: dimension mismatch");
  double b = std::min(lhs.upper_bound(), rhs.upper_bound());
  int n = lhs.dimension();
  return make_node(MinNode{}, {std::move(lhs), std::move(rhs)}, n, b);
}

WeightExpr WeightExpr::sum(WeightExpr lhs, WeightExpr rhs) {
  if (lhs.dimension() != rhs.dimension())
    throw DimensionError("sum: dimension mismatch");
  // conservative certified bound: sum of component bounds
  double b = lhs.upper_bound() + rhs.upper_bound();
  int n = lhs.dimension();
  return make_node(SumNode{}, {std::move(lhs), std::move(rhs)}, n, b);
}

WeightExpr WeightExpr::table(std::vector<double> grid,
                             std::vector<double> values, Extrapolation ex) {
  Profile1D p = Profile1D::sampled(std::move(grid), std::move(values), ex);
  double b = p.upper_bound();
  return make_node(TableNode{std::move(p)}, {}, 1, b);
}

int WeightExpr::dimension() const { return node_->dim; }
double WeightExpr::upper_bound() const { return node_->bound; }

const WeightExpr::NodeVariant& WeightExpr::node() const {
  return node_->payload;
}

const WeightExpr& WeightExpr::child(std::size_t i) const {
  return node_->children.at(i);
}

std::size_t WeightExpr::child_count() const { return node_->children.size(); }

double WeightExpr::log_evaluate(const Vec& x) const {
  if (static_cast<int>(x.size()) != node_->dim)
    throw DimensionError("evaluate: point dimension mismatch");
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          return n.profile.log_value(norm2(x));
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          double s = 0.0;
          for (std::size_t j = 0; j < n.factors.size(); ++j) {
            s += n.factors[j].log_value(x[j]);
            if (is_neg_inf(s)) return kNegInf;
          }
          return s;
        } else if constexpr (std::is_same_v<T, AffineNode>) {
          return child(0).log_evaluate(n.map.apply_inverse(x));
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          if (n.c == 0.0) return kNegInf;
          return std::log(n.c) + child(0).log_evaluate(x);
        } else if constexpr (std::is_same_v<T, MinNode>) {
          return std::min(child(0).log_evaluate(x), child(1).log_evaluate(x));
        } else if constexpr (std::is_same_v<T, SumNode>) {
          return log_add_exp(child(0).log_evaluate(x),
                             child(1).log_evaluate(x));
        } else {
          return n.samples.log_value(x[0]);
        }
      },
      node_->payload);
}

std::optional<WeightExpr> WeightExpr::pow(double nu) const {
  if (!(nu > 0.0)) return std::nullopt;
  return std::visit(
      [&](const auto& n) -> std::optional<WeightExpr> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          auto p = n.profile.pow(nu);
          if (!p) return std::nullopt;
          return radial(std::move(*p), dimension());
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          std::vector<Profile1D> fs;
          for (const auto& f : n.factors) {
            auto p = f.pow(nu);
            if (!p) return std::nullopt;
            fs.push_back(std::move(*p));
          }
          return tensor(std::move(fs));
        } else if constexpr (std::is_same_v<T, AffineNode>) {
          auto inner = child(0).pow(nu);
          if (!inner) return std::nullopt;
          return pullback(std::move(*inner), n.map);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          auto inner = child(0).pow(nu);
          if (!inner) return std::nullopt;
          return scale(std::pow(n.c, nu), std::move(*inner));
        } else if constexpr (std::is_same_v<T, MinNode>) {
          auto a = child(0).pow(nu);
          auto b = child(1).pow(nu);
          if (!a || !b) return std::nullopt;
          return pointwise_min(std::move(*a), std::move(*b));
        } else if constexpr (std::is_same_v<T, SumNode>) {
          return std::nullopt;  // (w1 + w2)^nu has no structural form
        } else {
          auto p = n.samples.pow(nu);
          if (!p) return std::nullopt;
          const auto& sp = std::get<SampledParams>(p->params());
          return table(sp.grid, sp.values, sp.extrapolation);
        }
      },
      node_->payload);
}

}  // namespace qaw
