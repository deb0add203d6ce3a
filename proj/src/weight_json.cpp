#include "qaw/weight_json.hpp"

#include <json.hpp>

#include "qaw/errors.hpp"

namespace qaw {

using nlohmann::json;

namespace {

double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("weight spec: missing numeric field '") +
                     key + "'");
  return j[key].get<double>();
}

std::vector<double> get_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ParseError(std::string("weight spec: missing array field '") + key +
                     "'");
  std::vector<double> v;
  for (const auto& e : j[key]) {
    if (!e.is_number())
      throw ParseError(std::string("weight spec: non-numeric entry in '") +
                       key + "'");
    v.push_back(e.get<double>());
  }
  return v;
}

Extrapolation parse_extrapolation(const json& j) {
  std::string s = j.value("extrapolation", "zero");
  if (s == "zero") return Extrapolation::Zero;
  if (s == "lastvalue") return Extrapolation::LastValue;
  throw ParseError("weight spec: unknown extrapolation '" + s + "'");
}

Profile1D parse_profile(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw ParseError("weight spec: profile must carry a 'family' string");
  std::string family = j["family"].get<std::string>();
  try {
    if (family == "expdecay")
      return Profile1D::exp_decay(get_number(j, "C"), get_number(j, "eps"));
    if (family == "gaussian")
      return Profile1D::gaussian(get_number(j, "C"), get_number(j, "sigma"));
    if (family == "replog") {
      std::optional<int> order;
      if (j.contains("order")) order = j["order"].get<int>();
      return Profile1D::rep_log(get_number(j, "C"), get_array(j, "a"),
                                get_array(j, "p"), order);
    }
    if (family == "rhoform")
      return Profile1D::rho_form(get_number(j, "wR"), get_number(j, "R"),
                                 get_array(j, "grid"), get_array(j, "rho"));
    if (family == "indicator")
      return Profile1D::indicator(get_number(j, "radius"));
    if (family == "sampled")
      return Profile1D::sampled(get_array(j, "grid"), get_array(j, "values"),
                                parse_extrapolation(j));
  } catch (const ParameterError& e) {
    throw ParseError(std::string("weight spec: ") + e.what());
  }
  throw ParseError("weight spec: unknown profile family '" + family + "'");
}

WeightExpr parse_expr(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("weight spec: node must carry a 'kind' string");
  std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "radial") {
      int dim = j.value("dimension", 1);
      return WeightExpr::radial(parse_profile(j.at("profile")), dim);
    }
    if (kind == "tensor") {
      if (!j.contains("factors") || !j["factors"].is_array())
        throw ParseError("weight spec: tensor needs 'factors' array");
      std::vector<Profile1D> fs;
      for (const auto& f : j["factors"]) fs.push_back(parse_profile(f));
      return WeightExpr::tensor(std::move(fs));
    }
    if (kind == "affine") {
      if (!j.contains("linear") || !j["linear"].is_array())
        throw ParseError("weight spec: affine needs 'linear' matrix");
      std::vector<Vec> rows;
      for (const auto& r : j["linear"]) {
        Vec row;
        for (const auto& e : r) row.push_back(e.get<double>());
        rows.push_back(std::move(row));
      }
      Vec trans = get_array(j, "translation");
      AffineMap map(Mat::from_rows(rows), std::move(trans));
      return WeightExpr::pullback(parse_expr(j.at("inner")), std::move(map));
    }
    if (kind == "scale")
      return WeightExpr::scale(get_number(j, "c"), parse_expr(j.at("inner")));
    if (kind == "min")
      return WeightExpr::pointwise_min(parse_expr(j.at("lhs")),
                                       parse_expr(j.at("rhs")));
    if (kind == "sum")
      return WeightExpr::sum(parse_expr(j.at("lhs")), parse_expr(j.at("rhs")));
    if (kind == "table")
      return WeightExpr::table(get_array(j, "grid"), get_array(j, "values"),
                               parse_extrapolation(j));
  } catch (const json::exception& e) {
    throw ParseError(std::string("weight spec: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string("weight spec: ") + e.what());
  } catch (const SingularMapError& e) {
    throw ParseError(std::string("weight spec: ") + e.what());
  }
  throw ParseError("weight spec: unknown kind '" + kind + "'");
}

json profile_to_json(const Profile1D& p) {
  json j;
  std::visit(
      [&](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, ExpDecayParams>) {
          j = {{"family", "expdecay"}, {"C", q.C}, {"eps", q.eps}};
        } else if constexpr (std::is_same_v<T, GaussianParams>) {
          j = {{"family", "gaussian"}, {"C", q.C}, {"sigma", q.sigma}};
        } else if constexpr (std::is_same_v<T, RepLogParams>) {
          j = {{"family", "replog"},
               {"C", q.C},
               {"a", q.a},
               {"p", q.p},
               {"order", q.order}};
        } else if constexpr (std::is_same_v<T, RhoFormParams>) {
          j = {{"family", "rhoform"},
               {"wR", q.wR},
               {"R", q.R},
               {"grid", q.grid},
               {"rho", q.rho}};
        } else if constexpr (std::is_same_v<T, IndicatorParams>) {
          j = {{"family", "indicator"}, {"radius", q.radius}};
        } else {
          j = {{"family", "sampled"},
               {"grid", q.grid},
               {"values", q.values},
               {"extrapolation", q.extrapolation == Extrapolation::Zero
                                     ? "zero"
                                     : "lastvalue"}};
        }
      },
      p.params());
  return j;
}

json expr_to_json(const WeightExpr& w) {
  json j;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RadialNode>) {
          j = {{"kind", "radial"},
               {"dimension", w.dimension()},
               {"profile", profile_to_json(n.profile)}};
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          json fs = json::array();
          for (const auto& f : n.factors) fs.push_back(profile_to_json(f));
          j = {{"kind", "tensor"}, {"factors", fs}};
        } else if constexpr (std::is_same_v<T, AffineNode>) {
          json rows = json::array();
          int d = n.map.dim();
          for (int r = 0; r < d; ++r) {
            json row = json::array();
            for (int c = 0; c < d; ++c) row.push_back(n.map.linear.at(r, c));
            rows.push_back(row);
          }
          j = {{"kind", "affine"},
               {"linear", rows},
               {"translation", n.map.translation},
               {"inner", expr_to_json(w.child(0))}};
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          j = {{"kind", "scale"}, {"c", n.c}, {"inner", expr_to_json(w.child(0))}};
        } else if constexpr (std::is_same_v<T, MinNode>) {
          j = {{"kind", "min"},
               {"lhs", expr_to_json(w.child(0))},
               {"rhs", expr_to_json(w.child(1))}};
        } else if constexpr (std::is_same_v<T, SumNode>) {
          j = {{"kind", "sum"},
               {"lhs", expr_to_json(w.child(0))},
               {"rhs", expr_to_json(w.child(1))}};
        } else {
          const auto& sp = std::get<SampledParams>(n.samples.params());
          j = {{"kind", "table"},
               {"grid", sp.grid},
               {"values", sp.values},
               {"extrapolation", sp.extrapolation == Extrapolation::Zero
                                     ? "zero"
                                     : "lastvalue"}};
        }
      },
      w.node());
  return j;
}

}  // namespace

WeightExpr parse_weight_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("weight spec: invalid JSON: ") + e.what());
  }
  return parse_expr(j);
}

std::string serialize_weight_spec(const WeightExpr& w) {
  return expr_to_json(w).dump(2);
}

}  // namespace qaw
