#pragma once

#include <string>

#include "qaw/weight.hpp"

// Weight-spec JSON schema (field names are part of the contract):
//   {"kind": "radial"|"tensor"|"affine"|"scale"|"min"|"sum"|"table", ...}
// with profile objects
//   {"family": "expdecay"|"gaussian"|"replog"|"rhoform"|"indicator"|"sampled",
//    ...}
// Numbers are IEEE-754 doubles in decimal text.

namespace qaw {

WeightExpr parse_weight_spec(const std::string& json_text);
std::string serialize_weight_spec(const WeightExpr& w);

}  // namespace qaw
