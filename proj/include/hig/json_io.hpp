#pragma once

#include <json.hpp>

#include "hig/curvature.hpp"
#include "hig/trig.hpp"
#include "hig/tube.hpp"
#include "hig/valuation.hpp"

namespace hig {

using json = nlohmann::json;

/// Canonical encoding: array of {"lambda","pi","num","den"} ordered by
/// (lambda, pi) ascending.
json to_json(const LambdaScalar& c);
LambdaScalar lambda_scalar_from_json(const json& j);

json to_json(const ValElement& v);
ValElement val_element_from_json(const json& j);

json to_json(const CurvElement& c);
CurvElement curv_element_from_json(const json& j);

json to_json(const ValTensor& t);
ValTensor val_tensor_from_json(const json& j);
json to_json(const CurvTensor& t);
CurvTensor curv_tensor_from_json(const json& j);
json to_json(const SemiLocalTensor& t);

json to_json(const TrigPoly& p);
TrigPoly trig_poly_from_json(const json& j);
json to_json(const ValTrigMap& m);
json to_json(const CurvTrigMap& m);
json to_json(const std::map<int, TrigPoly>& m);
json to_json(const std::map<int, LambdaScalar>& m);
json to_json(const ChernTensor& t);

std::string family_name(CurvFamily f);
CurvFamily family_from_name(const std::string& s);

}  // namespace hig
