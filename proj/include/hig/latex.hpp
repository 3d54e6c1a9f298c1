#pragma once

#include <string>

#include "hig/curvature.hpp"
#include "hig/tube.hpp"
#include "hig/valuation.hpp"

namespace hig {

/// Exact coefficients as LaTeX: rationals fold π-powers into the fraction
/// (16/(15π) prints as \frac{16}{15\pi}); λ stays symbolic.
std::string latex_scalar(const Scalar& s);
std::string latex_lambda_scalar(const LambdaScalar& c);

std::string latex_val_element(const ValElement& v);
std::string latex_curv_element(const CurvElement& c);
/// One aligned display, terms ordered by index.
std::string latex_val_tensor(const ValTensor& t);
std::string latex_curv_tensor(const CurvTensor& t);

/// CLI-facing CSV for tube outputs: rows
/// (k, q | chern j, coefficient, sn-exp, cs-exp, integral-atom).
std::string csv_val_trig(const ValTrigMap& m, bool numeric, const Rational& lambda, double r);
std::string csv_curv_trig(const CurvTrigMap& m, bool numeric, const Rational& lambda, double r);
std::string csv_chern_trig(const std::map<int, TrigPoly>& m, bool numeric,
                           const Rational& lambda, double r);

}  // namespace hig
