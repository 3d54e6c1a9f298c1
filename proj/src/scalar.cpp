#include "hig/scalar.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hig {

double Scalar::to_double() const {
    double acc = 0.0;
    for (const auto& [e, r] : p_.terms()) acc += r.to_double() * std::pow(std::numbers::pi, e);
    return acc;
}

std::string Scalar::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, r] : p_.terms()) {
        if (!first) os << (r.sign() >= 0 ? " + " : " - ");
        else if (r.sign() < 0) os << "-";
        first = false;
        Rational a = r.sign() < 0 ? -r : r;
        bool need_coeff = !(a.is_one() && e != 0);
        if (need_coeff) os << a.str();
        if (e != 0) {
            if (need_coeff) os << "*";
            os << "pi";
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

Scalar LambdaScalar::specialize(const Rational& value) const {
    if (value.is_zero() && !is_polynomial())
        throw std::domain_error("LambdaScalar::specialize: lambda=0 on a Laurent element");
    Scalar acc;
    for (const auto& [e, c] : p_.terms()) acc += Scalar(value.pow(e)) * c;
    return acc;
}

double LambdaScalar::to_double(const Rational& lambda_value) const {
    return specialize(lambda_value).to_double();
}

std::string LambdaScalar::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : p_.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (e != 0) {
            os << "*lambda";
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

}  // namespace hig
