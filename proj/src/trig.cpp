#include "hig/trig.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "hig/constants.hpp"

namespace hig {

bool TrigPoly::has_atoms() const {
    for (const auto& [k, c] : terms_)
        if (k.atom) return true;
    return false;
}

void TrigPoly::add_term(int sn_exp, int cs_exp, std::optional<IntegralAtom> atom,
                        const LambdaScalar& c) {
    if (c.is_zero()) return;
    if (sn_exp < 0 || cs_exp < 0) throw std::domain_error("TrigPoly: negative exponent");
    if (cs_exp >= 2) {
        // cs^{2m+r} = (1 - λ sn²)^m cs^r
        int m = cs_exp / 2, r = cs_exp % 2;
        for (int j = 0; j <= m; ++j) {
            LambdaScalar cj = c * LambdaScalar::lambda_power(j, Scalar(binomial(long(m), long(j)) *
                                                                      Rational(-1).pow(j)));
            add_term(sn_exp + 2 * j, r, atom, cj);
        }
        return;
    }
    TrigKey key{sn_exp, cs_exp, atom};
    auto [it, fresh] = terms_.try_emplace(key, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.sn_exp, k.cs_exp, k.atom, c);
    return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.sn_exp, k.cs_exp, k.atom, -c);
    return *this;
}

TrigPoly TrigPoly::operator-() const {
    TrigPoly r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            std::optional<IntegralAtom> atom;
            if (ka.atom && kb.atom)
                throw std::domain_error("TrigPoly: product of two integral atoms");
            atom = ka.atom ? ka.atom : kb.atom;
            r.add_term(ka.sn_exp + kb.sn_exp, ka.cs_exp + kb.cs_exp, atom, ca * cb);
        }
    return r;
}

TrigPoly TrigPoly::scaled(const LambdaScalar& c) const {
    TrigPoly r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) r.add_term(k.sn_exp, k.cs_exp, k.atom, v * c);
    return r;
}

TrigPoly TrigPoly::differentiate() const {
    TrigPoly r;
    for (const auto& [k, c] : terms_) {
        // product rule over sn^a cs^b [atom]
        if (k.sn_exp > 0)
            r.add_term(k.sn_exp - 1, k.cs_exp + 1, k.atom, c * LambdaScalar(Rational(k.sn_exp)));
        if (k.cs_exp > 0)
            r.add_term(k.sn_exp + 1, k.cs_exp - 1, k.atom,
                       c * LambdaScalar::lambda_power(1, Scalar(Rational(-k.cs_exp))));
        if (k.atom) r.add_term(k.sn_exp + k.atom->sn_exp, k.cs_exp + k.atom->cs_exp,
                               std::nullopt, c);
    }
    return r;
}

TrigPoly trig_reduce(const TrigPoly& p) {
    TrigPoly r;
    for (const auto& [k, c] : p.terms()) r.add_term(k.sn_exp, k.cs_exp, k.atom, c);
    return r;
}

double sn_value(const Rational& lambda, double r) {
    double l = lambda.to_double();
    if (l > 0) return std::sin(std::sqrt(l) * r) / std::sqrt(l);
    if (l < 0) return std::sinh(std::sqrt(-l) * r) / std::sqrt(-l);
    return r;
}

double cs_value(const Rational& lambda, double r) {
    double l = lambda.to_double();
    if (l > 0) return std::cos(std::sqrt(l) * r);
    if (l < 0) return std::cosh(std::sqrt(-l) * r);
    return 1.0;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int depth,
               double fa, double fm, double fb) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 1e-14 * (1 + std::fabs(whole)))
        return left + right;
    return simpson(f, a, m, depth - 1, fa, flm, fm) + simpson(f, m, b, depth - 1, fm, frm, fb);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    double m = 0.5 * (a + b);
    return simpson(f, a, b, 24, f(a), f(m), f(b));
}

}  // namespace

double TrigPoly::evaluate(const Rational& lambda, double r) const {
    double acc = 0.0;
    for (const auto& [k, c] : terms_) {
        double v = c.to_double(lambda) * std::pow(sn_value(lambda, r), k.sn_exp) *
                   std::pow(cs_value(lambda, r), k.cs_exp);
        if (k.atom) {
            auto f = [&](double rho) {
                return std::pow(sn_value(lambda, rho), k.atom->sn_exp) *
                       std::pow(cs_value(lambda, rho), k.atom->cs_exp);
            };
            v *= integrate(f, 0.0, r);
        }
        acc += v;
    }
    return acc;
}

std::string TrigPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (k.sn_exp) os << "*sn^" << k.sn_exp;
        if (k.cs_exp) os << "*cs^" << k.cs_exp;
        if (k.atom) os << "*I(" << k.atom->sn_exp << "," << k.atom->cs_exp << ")";
    }
    return os.str();
}

}  // namespace hig
