#include "hig/stpoly.hpp"

#include <stdexcept>

#include "hig/constants.hpp"

namespace hig {

int Poly2::weighted_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, 2 * k.first + k.second);
    return d;
}

void Poly2::add_term(int a, int b, const LambdaScalar& c) {
    if (c.is_zero()) return;
    if (a < 0 || b < 0) throw std::domain_error("Poly2: negative exponent");
    Key key{a, b};
    auto [it, fresh] = terms_.try_emplace(key, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly2& Poly2::operator+=(const Poly2& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
}

Poly2 Poly2::operator-() const {
    Poly2 r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

Poly2 operator*(const Poly2& a, const Poly2& b) { return Poly2::mul(a, b, -1); }

Poly2 Poly2::operator*(const LambdaScalar& c) const {
    Poly2 r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) r.add_term(k.first, k.second, v * c);
    return r;
}

Poly2 Poly2::truncated(int wdeg_cap) const {
    if (wdeg_cap < 0) return *this;
    Poly2 r;
    for (const auto& [k, c] : terms_)
        if (2 * k.first + k.second <= wdeg_cap) r.terms_.emplace(k, c);
    return r;
}

Poly2 Poly2::mul(const Poly2& x, const Poly2& y, int wdeg_cap) {
    Poly2 r;
    for (const auto& [ka, ca] : x.terms_)
        for (const auto& [kb, cb] : y.terms_) {
            int a = ka.first + kb.first, b = ka.second + kb.second;
            if (wdeg_cap >= 0 && 2 * a + b > wdeg_cap) continue;
            r.add_term(a, b, ca * cb);
        }
    return r;
}

Poly2 Poly2::pow(int e, int wdeg_cap) const {
    if (e < 0) throw std::domain_error("Poly2::pow: negative power");
    Poly2 r{LambdaScalar(1)};
    Poly2 base = truncated(wdeg_cap);
    while (e > 0) {
        if (e & 1) r = mul(r, base, wdeg_cap);
        base = mul(base, base, wdeg_cap);
        e >>= 1;
    }
    return r;
}

Poly2 Poly2::derivative_a() const {
    Poly2 r;
    for (const auto& [k, c] : terms_)
        if (k.first > 0) r.add_term(k.first - 1, k.second, c * LambdaScalar(Rational(k.first)));
    return r;
}

Poly2 Poly2::derivative_b() const {
    Poly2 r;
    for (const auto& [k, c] : terms_)
        if (k.second > 0) r.add_term(k.first, k.second - 1, c * LambdaScalar(Rational(k.second)));
    return r;
}

Poly2 one_minus_lambda_x_pow(const Rational& e, int a_max) {
    Poly2 r;
    for (int m = 0; m <= a_max; ++m) {
        Rational c = binomial(e, m) * Rational(-1).pow(m);
        if (!c.is_zero()) r.add_term(m, 0, LambdaScalar::lambda_power(m, Scalar(c)));
    }
    return r;
}

Poly2 u_in_st(bool flat) {
    Poly2 u = Poly2::monomial(1, 0, LambdaScalar(4));
    u.add_term(0, 2, LambdaScalar(Rational(-1)));
    if (!flat) u.add_term(1, 2, LambdaScalar::lambda_power(1, Scalar(1)));
    return u;
}

Poly2 tu_to_st(const Poly2& tu, bool flat, int wdeg_cap) {
    Poly2 u = u_in_st(flat);
    Poly2 acc;
    for (const auto& [k, c] : tu.terms()) {
        Poly2 term = u.pow(k.first, wdeg_cap);
        term = Poly2::mul(term, Poly2::monomial(0, k.second, c), wdeg_cap);
        acc += term;
    }
    return acc;
}

Poly2 st_to_tu_flat(const Poly2& st) {
    // s = (u + t²)/4
    Poly2 s = Poly2::monomial(1, 0, LambdaScalar(Rational(1, 4)));
    s.add_term(0, 2, LambdaScalar(Rational(1, 4)));
    Poly2 acc;
    for (const auto& [k, c] : st.terms()) {
        Poly2 term = s.pow(k.first);
        term = term * Poly2::monomial(0, k.second, c);
        acc += term;
    }
    return acc;
}

Poly2 substitute_a(const Poly2& p, const Poly2& series_in_b, int wdeg_cap) {
    Poly2 acc;
    for (const auto& [k, c] : p.terms()) {
        Poly2 term = series_in_b.pow(k.first, wdeg_cap);
        term = Poly2::mul(term, Poly2::monomial(0, k.second, c), wdeg_cap);
        acc += term;
    }
    return acc;
}

Poly2 d1_op(const Poly2& p) {
    // (t²-2s)/2·p - (tu/4)·∂p/∂t, u = 4s-t²
    Poly2 half_t2_minus_s = Poly2::monomial(0, 2, LambdaScalar(Rational(1, 2)));
    half_t2_minus_s.add_term(1, 0, LambdaScalar(Rational(-1)));
    Poly2 tu4 = Poly2::monomial(1, 1, LambdaScalar(1));  // st
    tu4.add_term(0, 3, LambdaScalar(Rational(-1, 4)));   // -t³/4
    return half_t2_minus_s * p - tu4 * p.derivative_b();
}

Poly2 d2_op(const Poly2& p) {
    // -(3πut/8)·p + (πu²/8)·∂p/∂t, u = 4s-t²
    Poly2 u = u_in_st(true);
    LambdaScalar pi38 = LambdaScalar(Scalar::pi_power(1, Rational(-3, 8)));
    LambdaScalar pi18 = LambdaScalar(Scalar::pi_power(1, Rational(1, 8)));
    Poly2 ut = u * Poly2::monomial(0, 1, LambdaScalar(1));
    return ut * p * pi38 + (u * u) * p.derivative_b() * pi18;
}

}  // namespace hig
