#pragma once

#include <map>
#include <utility>

#include "hig/scalar.hpp"

namespace hig {

/// Sparse polynomial in two commuting symbols with LambdaScalar
/// coefficients. The weighted degree of a monomial x^a y^b is 2a+b, the
/// grading used throughout (deg s = deg u = 2, deg t = 1).
///
/// Used both for (s,t)-representatives of valuations (a = s-exponent,
/// b = t-exponent) and for the (u,t)-polynomials of the curvature module
/// (a = u-exponent, b = t-exponent).
class Poly2 {
public:
    using Key = std::pair<int, int>;  // (a, b)

    Poly2() = default;
    explicit Poly2(const LambdaScalar& c) { add_term(0, 0, c); }
    static Poly2 monomial(int a, int b, const LambdaScalar& c) {
        Poly2 p;
        p.add_term(a, b, c);
        return p;
    }

    const std::map<Key, LambdaScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    LambdaScalar coeff(int a, int b) const {
        auto it = terms_.find({a, b});
        return it == terms_.end() ? LambdaScalar() : it->second;
    }
    /// max over monomials of 2a+b (0 when zero).
    int weighted_degree() const;

    void add_term(int a, int b, const LambdaScalar& c);

    Poly2& operator+=(const Poly2& o);
    Poly2& operator-=(const Poly2& o);
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    Poly2 operator-() const;
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    Poly2& operator*=(const Poly2& o) { return *this = *this * o; }
    Poly2 operator*(const LambdaScalar& c) const;

    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly2& a, const Poly2& b) { return !(a == b); }

    /// Drop all monomials with 2a+b > cap (cap < 0 keeps everything).
    Poly2 truncated(int wdeg_cap) const;
    /// Product with truncation applied to the result.
    static Poly2 mul(const Poly2& x, const Poly2& y, int wdeg_cap);
    Poly2 pow(int e, int wdeg_cap = -1) const;

    Poly2 derivative_a() const;  // ∂/∂(first symbol)
    Poly2 derivative_b() const;  // ∂/∂(second symbol)

private:
    std::map<Key, LambdaScalar> terms_;
};

/// (1 - λ·x)^e for rational e, expanded as a binomial series in the first
/// symbol and truncated at x^{a_max} (nilpotency order supplied by the
/// caller; in V^n one takes a_max = n since s^{n+1} = 0).
Poly2 one_minus_lambda_x_pow(const Rational& e, int a_max);

/// u as an (s,t)-polynomial: u = 4s - t²(1 - λs); flat = true sets λ = 0.
Poly2 u_in_st(bool flat);

/// Substitute u := u_in_st into a (u,t)-polynomial, yielding an
/// (s,t)-polynomial truncated at weighted degree wdeg_cap.
Poly2 tu_to_st(const Poly2& tu, bool flat, int wdeg_cap);

/// Substitute s := (u + t²)/4 into a flat (s,t)-polynomial (exact linear
/// change of variables at λ = 0), yielding a (u,t)-polynomial.
Poly2 st_to_tu_flat(const Poly2& st);

/// Substitute the first symbol by a polynomial in the second symbol
/// (s := series(t)), truncating at weighted degree wdeg_cap.
Poly2 substitute_a(const Poly2& p, const Poly2& series_in_b, int wdeg_cap);

/// The derivation-closure operators on flat (s,t)-polynomials:
///   D₁p = (t²-2s)/2·p - (tu/4)·∂p/∂t,   D₂p = -(3πut/8)·p + (πu²/8)·∂p/∂t
/// with u = 4s - t².
Poly2 d1_op(const Poly2& p);
Poly2 d2_op(const Poly2& p);

}  // namespace hig
