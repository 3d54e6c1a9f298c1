#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "hig/rational.hpp"

namespace hig {

/// Sparse Laurent polynomial in one formal symbol, exponents in ℤ.
/// Coeff must provide is_zero(), +=, *, unary -, ==.
/// Zero coefficients are never stored.
template <class Coeff>
class Laurent {
public:
    using Terms = std::map<int, Coeff>;

    Laurent() = default;
    explicit Laurent(Coeff c) {
        if (!c.is_zero()) terms_[0] = std::move(c);
    }
    static Laurent monomial(int exp, Coeff c) {
        Laurent p;
        if (!c.is_zero()) p.terms_[exp] = std::move(c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// True when no negative exponent occurs (the "polynomial" predicate).
    bool is_polynomial() const {
        return terms_.empty() || terms_.begin()->first >= 0;
    }
    int min_exp() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_exp() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    Coeff coeff(int exp) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Coeff() : it->second;
    }

    void add_term(int exp, const Coeff& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(exp, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Laurent& operator+=(const Laurent& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    Laurent operator-() const {
        Laurent r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    /// Multiply by the monomial sym^exp * c.
    Laurent shifted(int exp, const Coeff& c) const {
        Laurent r;
        for (const auto& [e, k] : terms_) r.add_term(e + exp, k * c);
        return r;
    }

    Laurent pow(int e) const {
        if (e < 0) throw std::domain_error("Laurent::pow: negative power");
        Laurent r{Coeff(1)};
        Laurent base(*this);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    /// Substitute sym := value (Coeff must support pow with negative
    /// exponents when Laurent support is present).
    template <class F>
    Coeff evaluate(F&& value_pow) const {
        Coeff acc;
        for (const auto& [e, c] : terms_) acc += c * value_pow(e);
        return acc;
    }

private:
    Terms terms_;
};

/// Exact element of ℚ[π^{±1}]: finite sum of rational·π^m.
class Scalar {
public:
    Scalar() = default;
    Scalar(long n) : p_(Laurent<Rational>::monomial(0, Rational(n))) {}
    Scalar(const Rational& r) : p_(Laurent<Rational>::monomial(0, r)) {}
    static Scalar pi_power(int m, const Rational& r = Rational(1)) {
        Scalar s;
        s.p_ = Laurent<Rational>::monomial(m, r);
        return s;
    }

    const std::map<int, Rational>& terms() const { return p_.terms(); }
    bool is_zero() const { return p_.is_zero(); }
    Rational coeff(int pi_exp) const { return p_.coeff(pi_exp); }

    Scalar& operator+=(const Scalar& o) { p_ += o.p_; return *this; }
    Scalar& operator-=(const Scalar& o) { p_ -= o.p_; return *this; }
    Scalar& operator*=(const Scalar& o) { p_ *= o.p_; return *this; }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    Scalar operator-() const { Scalar s; s.p_ = -p_; return s; }

    /// Division by a single-term scalar r·π^m (all we ever need: the
    /// coefficient ring is ℚ[π^{±1}], not a field).
    Scalar& operator/=(const Scalar& o) {
        if (o.p_.terms().size() != 1)
            throw std::domain_error("Scalar: division only by monomials r*pi^m");
        const auto& [e, r] = *o.p_.terms().begin();
        Scalar res;
        for (const auto& [me, mc] : p_.terms()) res.p_.add_term(me - e, mc / r);
        p_ = res.p_;
        return *this;
    }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    double to_double() const;
    std::string str() const;

private:
    Laurent<Rational> p_;
};

inline Scalar operator*(const Rational& r, const Scalar& s) { return Scalar(r) * s; }

/// Finite Laurent polynomial in the curvature λ with Scalar coefficients.
/// Library-internal elements are polynomial in λ; template evaluations on
/// ℂP^m may carry λ^{-k}.
class LambdaScalar {
public:
    LambdaScalar() = default;
    LambdaScalar(long n) : p_(Laurent<Scalar>::monomial(0, Scalar(n))) {}
    LambdaScalar(const Rational& r) : p_(Laurent<Scalar>::monomial(0, Scalar(r))) {}
    LambdaScalar(const Scalar& s) : p_(Laurent<Scalar>::monomial(0, s)) {}
    static LambdaScalar lambda_power(int m, const Scalar& s = Scalar(1)) {
        LambdaScalar l;
        l.p_ = Laurent<Scalar>::monomial(m, s);
        return l;
    }

    const std::map<int, Scalar>& terms() const { return p_.terms(); }
    bool is_zero() const { return p_.is_zero(); }
    bool is_polynomial() const { return p_.is_polynomial(); }
    int min_lambda_exp() const { return p_.min_exp(); }
    int max_lambda_exp() const { return p_.max_exp(); }
    Scalar coeff(int lambda_exp) const { return p_.coeff(lambda_exp); }

    LambdaScalar& operator+=(const LambdaScalar& o) { p_ += o.p_; return *this; }
    LambdaScalar& operator-=(const LambdaScalar& o) { p_ -= o.p_; return *this; }
    LambdaScalar& operator*=(const LambdaScalar& o) { p_ *= o.p_; return *this; }
    friend LambdaScalar operator+(LambdaScalar a, const LambdaScalar& b) { return a += b; }
    friend LambdaScalar operator-(LambdaScalar a, const LambdaScalar& b) { return a -= b; }
    friend LambdaScalar operator*(LambdaScalar a, const LambdaScalar& b) { return a *= b; }
    LambdaScalar operator-() const { LambdaScalar l; l.p_ = -p_; return l; }

    LambdaScalar& operator/=(const Scalar& s) {
        LambdaScalar res;
        for (const auto& [e, c] : p_.terms()) res.p_.add_term(e, c / s);
        p_ = res.p_;
        return *this;
    }
    friend LambdaScalar operator/(LambdaScalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const LambdaScalar& a, const LambdaScalar& b) { return a.p_ == b.p_; }
    friend bool operator!=(const LambdaScalar& a, const LambdaScalar& b) { return !(a == b); }

    /// The homomorphism λ := value. Requires a polynomial element when
    /// value = 0.
    Scalar specialize(const Rational& value) const;

    double to_double(const Rational& lambda_value) const;
    std::string str() const;

private:
    Laurent<Scalar> p_;
};

inline LambdaScalar operator*(const Scalar& s, const LambdaScalar& l) {
    return LambdaScalar(s) * l;
}

}  // namespace hig
