#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hig {

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator (mpq_class canonical form).
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(long num, long den) : q_(num, den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rational(const mpz_class& z) : q_(z) {}

    static Rational from_string(const std::string& num, const std::string& den = "1") {
        mpz_class n(num), d(den);
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        Rational r;
        r.q_ = mpq_class(n, d);
        r.q_.canonicalize();
        return r;
    }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { Rational r(*this); r.q_ = -r.q_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }

    Rational pow(long e) const {
        if (e < 0) {
            if (is_zero()) throw std::domain_error("Rational: 0^negative");
            Rational inv(1);
            inv /= *this;
            return inv.pow(-e);
        }
        Rational r(1), base(*this);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    double to_double() const { return q_.get_d(); }

    std::string num_string() const { return q_.get_num().get_str(); }
    std::string den_string() const { return q_.get_den().get_str(); }
    std::string str() const {
        return is_integer() ? num_string() : num_string() + "/" + den_string();
    }

private:
    mpq_class q_;
};

/// n! as an exact integer-valued rational.
Rational factorial(long n);
/// n!! with the convention (-1)!! = 1; requires n >= -1.
Rational double_factorial(long n);
/// binomial(n, k) for integer n (possibly negative upper index), k >= 0;
/// zero when k < 0.
Rational binomial(long n, long k);
/// Generalized binomial with rational upper index, k >= 0.
Rational binomial(const Rational& a, long k);

}  // namespace hig
