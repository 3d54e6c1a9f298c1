#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>

#include "hig/scalar.hpp"

namespace hig {

/// ∫₀^r sn_λ^a(ρ) cs_λ^b(ρ) dρ, kept opaque: it differentiates to
/// sn^a cs^b and is never antidifferentiated.
struct IntegralAtom {
    int sn_exp = 0;
    int cs_exp = 0;
    auto operator<=>(const IntegralAtom&) const = default;
};

struct TrigKey {
    int sn_exp = 0;
    int cs_exp = 0;  // 0 or 1 in canonical form
    std::optional<IntegralAtom> atom;
    auto operator<=>(const TrigKey&) const = default;
};

/// Exact polynomial in the formal symbols sn = sn_λ(r), cs = cs_λ(r)
/// (and at most one IntegralAtom factor per term) over ℚ[π^{±1}][λ].
/// Canonical form keeps cs-exponents ≤ 1 via cs² = 1 − λ·sn².
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(const LambdaScalar& c) { add_term(0, 0, std::nullopt, c); }

    static TrigPoly monomial(int sn_exp, int cs_exp, const LambdaScalar& c) {
        TrigPoly p;
        p.add_term(sn_exp, cs_exp, std::nullopt, c);
        return p;
    }
    static TrigPoly integral(int sn_exp, int cs_exp, const LambdaScalar& c) {
        TrigPoly p;
        p.add_term(0, 0, IntegralAtom{sn_exp, cs_exp}, c);
        return p;
    }

    const std::map<TrigKey, LambdaScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool has_atoms() const;

    /// Adds c·sn^a cs^b·[atom], reducing cs-powers ≥ 2 on the way in.
    void add_term(int sn_exp, int cs_exp, std::optional<IntegralAtom> atom,
                  const LambdaScalar& c);

    TrigPoly& operator+=(const TrigPoly& o);
    TrigPoly& operator-=(const TrigPoly& o);
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    TrigPoly operator-() const;

    /// Products where both factors carry integral atoms are outside the ring
    /// (a term holds at most one atom) and throw.
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
    TrigPoly& operator*=(const TrigPoly& o) { return *this = *this * o; }

    friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const TrigPoly& a, const TrigPoly& b) { return !(a == b); }

    TrigPoly scaled(const LambdaScalar& c) const;

    /// Formal d/dr: sn' = cs, cs' = -λ·sn, atom' = its integrand.
    TrigPoly differentiate() const;

    /// Numeric shadow at rational λ and radius r; integral atoms are
    /// integrated with adaptive Simpson.
    double evaluate(const Rational& lambda, double r) const;

    std::string str() const;

private:
    std::map<TrigKey, LambdaScalar> terms_;
};

/// Canonicalization entry point; idempotent (the representation is already
/// canonical, so this is the identity on well-formed values).
TrigPoly trig_reduce(const TrigPoly& p);

inline TrigPoly trig_differentiate(const TrigPoly& p) { return p.differentiate(); }

/// sn_λ(r), cs_λ(r) as plain doubles.
double sn_value(const Rational& lambda, double r);
double cs_value(const Rational& lambda, double r);

}  // namespace hig
