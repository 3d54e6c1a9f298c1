#include "hig/tube.hpp"

namespace hig {

void add_to(ValTrigMap& m, const ValIndex& i, const TrigPoly& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = m.try_emplace(i, p);
    if (!fresh) {
        it->second += p;
        if (it->second.is_zero()) m.erase(it);
    }
}

void add_to(CurvTrigMap& m, const CurvIndex& i, const TrigPoly& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = m.try_emplace(i, p);
    if (!fresh) {
        it->second += p;
        if (it->second.is_zero()) m.erase(it);
    }
}

ValTrigMap differentiate(const ValTrigMap& m) {
    ValTrigMap out;
    for (const auto& [i, p] : m) add_to(out, i, p.differentiate());
    return out;
}

ValTrigMap global_tube(int n) {
    if (n < 1) throw std::domain_error("global_tube: n >= 1 required");
    Space sp = Space::curved(n);
    ValTrigMap out;
    for (const auto& idx : mu_indices(sp))
        add_to(out, idx,
               TrigPoly::monomial(2 * n - idx.k, idx.k, LambdaScalar(omega(2 * n - idx.k))));
    return out;
}

ValTrigMap kinematic_chi_on_ball(int n) {
    Space sp = Space::curved(n);
    ValTensor T = kinematic_chi(sp);
    ValTrigMap out;
    for (const auto& [key, c] : T.terms) {
        ValElement second = ValElement::basis_element(sp, ValBasis::Mu, key.second.k, key.second.q);
        add_to(out, key.first, eval_on_ball(second).scaled(c));
    }
    return out;
}

CurvTrigMap local_tube(int n) {
    if (n < 1) throw std::domain_error("local_tube: n >= 1 required");
    CurvTrigMap out;
    add_to(out, CurvIndex{CurvFamily::Delta, 2 * n, n}, TrigPoly(LambdaScalar(1)));
    {
        // k = 0: δμ^λ_0 = -λ·ω_{2n-1}/ω_{2n}·B_{1,0} (μ^λ_0 = μ^λ_{0,0} is
        // not the Euler characteristic once λ ≠ 0)
        LambdaScalar c = LambdaScalar::lambda_power(1, -omega(2 * n - 1));
        TrigPoly atom = TrigPoly::integral(2 * n, 0, LambdaScalar(1));
        add_to(out, CurvIndex{CurvFamily::Delta, 1, 0}, atom.scaled(c));
        if (valid_curv_index(n, {CurvFamily::N, 1, 0}))
            add_to(out, CurvIndex{CurvFamily::N, 1, 0}, atom.scaled(-c));
    }
    for (int k = 1; k <= 2 * n; ++k) {
        CurvElement var = first_variation_mu(n, k).scaled(LambdaScalar(omega(2 * n - k)));
        TrigPoly atom = TrigPoly::integral(2 * n - k, k, LambdaScalar(1));
        for (const auto& [idx, c] : var.coords()) add_to(out, idx, atom.scaled(c));
    }
    return out;
}

ValTrigMap globalize_trig(int n, const CurvTrigMap& m, Mode mode) {
    ValTrigMap out;
    for (const auto& [idx, p] : m) {
        CurvElement e(n, idx.family == CurvFamily::Delta || idx.family == CurvFamily::N
                             ? CurvBasis::DeltaN
                             : CurvBasis::BGamma);
        e.add_term(idx, LambdaScalar(1));
        ValElement g = globalize(e, mode);
        for (const auto& [vi, c] : g.coords()) add_to(out, vi, p.scaled(c));
    }
    return out;
}

std::map<int, TrigPoly> complex_tube(int n) {
    std::map<int, TrigPoly> out;
    for (int j = 0; j <= n; ++j) {
        TrigPoly acc;
        for (int k = 0; k <= j; ++k) {
            Scalar w = omega(2 * n - 2 * k) *
                       Scalar::pi_power(-(j - k), binomial(long(j), long(k)) *
                                                      Rational(-1).pow(j - k) / factorial(k));
            acc += TrigPoly::monomial(2 * n - 2 * k, 2 * k, LambdaScalar::lambda_power(j - k, w));
        }
        if (!acc.is_zero()) out[j] = acc;
    }
    return out;
}

TrigPoly cpm_tube(int m, int n) {
    if (m < 0 || m > n) throw std::domain_error("cpm_tube: 0 <= m <= n required");
    TrigPoly out;
    for (int k = 0; k <= m; ++k)
        out += TrigPoly::monomial(
            2 * n - 2 * k, 2 * k,
            LambdaScalar::lambda_power(-k, Scalar::pi_power(n, binomial(long(n), long(k)) /
                                                                   factorial(n))));
    return out;
}

namespace {

/// s = t²/(4+λt²) = (t²/4)(1+λt²/4)^{-1} as a truncated series in t.
Poly2 totally_real_s_series(int n) {
    Poly2 out;
    for (int j = 0; 2 * j + 2 <= 2 * n; ++j) {
        Rational c = Rational(-1).pow(j) / Rational(4).pow(j + 1);
        out.add_term(0, 2 * j + 2, LambdaScalar::lambda_power(j, Scalar(c)));
    }
    return out;
}

}  // namespace

Poly2 totally_real_residual(int n, int k) {
    if (k < 0 || k > n) throw std::domain_error("totally_real_residual: 0 <= k <= n required");
    Space sp = Space::curved(n);
    Poly2 rep;
    for (int q = std::max(0, k - n); 2 * q <= k; ++q) rep += mu_to_st_rep(sp, {k, q});
    Poly2 lhs = substitute_a(rep, totally_real_s_series(n), 2 * n);
    // (π^k/(k!ω_k))·t^k·(1+λt²/4)^{-k/2-1}
    Scalar pref = Scalar::pi_power(k, Rational(1) / factorial(k)) / omega(k);
    Poly2 rhs;
    for (int m = 0; k + 2 * m <= 2 * n; ++m) {
        Rational c = binomial(Rational(-(k + 2), 2), m) / Rational(4).pow(m);
        rhs.add_term(0, k + 2 * m, LambdaScalar::lambda_power(m, pref * Scalar(c)));
    }
    return lhs - rhs;
}

Poly2 totally_real_u_image(int n) {
    return substitute_a(u_in_st(false), totally_real_s_series(n), 2 * n);
}

}  // namespace hig
