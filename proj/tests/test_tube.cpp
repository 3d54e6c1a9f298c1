#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hig/tube.hpp"

using namespace hig;

namespace {

LambdaScalar lam(long num, long den = 1) { return LambdaScalar(Rational(num, den)); }

bool maps_equal(const ValTrigMap& a, const ValTrigMap& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [i, p] : a) {
        auto it = b.find(i);
        if (it == b.end() || !(it->second == p)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("global tube formula structure") {
    for (int n : {1, 2, 3}) {
        ValTrigMap tube = global_tube(n);
        // χ coefficient is ω_{2n}·sn^{2n}
        CHECK(tube.at({0, 0}) == TrigPoly::monomial(2 * n, 0, LambdaScalar(omega(2 * n))));
        TrigPoly vol_coeff = tube.at({2 * n, n});
        CHECK(!vol_coeff.is_zero());
    }
}

TEST_CASE("kinematic formula against balls reproduces the tube formula") {
    for (int n : {1, 2, 3}) {
        CHECK(maps_equal(kinematic_chi_on_ball(n), global_tube(n)));
    }
}

TEST_CASE("local tube formula: T_0 = vol and the first-variation route") {
    for (int n : {1, 2, 3}) {
        CurvTrigMap T = local_tube(n);
        // the only atom-free term is vol with coefficient 1
        for (const auto& [idx, p] : T) {
            for (const auto& [key, c] : p.terms()) {
                if (!key.atom) {
                    CHECK(idx == CurvIndex{CurvFamily::Delta, 2 * n, n});
                    CHECK(key.sn_exp == 0);
                    CHECK(key.cs_exp == 0);
                    CHECK(c == lam(1));
                }
            }
        }
        // d/dr of glob_λ(T_r) equals d/dr of the global tube formula
        ValTrigMap lhs = differentiate(globalize_trig(n, T, Mode::Curved));
        ValTrigMap rhs = differentiate(global_tube(n));
        CHECK(maps_equal(lhs, rhs));
    }
}

TEST_CASE("local tube numeric shadow at lambda = 0") {
    // at λ=0 the tube coefficients integrate to ω_{2n-k}·r^{2n-k}
    for (int n : {1, 2}) {
        ValTrigMap glob = globalize_trig(n, local_tube(n), Mode::Curved);
        ValTrigMap tube = global_tube(n);
        for (double r : {0.5, 1.0}) {
            for (const auto& [idx, p] : tube) {
                double expect = p.evaluate(Rational(0), r);
                double got = glob.count(idx) ? glob.at(idx).evaluate(Rational(0), r) : 0.0;
                CHECK(std::fabs(got - expect) <= 1e-10 * (1.0 + std::fabs(expect)));
            }
        }
    }
}

TEST_CASE("complex tube formula") {
    for (int n : {1, 2, 3}) {
        auto ctube = complex_tube(n);
        // globalized complex tube = global tube composed with the projection
        // r_λ(μ^λ_{2q,q}) = (1/q!)Σ_k binom(k,q)(-λ/π)^{k-q}·Ch_k, μ_{kq} ↦ 0
        std::map<int, TrigPoly> projected;
        ValTrigMap tube = global_tube(n);
        for (const auto& [idx, p] : tube) {
            if (idx.k != 2 * idx.q) continue;
            const int q = idx.q;
            for (int k = q; k <= n; ++k) {
                Rational c = binomial(long(k), long(q)) * Rational(-1).pow(k - q) / factorial(q);
                LambdaScalar w = LambdaScalar::lambda_power(k - q, Scalar::pi_power(-(k - q), c));
                TrigPoly contrib = p.scaled(w);
                if (contrib.is_zero()) continue;
                auto [it, fresh] = projected.try_emplace(k, contrib);
                if (!fresh) it->second += contrib;
            }
        }
        for (auto it = projected.begin(); it != projected.end();)
            it = it->second.is_zero() ? projected.erase(it) : std::next(it);
        CHECK(projected.size() == ctube.size());
        for (const auto& [j, p] : ctube) CHECK(projected.at(j) == p);
    }
}

TEST_CASE("tube around CP^m") {
    // cpm_tube(0, n) is the geodesic ball volume (πⁿ/n!)·sn^{2n}
    for (int n : {1, 2, 3})
        CHECK(cpm_tube(0, n) ==
              TrigPoly::monomial(2 * n, 0,
                                 LambdaScalar(Scalar::pi_power(n, Rational(1) / factorial(n)))));
    // derived route: τ_r(ℂP^m) = Σ_k ω_{2n-k}·μ^λ_k(ℂP^m)·sn^{2n-k}cs^k
    for (int n : {1, 2, 3}) {
        Space sp = Space::curved(n);
        for (int m = 0; m <= n; ++m) {
            TrigPoly via_kinematics;
            for (int k = 0; k <= 2 * n; ++k) {
                ValElement mu_k(sp, ValBasis::Mu);
                for (int q = std::max(0, k - n); 2 * q <= k; ++q) mu_k.add_term({k, q}, lam(1));
                LambdaScalar value = eval_on_cpm(mu_k, m);
                if (value.is_zero()) continue;
                via_kinematics +=
                    TrigPoly::monomial(2 * n - k, k, value * LambdaScalar(omega(2 * n - k)));
            }
            CHECK(via_kinematics == cpm_tube(m, n));
        }
    }
    // at r = π/(2√λ), λ=1: cs = 0 and only the k=0 term survives; the total
    // is vol(ℂPⁿ_1) = πⁿ/n!
    for (int n : {1, 2}) {
        double v = cpm_tube(n, n).evaluate(Rational(1), std::acos(-1.0) / 2);
        double expect = std::pow(std::acos(-1.0), n) / (n == 1 ? 1.0 : 2.0);
        CHECK(std::fabs(v - expect) < 1e-10 * expect);
    }
    CHECK_THROWS_AS(cpm_tube(3, 2), std::domain_error);
}

TEST_CASE("totally real tube identities") {
    for (int n = 1; n <= 5; ++n) {
        CHECK(totally_real_u_image(n).is_zero());
        for (int k = 0; k <= n; ++k) CHECK(totally_real_residual(n, k).is_zero());
    }
}
