#include "hig/constants.hpp"

#include <stdexcept>
#include <vector>

namespace hig {

Rational factorial(long n) {
    if (n < 0) throw std::domain_error("factorial: negative argument");
    Rational r(1);
    for (long i = 2; i <= n; ++i) r *= Rational(i);
    return r;
}

Rational double_factorial(long n) {
    if (n < -1) throw std::domain_error("double_factorial: argument < -1");
    Rational r(1);
    for (long i = n; i >= 2; i -= 2) r *= Rational(i);
    return r;
}

Rational binomial(long n, long k) {
    if (k < 0) return Rational(0);
    Rational r(1);
    for (long i = 0; i < k; ++i) r *= Rational(n - i, i + 1);
    return r;
}

Rational binomial(const Rational& a, long k) {
    if (k < 0) return Rational(0);
    Rational r(1);
    for (long i = 0; i < k; ++i) r *= (a - Rational(i)) / Rational(i + 1);
    return r;
}

Scalar omega(long k) {
    // ω_{-1} = π^{-1/2}/Γ(1/2) = 1/π, used by the k = 2n tube terms
    if (k == -1) return Scalar::pi_power(-1);
    if (k < 0) throw std::domain_error("omega: k < -1");
    // ω_{2m} = π^m/m!,  ω_{2m+1} = π^m 2^{2m+1} m!/(2m+1)!
    long m = k / 2;
    if (k % 2 == 0) return Scalar::pi_power(int(m), Rational(1) / factorial(m));
    Rational c = Rational(2).pow(2 * m + 1) * factorial(m) / factorial(2 * m + 1);
    return Scalar::pi_power(int(m), c);
}

Scalar alpha(long k) {
    if (k < 0) throw std::domain_error("alpha: k < 0");
    return Scalar(Rational(k + 1)) * omega(k + 1);
}

Scalar c_nkq(long n, long k, long q) {
    if (q < 0 || n - k + q < 0 || k - 2 * q < 0 || 2 * n - k < 0)
        throw std::domain_error("c_nkq: indices out of range");
    Scalar denom = Scalar(factorial(q) * factorial(n - k + q) * factorial(k - 2 * q)) *
                   omega(2 * n - k);
    return Scalar(1) / denom;
}

Scalar a_nkr(long n, long k, long r) {
    if (n < 1 || k < 0 || k > 2 * n || r < 0 || 2 * r > std::min(k, 2 * n - k))
        throw std::domain_error("a_nkr: indices out of range");
    Scalar s = omega(k) * omega(2 * n - k) * Scalar::pi_power(-int(n));
    Rational c = factorial(n - r) / (Rational(8).pow(r) * factorial(2 * n - 4 * r));
    c *= double_factorial(2 * n - 2 * r + 1) / double_factorial(2 * n - 4 * r + 1);
    c /= binomial(n, 2 * r);
    return s * Scalar(c);
}

Scalar constant(ConstantKind kind, const std::vector<long>& idx) {
    auto need = [&](size_t m) {
        if (idx.size() != m) throw std::domain_error("constant: wrong index count");
    };
    switch (kind) {
        case ConstantKind::Omega: need(1); return omega(idx[0]);
        case ConstantKind::Alpha: need(1); return alpha(idx[0]);
        case ConstantKind::DoubleFactorial: need(1); return Scalar(double_factorial(idx[0]));
        case ConstantKind::Binomial: need(2); return Scalar(binomial(idx[0], idx[1]));
        case ConstantKind::Cnkq: need(3); return c_nkq(idx[0], idx[1], idx[2]);
        case ConstantKind::Ankr: need(3); return a_nkr(idx[0], idx[1], idx[2]);
    }
    throw std::domain_error("constant: unknown kind");
}

}  // namespace hig
