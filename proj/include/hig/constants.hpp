#pragma once

#include "hig/scalar.hpp"

namespace hig {

/// ω_k: volume of the unit ball in ℝ^k, an exact rational·π^{⌊k/2⌋}.
Scalar omega(long k);
/// α_k = (k+1)·ω_{k+1}: volume of the unit sphere S^k.
Scalar alpha(long k);
/// c_{nkq} = 1 / (q!(n-k+q)!(k-2q)! ω_{2n-k}).
Scalar c_nkq(long n, long k, long q);
/// a_{nkr}: coefficients of the flat principal kinematic formula,
/// a_{nkr} = ω_k ω_{2n-k} π^{-n} (n-r)!/(8^r(2n-4r)!) ·
///           (2n-2r+1)!!/(2n-4r+1)!! · binom(n,2r)^{-1}.
Scalar a_nkr(long n, long k, long r);

enum class ConstantKind { Omega, Alpha, DoubleFactorial, Binomial, Cnkq, Ankr };

/// Uniform dispatch used by the CLI; indices out of range throw
/// std::domain_error.
Scalar constant(ConstantKind kind, const std::vector<long>& idx);

}  // namespace hig
