#pragma once

#include <map>

#include "hig/curvature.hpp"
#include "hig/trig.hpp"
#include "hig/valuation.hpp"

namespace hig {

/// Valuation- and curvature-measure-valued functions of the tube radius:
/// each index carries its exact TrigPoly coefficient.
using ValTrigMap = std::map<ValIndex, TrigPoly>;
using CurvTrigMap = std::map<CurvIndex, TrigPoly>;

void add_to(ValTrigMap& m, const ValIndex& i, const TrigPoly& p);
void add_to(CurvTrigMap& m, const CurvIndex& i, const TrigPoly& p);
ValTrigMap differentiate(const ValTrigMap& m);

/// Global tube formula: the coefficient of μ^λ_kq is ω_{2n-k}·sn^{2n-k}cs^k
/// (the tube functional is Σ_k ω_{2n-k}·μ^λ_k·sn^{2n-k}cs^k).
ValTrigMap global_tube(int n);

/// k_λ(χ) with the second leg evaluated on the ball B_r.
ValTrigMap kinematic_chi_on_ball(int n);

/// Local tube formula T_r = vol + Σ_k ω_{2n-k-1}(2πΔ_{k-1} -
/// λΣ_q(k-2q+1)B_{k+1,q})·∫₀^r sn^{2n-k}cs^k, the integrals kept as atoms.
CurvTrigMap local_tube(int n);

/// Globalization applied coefficient-wise to a curvature-valued radius
/// function.
ValTrigMap globalize_trig(int n, const CurvTrigMap& m, Mode mode);

/// Tube formula for complex submanifolds: coefficient of the Chern measure
/// C^λ_j is Σ_k ω_{2n-2k}·sn^{2n-2k}cs^{2k}·(1/k!)(-λ/π)^{j-k}binom(j,k).
std::map<int, TrigPoly> complex_tube(int n);

/// Volume of the r-tube around ℂP^m_λ ⊂ ℂP^n_λ:
/// (πⁿ/n!)Σ_{k≤m} λ^{-k} binom(n,k) sn^{2n-2k}cs^{2k}.
TrigPoly cpm_tube(int m, int n);

/// Residual of μ^λ_k ≡ (π^k/(k!ω_k))·t^k(1+λt²/4)^{-k/2-1} modulo the ideal
/// (u), computed by substituting s = t²/(4+λt²) into the canonical
/// representative; must be zero.
Poly2 totally_real_residual(int n, int k);
/// The substitution kills u itself (s(4+λt²) - t² = u).
Poly2 totally_real_u_image(int n);

}  // namespace hig
