#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hig/valuation.hpp"

namespace hig {

enum class CurvFamily { Delta, N, B, Gamma };
enum class CurvBasis { DeltaN, BGamma };

struct CurvIndex {
    CurvFamily family = CurvFamily::Delta;
    int k = 0;
    int q = 0;
    auto operator<=>(const CurvIndex&) const = default;
};

bool valid_curv_index(int n, const CurvIndex& idx);
/// All DeltaN basis indices of Curv^{U(n)}.
std::vector<CurvIndex> curv_indices(int n);

/// Element of Curv^{U(n)}. The space itself is λ-independent (transfer
/// principle); λ only ever appears in coefficients. DeltaN is canonical.
class CurvElement {
public:
    CurvElement() = default;
    CurvElement(int n, CurvBasis basis) : n_(n), basis_(basis) {}

    static CurvElement zero(int n, CurvBasis basis = CurvBasis::DeltaN) {
        return CurvElement(n, basis);
    }
    static CurvElement basis_element(int n, CurvFamily family, int k, int q);

    int n() const { return n_; }
    CurvBasis basis() const { return basis_; }
    const std::map<CurvIndex, LambdaScalar>& coords() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Invalid indices drop (the restriction maps send them to zero);
    /// families must match the declared basis.
    void add_term(const CurvIndex& idx, const LambdaScalar& c);

    CurvElement& operator+=(const CurvElement& o);
    CurvElement& operator-=(const CurvElement& o);
    friend CurvElement operator+(CurvElement a, const CurvElement& b) { return a += b; }
    friend CurvElement operator-(CurvElement a, const CurvElement& b) { return a -= b; }
    CurvElement operator-() const;
    CurvElement scaled(const LambdaScalar& c) const;

private:
    int n_ = 1;
    CurvBasis basis_ = CurvBasis::DeltaN;
    std::map<CurvIndex, LambdaScalar> terms_;
};

CurvElement curv_convert(const CurvElement& c, CurvBasis target);
bool curv_equal(const CurvElement& a, const CurvElement& b);

/// glob_λ in Mu coordinates: [Δ_kq]_λ = μ^λ_kq - λ(q+1)/π·μ^λ_{k+2,q+1},
/// [N_kq]_λ = -λ(q+1)/π·μ^λ_{k+2,q+1}; at λ=0 (Flat) N ↦ 0, Δ_kq ↦ μ_kq.
ValElement globalize(const CurvElement& c, Mode mode);
/// Basis of ker glob: {N_kq + λ(q+1)/π·B_{k+2,q+1}} (just {N_kq} for Flat).
std::vector<CurvElement> glob_kernel_basis(int n, Mode mode);

/// The Val^{U(∞)}-module actions in the DeltaN basis (λ-independent).
CurvElement act_s(const CurvElement& c);
CurvElement act_t(const CurvElement& c);
/// u = 4s - t²: act_u = 4·act_s - act_t∘act_t.
CurvElement act_u(const CurvElement& c);

/// p(s,t)·Φ for a flat polynomial p, via iterated act_s/act_t.
CurvElement apply_st_poly(const Poly2& p, const CurvElement& base);

/// ℓ(p) = p·Δ_{0,0} and 𝔫(p) = p·N_{1,0} for flat (s,t)-polynomials.
CurvElement ell(int n, const Poly2& st);
/// Lipschitz-Killing curvature measure Λ_j = (π^j/(j!ω_j))·ℓ(t^j).
CurvElement lipschitz_killing(int n, int j);
CurvElement nn(int n, const Poly2& st);
CurvElement ell(const ValElement& p);
CurvElement nn(const ValElement& p);

/// Inverse of 𝔫 on span{N_kq}: explicit (t,u)-polynomial preimage.
Poly2 nn_inverse_st(const CurvElement& c);
ValElement nn_inverse(const CurvElement& c);

/// c = ℓ(p1) + 𝔫(p2) with p1 = glob₀(c); returns canonical flat
/// (s,t)-representatives.
std::pair<Poly2, Poly2> free_decompose_st(const CurvElement& c);
std::pair<ValElement, ValElement> free_decompose(const CurvElement& c);

/// g_{n-1}, g_n as (u,t)-polynomials: generators of ker(𝔫) in Curv^{U(n)}.
Poly2 n_kernel_poly_tu(int n);
std::pair<Poly2, Poly2> n_kernel_polys(int n);

/// Multiplication by t_λ ∈ V^n_λ (λ formal in the coefficients).
CurvElement act_t_lambda(const CurvElement& c);
/// Multiplication by an arbitrary v ∈ V^n_λ, factored through I_λ^{-1}.
CurvElement act_val_lambda(const ValElement& v, const CurvElement& c);

/// Angular ⟺ vanishing N-part in the DeltaN basis.
bool angular_test(const CurvElement& c);
/// The symbolic angularity criterion for ℓ(p1)+𝔫(p2):
/// (t/π)∂p1/∂s - ((4s-t²)/2)∂p2/∂s = 3p2.
bool angular_predicate(const Poly2& p1, const Poly2& p2);
/// A(g) = ℓ(g + 2u ∂g/∂u) + 𝔫((4t/π)∂g/∂u) for g in (u,t) form.
CurvElement a_map(int n, const Poly2& g_tu);

struct CurvTensor {
    int n = 1;
    std::map<std::pair<CurvIndex, CurvIndex>, LambdaScalar> terms;
    void add_term(const CurvIndex& a, const CurvIndex& b, const LambdaScalar& c);
    CurvTensor swapped() const;
    bool is_symmetric() const { return terms == swapped().terms; }
    CurvTensor& operator+=(const CurvTensor& o);
    CurvTensor& operator-=(const CurvTensor& o);
    friend bool operator==(const CurvTensor& a, const CurvTensor& b) {
        return a.n == b.n && a.terms == b.terms;
    }
};

struct SemiLocalTensor {
    int n = 1;
    Mode mode = Mode::Curved;
    std::map<std::pair<CurvIndex, ValIndex>, LambdaScalar> terms;
};

/// Local kinematic operator: the closed forms for K(Δ_{0,0}) and K(N_{1,0}),
/// extended to general elements via the free-module decomposition and
/// K(φ·Φ) = (φ⊗χ)·K(Φ).
CurvTensor local_kinematic_delta00(int n);
CurvTensor local_kinematic_n10(int n);
CurvTensor local_kinematic(const CurvElement& c);
CurvTensor apply_st_poly_first_leg(const Poly2& p, const CurvTensor& T);
/// (glob ⊗ glob) of a curvature tensor.
ValTensor globalize_tensor(const CurvTensor& T, Mode mode);
/// Semi-local operator k̄ = (id ⊗ glob_λ)∘K.
SemiLocalTensor semi_local(const CurvElement& c, Mode mode);

CurvElement restrict_curv(const CurvElement& c, int m);

/// Projection to the complex-subvariety span: coefficients of Γ_{2q,q}.
std::map<int, LambdaScalar> complex_project(const CurvElement& c);
/// K_ℂ(Γ_{2q,q}) = (1/(n!q!)) Σ_{i+j=n+q} i!j!·Γ_{2i,i}⊗Γ_{2j,j}.
CurvTensor complex_kinematic(int n, int q);
/// Chern coordinates: Ch_k = Σ_{q≥k} q! binom(q+1,k+1) (λ/π)^{q-k} Γ_{2q,q}.
using ChernTensor = std::map<std::pair<int, int>, LambdaScalar>;
/// Closed form K_ℂ(Ch_q) = (1/n!) Σ_{k+l≥n+q} (-λ/π)^{k+l-n-q} binom(k+l-q,n) Ch_k⊗Ch_l.
ChernTensor shifrin(int n, int q);
/// Same operator computed from K_ℂ(Γ) by Chern conversion (cross-check).
ChernTensor shifrin_from_gamma(int n, int q);

/// δμ^λ_k = ω_{2n-k-1}/ω_{2n-k}·(2π Σ_q Δ_{k-1,q} - λ Σ_q (k-2q+1) B_{k+1,q}),
/// normalized so that glob₀ of the λ=0 part reproduces the flat first
/// variation.
CurvElement first_variation_mu(int n, int k);

// -- derivation-closure helpers for the local kinematic operator --

/// Σ(μ_kq) = -π/q·N_{k-2,q-1} for 0 < q < k/2, else 0.
CurvElement sigma_map(const ValElement& v);
/// H₀' on basis elements: H₀'(Δ_kq) = s·μ_kq - (q+1)/π·μ_{k+2,q+1},
/// H₀'(N_kq) = -(q+1)/π·μ_{k+2,q+1}; values in Val^{U(n)}.
ValElement h0_prime(const CurvElement& c);

}  // namespace hig
