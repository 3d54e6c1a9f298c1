#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hig/constants.hpp"
#include "hig/scalar.hpp"
#include "hig/stpoly.hpp"
#include "hig/trig.hpp"

namespace hig {

/// Flat: the λ = 0 algebra Val^{U(n)} on ℂⁿ.
/// Curved: the family algebra V^n_λ with λ kept formal; rational λ is a
/// coefficient substitution applied afterwards.
enum class Mode { Flat, Curved };

enum class ValBasis { Mu, Tau, ST };

/// The ambient algebra: complex dimension n (n = -1 for the inverse limit
/// V^∞, which carries an explicit weighted-degree cap), plus the λ-mode.
struct Space {
    int n = 1;
    int cap = -1;
    Mode mode = Mode::Curved;

    static Space flat(int n) { return {n, 2 * n, Mode::Flat}; }
    static Space curved(int n) { return {n, 2 * n, Mode::Curved}; }
    static Space infinite(int cap, Mode mode = Mode::Flat) { return {-1, cap, mode}; }

    bool is_infinite() const { return n < 0; }
    bool is_flat() const { return mode == Mode::Flat; }
    int max_wdeg() const { return is_infinite() ? cap : 2 * n; }
    /// s^{m} = 0 for m > this (weighted degree of s is 2).
    int s_nilpotency() const { return is_infinite() ? cap / 2 : n; }

    friend bool operator==(const Space&, const Space&) = default;
};

struct ValIndex {
    int k = 0;
    int q = 0;
    auto operator<=>(const ValIndex&) const = default;
};

/// max(0, k-n) ≤ q ≤ ⌊k/2⌋ ≤ n (for V^∞: 0 ≤ q ≤ ⌊k/2⌋, k ≤ cap).
bool valid_mu_index(const Space& sp, int k, int q);
std::vector<ValIndex> mu_indices(const Space& sp);

using MuCoords = std::map<ValIndex, LambdaScalar>;

/// Element of V^n_λ (or Val^{U(n)}, or the capped V^∞) over a declared
/// basis. Mu is canonical: equality converts to Mu.
class ValElement {
public:
    ValElement() = default;
    ValElement(Space sp, ValBasis basis) : sp_(sp), basis_(basis) {}

    static ValElement zero(Space sp, ValBasis basis = ValBasis::Mu) {
        return ValElement(sp, basis);
    }
    static ValElement basis_element(Space sp, ValBasis basis, int k, int q);
    static ValElement from_st(Space sp, const Poly2& st);

    const Space& space() const { return sp_; }
    ValBasis basis() const { return basis_; }
    const MuCoords& coords() const { return kq_; }
    const Poly2& st_poly() const { return st_; }
    bool is_zero() const { return basis_ == ValBasis::ST ? st_.is_zero() : kq_.empty(); }

    void add_term(const ValIndex& idx, const LambdaScalar& c);
    void add_st_term(int s_exp, int t_exp, const LambdaScalar& c);

    ValElement& operator+=(const ValElement& o);
    ValElement& operator-=(const ValElement& o);
    friend ValElement operator+(ValElement a, const ValElement& b) { return a += b; }
    friend ValElement operator-(ValElement a, const ValElement& b) { return a -= b; }
    ValElement operator-() const;
    ValElement scaled(const LambdaScalar& c) const;

private:
    Space sp_{};
    ValBasis basis_ = ValBasis::Mu;
    MuCoords kq_;  // Mu or Tau coordinates
    Poly2 st_;     // ST representative (s-exp, t-exp)
};

ValElement convert(const ValElement& v, ValBasis target);
bool val_equal(const ValElement& a, const ValElement& b);

/// Alesker product: canonical ST representatives, polynomial product,
/// canonicalization through ST→Mu (which applies the quotient).
ValElement multiply(const ValElement& a, const ValElement& b);
ValElement s_multiply(const ValElement& v);
ValElement t_multiply(const ValElement& v);

/// Distinguished elements.
ValElement val_chi(Space sp);
ValElement val_t(Space sp);
ValElement val_s(Space sp);
ValElement val_vol(Space sp);
/// Canonical image of the monomial s^a t^b.
ValElement val_monomial(Space sp, int s_exp, int t_exp);

/// λ-substitution applied to all coefficients (the structure of the
/// element is unchanged; only meaningful for Curved elements).
ValElement val_specialize_lambda(const ValElement& v, const Rational& lambda);

enum class IsoKind { I_lambda, I_lambda_inv, J_lambda, F_lambda };
/// F_λ(μ_kq) = μ^λ_kq, J_λ = F_λ∘(1-λs)·, I_λ = F_λ∘(1-λs)^{-1}·.
/// I_lambda_inv maps Curved→Flat; the others map Flat→Curved.
ValElement iso_map(const ValElement& v, IsoKind which);

enum class AltIsoKind { TOverSqrt, TUIdentity };
ValElement alt_iso(const ValElement& v, AltIsoKind which);

/// Sparse symmetric-tensor container over pairs of Mu indices.
struct ValTensor {
    Space sp;
    std::map<std::pair<ValIndex, ValIndex>, LambdaScalar> terms;

    void add_term(const ValIndex& a, const ValIndex& b, const LambdaScalar& c);
    ValTensor swapped() const;
    bool is_symmetric() const { return terms == swapped().terms; }
    ValTensor& operator+=(const ValTensor& o);
    ValTensor& operator-=(const ValTensor& o);
    friend bool operator==(const ValTensor& a, const ValTensor& b) {
        return a.sp == b.sp && a.terms == b.terms;
    }
};

/// k_λ(χ) = Σ a_nkr F_λ(π_kr)⊗F_λ(π_{2n-k,r}) in μ^λ⊗μ^λ coordinates;
/// the coefficient table is λ-free (formally independent of curvature).
ValTensor kinematic_chi(Space sp);
/// k_λ(v) = (v⊗χ)·k_λ(χ).
ValTensor kinematic(const ValElement& v);
ValTensor multiply_first_leg(const ValElement& v, const ValTensor& T);

/// Linear functional in Mu coordinates.
class ValFunctional {
public:
    ValFunctional() = default;
    explicit ValFunctional(Space sp) : sp_(sp) {}
    const Space& space() const { return sp_; }
    MuCoords& coords() { return kq_; }
    const MuCoords& coords() const { return kq_; }
    void add_term(const ValIndex& idx, const LambdaScalar& c);
    LambdaScalar pair(const ValElement& v) const;

private:
    Space sp_{};
    MuCoords kq_;
};

LambdaScalar vol_star(const ValElement& v);
ValFunctional vol_star_functional(Space sp);
LambdaScalar pd_pairing(const ValElement& a, const ValElement& b);
/// pd(φ): ψ ↦ ⟨vol*, φψ⟩.
ValFunctional pd_functional(const ValElement& v);
/// Contract one tensor leg with a functional.
ValElement contract_first(const ValTensor& T, const ValFunctional& f);
ValElement contract_second(const ValTensor& T, const ValFunctional& f);

/// Template evaluations. eval_on_cpm restricts to V^m_λ and applies
/// μ^λ_{2q,q}(ℂP^m_λ) = π^q/(q!λ^q); the result is Laurent in λ.
LambdaScalar eval_on_cpm(const ValElement& v, int m);
/// μ^λ_kq(B_r) = c_nkq·2^{k-2q}·πⁿ·sn^k cs^{2n-k}.
TrigPoly eval_on_ball(const ValElement& v);

ValElement chern_valuation(Space sp, int k);
/// Inverse conversion; requires support on the indices (2q,q).
std::map<int, LambdaScalar> chern_from_mu(const ValElement& v);

ValElement restrict_val(const ValElement& v, int m);

// -- internals shared with the curvature module and the test oracles --

/// π_kr and ρ_kr of the flat kinematic formulas, as (u,t)-polynomials.
Poly2 pkf_pi_tu(int n, int k, int r);
Poly2 pkf_rho_tu(int n, int k, int r);

/// Canonical (s,t)-representative of the basis element μ^λ_kq (mu2st),
/// truncated by s-nilpotency and the weighted-degree cap.
Poly2 mu_to_st_rep(const Space& sp, const ValIndex& idx);
/// Expansion of t^b in Mu coordinates via the exponential generating
/// functions g_i, h_i.
MuCoords t_power_mu(const Space& sp, int b);
/// ST→Mu: expand each t^b, then apply the s-action, dropping indices
/// outside V^n.
ValElement st_to_mu(const Space& sp, const Poly2& st);
MuCoords s_action_mu(const Space& sp, const MuCoords& in);

}  // namespace hig
