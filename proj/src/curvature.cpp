#include "hig/curvature.hpp"

#include <mutex>

namespace hig {

namespace {

LambdaScalar lam_pi(int e, const Rational& r) { return LambdaScalar(Scalar::pi_power(e, r)); }
LambdaScalar lam_lambda(int e, const Scalar& s) { return LambdaScalar::lambda_power(e, s); }

std::mutex curv_cache_mutex;

}  // namespace

bool valid_curv_index(int n, const CurvIndex& idx) {
    const int k = idx.k, q = idx.q;
    if (k < 0 || q < 0) return false;
    switch (idx.family) {
        case CurvFamily::Delta:
            return k <= 2 * n && q >= k - n && 2 * q <= k;
        case CurvFamily::N:
            // q = k-n gives the zero element and is excluded
            return 2 * q < k && q > k - n;
        case CurvFamily::B:
            return 2 * q < k && q >= k - n;
        case CurvFamily::Gamma:
            if (k == 2 * n && q == n) return true;
            return 2 * q <= k && q > k - n && k < 2 * n;
    }
    return false;
}

std::vector<CurvIndex> curv_indices(int n) {
    std::vector<CurvIndex> out;
    for (int k = 0; k <= 2 * n; ++k) {
        for (int q = std::max(0, k - n); 2 * q <= k; ++q)
            out.push_back({CurvFamily::Delta, k, q});
        for (int q = std::max(0, k - n + 1); 2 * q < k; ++q)
            out.push_back({CurvFamily::N, k, q});
    }
    return out;
}

CurvElement CurvElement::basis_element(int n, CurvFamily family, int k, int q) {
    CurvIndex idx{family, k, q};
    if (!valid_curv_index(n, idx)) throw std::domain_error("CurvElement: invalid index");
    CurvBasis basis = (family == CurvFamily::Delta || family == CurvFamily::N)
                          ? CurvBasis::DeltaN
                          : CurvBasis::BGamma;
    CurvElement c(n, basis);
    c.terms_[idx] = LambdaScalar(1);
    return c;
}

void CurvElement::add_term(const CurvIndex& idx, const LambdaScalar& c) {
    if (c.is_zero()) return;
    const bool dn = (idx.family == CurvFamily::Delta || idx.family == CurvFamily::N);
    if (dn != (basis_ == CurvBasis::DeltaN))
        throw std::domain_error("CurvElement::add_term: family does not match basis");
    if (!valid_curv_index(n_, idx)) return;  // restriction maps send these to zero
    auto [it, fresh] = terms_.try_emplace(idx, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

CurvElement& CurvElement::operator+=(const CurvElement& o) {
    if (n_ != o.n_ || basis_ != o.basis_)
        throw std::domain_error("CurvElement::+=: dimension or basis mismatch");
    for (const auto& [i, c] : o.terms_) add_term(i, c);
    return *this;
}

CurvElement& CurvElement::operator-=(const CurvElement& o) { return *this += -o; }

CurvElement CurvElement::operator-() const {
    CurvElement r(n_, basis_);
    for (const auto& [i, c] : terms_) r.terms_.emplace(i, -c);
    return r;
}

CurvElement CurvElement::scaled(const LambdaScalar& c) const {
    CurvElement r(n_, basis_);
    if (c.is_zero()) return r;
    for (const auto& [i, v] : terms_) r.terms_.emplace(i, v * c);
    return r;
}

CurvElement curv_convert(const CurvElement& c, CurvBasis target) {
    if (c.basis() == target) return c;
    const int n = c.n();
    CurvElement out(n, target);
    for (const auto& [idx, v] : c.coords()) {
        const int k = idx.k, q = idx.q;
        if (target == CurvBasis::BGamma) {
            if (idx.family == CurvFamily::Delta) {
                if (k == 2 * n && q == n) {
                    out.add_term({CurvFamily::Gamma, k, q}, v);
                } else {
                    // Δ_kq = (2(n-k+q)Γ_kq + (k-2q)B_kq)/(2n-k)
                    Rational d(1, 2 * n - k);
                    out.add_term({CurvFamily::Gamma, k, q},
                                 v * LambdaScalar(Rational(2 * (n - k + q)) * d));
                    out.add_term({CurvFamily::B, k, q}, v * LambdaScalar(Rational(k - 2 * q) * d));
                }
            } else {
                // N_kq = 2(n-k+q)/(2n-k)·(Γ_kq - B_kq)
                LambdaScalar f = v * LambdaScalar(Rational(2 * (n - k + q), 2 * n - k));
                out.add_term({CurvFamily::Gamma, k, q}, f);
                out.add_term({CurvFamily::B, k, q}, -f);
            }
        } else {
            if (idx.family == CurvFamily::B) {
                // B_kq = Δ_kq - N_kq (N absent on the q = k-n edge)
                out.add_term({CurvFamily::Delta, k, q}, v);
                out.add_term({CurvFamily::N, k, q}, -v);
            } else {
                if (k == 2 * n && q == n) {
                    out.add_term({CurvFamily::Delta, k, q}, v);
                } else if (k == 2 * q) {
                    out.add_term({CurvFamily::Delta, k, q}, v);
                } else {
                    // Γ_kq = Δ_kq + (k-2q)/(2(n-k+q))·N_kq
                    out.add_term({CurvFamily::Delta, k, q}, v);
                    out.add_term({CurvFamily::N, k, q},
                                 v * LambdaScalar(Rational(k - 2 * q, 2 * (n - k + q))));
                }
            }
        }
    }
    return out;
}

bool curv_equal(const CurvElement& a, const CurvElement& b) {
    if (a.n() != b.n()) throw std::domain_error("curv_equal: dimension mismatch");
    return curv_convert(a, CurvBasis::DeltaN).coords() ==
           curv_convert(b, CurvBasis::DeltaN).coords();
}

ValElement globalize(const CurvElement& c, Mode mode) {
    CurvElement dn = curv_convert(c, CurvBasis::DeltaN);
    Space sp = mode == Mode::Flat ? Space::flat(c.n()) : Space::curved(c.n());
    ValElement out(sp, ValBasis::Mu);
    for (const auto& [idx, v] : dn.coords()) {
        if (idx.family == CurvFamily::Delta) {
            out.add_term({idx.k, idx.q}, v);
            if (mode == Mode::Curved)
                out.add_term({idx.k + 2, idx.q + 1},
                             v * lam_lambda(1, Scalar(Rational(-(idx.q + 1)))) * lam_pi(-1, 1));
        } else if (mode == Mode::Curved) {
            out.add_term({idx.k + 2, idx.q + 1},
                         v * lam_lambda(1, Scalar(Rational(-(idx.q + 1)))) * lam_pi(-1, 1));
        }
    }
    return out;
}

std::vector<CurvElement> glob_kernel_basis(int n, Mode mode) {
    std::vector<CurvElement> out;
    for (const auto& idx : curv_indices(n)) {
        if (idx.family != CurvFamily::N) continue;
        CurvElement e(n, CurvBasis::DeltaN);
        e.add_term(idx, LambdaScalar(1));
        if (mode == Mode::Curved) {
            // + λ(q+1)/π·B_{k+2,q+1},  B = Δ - N
            LambdaScalar f = lam_lambda(1, Scalar(Rational(idx.q + 1))) * lam_pi(-1, 1);
            e.add_term({CurvFamily::Delta, idx.k + 2, idx.q + 1}, f);
            e.add_term({CurvFamily::N, idx.k + 2, idx.q + 1}, -f);
        }
        out.push_back(std::move(e));
    }
    return out;
}

CurvElement act_s(const CurvElement& c) {
    CurvElement dn = curv_convert(c, CurvBasis::DeltaN);
    CurvElement out(c.n(), CurvBasis::DeltaN);
    for (const auto& [idx, v] : dn.coords()) {
        const long k = idx.k, q = idx.q;
        if (idx.family == CurvFamily::Delta) {
            out.add_term({CurvFamily::Delta, idx.k + 2, idx.q},
                         v * lam_pi(-1, Rational((k - 2 * q + 2) * (k - 2 * q + 1), 2 * (k + 2))));
            out.add_term({CurvFamily::Delta, idx.k + 2, idx.q + 1},
                         v * lam_pi(-1, Rational(2 * (q + 1) * (k - q + 1), k + 2)));
            out.add_term({CurvFamily::N, idx.k + 2, idx.q},
                         v * lam_pi(-1, -Rational((k - 2 * q + 2) * (k - 2 * q + 1),
                                                  (k + 2) * (k + 4))));
            out.add_term({CurvFamily::N, idx.k + 2, idx.q + 1},
                         v * lam_pi(-1, -Rational(2 * (q + 1) * (k - 2 * q), (k + 2) * (k + 4))));
        } else {
            out.add_term({CurvFamily::N, idx.k + 2, idx.q},
                         v * lam_pi(-1, Rational((k - 2 * q + 2) * (k - 2 * q + 1), 2 * (k + 4))));
            out.add_term({CurvFamily::N, idx.k + 2, idx.q + 1},
                         v * lam_pi(-1, Rational(2 * (q + 1) * (k - q + 2), k + 4)));
        }
    }
    return out;
}

CurvElement act_t(const CurvElement& c) {
    CurvElement dn = curv_convert(c, CurvBasis::DeltaN);
    CurvElement out(c.n(), CurvBasis::DeltaN);
    for (const auto& [idx, v] : dn.coords()) {
        const long k = idx.k, q = idx.q;
        Scalar f = omega(k + 1) / (Scalar::pi_power(1) * omega(k));
        if (idx.family == CurvFamily::Delta) {
            out.add_term({CurvFamily::Delta, idx.k + 1, idx.q},
                         v * LambdaScalar(f * Scalar(Rational(k - 2 * q + 1))));
            out.add_term({CurvFamily::Delta, idx.k + 1, idx.q + 1},
                         v * LambdaScalar(f * Scalar(Rational(2 * (q + 1)))));
        } else {
            Scalar g = f * Scalar(Rational(k + 2, k + 3));
            out.add_term({CurvFamily::N, idx.k + 1, idx.q},
                         v * LambdaScalar(g * Scalar(Rational(k - 2 * q + 1))));
            out.add_term({CurvFamily::N, idx.k + 1, idx.q + 1},
                         v * LambdaScalar(g * Scalar(Rational(2 * (q + 1) * (k - 2 * q - 1),
                                                              k - 2 * q))));
        }
    }
    return out;
}

CurvElement act_u(const CurvElement& c) {
    CurvElement four_s = act_s(c).scaled(LambdaScalar(4));
    return four_s - act_t(act_t(c));
}

CurvElement apply_st_poly(const Poly2& p, const CurvElement& base) {
    CurvElement out(base.n(), CurvBasis::DeltaN);
    CurvElement dn = curv_convert(base, CurvBasis::DeltaN);
    // iterate t-powers once, then s-powers per group
    std::map<int, std::map<int, LambdaScalar>> by_t;  // t_exp -> (s_exp -> coeff)
    for (const auto& [key, c] : p.terms()) by_t[key.second][key.first] = c;
    CurvElement t_pow = dn;
    int cur_t = 0;
    for (const auto& [t_exp, s_map] : by_t) {
        while (cur_t < t_exp) {
            t_pow = act_t(t_pow);
            ++cur_t;
        }
        CurvElement s_pow = t_pow;
        int cur_s = 0;
        for (const auto& [s_exp, coeff] : s_map) {
            while (cur_s < s_exp) {
                s_pow = act_s(s_pow);
                ++cur_s;
            }
            out += s_pow.scaled(coeff);
        }
    }
    return out;
}

CurvElement ell(int n, const Poly2& st) {
    return apply_st_poly(st, CurvElement::basis_element(n, CurvFamily::Delta, 0, 0));
}

CurvElement lipschitz_killing(int n, int j) {
    if (j < 0 || j > 2 * n) throw std::domain_error("lipschitz_killing: j out of range");
    Scalar c = Scalar::pi_power(j) / (Scalar(factorial(j)) * omega(j));
    return ell(n, Poly2::monomial(0, j, LambdaScalar(c)));
}

CurvElement nn(int n, const Poly2& st) {
    // N_{1,0} = 0 at n = 1 (the q = k-n edge), so 𝔫 vanishes identically
    if (!valid_curv_index(n, {CurvFamily::N, 1, 0})) return CurvElement::zero(n);
    return apply_st_poly(st, CurvElement::basis_element(n, CurvFamily::N, 1, 0));
}

CurvElement ell(const ValElement& p) {
    if (!p.space().is_flat()) throw std::domain_error("ell: expects a flat valuation");
    return ell(p.space().n, convert(p, ValBasis::ST).st_poly());
}

CurvElement nn(const ValElement& p) {
    if (!p.space().is_flat()) throw std::domain_error("nn: expects a flat valuation");
    return nn(p.space().n, convert(p, ValBasis::ST).st_poly());
}

namespace {

/// 𝔫^{-1}(N_kq) as a (u,t)-polynomial.
Poly2 nn_inverse_tu(int k, int q) {
    Scalar pref = Scalar::pi_power(k - 1, Rational(4 * (k + 2), k - 2 * q) / factorial(q)) /
                  omega(k);
    Poly2 out;
    for (int r = 0; 2 * r <= k - 2 * q - 1; ++r) {
        Rational c = factorial(q + r + 1) * Rational(-1).pow(r) /
                     (factorial(k - 2 * q - 2 * r - 1) * factorial(2 * q + 2 * r + 3) *
                      factorial(r));
        out.add_term(q + r, k - 2 * q - 1 - 2 * r, LambdaScalar(pref * Scalar(c)));
    }
    return out;
}

}  // namespace

Poly2 nn_inverse_st(const CurvElement& c) {
    CurvElement dn = curv_convert(c, CurvBasis::DeltaN);
    Poly2 acc;
    for (const auto& [idx, v] : dn.coords()) {
        if (idx.family != CurvFamily::N)
            throw std::domain_error("nn_inverse: element has a nonzero angular part");
        acc += tu_to_st(nn_inverse_tu(idx.k, idx.q), /*flat=*/true, 2 * c.n()) * v;
    }
    return acc;
}

ValElement nn_inverse(const CurvElement& c) {
    return st_to_mu(Space::flat(c.n()), nn_inverse_st(c));
}

std::pair<Poly2, Poly2> free_decompose_st(const CurvElement& c) {
    ValElement p1 = globalize(c, Mode::Flat);
    Poly2 p1_st = convert(p1, ValBasis::ST).st_poly();
    CurvElement rem = curv_convert(c, CurvBasis::DeltaN) - ell(c.n(), p1_st);
    return {p1_st, nn_inverse_st(rem)};
}

std::pair<ValElement, ValElement> free_decompose(const CurvElement& c) {
    auto [p1, p2] = free_decompose_st(c);
    Space flat = Space::flat(c.n());
    return {st_to_mu(flat, p1), st_to_mu(flat, p2)};
}

Poly2 n_kernel_poly_tu(int n) {
    Poly2 out;
    for (int r = 0; 2 * r <= n; ++r) {
        Rational c = Rational(r + 1) * Rational(-1).pow(r) /
                     (factorial(n - 2 * r) * factorial(2 * r + 3));
        out.add_term(r, n - 2 * r, LambdaScalar(c));
    }
    return out;
}

std::pair<Poly2, Poly2> n_kernel_polys(int n) {
    if (n < 1) throw std::domain_error("n_kernel_polys: n >= 1 required");
    return {n_kernel_poly_tu(n - 1), n_kernel_poly_tu(n)};
}

// ----------------------------------------------------- t_λ module structure

namespace {

struct ModuleMatrix {
    Poly2 a1, b1, a2, b2;  // t_λ·Δ00 = ℓ(a1)+𝔫(b1), t_λ·N10 = ℓ(a2)+𝔫(b2)
};

ModuleMatrix t_lambda_matrix(int n) {
    static std::map<int, ModuleMatrix> cache;
    {
        std::lock_guard lock(curv_cache_mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    const int cap = 2 * n;
    Poly2 f = one_minus_lambda_x_pow(Rational(-3, 2), n);
    Poly2 u = u_in_st(true);
    Poly2 t = Poly2::monomial(0, 1, LambdaScalar(1));
    Poly2 t2 = Poly2::monomial(0, 2, LambdaScalar(1));
    Poly2 t3 = Poly2::monomial(0, 3, LambdaScalar(1));
    ModuleMatrix m;
    {
        // t(1 - λt²/4)
        Poly2 g = t;
        g.add_term(0, 3, lam_lambda(1, Scalar(Rational(-1, 4))));
        m.a1 = Poly2::mul(g, f, cap);
    }
    m.b1 = Poly2::mul(t2 * lam_lambda(1, Scalar::pi_power(-1, Rational(1, 2))), f, cap);
    m.a2 = Poly2::mul(Poly2::mul(u, u, cap) * lam_lambda(1, Scalar::pi_power(1, Rational(-1, 8))),
                      f, cap);
    {
        // t - 2λts + λt³/4
        Poly2 g = t;
        g.add_term(1, 1, lam_lambda(1, Scalar(Rational(-2))));
        g.add_term(0, 3, lam_lambda(1, Scalar(Rational(1, 4))));
        m.b2 = Poly2::mul(g, f, cap);
    }
    std::lock_guard lock(curv_cache_mutex);
    return cache.emplace(n, std::move(m)).first->second;
}

std::pair<Poly2, Poly2> t_lambda_on_pair(int n, const Poly2& p1, const Poly2& p2) {
    ModuleMatrix m = t_lambda_matrix(n);
    const int cap = 2 * n;
    Poly2 q1 = Poly2::mul(p1, m.a1, cap) + Poly2::mul(p2, m.a2, cap);
    Poly2 q2 = Poly2::mul(p1, m.b1, cap) + Poly2::mul(p2, m.b2, cap);
    return {q1, q2};
}

CurvElement recompose(int n, const Poly2& p1, const Poly2& p2) {
    return ell(n, p1) + nn(n, p2);
}

}  // namespace

CurvElement act_t_lambda(const CurvElement& c) {
    auto [p1, p2] = free_decompose_st(c);
    auto [q1, q2] = t_lambda_on_pair(c.n(), p1, p2);
    return recompose(c.n(), q1, q2);
}

CurvElement act_val_lambda(const ValElement& v, const CurvElement& c) {
    if (v.space().is_flat() || v.space().n != c.n())
        throw std::domain_error("act_val_lambda: expects a curved valuation on the same n");
    const int n = c.n(), cap = 2 * n;
    // factor v through I_λ^{-1} and substitute t ↦ t(1-λs)^{1/2}
    Poly2 p = convert(iso_map(v, IsoKind::I_lambda_inv), ValBasis::ST).st_poly();
    Poly2 subst;
    for (const auto& [key, coeff] : p.terms()) {
        Poly2 term = one_minus_lambda_x_pow(Rational(key.second, 2), n);
        term = Poly2::mul(term, Poly2::monomial(key.first, key.second, coeff), cap);
        subst += term;
    }
    auto [p1, p2] = free_decompose_st(c);
    std::map<int, std::map<int, LambdaScalar>> by_t;
    for (const auto& [key, coeff] : subst.terms()) by_t[key.second][key.first] = coeff;
    Poly2 acc1, acc2;
    Poly2 tp1 = p1, tp2 = p2;
    int cur_t = 0;
    for (const auto& [t_exp, s_map] : by_t) {
        while (cur_t < t_exp) {
            std::tie(tp1, tp2) = t_lambda_on_pair(n, tp1, tp2);
            ++cur_t;
        }
        for (const auto& [s_exp, coeff] : s_map) {
            Poly2 s_mono = Poly2::monomial(s_exp, 0, coeff);
            acc1 += Poly2::mul(s_mono, tp1, cap);
            acc2 += Poly2::mul(s_mono, tp2, cap);
        }
    }
    return recompose(n, acc1, acc2);
}

bool angular_test(const CurvElement& c) {
    CurvElement dn = curv_convert(c, CurvBasis::DeltaN);
    for (const auto& [idx, v] : dn.coords())
        if (idx.family == CurvFamily::N) return false;
    return true;
}

bool angular_predicate(const Poly2& p1, const Poly2& p2) {
    Poly2 t_over_pi = Poly2::monomial(0, 1, lam_pi(-1, 1));
    Poly2 half_u = u_in_st(true) * LambdaScalar(Rational(1, 2));
    Poly2 lhs = t_over_pi * p1.derivative_a() - half_u * p2.derivative_a();
    Poly2 rhs = p2 * LambdaScalar(3);
    return lhs == rhs;
}

CurvElement a_map(int n, const Poly2& g_tu) {
    Poly2 du = g_tu.derivative_a();  // ∂g/∂u
    Poly2 ell_part = g_tu + Poly2::monomial(1, 0, LambdaScalar(2)) * du;
    Poly2 nn_part = Poly2::monomial(0, 1, lam_pi(-1, 4)) * du;
    const int cap = 2 * n;
    return ell(n, tu_to_st(ell_part, true, cap)) + nn(n, tu_to_st(nn_part, true, cap));
}

// --------------------------------------------------- local kinematic tensors

void CurvTensor::add_term(const CurvIndex& a, const CurvIndex& b, const LambdaScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.try_emplace({a, b}, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

CurvTensor CurvTensor::swapped() const {
    CurvTensor r{n, {}};
    for (const auto& [key, c] : terms) r.terms.emplace(std::make_pair(key.second, key.first), c);
    return r;
}

CurvTensor& CurvTensor::operator+=(const CurvTensor& o) {
    for (const auto& [key, c] : o.terms) add_term(key.first, key.second, c);
    return *this;
}

CurvTensor& CurvTensor::operator-=(const CurvTensor& o) {
    for (const auto& [key, c] : o.terms) add_term(key.first, key.second, -c);
    return *this;
}

namespace {

CurvTensor tensor_of(const CurvElement& a, const CurvElement& b, const LambdaScalar& w) {
    CurvTensor out{a.n(), {}};
    CurvElement da = curv_convert(a, CurvBasis::DeltaN);
    CurvElement db = curv_convert(b, CurvBasis::DeltaN);
    for (const auto& [i1, c1] : da.coords())
        for (const auto& [i2, c2] : db.coords()) out.add_term(i1, i2, w * c1 * c2);
    return out;
}

}  // namespace

CurvTensor local_kinematic_delta00(int n) {
    static std::map<int, CurvTensor> cache;
    {
        std::lock_guard lock(curv_cache_mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    const int cap = 2 * n;
    CurvTensor out{n, {}};
    for (int k = 0; k <= 2 * n; ++k)
        for (int r = 0; 2 * r <= std::min(k, 2 * n - k); ++r) {
            LambdaScalar a{a_nkr(n, k, r)};
            CurvElement l1 = ell(n, tu_to_st(pkf_pi_tu(n, k, r), true, cap));
            CurvElement l2 = ell(n, tu_to_st(pkf_pi_tu(n, 2 * n - k, r), true, cap));
            CurvElement m1 = nn(n, tu_to_st(pkf_rho_tu(n, k, r), true, cap));
            CurvElement m2 = nn(n, tu_to_st(pkf_rho_tu(n, 2 * n - k, r), true, cap));
            out += tensor_of(l1, l2, a);
            out -= tensor_of(m1, m2, a);
        }
    std::lock_guard lock(curv_cache_mutex);
    return cache.emplace(n, std::move(out)).first->second;
}

CurvTensor local_kinematic_n10(int n) {
    static std::map<int, CurvTensor> cache;
    {
        std::lock_guard lock(curv_cache_mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    const int cap = 2 * n;
    CurvTensor out{n, {}};
    for (int k = 0; k <= 2 * n; ++k)
        for (int r = 0; 2 * r <= std::min(k, 2 * n - k); ++r) {
            LambdaScalar a{a_nkr(n, k, r)};
            CurvElement lp1 = ell(n, tu_to_st(pkf_pi_tu(n, k, r), true, cap));
            CurvElement lp2 = ell(n, tu_to_st(pkf_pi_tu(n, 2 * n - k, r), true, cap));
            CurvElement np1 = nn(n, tu_to_st(pkf_pi_tu(n, k, r), true, cap));
            CurvElement np2 = nn(n, tu_to_st(pkf_pi_tu(n, 2 * n - k, r), true, cap));
            CurvElement nr1 = nn(n, tu_to_st(pkf_rho_tu(n, k, r), true, cap));
            CurvElement nr2 = nn(n, tu_to_st(pkf_rho_tu(n, 2 * n - k, r), true, cap));
            out += tensor_of(np1, lp2, a);
            out += tensor_of(lp1, np2, a);
            out -= tensor_of(np1, nr2, a);
            out -= tensor_of(nr1, np2, a);
        }
    std::lock_guard lock(curv_cache_mutex);
    return cache.emplace(n, std::move(out)).first->second;
}

CurvTensor apply_st_poly_first_leg(const Poly2& p, const CurvTensor& T) {
    std::map<CurvIndex, CurvElement> groups;
    for (const auto& [key, c] : T.terms) {
        auto [it, fresh] = groups.try_emplace(key.second, CurvElement(T.n, CurvBasis::DeltaN));
        it->second.add_term(key.first, c);
    }
    CurvTensor out{T.n, {}};
    for (const auto& [second, first_elem] : groups) {
        CurvElement res = apply_st_poly(p, first_elem);
        for (const auto& [i, c] : res.coords()) out.add_term(i, second, c);
    }
    return out;
}

CurvTensor local_kinematic(const CurvElement& c) {
    auto [p1, p2] = free_decompose_st(c);
    CurvTensor out = apply_st_poly_first_leg(p1, local_kinematic_delta00(c.n()));
    out += apply_st_poly_first_leg(p2, local_kinematic_n10(c.n()));
    return out;
}

ValTensor globalize_tensor(const CurvTensor& T, Mode mode) {
    Space sp = mode == Mode::Flat ? Space::flat(T.n) : Space::curved(T.n);
    ValTensor out{sp, {}};
    for (const auto& [key, c] : T.terms) {
        CurvElement e1(T.n, CurvBasis::DeltaN), e2(T.n, CurvBasis::DeltaN);
        e1.add_term(key.first, LambdaScalar(1));
        e2.add_term(key.second, LambdaScalar(1));
        ValElement g1 = globalize(e1, mode), g2 = globalize(e2, mode);
        for (const auto& [i1, c1] : g1.coords())
            for (const auto& [i2, c2] : g2.coords()) out.add_term(i1, i2, c * c1 * c2);
    }
    return out;
}

SemiLocalTensor semi_local(const CurvElement& c, Mode mode) {
    CurvTensor K = local_kinematic(c);
    SemiLocalTensor out{c.n(), mode, {}};
    for (const auto& [key, v] : K.terms) {
        CurvElement e2(c.n(), CurvBasis::DeltaN);
        e2.add_term(key.second, LambdaScalar(1));
        ValElement g2 = globalize(e2, mode);
        for (const auto& [i2, c2] : g2.coords()) {
            auto [it, fresh] = out.terms.try_emplace({key.first, i2}, v * c2);
            if (!fresh) {
                it->second += v * c2;
                if (it->second.is_zero()) out.terms.erase(it);
            }
        }
    }
    return out;
}

CurvElement restrict_curv(const CurvElement& c, int m) {
    if (m > c.n()) throw std::domain_error("restrict_curv: m exceeds the ambient dimension");
    CurvElement out(m, c.basis());
    for (const auto& [idx, v] : c.coords()) out.add_term(idx, v);
    return out;
}

std::map<int, LambdaScalar> complex_project(const CurvElement& c) {
    std::map<int, LambdaScalar> out;
    CurvElement bg = curv_convert(c, CurvBasis::BGamma);
    for (const auto& [idx, v] : bg.coords())
        if (idx.family == CurvFamily::Gamma && idx.k == 2 * idx.q) out[idx.q] = v;
    return out;
}

CurvTensor complex_kinematic(int n, int q) {
    if (q < 0 || q > n) throw std::domain_error("complex_kinematic: q out of range");
    CurvTensor out{n, {}};
    Rational pref = Rational(1) / (factorial(n) * factorial(q));
    for (int i = 0; i <= n; ++i) {
        int j = n + q - i;
        if (j < 0 || j > n) continue;
        LambdaScalar c{Rational(pref * factorial(i) * factorial(j))};
        out.terms[{CurvIndex{CurvFamily::Gamma, 2 * i, i}, CurvIndex{CurvFamily::Gamma, 2 * j, j}}] =
            c;
    }
    return out;
}

ChernTensor shifrin(int n, int q) {
    ChernTensor out;
    for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) {
            if (k + l < n + q) continue;
            Rational b = binomial(long(k + l - q), long(n)) / factorial(n);
            if (b.is_zero()) continue;
            LambdaScalar c = lam_lambda(k + l - n - q,
                                        Scalar::pi_power(-(k + l - n - q),
                                                         b * Rational(-1).pow(k + l - n - q)));
            out[{k, l}] = c;
        }
    return out;
}

ChernTensor shifrin_from_gamma(int n, int q) {
    // Ch_q = Σ_r r! binom(r+1,q+1) (λ/π)^{r-q} Γ_{2r,r};
    // Γ_{2p,p} = (1/p!) Σ_{k≥p} (-λ/π)^{k-p} binom(k+1,p+1) Ch_k
    ChernTensor out;
    auto add = [&](int k, int l, const LambdaScalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = out.try_emplace(std::make_pair(k, l), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (int r = q; r <= n; ++r) {
        LambdaScalar w = lam_lambda(r - q, Scalar::pi_power(-(r - q),
                                                            factorial(r) *
                                                                binomial(long(r + 1), long(q + 1))));
        if (w.is_zero()) continue;
        CurvTensor Kg = complex_kinematic(n, r);
        for (const auto& [key, c] : Kg.terms) {
            const int i = key.first.q, j = key.second.q;
            for (int k = i; k <= n; ++k)
                for (int l = j; l <= n; ++l) {
                    Rational bi = binomial(long(k + 1), long(i + 1)) / factorial(i);
                    Rational bj = binomial(long(l + 1), long(j + 1)) / factorial(j);
                    LambdaScalar conv =
                        lam_lambda(k - i + l - j,
                                   Scalar::pi_power(-(k - i + l - j),
                                                    bi * bj * Rational(-1).pow(k - i + l - j)));
                    add(k, l, w * c * conv);
                }
        }
    }
    return out;
}

CurvElement first_variation_mu(int n, int k) {
    if (k < 1 || k > 2 * n) throw std::domain_error("first_variation_mu: k out of range");
    CurvElement out(n, CurvBasis::DeltaN);
    Scalar pref = omega(2 * n - k - 1) / omega(2 * n - k);
    for (int q = std::max(0, k - 1 - n); 2 * q <= k - 1; ++q)
        out.add_term({CurvFamily::Delta, k - 1, q}, LambdaScalar(pref * Scalar::pi_power(1, 2)));
    for (int q = std::max(0, k + 1 - n); 2 * q <= k; ++q) {
        // -λ(k-2q+1)·B_{k+1,q}, B = Δ - N
        LambdaScalar c = lam_lambda(1, pref * Scalar(Rational(-(k - 2 * q + 1))));
        out.add_term({CurvFamily::Delta, k + 1, q}, c);
        out.add_term({CurvFamily::N, k + 1, q}, -c);
    }
    return out;
}

CurvElement sigma_map(const ValElement& v) {
    if (v.space().is_infinite()) throw std::domain_error("sigma_map: finite n required");
    CurvElement out(v.space().n, CurvBasis::DeltaN);
    ValElement mu = convert(v, ValBasis::Mu);
    for (const auto& [idx, c] : mu.coords()) {
        if (idx.q == 0 || 2 * idx.q == idx.k) continue;
        out.add_term({CurvFamily::N, idx.k - 2, idx.q - 1},
                     c * lam_pi(1, Rational(-1, idx.q)));
    }
    return out;
}

ValElement h0_prime(const CurvElement& c) {
    Space flat = Space::flat(c.n());
    ValElement out(flat, ValBasis::Mu);
    CurvElement dn = curv_convert(c, CurvBasis::DeltaN);
    for (const auto& [idx, v] : dn.coords()) {
        if (idx.family == CurvFamily::Delta) {
            ValElement mu = ValElement::zero(flat);
            if (valid_mu_index(flat, idx.k, idx.q)) {
                mu = ValElement::basis_element(flat, ValBasis::Mu, idx.k, idx.q);
                out += s_multiply(mu).scaled(v);
            }
        }
        out.add_term({idx.k + 2, idx.q + 1}, v * lam_pi(-1, Rational(-(idx.q + 1))));
    }
    return out;
}

}  // namespace hig
