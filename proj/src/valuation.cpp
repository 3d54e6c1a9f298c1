#include "hig/valuation.hpp"

#include <mutex>
#include <tuple>

namespace hig {

namespace {

LambdaScalar lam_rat(const Rational& r) { return LambdaScalar(r); }
LambdaScalar lam_pi(int e, const Rational& r) { return LambdaScalar(Scalar::pi_power(e, r)); }
LambdaScalar lam_lambda(int e, const Scalar& s) { return LambdaScalar::lambda_power(e, s); }

/// [x^m] (1-x)^{-a}
Rational invpow_coeff(int m, const Rational& a) {
    Rational prod(1);
    for (int j = 0; j < m; ++j) prod *= (a + Rational(j));
    return prod / factorial(m);
}

struct CacheKey {
    int n, cap, mode, x, y;
    auto operator<=>(const CacheKey&) const = default;
};

std::mutex cache_mutex;

}  // namespace

bool valid_mu_index(const Space& sp, int k, int q) {
    if (k < 0 || q < 0 || 2 * q > k) return false;
    if (sp.is_infinite()) return k <= sp.cap;
    return k <= 2 * sp.n && q >= k - sp.n && q <= sp.n;
}

std::vector<ValIndex> mu_indices(const Space& sp) {
    if (sp.is_infinite()) throw std::domain_error("mu_indices: infinite-dimensional space");
    std::vector<ValIndex> out;
    for (int k = 0; k <= 2 * sp.n; ++k)
        for (int q = std::max(0, k - sp.n); 2 * q <= k; ++q) out.push_back({k, q});
    return out;
}

// ---------------------------------------------------------------- ValElement

ValElement ValElement::basis_element(Space sp, ValBasis basis, int k, int q) {
    if (basis == ValBasis::ST) throw std::domain_error("basis_element: ST has no (k,q) basis");
    if (!valid_mu_index(sp, k, q)) throw std::domain_error("basis_element: invalid index");
    ValElement v(sp, basis);
    v.kq_[{k, q}] = LambdaScalar(1);
    return v;
}

ValElement ValElement::from_st(Space sp, const Poly2& st) {
    if (sp.is_infinite() && st.weighted_degree() > sp.cap)
        throw std::domain_error("from_st: weighted degree exceeds the cap");
    ValElement v(sp, ValBasis::ST);
    v.st_ = st.truncated(sp.max_wdeg());
    return v;
}

void ValElement::add_term(const ValIndex& idx, const LambdaScalar& c) {
    if (basis_ == ValBasis::ST) throw std::domain_error("add_term: ST basis");
    if (c.is_zero()) return;
    if (!valid_mu_index(sp_, idx.k, idx.q)) return;  // quotient: invalid indices drop
    auto [it, fresh] = kq_.try_emplace(idx, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) kq_.erase(it);
    }
}

void ValElement::add_st_term(int s_exp, int t_exp, const LambdaScalar& c) {
    if (basis_ != ValBasis::ST) throw std::domain_error("add_st_term: not ST basis");
    st_.add_term(s_exp, t_exp, c);
}

ValElement& ValElement::operator+=(const ValElement& o) {
    if (!(sp_ == o.sp_) || basis_ != o.basis_)
        throw std::domain_error("ValElement::+=: space or basis mismatch");
    if (basis_ == ValBasis::ST) {
        st_ += o.st_;
    } else {
        for (const auto& [i, c] : o.kq_) add_term(i, c);
    }
    return *this;
}

ValElement& ValElement::operator-=(const ValElement& o) { return *this += -o; }

ValElement ValElement::operator-() const {
    ValElement r(sp_, basis_);
    r.st_ = -st_;
    for (const auto& [i, c] : kq_) r.kq_.emplace(i, -c);
    return r;
}

ValElement ValElement::scaled(const LambdaScalar& c) const {
    ValElement r(sp_, basis_);
    if (c.is_zero()) return r;
    if (basis_ == ValBasis::ST) {
        r.st_ = st_ * c;
    } else {
        for (const auto& [i, v] : kq_) r.kq_.emplace(i, v * c);
    }
    return r;
}

// ------------------------------------------------------- structure constants

Poly2 mu_to_st_rep(const Space& sp, const ValIndex& idx) {
    static std::map<CacheKey, Poly2> cache;
    CacheKey key{sp.n, sp.cap, int(sp.mode), idx.k, idx.q};
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const int k = idx.k, q = idx.q;
    const bool flat = sp.is_flat();
    const int cap = sp.max_wdeg(), smax = sp.s_nilpotency();
    // μ^λ_kq = Σ_i (-1)^{i+q} binom(i,q) π^k/(ω_k(k-2i)!(2i)!) (1-λs)^{k/2-i+1} t^{k-2i} u^i
    Poly2 acc;
    Poly2 u = u_in_st(flat);
    for (int i = q; 2 * i <= k; ++i) {
        Rational c = binomial(long(i), long(q)) * Rational(-1).pow(i + q) /
                     (factorial(k - 2 * i) * factorial(2 * i));
        Scalar coeff = Scalar::pi_power(k, c) / omega(k);
        Poly2 term = flat ? Poly2(LambdaScalar(1))
                          : one_minus_lambda_x_pow(Rational(k - 2 * i + 2, 2), smax);
        term = Poly2::mul(term, Poly2::monomial(0, k - 2 * i, LambdaScalar(coeff)), cap);
        term = Poly2::mul(term, u.pow(i, cap), cap);
        acc += term;
    }
    std::lock_guard lock(cache_mutex);
    return cache.emplace(key, std::move(acc)).first->second;
}

MuCoords t_power_mu(const Space& sp, int b) {
    static std::map<CacheKey, MuCoords> cache;
    CacheKey key{sp.n, sp.cap, int(sp.mode), b, 0};
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    if (b < 0) throw std::domain_error("t_power_mu: negative power");
    const bool even = (b % 2 == 0);
    const int i = b / 2;
    const int maxK = sp.max_wdeg();
    MuCoords out;
    auto add = [&](int K, int j, const LambdaScalar& c) {
        if (!valid_mu_index(sp, K, j) || c.is_zero()) return;
        auto [it, fresh] = out.try_emplace({K, j}, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    const Rational a_exp = even ? Rational(2 * i + 1, 2) : Rational(2 * i + 3, 2);
    for (int p = 0;; ++p) {
        int K0 = 2 * i + 2 * p + (even ? 0 : 1);
        if (K0 > maxK) break;
        for (int k = i;; ++k) {
            int K = 2 * k + 2 * p + (even ? 0 : 1);
            if (K > maxK) break;
            if (sp.is_flat() && k + p != i) continue;
            // EGF coefficient of τ^λ_{K,p}
            Rational gc = invpow_coeff(k - i, a_exp) * invpow_coeff(p, Rational(1, 2));
            Rational c = gc * factorial(k) * factorial(p);
            if (even)
                c *= binomial(long(2 * i), long(i));
            else
                c *= Rational(2).pow(2 * i + 1);
            int pi_exp = -(k + p) - (even ? 0 : 1);
            LambdaScalar coeff = lam_lambda(k + p - i, Scalar::pi_power(pi_exp, c));
            // τ^λ_{K,p} = Σ_{j≥p} binom(j,p) μ^λ_{K,j}
            for (int j = p; 2 * j <= K; ++j)
                add(K, j, coeff * lam_rat(binomial(long(j), long(p))));
        }
    }
    std::lock_guard lock(cache_mutex);
    return cache.emplace(key, std::move(out)).first->second;
}

MuCoords s_action_mu(const Space& sp, const MuCoords& in) {
    MuCoords out;
    auto add = [&](int k, int q, const LambdaScalar& c) {
        if (!valid_mu_index(sp, k, q) || c.is_zero()) return;
        auto [it, fresh] = out.try_emplace({k, q}, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (const auto& [idx, c] : in) {
        const int k = idx.k, q = idx.q;
        Rational r1(long(k - 2 * q + 2) * (k - 2 * q + 1), 2 * long(k + 2));
        Rational r2(2 * long(q + 1) * (k - q + 1), long(k + 2));
        add(k + 2, q, c * lam_pi(-1, r1));
        add(k + 2, q + 1, c * lam_pi(-1, r2));
    }
    return out;
}

ValElement st_to_mu(const Space& sp, const Poly2& st) {
    ValElement out(sp, ValBasis::Mu);
    // group by s-exponent so each t-expansion is s-multiplied once
    std::map<int, MuCoords> by_s;
    for (const auto& [key, c] : st.terms()) {
        MuCoords base = t_power_mu(sp, key.second);
        auto& acc = by_s[key.first];
        for (const auto& [i, v] : base) {
            auto [it, fresh] = acc.try_emplace(i, v * c);
            if (!fresh) {
                it->second += v * c;
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }
    for (auto& [s_exp, coords] : by_s) {
        MuCoords cur = coords;
        for (int a = 0; a < s_exp; ++a) cur = s_action_mu(sp, cur);
        for (const auto& [i, c] : cur) out.add_term(i, c);
    }
    return out;
}

// -------------------------------------------------------------- conversions

namespace {

ValElement tau_to_mu(const ValElement& v) {
    ValElement out(v.space(), ValBasis::Mu);
    for (const auto& [idx, c] : v.coords())
        for (int j = idx.q; 2 * j <= idx.k; ++j)
            out.add_term({idx.k, j}, c * lam_rat(binomial(long(j), long(idx.q))));
    return out;
}

ValElement mu_to_tau(const ValElement& v) {
    ValElement out(v.space(), ValBasis::Tau);
    for (const auto& [idx, c] : v.coords())
        for (int j = idx.q; 2 * j <= idx.k; ++j) {
            if (!valid_mu_index(v.space(), idx.k, j)) continue;
            Rational r = binomial(long(j), long(idx.q)) * Rational(-1).pow(j - idx.q);
            out.add_term({idx.k, j}, c * lam_rat(r));
        }
    return out;
}

}  // namespace

ValElement convert(const ValElement& v, ValBasis target) {
    if (v.basis() == target) return v;
    switch (v.basis()) {
        case ValBasis::Mu:
            if (target == ValBasis::Tau) return mu_to_tau(v);
            else {
                ValElement out(v.space(), ValBasis::ST);
                Poly2 acc;
                for (const auto& [idx, c] : v.coords())
                    acc += mu_to_st_rep(v.space(), idx) * c;
                return ValElement::from_st(v.space(), acc);
            }
        case ValBasis::Tau:
            return convert(tau_to_mu(v), target);
        case ValBasis::ST:
            return convert(st_to_mu(v.space(), v.st_poly()), target);
    }
    throw std::logic_error("convert: unreachable");
}

bool val_equal(const ValElement& a, const ValElement& b) {
    if (!(a.space() == b.space())) throw std::domain_error("val_equal: space mismatch");
    return convert(a, ValBasis::Mu).coords() == convert(b, ValBasis::Mu).coords();
}

// ------------------------------------------------------------------ algebra

ValElement multiply(const ValElement& a, const ValElement& b) {
    if (!(a.space() == b.space())) throw std::domain_error("multiply: space mismatch");
    Poly2 pa = convert(a, ValBasis::ST).st_poly();
    Poly2 pb = convert(b, ValBasis::ST).st_poly();
    if (a.space().is_infinite() && pa.weighted_degree() + pb.weighted_degree() > a.space().cap)
        throw std::domain_error("multiply: product would exceed the degree cap");
    return st_to_mu(a.space(), Poly2::mul(pa, pb, a.space().max_wdeg()));
}

ValElement s_multiply(const ValElement& v) {
    if (v.basis() == ValBasis::Tau) {
        // s·τ_kq = (k-2q+1)(k-2q+2)/(2π(k+2)) τ_{k+2,q} + (q+1)(2q+1)/(π(k+2)) τ_{k+2,q+1}
        ValElement out(v.space(), ValBasis::Tau);
        for (const auto& [idx, c] : v.coords()) {
            const int k = idx.k, q = idx.q;
            Rational r1(long(k - 2 * q + 1) * (k - 2 * q + 2), 2 * long(k + 2));
            Rational r2(long(q + 1) * (2 * q + 1), long(k + 2));
            out.add_term({k + 2, q}, c * lam_pi(-1, r1));
            out.add_term({k + 2, q + 1}, c * lam_pi(-1, r2));
        }
        return out;
    }
    ValElement mu = convert(v, ValBasis::Mu);
    if (v.space().is_infinite() && !mu.coords().empty() &&
        mu.coords().rbegin()->first.k + 2 > v.space().cap)
        throw std::domain_error("s_multiply: result would exceed the degree cap");
    ValElement out(v.space(), ValBasis::Mu);
    for (const auto& [i, c] : s_action_mu(v.space(), mu.coords())) out.add_term(i, c);
    return out;
}

ValElement t_multiply(const ValElement& v) {
    ValElement mu = convert(v, ValBasis::Mu);
    if (v.space().is_infinite() && !mu.coords().empty() &&
        mu.coords().rbegin()->first.k + 1 > v.space().cap)
        throw std::domain_error("t_multiply: result would exceed the degree cap");
    ValElement out(v.space(), ValBasis::Mu);
    if (!v.space().is_flat()) {
        // t_λ·μ^λ_kq acquires λ-corrections; only the λ=0 action is given by
        // the coordinate formula below.
        out = multiply(val_t(v.space()), mu);
    } else {
        for (const auto& [idx, c] : mu.coords()) {
            const int k = idx.k, q = idx.q;
            Scalar f = omega(k + 1) / (Scalar::pi_power(1) * omega(k));
            out.add_term({k + 1, q}, c * LambdaScalar(f * Scalar(Rational(k - 2 * q + 1))));
            out.add_term({k + 1, q + 1}, c * LambdaScalar(f * Scalar(Rational(2 * (q + 1)))));
        }
    }
    if (v.basis() == ValBasis::Tau) return mu_to_tau(out);
    return out;
}

ValElement val_chi(Space sp) {
    ValElement out(sp, ValBasis::Mu);
    for (const auto& [i, c] : t_power_mu(sp, 0)) out.add_term(i, c);
    return out;
}

ValElement val_t(Space sp) {
    ValElement out(sp, ValBasis::Mu);
    for (const auto& [i, c] : t_power_mu(sp, 1)) out.add_term(i, c);
    return out;
}

ValElement val_s(Space sp) { return val_monomial(sp, 1, 0); }

ValElement val_vol(Space sp) {
    if (sp.is_infinite()) throw std::domain_error("val_vol: infinite-dimensional space");
    return ValElement::basis_element(sp, ValBasis::Mu, 2 * sp.n, sp.n);
}

ValElement val_monomial(Space sp, int s_exp, int t_exp) {
    if (sp.is_infinite() && 2 * s_exp + t_exp > sp.cap)
        throw std::domain_error("val_monomial: weighted degree exceeds the cap");
    return st_to_mu(sp, Poly2::monomial(s_exp, t_exp, LambdaScalar(1)));
}

ValElement val_specialize_lambda(const ValElement& v, const Rational& lambda) {
    ValElement out(v.space(), v.basis());
    if (v.basis() == ValBasis::ST) {
        Poly2 p;
        for (const auto& [key, c] : v.st_poly().terms())
            p.add_term(key.first, key.second, LambdaScalar(c.specialize(lambda)));
        return ValElement::from_st(v.space(), p);
    }
    for (const auto& [i, c] : v.coords()) out.add_term(i, LambdaScalar(c.specialize(lambda)));
    return out;
}

// ---------------------------------------------------------------- iso maps

namespace {

ValElement relabel(const ValElement& v, Mode mode) {
    Space sp = v.space();
    sp.mode = mode;
    ValElement out(sp, ValBasis::Mu);
    ValElement mu = convert(v, ValBasis::Mu);
    for (const auto& [i, c] : mu.coords()) out.add_term(i, c);
    return out;
}

/// (1-λs)^±1 and the inverse series, applied through the (λ-independent)
/// s-action in Mu coordinates.
ValElement one_minus_lambda_s_times(const ValElement& v) {
    ValElement sv = s_multiply(convert(v, ValBasis::Mu));
    return convert(v, ValBasis::Mu) + sv.scaled(lam_lambda(1, Scalar(Rational(-1))));
}

ValElement inv_one_minus_lambda_s_times(const ValElement& v) {
    ValElement acc = convert(v, ValBasis::Mu);
    ValElement w = acc;
    int m_max = v.space().s_nilpotency();
    for (int m = 1; m <= m_max; ++m) {
        w = s_multiply(w);
        if (w.is_zero()) break;
        acc += w.scaled(lam_lambda(m, Scalar(1)));
    }
    return acc;
}

}  // namespace

ValElement iso_map(const ValElement& v, IsoKind which) {
    switch (which) {
        case IsoKind::F_lambda:
            if (!v.space().is_flat()) throw std::domain_error("F_lambda: expects a flat element");
            return relabel(v, Mode::Curved);
        case IsoKind::J_lambda:
            if (!v.space().is_flat()) throw std::domain_error("J_lambda: expects a flat element");
            return relabel(one_minus_lambda_s_times(v), Mode::Curved);
        case IsoKind::I_lambda:
            if (!v.space().is_flat()) throw std::domain_error("I_lambda: expects a flat element");
            return relabel(inv_one_minus_lambda_s_times(v), Mode::Curved);
        case IsoKind::I_lambda_inv:
            if (v.space().is_flat())
                throw std::domain_error("I_lambda_inv: expects a curved element");
            return one_minus_lambda_s_times(relabel(v, Mode::Flat));
    }
    throw std::logic_error("iso_map: unreachable");
}

ValElement alt_iso(const ValElement& v, AltIsoKind which) {
    if (!v.space().is_flat()) throw std::domain_error("alt_iso: expects a flat element");
    Space curved = v.space();
    curved.mode = Mode::Curved;
    const int cap = v.space().max_wdeg();
    Poly2 st = convert(v, ValBasis::ST).st_poly();
    if (which == AltIsoKind::TOverSqrt) {
        // t ↦ t (1 + λt²/4)^{-1/2}, s ↦ s
        Poly2 out;
        for (const auto& [key, c] : st.terms()) {
            const int a = key.first, b = key.second;
            for (int m = 0; 2 * a + b + 2 * m <= cap; ++m) {
                Rational r = binomial(Rational(-b, 2), m) * Rational(1, 4).pow(m);
                if (r.is_zero()) break;
                out.add_term(a, b + 2 * m, c * lam_lambda(m, Scalar(r)));
            }
        }
        return st_to_mu(curved, out);
    }
    // t ↦ t, u ↦ u
    Poly2 tu = st_to_tu_flat(st);
    return st_to_mu(curved, tu_to_st(tu, /*flat=*/false, cap));
}

// ---------------------------------------------------------------- tensors

void ValTensor::add_term(const ValIndex& a, const ValIndex& b, const LambdaScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.try_emplace({a, b}, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

ValTensor ValTensor::swapped() const {
    ValTensor r{sp, {}};
    for (const auto& [key, c] : terms) r.terms.emplace(std::make_pair(key.second, key.first), c);
    return r;
}

ValTensor& ValTensor::operator+=(const ValTensor& o) {
    for (const auto& [key, c] : o.terms) add_term(key.first, key.second, c);
    return *this;
}

ValTensor& ValTensor::operator-=(const ValTensor& o) {
    for (const auto& [key, c] : o.terms) add_term(key.first, key.second, -c);
    return *this;
}

Poly2 pkf_pi_tu(int n, int k, int r) {
    Scalar pref = Scalar::pi_power(k, double_factorial(2 * n - 4 * r + 1) * Rational(-1).pow(r)) /
                  omega(k);
    Poly2 out;
    for (int i = 0; i <= r; ++i) {
        Rational c = double_factorial(2 * r - 2 * i - 1) * Rational(-1).pow(i) /
                     (factorial(2 * r - 2 * i) * factorial(2 * i) *
                      double_factorial(2 * n - 2 * r - 2 * i + 1));
        out.add_term(i, k - 2 * i, LambdaScalar(pref * Scalar(c)));
    }
    return out;
}

Poly2 pkf_rho_tu(int n, int k, int r) {
    Scalar pref = Scalar::pi_power(k - 1, double_factorial(2 * n - 4 * r + 1) * Rational(2) *
                                              Rational(-1).pow(r)) /
                  omega(k);
    Poly2 out;
    Rational head = double_factorial(2 * r - 1) * factorial(k + 1) /
                    (double_factorial(2 * n - 2 * r + 1) * factorial(2 * r));
    for (int i = 0; 2 * i <= k - 1; ++i) {
        Rational c = head * Rational(-1).pow(i + 1) /
                     (factorial(2 * i + 3) * factorial(k - 2 * i - 1));
        out.add_term(i, k - 2 * i - 1, LambdaScalar(pref * Scalar(c)));
    }
    for (int i = 0; i <= r - 1; ++i) {
        Rational c = double_factorial(2 * r - 2 * i - 3) * Rational(-1).pow(i) /
                     (double_factorial(2 * n - 2 * r - 2 * i - 1) * factorial(2 * r - 2 * i - 2) *
                      factorial(2 * i + 2));
        out.add_term(i, k - 2 * i - 1, LambdaScalar(pref * Scalar(c)));
    }
    return out;
}

namespace {

MuCoords flat_mu_coords(int n, const Poly2& tu) {
    Space sp = Space::flat(n);
    return st_to_mu(sp, tu_to_st(tu, /*flat=*/true, sp.max_wdeg())).coords();
}

}  // namespace

ValTensor kinematic_chi(Space sp) {
    if (sp.is_infinite()) throw std::domain_error("kinematic_chi: infinite-dimensional space");
    static std::map<int, ValTensor> cache;
    const int n = sp.n;
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(n); it != cache.end()) {
            ValTensor t = it->second;
            t.sp = sp;
            return t;
        }
    }
    ValTensor out{Space::flat(n), {}};
    for (int k = 0; k <= 2 * n; ++k) {
        for (int r = 0; 2 * r <= std::min(k, 2 * n - k); ++r) {
            LambdaScalar a{a_nkr(n, k, r)};
            MuCoords left = flat_mu_coords(n, pkf_pi_tu(n, k, r));
            MuCoords right = flat_mu_coords(n, pkf_pi_tu(n, 2 * n - k, r));
            for (const auto& [i1, c1] : left)
                for (const auto& [i2, c2] : right) out.add_term(i1, i2, a * c1 * c2);
        }
    }
    {
        std::lock_guard lock(cache_mutex);
        cache.emplace(n, out);
    }
    out.sp = sp;
    return out;
}

ValTensor multiply_first_leg(const ValElement& v, const ValTensor& T) {
    if (!(v.space() == T.sp)) throw std::domain_error("multiply_first_leg: space mismatch");
    std::map<ValIndex, ValElement> groups;
    for (const auto& [key, c] : T.terms) {
        auto [it, fresh] = groups.try_emplace(key.second, ValElement(T.sp, ValBasis::Mu));
        it->second.add_term(key.first, c);
    }
    ValTensor out{T.sp, {}};
    for (const auto& [second, first_elem] : groups) {
        ValElement prod = multiply(v, first_elem);
        for (const auto& [i, c] : prod.coords()) out.add_term(i, second, c);
    }
    return out;
}

ValTensor kinematic(const ValElement& v) { return multiply_first_leg(v, kinematic_chi(v.space())); }

// ------------------------------------------------------------- functionals

void ValFunctional::add_term(const ValIndex& idx, const LambdaScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = kq_.try_emplace(idx, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) kq_.erase(it);
    }
}

LambdaScalar ValFunctional::pair(const ValElement& v) const {
    if (!(v.space() == sp_)) throw std::domain_error("ValFunctional::pair: space mismatch");
    LambdaScalar acc;
    ValElement mu = convert(v, ValBasis::Mu);
    for (const auto& [i, c] : mu.coords()) {
        auto it = kq_.find(i);
        if (it != kq_.end()) acc += it->second * c;
    }
    return acc;
}

namespace {

/// ⟨vol*, μ^λ_kq⟩ through the canonical (s,t)-representative and
/// ⟨vol*, t^{2i}s^j⟩ = λ^{n-i-j}/ω_{2n}·binom(2i,i)·binom(n-j+1,i+1).
LambdaScalar vol_star_mu(const Space& sp, const ValIndex& idx) {
    static std::map<CacheKey, LambdaScalar> cache;
    CacheKey key{sp.n, sp.cap, int(sp.mode), idx.k, idx.q};
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const int n = sp.n;
    Scalar inv_omega = Scalar(1) / omega(2 * n);
    LambdaScalar acc;
    Poly2 rep = mu_to_st_rep(sp, idx);
    for (const auto& [mkey, c] : rep.terms()) {
        const int j = mkey.first, b = mkey.second;
        if (b % 2 != 0) continue;
        const int i = b / 2;
        if (i + j > n) continue;  // binom(n-j+1, i+1) vanishes
        Rational r = binomial(long(2 * i), long(i)) * binomial(long(n - j + 1), long(i + 1));
        acc += c * lam_lambda(n - i - j, inv_omega * Scalar(r));
    }
    if (sp.is_flat()) acc = LambdaScalar(acc.specialize(Rational(0)));
    std::lock_guard lock(cache_mutex);
    return cache.emplace(key, std::move(acc)).first->second;
}

}  // namespace

LambdaScalar vol_star(const ValElement& v) {
    if (v.space().is_infinite()) throw std::domain_error("vol_star: infinite-dimensional space");
    LambdaScalar acc;
    ValElement mu = convert(v, ValBasis::Mu);
    for (const auto& [i, c] : mu.coords()) acc += c * vol_star_mu(v.space(), i);
    return acc;
}

ValFunctional vol_star_functional(Space sp) {
    ValFunctional f(sp);
    for (const auto& idx : mu_indices(sp)) f.add_term(idx, vol_star_mu(sp, idx));
    return f;
}

LambdaScalar pd_pairing(const ValElement& a, const ValElement& b) {
    return vol_star(multiply(a, b));
}

ValFunctional pd_functional(const ValElement& v) {
    ValFunctional f(v.space());
    for (const auto& idx : mu_indices(v.space())) {
        ValElement b = ValElement::basis_element(v.space(), ValBasis::Mu, idx.k, idx.q);
        f.add_term(idx, pd_pairing(v, b));
    }
    return f;
}

ValElement contract_first(const ValTensor& T, const ValFunctional& f) {
    ValElement out(T.sp, ValBasis::Mu);
    for (const auto& [key, c] : T.terms) {
        auto it = f.coords().find(key.first);
        if (it != f.coords().end()) out.add_term(key.second, c * it->second);
    }
    return out;
}

ValElement contract_second(const ValTensor& T, const ValFunctional& f) {
    ValElement out(T.sp, ValBasis::Mu);
    for (const auto& [key, c] : T.terms) {
        auto it = f.coords().find(key.second);
        if (it != f.coords().end()) out.add_term(key.first, c * it->second);
    }
    return out;
}

// -------------------------------------------------------------- evaluation

ValElement restrict_val(const ValElement& v, int m) {
    if (v.space().is_infinite()) {
        if (m < 0) throw std::domain_error("restrict_val: bad target dimension");
    } else if (m > v.space().n) {
        throw std::domain_error("restrict_val: m exceeds the ambient dimension");
    }
    Space tgt{m, 2 * m, v.space().mode};
    ValElement out(tgt, ValBasis::Mu);
    ValElement mu = convert(v, ValBasis::Mu);
    for (const auto& [i, c] : mu.coords()) out.add_term(i, c);
    return out;
}

LambdaScalar eval_on_cpm(const ValElement& v, int m) {
    if (v.space().is_flat())
        throw std::domain_error("eval_on_cpm: ℂP^m templates live in the curved family");
    ValElement w = restrict_val(v, m);
    LambdaScalar acc;
    for (const auto& [i, c] : w.coords()) {
        if (i.k != 2 * i.q) continue;  // μ^λ_{kq}(ℂP^m) = 0 for k > 2q
        acc += c * lam_lambda(-i.q, Scalar::pi_power(i.q, Rational(1) / factorial(i.q)));
    }
    return acc;
}

TrigPoly eval_on_ball(const ValElement& v) {
    if (v.space().is_infinite() || v.space().is_flat())
        throw std::domain_error("eval_on_ball: expects a finite-dimensional curved element");
    const int n = v.space().n;
    TrigPoly out;
    ValElement mu = convert(v, ValBasis::Mu);
    for (const auto& [i, c] : mu.coords()) {
        Scalar s = c_nkq(n, i.k, i.q) * Scalar::pi_power(n, Rational(2).pow(i.k - 2 * i.q));
        out.add_term(i.k, 2 * n - i.k, std::nullopt, c * LambdaScalar(s));
    }
    return out;
}

ValElement chern_valuation(Space sp, int k) {
    if (sp.is_infinite()) throw std::domain_error("chern_valuation: infinite-dimensional space");
    if (k < 0 || k > sp.n) throw std::domain_error("chern_valuation: k out of range");
    ValElement out(sp, ValBasis::Mu);
    const int qmax = sp.is_flat() ? k : sp.n;
    for (int q = k; q <= qmax; ++q) {
        Rational r = factorial(q) * binomial(long(q), long(k));
        out.add_term({2 * q, q}, lam_lambda(q - k, Scalar::pi_power(-(q - k), r)));
    }
    return out;
}

std::map<int, LambdaScalar> chern_from_mu(const ValElement& v) {
    ValElement mu = convert(v, ValBasis::Mu);
    std::map<int, LambdaScalar> out;
    for (const auto& [i, c] : mu.coords()) {
        if (i.k != 2 * i.q)
            throw std::domain_error("chern_from_mu: element is not in span{μ_{2q,q}}");
        const int q = i.q;
        for (int k = q; k <= v.space().n; ++k) {
            Rational r = binomial(long(k), long(q)) * Rational(-1).pow(k - q) / factorial(q);
            LambdaScalar term = c * lam_lambda(k - q, Scalar::pi_power(-(k - q), r));
            if (term.is_zero()) continue;
            auto [it, fresh] = out.try_emplace(k, term);
            if (!fresh) {
                it->second += term;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

}  // namespace hig
