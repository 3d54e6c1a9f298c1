#include "hig/latex.hpp"

#include <sstream>

namespace hig {

namespace {

std::string latex_rational(const Rational& r, int pi_exp) {
    // folds π^{pi_exp} into the printed fraction
    std::ostringstream os;
    Rational a = r.sign() < 0 ? -r : r;
    std::string num = a.num_string(), den = a.den_string();
    std::string pi_num, pi_den;
    if (pi_exp > 0) pi_num = pi_exp == 1 ? "\\pi" : "\\pi^{" + std::to_string(pi_exp) + "}";
    if (pi_exp < 0) pi_den = pi_exp == -1 ? "\\pi" : "\\pi^{" + std::to_string(-pi_exp) + "}";
    if (r.sign() < 0) os << "-";
    bool den_trivial = (den == "1") && pi_den.empty();
    if (den_trivial) {
        if (num == "1" && !pi_num.empty()) os << pi_num;
        else os << num << pi_num;
        return os.str();
    }
    os << "\\frac{";
    if (num == "1" && !pi_num.empty()) os << pi_num;
    else os << num << pi_num;
    os << "}{";
    if (den == "1") os << pi_den;
    else os << den << pi_den;
    os << "}";
    return os.str();
}

}  // namespace

std::string latex_scalar(const Scalar& s) {
    if (s.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, r] : s.terms()) {
        std::string t = latex_rational(r, e);
        if (!first && t[0] != '-') os << " + ";
        if (!first && t[0] == '-') {
            os << " - ";
            t = t.substr(1);
        }
        os << t;
        first = false;
    }
    return os.str();
}

std::string latex_lambda_scalar(const LambdaScalar& c) {
    if (c.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, s] : c.terms()) {
        std::string body = latex_scalar(s);
        if (!first) os << " + ";
        first = false;
        if (e == 0) {
            os << body;
            continue;
        }
        bool wrap = s.terms().size() > 1;
        if (wrap) os << "\\left(" << body << "\\right)";
        else if (body == "1") { /* just the λ-power */ }
        else if (body == "-1") os << "-";
        else os << body;
        os << "\\lambda";
        if (e != 1) os << "^{" << e << "}";
    }
    return os.str();
}

namespace {

/// Coefficient in front of a basis symbol; empty for 1, "-" for -1.
std::string latex_coeff(const LambdaScalar& c) {
    std::string s = latex_lambda_scalar(c);
    if (s == "1") return "";
    if (s == "-1") return "-";
    if (c.terms().size() == 1 && c.terms().begin()->second.terms().size() == 1) return s + "\\,";
    return "\\left(" + s + "\\right)";
}

std::string mu_symbol(const Space& sp, const ValIndex& i, ValBasis basis) {
    std::string head = basis == ValBasis::Tau ? "\\tau" : "\\mu";
    if (!sp.is_flat()) head += "^\\lambda";
    return head + "_{" + std::to_string(i.k) + "," + std::to_string(i.q) + "}";
}

std::string curv_symbol(const CurvIndex& i) {
    std::string head;
    switch (i.family) {
        case CurvFamily::Delta: head = "\\Delta"; break;
        case CurvFamily::N: head = "N"; break;
        case CurvFamily::B: head = "B"; break;
        case CurvFamily::Gamma: head = "\\Gamma"; break;
    }
    return head + "_{" + std::to_string(i.k) + "," + std::to_string(i.q) + "}";
}

}  // namespace

namespace {

/// Joins terms with sign-aware separators: a leading '-' in the term folds
/// into " - " instead of printing "+ -".
void append_term(std::ostringstream& os, bool& first, std::string term,
                 const char* line_break) {
    bool negative = !term.empty() && term[0] == '-';
    if (negative) term.erase(0, 1);
    if (first) {
        if (negative) os << "-";
    } else {
        os << line_break << (negative ? " - " : " + ");
    }
    first = false;
    os << term;
}

}  // namespace

std::string latex_val_element(const ValElement& v) {
    std::ostringstream os;
    bool first = true;
    if (v.basis() == ValBasis::ST) {
        for (const auto& [key, c] : v.st_poly().terms()) {
            std::ostringstream term;
            term << latex_coeff(c);
            if (key.first) term << "s^{" << key.first << "}";
            if (key.second) term << "t^{" << key.second << "}";
            if (!key.first && !key.second) term << "\\chi";
            append_term(os, first, term.str(), "");
        }
        return first ? "0" : os.str();
    }
    if (v.is_zero()) return "0";
    for (const auto& [i, c] : v.coords())
        append_term(os, first, latex_coeff(c) + mu_symbol(v.space(), i, v.basis()), "");
    return os.str();
}

std::string latex_curv_element(const CurvElement& c) {
    if (c.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, v] : c.coords())
        append_term(os, first, latex_coeff(v) + curv_symbol(i), "");
    return os.str();
}

std::string latex_val_tensor(const ValTensor& t) {
    if (t.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : t.terms)
        append_term(os, first,
                    latex_coeff(c) + mu_symbol(t.sp, key.first, ValBasis::Mu) + " \\otimes " +
                        mu_symbol(t.sp, key.second, ValBasis::Mu),
                    "\n");
    return os.str();
}

std::string latex_curv_tensor(const CurvTensor& t) {
    if (t.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : t.terms)
        append_term(os, first,
                    latex_coeff(c) + curv_symbol(key.first) + " \\otimes " + curv_symbol(key.second),
                    "\n");
    return os.str();
}

namespace {

void csv_poly_rows(std::ostringstream& os, const std::string& prefix, const TrigPoly& p,
                   bool numeric, const Rational& lambda, double r) {
    for (const auto& [key, c] : p.terms()) {
        os << prefix << "," << c.str() << "," << key.sn_exp << "," << key.cs_exp << ",";
        if (key.atom) os << key.atom->sn_exp << ":" << key.atom->cs_exp;
        if (numeric) {
            TrigPoly one;
            one.add_term(key.sn_exp, key.cs_exp, key.atom, c);
            os << "," << one.evaluate(lambda, r);
        }
        os << "\n";
    }
}

}  // namespace

std::string csv_val_trig(const ValTrigMap& m, bool numeric, const Rational& lambda, double r) {
    std::ostringstream os;
    os << "k,q,coefficient,sn_exp,cs_exp,atom" << (numeric ? ",numeric" : "") << "\n";
    for (const auto& [i, p] : m)
        csv_poly_rows(os, std::to_string(i.k) + "," + std::to_string(i.q), p, numeric, lambda, r);
    return os.str();
}

std::string csv_curv_trig(const CurvTrigMap& m, bool numeric, const Rational& lambda, double r) {
    std::ostringstream os;
    os << "family,k,q,coefficient,sn_exp,cs_exp,atom" << (numeric ? ",numeric" : "") << "\n";
    for (const auto& [i, p] : m) {
        std::string fam = i.family == CurvFamily::Delta  ? "Delta"
                          : i.family == CurvFamily::N    ? "N"
                          : i.family == CurvFamily::B    ? "B"
                                                         : "Gamma";
        csv_poly_rows(os, fam + "," + std::to_string(i.k) + "," + std::to_string(i.q), p, numeric,
                      lambda, r);
    }
    return os.str();
}

std::string csv_chern_trig(const std::map<int, TrigPoly>& m, bool numeric, const Rational& lambda,
                           double r) {
    std::ostringstream os;
    os << "chern,coefficient,sn_exp,cs_exp,atom" << (numeric ? ",numeric" : "") << "\n";
    for (const auto& [j, p] : m) csv_poly_rows(os, std::to_string(j), p, numeric, lambda, r);
    return os.str();
}

}  // namespace hig
