#include "hig/json_io.hpp"

namespace hig {

json to_json(const LambdaScalar& c) {
    json arr = json::array();
    for (const auto& [le, s] : c.terms())
        for (const auto& [pe, r] : s.terms())
            arr.push_back({{"lambda", le},
                           {"pi", pe},
                           {"num", r.num_string()},
                           {"den", r.den_string()}});
    return arr;
}

LambdaScalar lambda_scalar_from_json(const json& j) {
    LambdaScalar out;
    for (const auto& term : j) {
        Rational r = Rational::from_string(term.at("num").get<std::string>(),
                                           term.at("den").get<std::string>());
        out += LambdaScalar::lambda_power(term.at("lambda").get<int>(),
                                          Scalar::pi_power(term.at("pi").get<int>(), r));
    }
    return out;
}

namespace {

json space_to_json(const Space& sp) {
    json j;
    if (sp.is_infinite()) {
        j["n"] = "inf";
        j["cap"] = sp.cap;
    } else {
        j["n"] = sp.n;
    }
    j["mode"] = sp.is_flat() ? "flat" : "curved";
    return j;
}

Space space_from_json(const json& j) {
    Mode mode = j.value("mode", std::string("curved")) == "flat" ? Mode::Flat : Mode::Curved;
    if (j.at("n").is_string()) return Space::infinite(j.at("cap").get<int>(), mode);
    int n = j.at("n").get<int>();
    return mode == Mode::Flat ? Space::flat(n) : Space::curved(n);
}

}  // namespace

json to_json(const ValElement& v) {
    json j = space_to_json(v.space());
    json terms = json::array();
    if (v.basis() == ValBasis::ST) {
        j["basis"] = "st";
        for (const auto& [key, c] : v.st_poly().terms())
            terms.push_back({{"s", key.first}, {"t", key.second}, {"coef", to_json(c)}});
    } else {
        j["basis"] = v.basis() == ValBasis::Mu ? "mu" : "tau";
        for (const auto& [idx, c] : v.coords())
            terms.push_back({{"k", idx.k}, {"q", idx.q}, {"coef", to_json(c)}});
    }
    j["terms"] = terms;
    return j;
}

ValElement val_element_from_json(const json& j) {
    Space sp = space_from_json(j);
    std::string basis = j.at("basis").get<std::string>();
    if (basis == "st") {
        Poly2 p;
        for (const auto& t : j.at("terms"))
            p.add_term(t.at("s").get<int>(), t.at("t").get<int>(),
                       lambda_scalar_from_json(t.at("coef")));
        return ValElement::from_st(sp, p);
    }
    ValElement v(sp, basis == "mu" ? ValBasis::Mu : ValBasis::Tau);
    for (const auto& t : j.at("terms"))
        v.add_term({t.at("k").get<int>(), t.at("q").get<int>()},
                   lambda_scalar_from_json(t.at("coef")));
    return v;
}

std::string family_name(CurvFamily f) {
    switch (f) {
        case CurvFamily::Delta: return "Delta";
        case CurvFamily::N: return "N";
        case CurvFamily::B: return "B";
        case CurvFamily::Gamma: return "Gamma";
    }
    return "?";
}

CurvFamily family_from_name(const std::string& s) {
    if (s == "Delta" || s == "delta" || s == "D") return CurvFamily::Delta;
    if (s == "N") return CurvFamily::N;
    if (s == "B") return CurvFamily::B;
    if (s == "Gamma" || s == "gamma" || s == "G") return CurvFamily::Gamma;
    throw std::domain_error("unknown curvature-measure family: " + s);
}

json to_json(const CurvElement& c) {
    json j;
    j["n"] = c.n();
    j["basis"] = c.basis() == CurvBasis::DeltaN ? "delta_n" : "b_gamma";
    json terms = json::array();
    for (const auto& [idx, v] : c.coords())
        terms.push_back({{"family", family_name(idx.family)},
                         {"k", idx.k},
                         {"q", idx.q},
                         {"coef", to_json(v)}});
    j["terms"] = terms;
    return j;
}

CurvElement curv_element_from_json(const json& j) {
    CurvBasis basis = j.at("basis").get<std::string>() == "delta_n" ? CurvBasis::DeltaN
                                                                    : CurvBasis::BGamma;
    CurvElement c(j.at("n").get<int>(), basis);
    for (const auto& t : j.at("terms"))
        c.add_term({family_from_name(t.at("family").get<std::string>()), t.at("k").get<int>(),
                    t.at("q").get<int>()},
                   lambda_scalar_from_json(t.at("coef")));
    return c;
}

json to_json(const ValTensor& t) {
    json j = space_to_json(t.sp);
    json terms = json::array();
    for (const auto& [key, c] : t.terms)
        terms.push_back({{"a", {{"k", key.first.k}, {"q", key.first.q}}},
                         {"b", {{"k", key.second.k}, {"q", key.second.q}}},
                         {"coef", to_json(c)}});
    j["terms"] = terms;
    return j;
}

ValTensor val_tensor_from_json(const json& j) {
    ValTensor t{space_from_json(j), {}};
    for (const auto& term : j.at("terms"))
        t.add_term({term.at("a").at("k").get<int>(), term.at("a").at("q").get<int>()},
                   {term.at("b").at("k").get<int>(), term.at("b").at("q").get<int>()},
                   lambda_scalar_from_json(term.at("coef")));
    return t;
}

namespace {

json curv_index_json(const CurvIndex& i) {
    return {{"family", family_name(i.family)}, {"k", i.k}, {"q", i.q}};
}

CurvIndex curv_index_from_json(const json& j) {
    return {family_from_name(j.at("family").get<std::string>()), j.at("k").get<int>(),
            j.at("q").get<int>()};
}

}  // namespace

CurvTensor curv_tensor_from_json(const json& j) {
    CurvTensor t{j.at("n").get<int>(), {}};
    for (const auto& term : j.at("terms"))
        t.add_term(curv_index_from_json(term.at("a")), curv_index_from_json(term.at("b")),
                   lambda_scalar_from_json(term.at("coef")));
    return t;
}

TrigPoly trig_poly_from_json(const json& j) {
    TrigPoly p;
    for (const auto& term : j) {
        std::optional<IntegralAtom> atom;
        if (!term.at("atom").is_null())
            atom = IntegralAtom{term.at("atom")[0].get<int>(), term.at("atom")[1].get<int>()};
        p.add_term(term.at("sn").get<int>(), term.at("cs").get<int>(), atom,
                   lambda_scalar_from_json(term.at("coef")));
    }
    return p;
}

json to_json(const CurvTensor& t) {
    json j;
    j["n"] = t.n;
    json terms = json::array();
    for (const auto& [key, c] : t.terms)
        terms.push_back({{"a", curv_index_json(key.first)},
                         {"b", curv_index_json(key.second)},
                         {"coef", to_json(c)}});
    j["terms"] = terms;
    return j;
}

json to_json(const SemiLocalTensor& t) {
    json j;
    j["n"] = t.n;
    j["mode"] = t.mode == Mode::Flat ? "flat" : "curved";
    json terms = json::array();
    for (const auto& [key, c] : t.terms)
        terms.push_back({{"a", curv_index_json(key.first)},
                         {"b", {{"k", key.second.k}, {"q", key.second.q}}},
                         {"coef", to_json(c)}});
    j["terms"] = terms;
    return j;
}

json to_json(const TrigPoly& p) {
    json arr = json::array();
    for (const auto& [key, c] : p.terms()) {
        json t = {{"sn", key.sn_exp}, {"cs", key.cs_exp}, {"coef", to_json(c)}};
        t["atom"] = key.atom ? json{key.atom->sn_exp, key.atom->cs_exp} : json(nullptr);
        arr.push_back(t);
    }
    return arr;
}

json to_json(const ValTrigMap& m) {
    json arr = json::array();
    for (const auto& [idx, p] : m)
        arr.push_back({{"k", idx.k}, {"q", idx.q}, {"poly", to_json(p)}});
    return arr;
}

json to_json(const CurvTrigMap& m) {
    json arr = json::array();
    for (const auto& [idx, p] : m)
        arr.push_back({{"family", family_name(idx.family)},
                       {"k", idx.k},
                       {"q", idx.q},
                       {"poly", to_json(p)}});
    return arr;
}

json to_json(const std::map<int, TrigPoly>& m) {
    json arr = json::array();
    for (const auto& [j0, p] : m) arr.push_back({{"chern", j0}, {"poly", to_json(p)}});
    return arr;
}

json to_json(const std::map<int, LambdaScalar>& m) {
    json arr = json::array();
    for (const auto& [k, c] : m) arr.push_back({{"k", k}, {"coef", to_json(c)}});
    return arr;
}

json to_json(const ChernTensor& t) {
    json arr = json::array();
    for (const auto& [key, c] : t)
        arr.push_back({{"a", key.first}, {"b", key.second}, {"coef", to_json(c)}});
    return arr;
}

}  // namespace hig
