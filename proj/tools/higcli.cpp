#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hig/json_io.hpp"
#include "hig/latex.hpp"
#include "hig/verify.hpp"

using namespace hig;

namespace {

struct LambdaFlag {
    bool formal = true;
    Rational value;  // when !formal
};

LambdaFlag parse_lambda(const std::string& s) {
    if (s == "formal") return {};
    LambdaFlag f;
    f.formal = false;
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        f.value = Rational::from_string(s);
    } else {
        f.value = Rational::from_string(s.substr(0, slash), s.substr(slash + 1));
    }
    return f;
}

std::pair<int, int> parse_kq(const std::string& body) {
    auto comma = body.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("expected k,q in element spec");
    return {std::stoi(body.substr(0, comma)), std::stoi(body.substr(comma + 1))};
}

/// Element specs: chi | t | s | vol | mu:k,q | tau:k,q | st:a,b | @file.json
ValElement parse_val(const std::string& spec, const Space& sp) {
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw CLI::ValidationError("cannot open " + spec.substr(1));
        return val_element_from_json(json::parse(in));
    }
    if (spec == "chi") return val_chi(sp);
    if (spec == "t") return val_t(sp);
    if (spec == "s") return val_s(sp);
    if (spec == "vol") return val_vol(sp);
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("bad element spec: " + spec);
    std::string head = spec.substr(0, colon);
    auto [k, q] = parse_kq(spec.substr(colon + 1));
    if (head == "mu") return ValElement::basis_element(sp, ValBasis::Mu, k, q);
    if (head == "tau") return ValElement::basis_element(sp, ValBasis::Tau, k, q);
    if (head == "st") return val_monomial(sp, k, q);
    throw CLI::ValidationError("bad element spec: " + spec);
}

/// Curvature specs: Delta:k,q | N:k,q | B:k,q | Gamma:k,q | @file.json
CurvElement parse_curv(const std::string& spec, int n) {
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw CLI::ValidationError("cannot open " + spec.substr(1));
        return curv_element_from_json(json::parse(in));
    }
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("bad element spec: " + spec);
    auto [k, q] = parse_kq(spec.substr(colon + 1));
    return CurvElement::basis_element(n, family_from_name(spec.substr(0, colon)), k, q);
}

ValElement maybe_specialize(const ValElement& v, const LambdaFlag& lf) {
    return lf.formal ? v : val_specialize_lambda(v, lf.value);
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

void print_val(const ValElement& v, const std::string& format) {
    if (format == "latex") std::cout << latex_val_element(v) << "\n";
    else print_json(to_json(v));
}

void print_curv(const CurvElement& c, const std::string& format) {
    if (format == "latex") std::cout << latex_curv_element(c) << "\n";
    else print_json(to_json(c));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact integral geometry of complex space forms"};
    app.require_subcommand(1);

    int n = 1;
    std::string lambda_str = "formal";
    std::string format = "json";
    std::string basis_str = "mu";
    bool numeric = false;
    double radius = 0.5;

    auto add_common = [&](CLI::App* cmd, bool with_basis = false) {
        cmd->add_option("--n", n, "complex dimension");
        cmd->add_option("--lambda", lambda_str, "formal or a rational p/q");
        cmd->add_option("--format", format, "json|csv|latex");
        cmd->add_flag("--numeric", numeric, "add a float column to CSV output");
        cmd->add_option("--r", radius, "radius for the numeric column");
        if (with_basis) cmd->add_option("--basis", basis_str, "mu|tau|st");
    };

    std::string target, second, op = "t", on = "cpm", kind = "global", val_spec;
    int m = 0, kk = 0, qq = 0, n_max = 8, lambda_terms = -1;
    std::vector<std::string> suites;
    std::string config_path;

    auto* c_convert = app.add_subcommand("convert", "change the basis of a valuation");
    add_common(c_convert, true);
    c_convert->add_option("--target", target, "element spec")->required();

    auto* c_mult = app.add_subcommand("mult", "Alesker product");
    add_common(c_mult);
    c_mult->add_option("--a", target, "left factor")->required();
    c_mult->add_option("--b", second, "right factor")->required();

    auto* c_kinchi = app.add_subcommand("kin-chi", "principal kinematic formula");
    add_common(c_kinchi);

    auto* c_kin = app.add_subcommand("kin", "kinematic formula of a valuation");
    add_common(c_kin);
    c_kin->add_option("--target", target, "element spec")->required();

    auto* c_lk = app.add_subcommand("local-kin", "local kinematic formula");
    add_common(c_lk);
    c_lk->add_option("--target", target, "curvature measure spec")->required();

    auto* c_sl = app.add_subcommand("semi-local", "semi-local kinematic formula");
    add_common(c_sl);
    c_sl->add_option("--target", target, "curvature measure spec")->required();

    auto* c_act = app.add_subcommand("act", "module action on curvature measures");
    add_common(c_act);
    c_act->add_option("--op", op, "s|t|u|t-lambda|val");
    c_act->add_option("--target", target, "curvature measure spec")->required();
    c_act->add_option("--val", val_spec, "valuation spec for --op val");

    auto* c_glob = app.add_subcommand("glob", "globalization map");
    add_common(c_glob);
    c_glob->add_option("--target", target, "curvature measure spec")->required();

    auto* c_dec = app.add_subcommand("decompose", "free-module decomposition");
    add_common(c_dec);
    c_dec->add_option("--target", target, "curvature measure spec")->required();

    auto* c_tube = app.add_subcommand("tube", "tube formulas");
    add_common(c_tube);
    c_tube->add_option("--kind", kind, "global|local|complex|cpm|real");
    c_tube->add_option("--m", m, "submanifold dimension for cpm");
    c_tube->add_option("--k", kk, "degree for the totally real identity");

    auto* c_ck = app.add_subcommand("complex-kin", "kinematic formulas for subvarieties");
    add_common(c_ck);
    c_ck->add_option("--q", qq, "index of Γ_{2q,q} / Chern measure");
    bool chern = false;
    c_ck->add_flag("--chern", chern, "emit the Chern-coordinate (Shifrin) form");

    auto* c_eval = app.add_subcommand("eval", "template evaluations");
    add_common(c_eval);
    c_eval->add_option("--target", target, "element spec")->required();
    c_eval->add_option("--on", on, "cpm|ball");
    c_eval->add_option("--m", m, "ℂP^m for --on cpm");

    auto* c_verify = app.add_subcommand("verify", "verification sweeps");
    add_common(c_verify);
    c_verify->add_option("--suite", suites, "suite names or 'all'");
    c_verify->add_option("--n-max", n_max, "run each suite for 1..n-max");
    c_verify->add_option("--config", config_path, "file with lines: suite n [lambda]");

    auto* c_conj = app.add_subcommand("conjecture", "check the structure conjecture");
    add_common(c_conj);
    c_conj->add_option("--n-max", n_max, "largest dimension to check");
    c_conj->add_option("--lambda-terms", lambda_terms, "λ-series truncation (default: auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        LambdaFlag lf = parse_lambda(lambda_str);
        Space sp = lf.formal || !lf.value.is_zero() ? Space::curved(n) : Space::flat(n);

        if (*c_convert) {
            ValBasis b = basis_str == "mu"    ? ValBasis::Mu
                         : basis_str == "tau" ? ValBasis::Tau
                                              : ValBasis::ST;
            print_val(maybe_specialize(convert(parse_val(target, sp), b), lf), format);
        } else if (*c_mult) {
            ValElement prod = multiply(parse_val(target, sp), parse_val(second, sp));
            print_val(maybe_specialize(prod, lf), format);
        } else if (*c_kinchi) {
            ValTensor T = kinematic_chi(sp);
            if (format == "latex") std::cout << latex_val_tensor(T) << "\n";
            else print_json(to_json(T));
        } else if (*c_kin) {
            ValTensor T = kinematic(parse_val(target, sp));
            if (format == "latex") std::cout << latex_val_tensor(T) << "\n";
            else print_json(to_json(T));
        } else if (*c_lk) {
            CurvTensor T = local_kinematic(parse_curv(target, n));
            if (format == "latex") std::cout << latex_curv_tensor(T) << "\n";
            else print_json(to_json(T));
        } else if (*c_sl) {
            print_json(to_json(semi_local(parse_curv(target, n),
                                          sp.is_flat() ? Mode::Flat : Mode::Curved)));
        } else if (*c_act) {
            CurvElement c = parse_curv(target, n);
            CurvElement res;
            if (op == "s") res = act_s(c);
            else if (op == "t") res = act_t(c);
            else if (op == "u") res = act_u(c);
            else if (op == "t-lambda") res = act_t_lambda(c);
            else if (op == "val") res = act_val_lambda(parse_val(val_spec, Space::curved(n)), c);
            else throw CLI::ValidationError("unknown --op " + op);
            print_curv(res, format);
        } else if (*c_glob) {
            ValElement g = globalize(parse_curv(target, n),
                                     sp.is_flat() ? Mode::Flat : Mode::Curved);
            print_val(maybe_specialize(g, lf), format);
        } else if (*c_dec) {
            auto [p1, p2] = free_decompose(parse_curv(target, n));
            json j = {{"ell_part", to_json(p1)}, {"nn_part", to_json(p2)}};
            print_json(j);
        } else if (*c_tube) {
            Rational lv = lf.formal ? Rational(0) : lf.value;
            if (kind == "global") {
                auto tmap = global_tube(n);
                if (format == "csv") std::cout << csv_val_trig(tmap, numeric, lv, radius);
                else print_json(to_json(tmap));
            } else if (kind == "local") {
                auto tmap = local_tube(n);
                if (format == "csv") std::cout << csv_curv_trig(tmap, numeric, lv, radius);
                else print_json(to_json(tmap));
            } else if (kind == "complex") {
                auto tmap = complex_tube(n);
                if (format == "csv") std::cout << csv_chern_trig(tmap, numeric, lv, radius);
                else print_json(to_json(tmap));
            } else if (kind == "cpm") {
                TrigPoly p = cpm_tube(m, n);
                print_json(to_json(p));
            } else if (kind == "real") {
                Poly2 res = totally_real_residual(n, kk);
                json j = {{"k", kk}, {"residual_zero", res.is_zero()}};
                print_json(j);
                if (!res.is_zero()) return 1;
            } else {
                throw CLI::ValidationError("unknown --kind " + kind);
            }
        } else if (*c_ck) {
            if (chern) {
                json j = {{"closed_form", to_json(shifrin(n, qq))},
                          {"from_gamma", to_json(shifrin_from_gamma(n, qq))}};
                print_json(j);
            } else {
                print_json(to_json(complex_kinematic(n, qq)));
            }
        } else if (*c_eval) {
            ValElement v = parse_val(target, Space::curved(n));
            if (on == "cpm") {
                LambdaScalar val = eval_on_cpm(v, m);
                json j = {{"value", to_json(val)}};
                if (!lf.formal) j["specialized"] = val.specialize(lf.value).str();
                if (numeric && !lf.formal) j["numeric"] = val.to_double(lf.value);
                print_json(j);
            } else {
                TrigPoly p = eval_on_ball(v);
                if (format == "csv") {
                    ValTrigMap one;
                    add_to(one, ValIndex{0, 0}, p);
                    std::cout << csv_val_trig(one, numeric, lf.formal ? Rational(0) : lf.value,
                                              radius);
                } else {
                    print_json(to_json(p));
                }
            }
        } else if (*c_verify) {
            std::vector<SuiteJob> jobs;
            auto push_all_lambda = [&](SuiteName name, int dim) {
                if (name == SuiteName::Ftaig) {
                    if (lf.formal) {
                        for (long num : {0L, 1L, -1L}) jobs.push_back({name, dim, Rational(num)});
                        jobs.push_back({name, dim, Rational(1, 3)});
                    } else {
                        jobs.push_back({name, dim, lf.value});
                    }
                } else {
                    jobs.push_back({name, dim, std::nullopt});
                }
            };
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw CLI::ValidationError("cannot open " + config_path);
                std::string line;
                while (std::getline(in, line)) {
                    std::istringstream ls(line);
                    std::string sname;
                    int dim;
                    if (!(ls >> sname >> dim)) continue;
                    std::string lam;
                    if (ls >> lam) {
                        LambdaFlag f = parse_lambda(lam);
                        jobs.push_back({suite_from_name(sname), dim,
                                        f.formal ? std::nullopt : std::optional(f.value)});
                    } else {
                        push_all_lambda(suite_from_name(sname), dim);
                    }
                }
            } else {
                std::vector<SuiteName> names;
                if (suites.empty() || (suites.size() == 1 && suites[0] == "all"))
                    names = all_suites();
                else
                    for (const auto& s : suites) names.push_back(suite_from_name(s));
                for (auto name : names)
                    for (int dim = 1; dim <= n_max; ++dim) push_all_lambda(name, dim);
            }
            bool ok = true;
            for (const auto& rep : run_suites(jobs)) {
                std::cout << rep.to_json().dump() << "\n";
                ok = ok && rep.pass;
            }
            return ok ? 0 : 1;
        } else if (*c_conj) {
            SuiteReport rep = conjecture_check(n_max, lambda_terms);
            std::cout << rep.to_json().dump(2) << "\n";
            return rep.pass ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
