#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hig/json_io.hpp"

namespace hig {

struct SuiteReport {
    std::string suite;
    int n = 0;
    std::string lambda = "formal";  // "formal" or a rational "p/q"
    bool pass = false;
    long millis = 0;
    json witness;  // first counterexample, machine-replayable

    json to_json() const;
};

enum class SuiteName {
    Coalgebra,
    Ftaig,
    Module,
    Angularity,
    LocalKinDerivation,
    Globalization,
    FreeModule,
    Kernel,
};

SuiteName suite_from_name(const std::string& s);
std::string suite_name(SuiteName s);
std::vector<SuiteName> all_suites();

/// Runs one suite at one dimension. Ftaig takes the rational λ to
/// specialize at (default set {0, 1, -1, 1/3} is handled by the caller);
/// the other suites use formal λ and ignore the parameter.
SuiteReport run_suite(SuiteName name, int n, const std::optional<Rational>& lambda = {});

/// Independent jobs, fanned out over HIG_WORKERS threads (default 1);
/// the report order matches the job order regardless of worker count.
struct SuiteJob {
    SuiteName name;
    int n;
    std::optional<Rational> lambda;
};
std::vector<SuiteReport> run_suites(const std::vector<SuiteJob>& jobs);

/// Structure conjecture for V^n_λ: builds f̄_{n+1} from the formal logarithm of
/// 1 + sx² + tx + Σ c_mλ^m x^{-2m}, c_m = binom(4m+1,m+1) - 9binom(4m+1,m-1),
/// and checks (f̄_{n+1}·s^j t^k)(ℂP^n_λ) = 0 for 2j+k ≤ n, for each n ≤ n_max.
SuiteReport conjecture_check(int n_max, int lambda_terms = -1);

enum class IdentityKind { PfaffSaalschutz, Shifrin, GesselClosedForm };
IdentityKind identity_from_name(const std::string& s);

/// Brute-force exact summation against the closed forms.
SuiteReport identity_check(IdentityKind which, int bound);

/// The λ^m series coefficient of the conjecture's expansion.
Rational conjecture_series_coefficient(int m);
/// f̄_{n+1}: monomials (s-exp, t-exp) → λ-polynomial coefficient.
std::map<std::pair<int, int>, LambdaScalar> conjecture_fbar(int n, int lambda_terms);

}  // namespace hig
