#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "qexact/suites.hpp"

using namespace qexact;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string seconds(double s) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << s << "s";
    return out.str();
}

// Coordinate identities over indeterminate p, p^k, a_p and a_phi.
Verdict symbolic_coordinates() {
    const auto start = Clock::now();
    Verdict v;
    auto sym = symbolic_isotypic();
    v.pass &= pullback_U_coordinates(sym, CoordinateMode::closedform) == pullback_U_coordinates(sym, CoordinateMode::solve);
    for (const auto& r : stabilized_transfer_residuals(symbolic_isotypic_stabilized())) v.pass &= r.is_zero();
    v.pass &= ordinary_coefficient_formula(symbolic_isotypic_ordinary()) == ordinary_coefficient_change_of_basis_symbolic();
    const double elapsed = seconds_since(start);
    v.pass &= elapsed < 5.0;
    v.detail = "closed form = solve, 4 transfer identities, two-path ordinary coefficient; " + seconds(elapsed);
    return v;
}

const std::vector<std::string> kSweepSuites = {"halpha-routes", "sk-stabilize-routes", "cor-ufrelation",
                                               "v-commute",     "solve-it",            "cor-uf"};

Verdict residual_sweep(const std::vector<std::pair<long, int>>& pairs, int jobs) {
    const auto start = Clock::now();
    Verdict v;
    std::vector<std::string> broken;
    for (auto [p, k] : pairs) {
        SuiteParams sp;
        sp.p = p;
        sp.k = k;
        sp.jobs = jobs;
        for (const auto& suite : kSweepSuites) {
            SuiteReport r = run_suite(suite, sp);
            if (!r.pass()) {
                v.pass = false;
                broken.push_back(suite + "@(" + std::to_string(p) + "," + std::to_string(k) + "):" +
                                 std::to_string(r.failures.size()));
            }
        }
    }
    const double elapsed = seconds_since(start);
    v.pass &= elapsed < 60.0;
    std::string grid;
    for (auto [p, k] : pairs) grid += "(" + std::to_string(p) + "," + std::to_string(k) + ")";
    v.detail = std::to_string(kSweepSuites.size()) + " suites x " + grid + ", 25 families, box (6,6); " + seconds(elapsed);
    if (!broken.empty()) {
        v.detail += "; nonzero residuals in";
        for (const auto& b : broken) v.detail += " " + b;
    }
    return v;
}

Verdict discrimination(int jobs) {
    Verdict v;
    for (long p : {5L, 7L}) {
        SuiteParams sp;
        sp.p = p;
        sp.k = 3;
        sp.jobs = jobs;
        auto d = discrimination_check(sp);
        v.pass &= d.pass();
        v.detail += "p=" + std::to_string(p) + ": cor-ufrelation " + std::to_string(d.uf_relation.failures.size()) +
                    " nonzero, cor-uf " + std::to_string(d.cor_uf.failures.size()) + " nonzero, v-commute " +
                    (d.v_commute.pass() ? "clean" : "broken") + "; ";
    }
    v.detail += "perturbed c(3) by 1";
    return v;
}

Verdict spot_values() {
    Verdict v;
    auto c = numeric_isotypic(3, 3, 2, 6);
    PullbackCoordinates<Rational> want{Rational(94, 3), -51, -51, 189};
    v.pass &= pullback_U_coordinates(c, CoordinateMode::closedform) == want;
    v.pass &= pullback_U_coordinates(c, CoordinateMode::solve) == want;
    auto s = numeric_isotypic(3, 3, 84, 6);
    s.beta_f = Rational(3);
    s.alpha_f = Rational(81);
    const Rational a_alpha = stabilized_pullback_coordinates(s).A;
    const Rational via_transfer = (pullback_U_coordinates(s, CoordinateMode::closedform).A - 30) / 72;
    v.pass &= a_alpha == Rational(7, 9) && via_transfer == Rational(7, 9);
    auto o = numeric_ordinary_context(3, 3, 9, 3, 3);
    const Rational formula = ordinary_projection_coefficient(o, OrdinaryPath::formula);
    const Rational basis = ordinary_projection_coefficient(o, OrdinaryPath::change_of_basis);
    v.pass &= formula == Rational(13, 9) && basis == Rational(13, 9);
    v.detail = "(A,B,C,D)=(94/3,-51,-51,189) closed form and solve; A_alpha=" + a_alpha.get_str() + " direct, " +
               via_transfer.get_str() + " via transfer; ordinary " + formula.get_str() + " formula, " + basis.get_str() +
               " change of basis";
    return v;
}

Verdict suites_verdict(const std::vector<std::string>& names, const SuiteParams& sp, double limit) {
    const auto start = Clock::now();
    Verdict v;
    for (const auto& name : names) {
        SuiteReport r = run_suite(name, sp);
        v.pass &= r.pass();
        v.detail += name + " " + std::to_string(r.trials) + " cases " + (r.pass() ? "ok" : "FAIL") + "; ";
    }
    const double elapsed = seconds_since(start);
    if (limit > 0) v.pass &= elapsed < limit;
    v.detail += seconds(elapsed);
    return v;
}

Verdict local_l_functions(int jobs) {
    SuiteParams sp;
    sp.jobs = jobs;
    return suites_verdict({"artin-local", "factorization-euler", "euler-adjoint"}, sp, 5.0);
}

Verdict signs_and_constants(int jobs) {
    SuiteParams sp;
    sp.jobs = jobs;
    return suites_verdict({"signs-constants"}, sp, 0);
}

// Largest number of factorial stages used over random split 2x2 matrices.
int worst_projector_stages(long p, int M, long trials, std::uint64_t seed) {
    const long mod = padic_modulus(p, M);
    int worst = 0;
    for (long t = 0; t < trials; ++t) {
        suite_detail::Draws draws(suite_detail::trial_seed(seed, t));
        const long alpha = suite_detail::random_unit(draws, p, mod);
        const long beta = mod_reduce(p * draws.uniform(1, mod), mod);
        const PadicMatrix u = {{mod_reduce(alpha + beta, mod), 1}, {mod_reduce(-mod_mul(alpha, beta, mod), mod), 0}};
        worst = std::max(worst, ordinary_projector_limit(u, p, M).stages);
    }
    return worst;
}

Verdict padic_suite(bool check_stage_bound, int jobs) {
    const auto start = Clock::now();
    SuiteParams sp;
    sp.jobs = jobs;
    Verdict v = suites_verdict({"teichmuller", "group-like", "sigma-weights", "eord-limit"}, sp, 0);
    SuiteParams lambda = sp;
    lambda.p = 5;
    Verdict sk = suites_verdict({"sk-lambda-specialize"}, lambda, 0);
    v.pass &= sk.pass;
    v.detail += "; p=5 " + sk.detail;
    const int worst = worst_projector_stages(sp.p, sp.M, sp.trials, sp.seed);
    v.detail += "; e_ord used at most " + std::to_string(worst) + " factorial stages (M+3 = " +
                std::to_string(sp.M + 3) + ", p=" + std::to_string(sp.p) + ")";
    if (check_stage_bound) v.pass &= worst <= sp.M + 3;
    else v.detail += ", stage bound not checked";
    const double elapsed = seconds_since(start);
    v.pass &= elapsed < 10.0;
    v.detail += "; " + seconds(elapsed);
    return v;
}

Verdict theta_rescaling_invariance(int jobs) {
    SuiteParams sp;
    sp.jobs = jobs;
    sp.trials = 20;
    const auto failures = suite_detail::theta_rescaling(sp);
    Verdict v;
    v.pass = failures.empty();
    v.detail = "(lambda^-2 P)(lambda J)^2 = P J^2 for 20 random lambda, " + std::to_string(failures.size()) + " mismatches";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria, one line per criterion"};
    std::vector<int> only;
    std::string pairs_text = "3:1,3:3,5:1,5:3,7:3";
    bool skip_stage_bound = false;
    int jobs = 1;
    app.add_option("--only", only, "criteria to run")->delimiter(',');
    app.add_option("--pairs", pairs_text, "(p,k) grid for the residual sweep");
    app.add_flag("--skip-stage-bound", skip_stage_bound, "do not require e_ord within M+3 stages");
    app.add_option("--jobs", jobs, "worker threads");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<long, int>> pairs;
    for (const auto& item : CLI::detail::split(pairs_text, ',')) {
        auto pk = CLI::detail::split(item, ':');
        pairs.emplace_back(std::stol(pk.at(0)), std::stoi(pk.at(1)));
    }

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"symbolic coordinate identities", symbolic_coordinates},
        {"coefficient residual sweep", [&] { return residual_sweep(pairs, jobs); }},
        {"discrimination under perturbation", [&] { return discrimination(jobs); }},
        {"numeric coordinate spot values", spot_values},
        {"local L-function identities", [&] { return local_l_functions(jobs); }},
        {"signs and constants", [&] { return signs_and_constants(jobs); }},
        {"p-adic suite", [&] { return padic_suite(!skip_stage_bound, jobs); }},
        {"theta rescaling invariance", [&] { return theta_rescaling_invariance(jobs); }},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const Error& e) {
            v = {false, std::string("error ") + e.what()};
        }
        all &= v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << " " << criteria[i].first << ": " << v.detail
                  << std::endl;
    }
    return all ? 0 : 1;
}
