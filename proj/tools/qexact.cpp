#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "qexact/suites.hpp"

using namespace qexact;

namespace {

struct Globals {
    long p = 3;
    int k = 3;
    long N = 1;
    std::string ap;
    long bound = 0;
    long box = 6;
    long trials = 25;
    std::uint64_t seed = 42;
    int M = 4;
    int D = 8;
    long r0 = 0;
    std::string format = "json";
    std::string out = "-";
    bool no_meta = false;
    int jobs = 1;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, sep);) parts.push_back(item);
    return parts;
}

std::vector<long> parse_longs(const std::string& text) {
    std::vector<long> out;
    for (const auto& item : split(text, ',')) {
        try {
            out.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw ParseError("not an integer: '" + item + "'");
        }
    }
    return out;
}

RootPair<Rational> parse_roots(const std::string& text, const char* name) {
    auto parts = split(text, ',');
    if (parts.size() != 2) throw BadParams(std::string(name) + " needs two roots 'alpha,beta'");
    return {parse_rational(parts[0]), parse_rational(parts[1])};
}

SuiteParams suite_params(const Globals& g) {
    SuiteParams sp;
    sp.p = g.p;
    sp.k = g.k;
    sp.N = g.N;
    if (!g.ap.empty()) sp.ap = parse_rational(g.ap);
    if (g.bound > 0) sp.bound = g.bound;
    sp.box = g.box;
    sp.trials = g.trials;
    sp.seed = g.seed;
    sp.M = g.M;
    sp.D = g.D;
    if (g.r0 > 0) sp.r0 = g.r0;
    sp.jobs = g.jobs;
    return sp;
}

void write_json(const Globals& g, const Json& value) {
    std::string text = value.dump(2) + "\n";
    if (g.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(g.out, std::ios::binary);
    if (!file || !(file << text)) throw IoError("cannot write " + g.out);
}

ReportFormat report_format(const Globals& g) {
    if (g.format == "json") return ReportFormat::json;
    if (g.format == "table") return ReportFormat::table;
    throw BadParams("format must be json or table");
}

HeckeLocalData<Rational> local_for(const Globals& g, const std::string& beta) {
    if (!beta.empty()) return local_from_beta(g.p, 2 * g.k, parse_rational(beta));
    if (g.ap.empty()) throw BadParams("supply --beta or an --ap with rational roots");
    return local_from_ap(g.p, 2 * g.k, parse_rational(g.ap));
}

HalfIntegralFamily<Rational> family_for(const Globals& g, const std::string& family_file, const std::string& beta) {
    if (!family_file.empty()) {
        auto loaded = load_family(family_file);
        if (!std::holds_alternative<HalfIntegralFamily<Rational>>(loaded))
            throw SchemaError("expected a half-integral family file");
        return std::get<HalfIntegralFamily<Rational>>(loaded);
    }
    SuiteParams sp = suite_params(g);
    return halfint_family(local_for(g, beta), g.seed, suite_detail::family_bound(sp));
}

Json factor_json(const LocalFactor<Rational>& f) {
    Json coeffs = Json::array();
    for (const auto& c : f.coefficients) coeffs.push_back(to_json(c));
    return coeffs;
}

Json factor_json(const LocalFactor<RationalFunction>& f) {
    Json coeffs = Json::array();
    for (const auto& c : f.coefficients) coeffs.push_back(to_json(c));
    return coeffs;
}

template <class R>
Json coordinates_json(const PullbackCoordinates<R>& c) {
    return Json{{"A", to_json(c.A)}, {"B", to_json(c.B)}, {"C", to_json(c.C)}, {"D", to_json(c.D)}};
}

int run(int argc, char** argv) {
    CLI::App app{"Exact verification of Saito-Kurokawa pullback and Euler factor identities"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--p", g.p, "odd prime");
    app.add_option("--k", g.k, "odd weight parameter");
    app.add_option("--N", g.N, "odd squarefree level");
    app.add_option("--ap", g.ap, "Hecke eigenvalue at p as num/den");
    app.add_option("--bound", g.bound, "source coefficient bound");
    app.add_option("--box", g.box, "Siegel box side");
    app.add_option("--trials", g.trials, "random trials per suite");
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--prec-p", g.M, "p-adic precision M");
    app.add_option("--prec-T", g.D, "T-adic truncation D");
    app.add_option("--r0", g.r0, "weight residue r0");
    app.add_option("--format", g.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--out", g.out, "output path, - for stdout");
    app.add_flag("--no-meta", g.no_meta, "omit timing and toolchain fields");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

    int status = 0;

    auto* verify = app.add_subcommand("verify", "run a named identity suite")->fallthrough();
    std::string suite, verify_family, perturb;
    verify->add_option("--suite", suite, "suite name or all")->required();
    verify->add_option("--family", verify_family, "family file replacing the random families");
    verify->add_option("--perturb", perturb, "index:delta added to one source coefficient");
    verify->callback([&] {
        SuiteParams sp = suite_params(g);
        if (!verify_family.empty()) {
            auto loaded = load_family(verify_family);
            if (!std::holds_alternative<HalfIntegralFamily<Rational>>(loaded))
                throw SchemaError("expected a half-integral family file");
            sp.family = std::get<HalfIntegralFamily<Rational>>(loaded);
        }
        if (!perturb.empty()) {
            auto parts = split(perturb, ':');
            if (parts.size() != 2) throw BadParams("perturb must be index:delta");
            sp.perturb = std::make_pair(parse_longs(parts[0]).at(0), parse_rational(parts[1]));
        }
        SuiteReport report = run_suite(suite, sp);
        emit_report(report, report_format(g), g.out, !g.no_meta);
        status = report.pass() ? 0 : 1;
    });

    auto* list = app.add_subcommand("suites", "list suite names")->fallthrough();
    list->callback([&] {
        for (const auto& name : suite_names()) std::cout << name << "\n";
    });

    auto* euler = app.add_subcommand("euler", "expand a local Euler factor")->fallthrough();
    euler->set_help_flag("--help", "print this help and exit");
    std::string euler_type = "adjoint", f_roots, g_roots, h_roots;
    bool symbolic = false;
    euler->add_option("--type", euler_type, "adjoint, triple or std")->check(CLI::IsMember({"adjoint", "triple", "std"}));
    euler->add_option("--f", f_roots, "alpha,beta of f");
    euler->add_option("--g", g_roots, "alpha,beta of g");
    euler->add_option("--h", h_roots, "alpha,beta of h");
    euler->add_flag("--symbolic", symbolic, "use indeterminate roots");
    euler->callback([&] {
        Json out{{"type", euler_type}};
        if (symbolic) {
            using RF = RationalFunction;
            auto pair = [](const std::string& tag) {
                return RootPair<RF>{RF::variable("alpha_" + tag), RF::variable("beta_" + tag)};
            };
            LocalFactor<RF> factor = euler_type == "std"       ? standard_euler_factor(pair("f"))
                                     : euler_type == "adjoint" ? adjoint_euler_factor(pair("f"), pair("g"))
                                                               : triple_euler_factor(pair("f"), pair("g"), pair("h"));
            out["coefficients"] = factor_json(factor);
        } else {
            if (f_roots.empty()) throw BadParams("--f is required");
            auto f = parse_roots(f_roots, "--f");
            LocalFactor<Rational> factor;
            if (euler_type == "std") {
                factor = standard_euler_factor(f);
            } else {
                if (g_roots.empty()) throw BadParams("--g is required");
                auto gr = parse_roots(g_roots, "--g");
                factor = euler_type == "adjoint"
                             ? adjoint_euler_factor(f, gr)
                             : triple_euler_factor(f, gr, h_roots.empty() ? gr : parse_roots(h_roots, "--h"));
            }
            out["coefficients"] = factor_json(factor);
        }
        write_json(g, out);
    });

    auto* padic = app.add_subcommand("padic", "truncated p-adic and Iwasawa computations")->fallthrough();
    padic->require_subcommand(1);
    long unit = 2;
    std::string coeffs_text, matrix_text, theta_file, key_text;
    long weight_index = 0;
    auto* teich = padic->add_subcommand("teichmuller", "Teichmuller lift of a unit")->fallthrough();
    teich->add_option("--a", unit, "unit")->required();
    teich->callback([&] {
        auto w = teichmuller(unit, g.p, g.M);
        write_json(g, Json{{"p", g.p}, {"M", g.M}, {"a", unit}, {"value", w.residue()}});
    });
    auto* loggamma = padic->add_subcommand("loggamma", "exponent of <d> in powers of 1+p")->fallthrough();
    loggamma->add_option("--d", unit, "unit")->required();
    loggamma->callback([&] {
        const long e = gamma_log_exponent(unit, g.p, g.M);
        write_json(g, Json{{"p", g.p}, {"M", g.M}, {"d", unit}, {"exponent", e}, {"modulus", padic_modulus(g.p, g.M - 1)}});
    });
    auto iwasawa_from_text = [&] { return IwasawaElement(g.p, g.M, g.D, parse_longs(coeffs_text)); };
    auto iwasawa_json = [](const IwasawaElement& x) {
        Json arr = Json::array();
        for (long r : x.residues()) arr.push_back(r);
        return arr;
    };
    auto* eval = padic->add_subcommand("eval", "evaluate at a classical weight point")->fallthrough();
    eval->add_option("--coeffs", coeffs_text, "c0,c1,... mod p^M")->required();
    eval->add_option("--weight-index", weight_index, "j for T -> (1+p)^j - 1")->required();
    eval->callback([&] {
        auto value = classical_point_eval(iwasawa_from_text(), {weight_index, g.p});
        write_json(g, Json{{"p", g.p}, {"M", g.M}, {"weight_index", weight_index}, {"value", value.residue()}});
    });
    auto* sigma = padic->add_subcommand("sigma", "apply T -> T^2 + 2T")->fallthrough();
    sigma->add_option("--coeffs", coeffs_text, "c0,c1,... mod p^M")->required();
    sigma->callback([&] {
        write_json(g, Json{{"p", g.p}, {"M", g.M}, {"D", g.D}, {"coeffs", iwasawa_json(sigma_substitution(iwasawa_from_text()))}});
    });
    auto* eord = padic->add_subcommand("eord", "ordinary projector as a limit of U^{n!}")->fallthrough();
    eord->add_option("--matrix", matrix_text, "rows separated by ';', entries by ','")->required();
    eord->callback([&] {
        PadicMatrix u;
        for (const auto& row : split(matrix_text, ';')) u.push_back(parse_longs(row));
        auto lim = ordinary_projector_limit(u, g.p, g.M);
        write_json(g, Json{{"p", g.p}, {"M", g.M}, {"matrix", lim.matrix}, {"stages", lim.stages}});
    });
    auto* sk_lambda = padic->add_subcommand("sk-lambda", "Lambda-adic Saito-Kurokawa coefficient")->fallthrough();
    sk_lambda->add_option("--theta", theta_file, "theta coefficient file")->required();
    sk_lambda->add_option("--B", key_text, "n,r,m")->required();
    sk_lambda->callback([&] {
        ThetaData theta = load_theta(theta_file);
        auto nrm = parse_longs(key_text);
        if (nrm.size() != 3) throw BadParams("--B needs n,r,m");
        auto value = lambda_adic_sk_coefficient(theta.coeffs, SiegelKey{nrm[0], nrm[1], nrm[2]}, theta.ctx);
        write_json(g, Json{{"p", theta.ctx.p}, {"M", theta.ctx.M}, {"D", theta.ctx.D}, {"B", nrm}, {"coeffs", iwasawa_json(value)}});
    });

    auto* family = app.add_subcommand("family", "write a seeded half-integral family file")->fallthrough();
    std::string beta_text;
    family->add_option("--beta", beta_text, "non-unit root beta as num/den");
    family->callback([&] { write_json(g, family_to_json(family_for(g, "", beta_text))); });

    auto* load = app.add_subcommand("load", "validate a family or eigenvalue file")->fallthrough();
    std::string load_file;
    load->add_option("--file", load_file, "JSON file")->required();
    load->callback([&] {
        auto loaded = load_family(load_file);
        if (auto* h = std::get_if<HalfIntegralFamily<Rational>>(&loaded))
            write_json(g, Json{{"kind", "halfint-family"}, {"p", h->local().p}, {"k", h->k()}, {"bound", h->bound()}, {"eigen", true}});
        else
            write_json(g, Json{{"kind", "classical"}, {"series", to_json(std::get<ClassicalSeries<Rational>>(loaded))}});
    });

    auto* lift = app.add_subcommand("lift", "Saito-Kurokawa lift or its p-stabilisation on a box")->fallthrough();
    std::string route = "N", lift_family;
    lift->add_option("--route", route, "N, Np, operator, closedform or semiordinary")
        ->check(CLI::IsMember({"N", "Np", "operator", "closedform", "semiordinary"}));
    lift->add_option("--family", lift_family, "family file");
    lift->add_option("--beta", beta_text, "non-unit root beta when no file is given");
    lift->callback([&] {
        auto ctx = make_sk_context(family_for(g, lift_family, beta_text), g.N);
        const Box box{g.box, g.box};
        SiegelSeries<Rational> series;
        if (route == "N") series = sk_lift(ctx, LiftLevel::N, box);
        else if (route == "Np") series = sk_lift(ctx, LiftLevel::Np, box);
        else if (route == "operator") series = sk_stabilize(ctx, box, SKRoute::operator_route);
        else if (route == "closedform") series = sk_stabilize(ctx, box, SKRoute::closedform);
        else series = sk_stabilize(ctx, box, SKRoute::semiordinary);
        write_json(g, to_json(series));
    });

    auto* residual = app.add_subcommand("residual", "nonzero coefficients of one identity residual")->fallthrough();
    std::string identity = "cor-uf", residual_family;
    residual->add_option("--identity", identity, "ufrelation, v-commute, solve-it or cor-uf")
        ->check(CLI::IsMember({"ufrelation", "v-commute", "solve-it", "cor-uf"}));
    residual->add_option("--family", residual_family, "family file");
    residual->add_option("--beta", beta_text, "non-unit root beta when no file is given");
    residual->callback([&] {
        auto ctx = make_sk_context(family_for(g, residual_family, beta_text), g.N);
        const Box box{g.box, g.box};
        Json out{{"identity", identity}};
        bool zero = true;
        if (identity == "ufrelation") {
            auto s = uf_relation_residual(ctx, box);
            zero = s.coeffs().empty();
            out["residual"] = to_json(s);
        } else {
            const auto kind = identity == "v-commute" ? PullbackIdentity::v_commute
                              : identity == "solve-it" ? PullbackIdentity::solve_it
                                                       : PullbackIdentity::cor_uf;
            auto s = pullback_identity_residual(ctx, kind, box);
            zero = s.coeffs().empty();
            out["residual"] = to_json(s);
        }
        out["zero"] = zero;
        write_json(g, out);
        status = zero ? 0 : 1;
    });

    auto* coords = app.add_subcommand("coords", "isotypic pullback coordinates")->fallthrough();
    std::string mode = "closedform", aphi = "6", beta_f, alpha_phi, beta_phi;
    coords->add_option("--mode", mode, "closedform, solve, stabilized, ordinary or xi")
        ->check(CLI::IsMember({"closedform", "solve", "stabilized", "ordinary", "xi"}));
    coords->add_option("--aphi", aphi, "eigenvalue of phi at p");
    coords->add_option("--beta-f", beta_f, "root beta_f");
    coords->add_option("--alpha-phi", alpha_phi, "root alpha_phi");
    coords->add_option("--beta-phi", beta_phi, "root beta_phi");
    coords->add_flag("--symbolic", symbolic, "indeterminate p, q, a_p, a_phi");
    coords->callback([&] {
        Json out{{"mode", mode}};
        if (symbolic) {
            if (mode == "stabilized") out["coords"] = coordinates_json(stabilized_pullback_coordinates(symbolic_isotypic_stabilized()));
            else if (mode == "ordinary") out["coefficient"] = to_json(ordinary_coefficient_formula(symbolic_isotypic_ordinary()));
            else if (mode == "xi") out["matrix"] = matrix_to_json(xi_matrix(symbolic_isotypic()));
            else out["coords"] = coordinates_json(pullback_U_coordinates(
                     symbolic_isotypic(), mode == "solve" ? CoordinateMode::solve : CoordinateMode::closedform));
            write_json(g, out);
            return;
        }
        if (mode == "ordinary") {
            if (alpha_phi.empty() || beta_phi.empty() || beta_f.empty())
                throw BadParams("ordinary mode needs --alpha-phi, --beta-phi and --beta-f");
            auto c = numeric_ordinary_context(g.p, g.k, parse_rational(alpha_phi), parse_rational(beta_phi), parse_rational(beta_f));
            out["coefficient"] = to_json(ordinary_projection_coefficient(c, OrdinaryPath::formula));
            out["change_of_basis"] = to_json(ordinary_projection_coefficient(c, OrdinaryPath::change_of_basis));
            write_json(g, out);
            return;
        }
        Rational ap = g.ap.empty() ? Rational(0) : parse_rational(g.ap);
        auto c = numeric_isotypic(g.p, g.k, ap, parse_rational(aphi));
        if (mode == "stabilized") {
            if (beta_f.empty()) throw BadParams("stabilized mode needs --beta-f");
            c.beta_f = parse_rational(beta_f);
            c.alpha_f = Rational(rpow(g.p, 2 * g.k - 1) / *c.beta_f);
            c.ap = *c.alpha_f + *c.beta_f;
            out["coords"] = coordinates_json(stabilized_pullback_coordinates(c));
        } else if (mode == "xi") {
            out["matrix"] = matrix_to_json(xi_matrix(c));
        } else {
            out["coords"] = coordinates_json(
                pullback_U_coordinates(c, mode == "solve" ? CoordinateMode::solve : CoordinateMode::closedform));
        }
        write_json(g, out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
