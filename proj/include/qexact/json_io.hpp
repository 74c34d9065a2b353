#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qexact/heckeops.hpp"
#include "qexact/padic.hpp"
#include "qexact/ratfun.hpp"

namespace qexact {

using Json = nlohmann::json;

inline Json to_json(const Rational& x) { return x.get_str(); }

inline Json to_json(const GaussianRational& x) { return Json{{"re", to_json(x.re())}, {"im", to_json(x.im())}}; }

inline Json to_json(const MultiPoly& f) {
    Json terms = Json::array();
    for (const auto& [exps, c] : f.terms()) terms.push_back(Json::array({exps, to_json(c)}));
    return Json{{"vars", f.vars()}, {"terms", terms}};
}

inline Json to_json(const RationalFunction& f) { return Json{{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline Rational rational_from_json(const Json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const ParseError&) {
    }
    throw SchemaError(where + ": expected a rational as \"num/den\" or an integer");
}

template <class R>
Json matrix_to_json(const Matrix<R>& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json out = Json::array();
        for (const auto& x : row) out.push_back(to_json(x));
        rows.push_back(out);
    }
    return rows;
}

inline Json to_json(const ClassicalSeries<Rational>& s) {
    Json coeffs = Json::object();
    for (const auto& [n, c] : s.coeffs()) coeffs[std::to_string(n)] = to_json(c);
    return Json{{"bound", s.bound()}, {"coeffs", coeffs}};
}

inline Json to_json(const HalfIntegralSeries<Rational>& s) {
    Json coeffs = Json::object();
    for (const auto& [n, c] : s.coeffs()) coeffs[std::to_string(n)] = to_json(c);
    return Json{{"k", s.k()}, {"bound", s.bound()}, {"coeffs", coeffs}};
}

inline Json to_json(const SiegelSeries<Rational>& s) {
    Json coeffs = Json::object();
    for (const auto& [key, c] : s.coeffs()) coeffs[key.str()] = to_json(c);
    return Json{{"box", {s.box().n_max, s.box().m_max}}, {"coeffs", coeffs}};
}

inline Json to_json(const BivariateSeries<Rational>& s) {
    Json coeffs = Json::object();
    for (const auto& [key, c] : s.coeffs()) coeffs[std::to_string(key.first) + "," + std::to_string(key.second)] = to_json(c);
    return Json{{"box", {s.box().n_max, s.box().m_max}}, {"coeffs", coeffs}};
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline const Json& require_field(const Json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError("missing field \"" + key + "\"");
    return j.at(key);
}

inline long require_integer(const Json& j, const std::string& key) {
    const Json& v = require_field(j, key);
    if (!v.is_number_integer()) throw SchemaError("field \"" + key + "\" must be an integer");
    return v.get<long>();
}

inline long index_from_key(const std::string& key) {
    std::size_t used = 0;
    long n = 0;
    try {
        n = std::stol(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != key.size() || key.empty()) throw SchemaError("coefficient key \"" + key + "\" is not an integer");
    return n;
}

inline std::map<long, Rational> coefficient_table(const Json& j, const std::string& key) {
    const Json& table = require_field(j, key);
    if (!table.is_object()) throw SchemaError("field \"" + key + "\" must be an object");
    std::map<long, Rational> out;
    for (const auto& [name, value] : table.items()) out[index_from_key(name)] = rational_from_json(value, key + "." + name);
    return out;
}

// Checks a_1 = 1, a_{mn} = a_m a_n for coprime m, n, and the prime-power recursion when a weight is known.
inline void require_multiplicative(const ClassicalSeries<Rational>& s, std::optional<int> weight) {
    const long bound = s.bound();
    if (bound >= 1 && s.coefficient(1) != 1) throw NotEigenFamily("coefficient at index 1 must be 1");
    for (long n = 2; n <= bound; ++n) {
        auto factors = factorize(n);
        if (factors.size() > 1) {
            const auto& [q, e] = *factors.begin();
            long part = ipow(q, e);
            if (s.coefficient(n) != s.coefficient(part) * s.coefficient(n / part))
                throw NotEigenFamily("multiplicativity fails at index " + std::to_string(n));
        } else if (weight && factors.begin()->second > 1) {
            long q = factors.begin()->first;
            Rational expect = s.coefficient(q) * s.coefficient(n / q) - rpow(q, *weight - 1) * s.coefficient(n / (q * q));
            if (s.coefficient(n) != expect)
                throw NotEigenFamily("prime-power recursion fails at index " + std::to_string(n));
        }
    }
}

using LoadedFamily = std::variant<HalfIntegralFamily<Rational>, ClassicalSeries<Rational>>;

inline HalfIntegralFamily<Rational> family_from_json(const Json& j) {
    const long p = require_integer(j, "p");
    const long k = require_integer(j, "k");
    const long bound = require_integer(j, "bound");
    if (k < 1 || k % 2 == 0) throw BadParams("k must be odd");
    if (bound < 1) throw SchemaError("bound must be positive");
    HeckeLocalData<Rational> local =
        j.contains("beta") ? local_from_beta(p, 2 * static_cast<int>(k), rational_from_json(j.at("beta"), "beta"))
                           : local_from_ap(p, 2 * static_cast<int>(k), rational_from_json(require_field(j, "ap"), "ap"));
    if (j.contains("ap") && rational_from_json(j.at("ap"), "ap") != local.ap)
        throw ConstraintViolated("ap disagrees with the supplied beta");
    HalfIntegralFamily<Rational> family(local, bound, std::nullopt, coefficient_table(j, "primitive"));
    require_halfint_eigen(family.to_series(bound), local);
    return family;
}

inline Json family_to_json(const HalfIntegralFamily<Rational>& family) {
    Json primitive = Json::object();
    for (const auto& [n, c] : family.primitive_table()) primitive[std::to_string(n)] = to_json(c);
    Json out{{"kind", "halfint-family"},
             {"p", family.local().p},
             {"k", family.k()},
             {"ap", to_json(family.local().ap)},
             {"bound", family.bound()},
             {"primitive", primitive}};
    if (family.local().beta) out["beta"] = to_json(*family.local().beta);
    return out;
}

inline ClassicalSeries<Rational> classical_from_json(const Json& j) {
    std::optional<int> weight;
    if (j.contains("weight")) weight = static_cast<int>(require_integer(j, "weight"));
    if (j.contains("eigenvalues")) {
        if (!weight) throw SchemaError("eigenvalue files need a weight");
        auto eigenvalues = coefficient_table(j, "eigenvalues");
        long bound = 1;
        if (j.contains("bound")) bound = require_integer(j, "bound");
        else
            for (long n = 2; !is_prime(n) || eigenvalues.count(n); ++n) bound = n;
        return classical_eigen_coeffs(eigenvalues, *weight, bound);
    }
    ClassicalSeries<Rational> s(require_integer(j, "bound"));
    for (const auto& [n, c] : coefficient_table(j, "coeffs")) s.set(n, c);
    require_multiplicative(s, weight);
    return s;
}

inline LoadedFamily load_family_text(const std::string& text) {
    Json j = parse_json_text(text);
    if (!j.is_object()) throw SchemaError("top level must be an object");
    if (j.contains("kind") && j.at("kind") == "halfint-family") return family_from_json(j);
    if (j.contains("kind") && j.at("kind") != "classical") throw SchemaError("unknown kind");
    return classical_from_json(j);
}

inline LoadedFamily load_family(const std::string& path) { return load_family_text(read_text_file(path)); }

struct ThetaData {
    LambdaContext ctx;
    std::map<long, IwasawaElement> coeffs;
};

inline ThetaData load_theta_text(const std::string& text) {
    Json j = parse_json_text(text);
    ThetaData out;
    out.ctx.p = require_integer(j, "p");
    out.ctx.M = static_cast<int>(require_integer(j, "M"));
    out.ctx.D = static_cast<int>(require_integer(j, "D"));
    out.ctx.r0 = require_integer(j, "r0");
    if (j.contains("N")) out.ctx.N = require_integer(j, "N");
    if (!is_prime(out.ctx.p) || out.ctx.p < 3) throw BadParams("p must be an odd prime");
    const Json& table = require_field(j, "coeffs");
    if (!table.is_object()) throw SchemaError("field \"coeffs\" must be an object");
    for (const auto& [name, value] : table.items()) {
        if (!value.is_array()) throw SchemaError("theta coefficient " + name + " must be an array");
        std::vector<long> residues;
        for (const auto& c : value) {
            if (!c.is_number_integer()) throw SchemaError("theta coefficient " + name + " has a non-integer entry");
            residues.push_back(c.get<long>());
        }
        if (static_cast<int>(residues.size()) > out.ctx.D) throw SchemaError("theta coefficient " + name + " exceeds D");
        out.coeffs.emplace(index_from_key(name), IwasawaElement(out.ctx.p, out.ctx.M, out.ctx.D, residues));
    }
    return out;
}

inline ThetaData load_theta(const std::string& path) { return load_theta_text(read_text_file(path)); }

struct SuiteFailure {
    std::string key;
    std::string input;
    std::string expected;
    std::string actual;
};

struct SuiteReport {
    std::string suite;
    Json params = Json::object();
    long trials = 0;
    std::vector<SuiteFailure> failures;
    std::optional<std::uint64_t> seed;
    double elapsed_ms = 0;
    std::vector<SuiteReport> parts;

    bool pass() const {
        if (!failures.empty()) return false;
        for (const auto& part : parts)
            if (!part.pass()) return false;
        return true;
    }
};

inline std::string toolchain_fingerprint() {
    std::ostringstream out;
#if defined(__clang__)
    out << "clang " << __clang_major__ << "." << __clang_minor__ << "." << __clang_patchlevel__;
#elif defined(__GNUC__)
    out << "gcc " << __GNUC__ << "." << __GNUC_MINOR__ << "." << __GNUC_PATCHLEVEL__;
#else
    out << "unknown";
#endif
    out << " c++" << __cplusplus << " gmp " << gmp_version;
    return out.str();
}

inline Json report_to_json(const SuiteReport& r, bool with_meta) {
    Json failures = Json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"key", f.key}, {"input", f.input}, {"expected", f.expected}, {"actual", f.actual}});
    Json out{{"suite", r.suite},
             {"params", r.params},
             {"trials", r.trials},
             {"failures", failures},
             {"pass", r.pass()},
             {"generator", kGeneratorName}};
    out["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
    if (!r.parts.empty()) {
        Json parts = Json::array();
        for (const auto& part : r.parts) parts.push_back(report_to_json(part, with_meta));
        out["reports"] = parts;
    }
    if (with_meta) {
        out["elapsed_ms"] = std::llround(r.elapsed_ms);
        out["toolchain"] = toolchain_fingerprint();
    }
    return out;
}

enum class ReportFormat { json, table };

inline void write_table(const SuiteReport& r, std::ostream& out, bool with_meta) {
    std::vector<const SuiteReport*> rows;
    if (r.parts.empty()) rows.push_back(&r);
    for (const auto& part : r.parts) rows.push_back(&part);
    std::size_t width = 5;
    for (const auto* row : rows) width = std::max(width, row->suite.size());
    out << std::left << std::setw(static_cast<int>(width)) << "suite" << "  " << std::setw(8) << "trials"
        << std::setw(10) << "failures" << std::setw(6) << "status";
    if (with_meta) out << "  ms";
    out << "\n";
    for (const auto* row : rows) {
        out << std::left << std::setw(static_cast<int>(width)) << row->suite << "  " << std::setw(8) << row->trials
            << std::setw(10) << row->failures.size() << std::setw(6) << (row->pass() ? "ok" : "FAIL");
        if (with_meta) out << "  " << std::llround(row->elapsed_ms);
        out << "\n";
        for (const auto& f : row->failures)
            out << "  " << f.key << ": " << f.input << " expected " << f.expected << " got " << f.actual << "\n";
    }
    out << (r.pass() ? "PASS" : "FAIL") << "\n";
}

inline void emit_report(const SuiteReport& r, ReportFormat format, const std::string& out_path, bool with_meta = true) {
    std::ostringstream buffer;
    if (format == ReportFormat::json) buffer << report_to_json(r, with_meta).dump(2) << "\n";
    else write_table(r, buffer, with_meta);
    if (out_path == "-" || out_path.empty()) {
        std::cout << buffer.str();
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write report to standard output");
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw IoError("cannot open " + out_path + " for writing");
    file << buffer.str();
    if (!file) throw IoError("write to " + out_path + " failed");
}

}  // namespace qexact
