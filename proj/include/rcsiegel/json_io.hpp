#pragma once

// JSON (de)serialization for the artifact types and the LaTeX emitter.
// All rationals are written as "num/den" strings; field order is fixed so
// identical inputs serialize byte-identically.

#include <string>
#include <vector>

#include "json.hpp"

#include "brackets.hpp"
#include "exactpoly.hpp"
#include "laplace.hpp"
#include "pbasis.hpp"
#include "vectorops.hpp"

namespace rcs::json_io {

using exactpoly::Rational;
using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// PBasisExpr

inline ordered_json to_json(const rcsolve::PBasisExpr& expr) {
    ordered_json j;
    j["n"] = expr.n;
    j["v"] = expr.v;
    j["d1"] = expr.d1;
    j["d2"] = expr.d2;
    j["normalization"] = expr.normalization;
    ordered_json coeffs = ordered_json::array();
    for (const auto& [a, c] : expr.coeffs) {
        ordered_json item;
        item["a"] = a;
        item["num"] = numerator(c).str();
        item["den"] = denominator(c).str();
        coeffs.push_back(std::move(item));
    }
    j["coefficients"] = std::move(coeffs);
    return j;
}

inline rcsolve::PBasisExpr pbasis_from_json(const ordered_json& j) {
    rcsolve::PBasisExpr expr;
    expr.n = j.at("n").get<int>();
    expr.v = j.at("v").get<int>();
    expr.d1 = j.at("d1").get<int>();
    expr.d2 = j.at("d2").get<int>();
    expr.normalization = j.at("normalization").get<std::string>();
    for (const auto& item : j.at("coefficients")) {
        rcsolve::MultiIndex a = item.at("a").get<rcsolve::MultiIndex>();
        expr.coeffs[a] = exactpoly::parse_rat(item.at("num").get<std::string>() + "/" +
                                              item.at("den").get<std::string>());
    }
    expr.validate();
    return expr;
}

// ---------------------------------------------------------------------------
// QExpansion

inline ordered_json to_json(const brackets::QExpansion& f) {
    ordered_json j;
    j["weight"] = f.weight;
    j["truncation"] = f.truncation;
    ordered_json coeffs = ordered_json::array();
    for (const Rational& c : f.coefficients) coeffs.push_back(exactpoly::rat_str(c));
    j["coefficients"] = std::move(coeffs);
    return j;
}

inline brackets::QExpansion qexp_from_json(const ordered_json& j) {
    brackets::QExpansion f;
    f.weight = j.at("weight").get<int>();
    f.truncation = j.at("truncation").get<int>();
    for (const auto& c : j.at("coefficients"))
        f.coefficients.push_back(exactpoly::parse_rat(c.get<std::string>()));
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// VecPoly

inline ordered_json to_json(const vectorops::VecPoly& vec) {
    ordered_json j;
    j["n"] = vec.n;
    j["m"] = vec.m;
    j["v"] = vec.v;
    ordered_json comps = ordered_json::array();
    for (const auto& [nu, poly] : vec.components) {
        ordered_json item;
        item["nu"] = nu;
        item["poly"] = poly.to_string();
        comps.push_back(std::move(item));
    }
    j["components"] = std::move(comps);
    return j;
}

inline vectorops::VecPoly vecpoly_from_json(const ordered_json& j) {
    vectorops::VecPoly vec;
    vec.n = j.at("n").get<int>();
    vec.m = j.at("m").get<int>();
    vec.v = j.at("v").get<int>();
    for (const auto& item : j.at("components")) {
        rcsolve::MultiIndex nu = item.at("nu").get<rcsolve::MultiIndex>();
        vec.components[nu] = exactpoly::Poly::parse(item.at("poly").get<std::string>());
    }
    vec.validate();
    return vec;
}

// ---------------------------------------------------------------------------
// Reports

inline ordered_json to_json(const laplace::LemmaReport& report) {
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json item;
        item["identity"] = c.identity;
        item["i"] = c.i;
        item["alpha"] = c.alpha ? ordered_json(*c.alpha) : ordered_json(nullptr);
        item["beta"] = c.beta ? ordered_json(*c.beta) : ordered_json(nullptr);
        item["pass"] = c.pass;
        checks.push_back(std::move(item));
    }
    ordered_json j;
    j["n"] = report.n;
    j["d1"] = report.d1;
    j["d2"] = report.d2;
    j["all_pass"] = report.all_pass();
    j["checks"] = std::move(checks);
    return j;
}

inline ordered_json to_json(const brackets::CuspReport& report) {
    ordered_json j;
    j["n"] = report.params.n;
    j["v"] = report.params.v;
    j["d1"] = report.params.d1;
    j["d2"] = report.params.d2;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["all_pass"] = report.all_pass;
    j["sanity_value"] = exactpoly::rat_str(report.sanity_value);
    ordered_json results = ordered_json::array();
    for (const auto& r : report.results) {
        ordered_json item;
        item["trial"] = r.trial;
        item["pass"] = r.pass;
        results.push_back(std::move(item));
    }
    j["results"] = std::move(results);
    return j;
}

inline ordered_json to_json(const vectorops::EquivReport& report) {
    ordered_json j;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["all_pass"] = report.all_pass;
    ordered_json results = ordered_json::array();
    for (const auto& r : report.results) {
        ordered_json item;
        item["trial"] = r.trial;
        item["A"] = r.A;
        item["pass"] = r.pass;
        results.push_back(std::move(item));
    }
    j["results"] = std::move(results);
    return j;
}

// ---------------------------------------------------------------------------
// LaTeX

namespace detail {

// "4", "-4", "\frac{3}{2}", "-\frac{3}{2}"
inline std::string latex_rat(const Rational& r) {
    exactpoly::Int num = numerator(r);
    exactpoly::Int den = denominator(r);
    std::string sign = num < 0 ? "-" : "";
    if (num < 0) num = -num;
    if (den == 1) return sign + num.str();
    return sign + "\\frac{" + num.str() + "}{" + den.str() + "}";
}

inline std::string latex_pmonomial(const rcsolve::MultiIndex& a) {
    std::string s;
    for (size_t alpha = 0; alpha < a.size(); ++alpha) {
        if (a[alpha] == 0) continue;
        if (!s.empty()) s += " ";
        s += "P_{" + std::to_string(alpha) + "}";
        if (a[alpha] > 1) s += "^{" + std::to_string(a[alpha]) + "}";
    }
    return s;
}

}  // namespace detail

// sum C(a) prod P_alpha^{a_alpha}, highest multi-index first:
// {(1,0): 4, (0,1): -2}  ->  "4 P_{0} - 2 P_{1}".
inline std::string export_latex(const rcsolve::PBasisExpr& expr) {
    if (expr.coeffs.empty()) return "0";
    std::string out;
    for (auto it = expr.coeffs.rbegin(); it != expr.coeffs.rend(); ++it) {
        const auto& [a, c] = *it;
        Rational mag = c < 0 ? -c : c;
        std::string mono = detail::latex_pmonomial(a);
        std::string piece = detail::latex_rat(mag);
        if (!mono.empty())
            piece = (mag == 1) ? mono : piece + " " + mono;
        if (out.empty())
            out = (c < 0 ? "-" : "") + piece;
        else
            out += (c < 0 ? " - " : " + ") + piece;
    }
    return out;
}

// c_0 + c_1 q + c_2 q^{2} + ...; zero coefficients are skipped.
inline std::string export_latex(const brackets::QExpansion& f) {
    std::string out;
    for (int m = 0; m <= f.truncation; ++m) {
        const Rational& c = f.coefficients[m];
        if (c == 0) continue;
        Rational mag = c < 0 ? -c : c;
        std::string mono = m == 0 ? "" : (m == 1 ? "q" : "q^{" + std::to_string(m) + "}");
        std::string piece = detail::latex_rat(mag);
        if (!mono.empty())
            piece = (mag == 1) ? mono : piece + " " + mono;
        if (out.empty())
            out = (c < 0 ? "-" : "") + piece;
        else
            out += (c < 0 ? " - " : " + ") + piece;
    }
    return out.empty() ? "0" : out;
}

}  // namespace rcs::json_io
