#pragma once

// Subcommand dispatch for the rcsiegel tool.  run_cli is the whole program:
// tools/main.cpp only forwards argv, so every code path is testable in
// process.  Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 mathematical precondition violation.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "brackets.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "rcsolve.hpp"
#include "vectorops.hpp"

namespace rcs::cli {

namespace detail {

using exactpoly::Rational;
using json_io::ordered_json;

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t x) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, x >>= 4) s[i] = digits[x & 0xf];
    return s;
}

inline std::string resolve_cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("RCSIEGEL_CACHE_DIR")) return env;
    return {};
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(static_cast<unsigned long long>(
                        std::chrono::steady_clock::now().time_since_epoch().count()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f) throw std::invalid_argument("cannot write file: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string cache_key(const rcsolve::OperatorParams& p) {
    return "pbasis|schema=" + std::to_string(json_io::kSchemaVersion) +
           "|n=" + std::to_string(p.n) + "|v=" + std::to_string(p.v) +
           "|d1=" + std::to_string(p.d1) + "|d2=" + std::to_string(p.d2) + "|norm=C_last=1";
}

// solve_recursion behind a read-through cache; empty dir disables caching
inline rcsolve::PBasisExpr solve_cached(const rcsolve::OperatorParams& p,
                                        const std::string& dir) {
    if (dir.empty()) return rcsolve::solve_recursion(p);
    namespace fs = std::filesystem;
    fs::path file = fs::path(dir) / ("rcsiegel-" + hex16(fnv1a64(cache_key(p))) + ".json");
    std::error_code ec;
    if (fs::exists(file, ec)) {
        rcsolve::PBasisExpr e = json_io::pbasis_from_json(ordered_json::parse(read_file(file)));
        if (e.n == p.n && 2 * e.v == p.v && e.d1 == p.d1 && e.d2 == p.d2 &&
            e.normalization == "C_last=1")
            return e;
    }
    rcsolve::PBasisExpr e = rcsolve::solve_recursion(p);
    fs::create_directories(fs::path(dir), ec);
    atomic_write(file, json_io::to_json(e).dump(2) + "\n");
    return e;
}

// "3", "-3", "3/2" -- text output drops the denominator when it is 1
inline std::string fmt_rat(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return exactpoly::rat_str(r);
}

inline std::string index_str(const rcsolve::MultiIndex& a) {
    std::string s = "(";
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(a[k]);
    }
    return s + ")";
}

inline void pbasis_text(const rcsolve::PBasisExpr& e, std::ostream& out) {
    out << "n=" << e.n << " v=" << e.v << " d1=" << e.d1 << " d2=" << e.d2
        << " normalization=" << e.normalization << "\n";
    for (const auto& [a, c] : e.coeffs) out << "C" << index_str(a) << " = " << fmt_rat(c) << "\n";
}

inline void qexp_text(const brackets::QExpansion& f, std::ostream& out) {
    out << "weight=" << f.weight << " truncation=" << f.truncation << "\n";
    for (int m = 0; m <= f.truncation; ++m)
        out << "q^" << m << ": " << fmt_rat(f.coefficients[m]) << "\n";
}

inline void vecpoly_text(const vectorops::VecPoly& vec, std::ostream& out) {
    out << "n=" << vec.n << " m=" << vec.m << " v=" << vec.v << "\n";
    for (const auto& [nu, poly] : vec.components)
        out << "u^" << index_str(nu) << ": " << poly.to_string() << "\n";
}

inline void emit_pbasis(const rcsolve::PBasisExpr& e, const std::string& format,
                        std::ostream& out) {
    if (format == "json")
        out << json_io::to_json(e).dump(2) << "\n";
    else if (format == "latex")
        out << json_io::export_latex(e) << "\n";
    else
        pbasis_text(e, out);
}

inline void emit_qexp(const brackets::QExpansion& f, const std::string& format,
                      std::ostream& out) {
    if (format == "json")
        out << json_io::to_json(f).dump(2) << "\n";
    else if (format == "latex")
        out << json_io::export_latex(f) << "\n";
    else
        qexp_text(f, out);
}

struct VerifyCheck {
    std::string name;
    bool ran = false;
    bool pass = false;
    std::string note;
};

}  // namespace detail

// The whole CLI.  args excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using detail::ordered_json;

    CLI::App app{"exact Rankin-Cohen type bilinear operators for Siegel modular forms"};
    app.name("rcsiegel");
    app.require_subcommand(1);

    int rc = 0;

    // ---- solve ----------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "solve the coefficient recursion");
    struct {
        int n = 1, v = 0, d1 = 1, d2 = 1;
        std::string format = "text", cache_dir;
    } so;
    solve->add_option("--n", so.n, "genus")->required();
    solve->add_option("--v", so.v, "polynomial weight of Q (even; twice the multi-index sum)")
        ->required();
    solve->add_option("--d1", so.d1, "first parameter d1 = 2k")->required();
    solve->add_option("--d2", so.d2, "second parameter d2 = 2l")->required();
    solve->add_option("--format", so.format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));
    solve->add_option("--cache-dir", so.cache_dir,
                      "artifact cache directory (default: $RCSIEGEL_CACHE_DIR)");
    solve->callback([&] {
        rcsolve::OperatorParams p{so.n, so.v, so.d1, so.d2};
        detail::emit_pbasis(detail::solve_cached(p, detail::resolve_cache_dir(so.cache_dir)),
                            so.format, out);
    });

    // ---- closed-form ----------------------------------------------------
    auto* closed = app.add_subcommand("closed-form", "evaluate a closed coefficient formula");
    struct {
        std::string family;
        int n = 1, v = -1, d1 = 1, d2 = 1;
        std::string format = "text";
    } cf;
    closed->add_option("--family", cf.family, "one of v2, v4, cohen, ce")
        ->required()
        ->check(CLI::IsMember({"v2", "v4", "cohen", "ce"}));
    closed->add_option("--n", cf.n, "genus")->required();
    closed->add_option("--v", cf.v, "polynomial weight (fixed to 2 for v2, 4 for v4)");
    closed->add_option("--d1", cf.d1, "first parameter")->required();
    closed->add_option("--d2", cf.d2, "second parameter")->required();
    closed->add_option("--format", cf.format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));
    closed->callback([&] {
        rcsolve::PBasisExpr e;
        if (cf.family == "v2") {
            if (cf.v >= 0 && cf.v != 2)
                throw std::invalid_argument("--family v2 is the weight-2 formula; got --v " +
                                            std::to_string(cf.v));
            e = rcsolve::closed_v2(cf.n, cf.d1, cf.d2);
        } else if (cf.family == "v4") {
            if (cf.v >= 0 && cf.v != 4)
                throw std::invalid_argument("--family v4 is the weight-4 formula; got --v " +
                                            std::to_string(cf.v));
            e = rcsolve::closed_v4(cf.n, cf.d1, cf.d2);
        } else {
            if (cf.v < 0) throw std::invalid_argument("--family " + cf.family + " needs --v");
            if (cf.v % 2 != 0)
                throw TrivialSpaceError("trivial space: v must be even, got " +
                                        std::to_string(cf.v));
            if (cf.family == "cohen") {
                if (cf.n != 1)
                    throw std::invalid_argument("--family cohen is the genus-1 formula (--n 1)");
                e = rcsolve::cohen_n1(cf.v / 2, cf.d1, cf.d2);
            } else {
                if (cf.n != 2)
                    throw std::invalid_argument("--family ce is the genus-2 formula (--n 2)");
                e = rcsolve::choie_eholzer_n2(cf.v / 2, cf.d1, cf.d2);
            }
        }
        detail::emit_pbasis(e, cf.format, out);
    });

    // ---- verify ---------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the identity suite for one parameter set");
    struct {
        int n = 1, v = 0, d1 = 1, d2 = 1;
        long cap = 5000;
        std::string format = "text", cache_dir;
    } vf;
    verify->add_option("--n", vf.n, "genus")->required();
    verify->add_option("--v", vf.v, "polynomial weight")->required();
    verify->add_option("--d1", vf.d1, "first parameter")->required();
    verify->add_option("--d2", vf.d2, "second parameter")->required();
    verify->add_option("--cap", vf.cap, "kernel cost cap (basis size)");
    verify->add_option("--format", vf.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--cache-dir", vf.cache_dir, "artifact cache directory");
    verify->callback([&] {
        rcsolve::OperatorParams p{vf.n, vf.v, vf.d1, vf.d2};
        p.validate();
        std::vector<detail::VerifyCheck> checks;

        rcsolve::PBasisExpr sol = rcsolve::solve_recursion(p, /*post_check=*/false);
        exactpoly::Poly expanded = pencil::expand_pbasis(sol);
        checks.push_back({"harmonicity", true,
                          laplace::harmonicity_defect(p, expanded).is_zero(), ""});

        if (vf.n <= 4) {
            laplace::LemmaReport lr = laplace::verify_lemma_deltagrad(vf.n, vf.d1, vf.d2);
            checks.push_back({"lemma_deltagrad", true, lr.all_pass(),
                              std::to_string(lr.checks.size()) + " identities"});
        } else {
            checks.push_back({"lemma_deltagrad", false, false, "skipped: n > 4"});
        }

        auto ratio_check = [&](const std::string& name, const rcsolve::PBasisExpr& closed) {
            std::optional<exactpoly::Rational> r = rcsolve::proportional_equal(sol, closed);
            checks.push_back({name, true, r.has_value(),
                              r ? "ratio " + exactpoly::rat_str(*r) : "not proportional"});
        };
        if (vf.v == 2) ratio_check("closed_v2", rcsolve::closed_v2(vf.n, vf.d1, vf.d2));
        if (vf.v == 4) {
            ratio_check("closed_v4", rcsolve::closed_v4(vf.n, vf.d1, vf.d2));
            checks.push_back({"zagier_recurrence", true,
                              rcsolve::zagier_recurrence_holds(
                                  rcsolve::zagier_table(vf.n, vf.d1, vf.d2)),
                              ""});
        }
        if (vf.n == 1) ratio_check("cohen", rcsolve::cohen_n1(vf.v / 2, vf.d1, vf.d2));
        if (vf.n == 2) {
            ratio_check("choie_eholzer", rcsolve::choie_eholzer_n2(vf.v / 2, vf.d1, vf.d2));
            checks.push_back({"ce_recursions", true,
                              rcsolve::ce_recursions_hold(
                                  rcsolve::ce_table(vf.v / 2, vf.d1, vf.d2)),
                              ""});
        }

        try {
            rcsolve::KernelResult k = rcsolve::kernel_dimension(p, vf.cap);
            checks.push_back({"kernel_dimension", true, k.dimension == 1,
                              "dimension " + std::to_string(k.dimension)});
        } catch (const std::invalid_argument& e) {
            checks.push_back({"kernel_dimension", false, false, std::string("skipped: ") +
                                                                    e.what()});
        }

        bool all_pass = true;
        for (const auto& c : checks)
            if (c.ran && !c.pass) all_pass = false;

        if (vf.format == "json") {
            ordered_json j;
            j["n"] = vf.n;
            j["v"] = vf.v;
            j["d1"] = vf.d1;
            j["d2"] = vf.d2;
            j["all_pass"] = all_pass;
            ordered_json arr = ordered_json::array();
            for (const auto& c : checks) {
                ordered_json item;
                item["name"] = c.name;
                item["ran"] = c.ran;
                item["pass"] = c.pass;
                item["note"] = c.note;
                arr.push_back(std::move(item));
            }
            j["checks"] = std::move(arr);
            out << j.dump(2) << "\n";
        } else {
            out << "verify n=" << vf.n << " v=" << vf.v << " d1=" << vf.d1 << " d2=" << vf.d2
                << "\n";
            for (const auto& c : checks) {
                out << "  " << c.name << ": " << (!c.ran ? "SKIP" : c.pass ? "pass" : "FAIL");
                if (!c.note.empty()) out << " (" << c.note << ")";
                out << "\n";
            }
            out << (all_pass ? "all checks passed" : "FAILED") << "\n";
        }
        if (!all_pass) rc = 2;
    });

    // ---- kernel-dim -----------------------------------------------------
    auto* kdim = app.add_subcommand("kernel-dim", "dimension of the pluri-harmonic kernel");
    struct {
        int n = 1, v = 0, d1 = 1, d2 = 1;
        long cap = 5000;
        std::string format = "text";
    } kd;
    kdim->add_option("--n", kd.n, "genus")->required();
    kdim->add_option("--v", kd.v, "polynomial weight")->required();
    kdim->add_option("--d1", kd.d1, "first parameter")->required();
    kdim->add_option("--d2", kd.d2, "second parameter")->required();
    kdim->add_option("--cap", kd.cap, "cost cap (basis size)");
    kdim->add_option("--format", kd.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    kdim->callback([&] {
        rcsolve::OperatorParams p{kd.n, kd.v, kd.d1, kd.d2};
        rcsolve::KernelResult k = rcsolve::kernel_dimension(p, kd.cap);
        if (kd.format == "json") {
            ordered_json j;
            j["n"] = kd.n;
            j["v"] = kd.v;
            j["d1"] = kd.d1;
            j["d2"] = kd.d2;
            j["dimension"] = k.dimension;
            ordered_json basis = ordered_json::array();
            for (const auto& a : k.basis_indices) basis.push_back(a);
            j["basis_indices"] = std::move(basis);
            ordered_json vecs = ordered_json::array();
            for (const auto& v : k.vectors) {
                ordered_json row = ordered_json::array();
                for (const auto& c : v) row.push_back(exactpoly::rat_str(c));
                vecs.push_back(std::move(row));
            }
            j["vectors"] = std::move(vecs);
            out << j.dump(2) << "\n";
        } else {
            out << "dimension = " << k.dimension << "\n";
        }
    });

    // ---- bracket --------------------------------------------------------
    auto* bracket = app.add_subcommand("bracket", "apply the genus-1 bracket to q-expansions");
    struct {
        int k = 0, l = 0, t = 0, terms = 20;
        std::string f_path, g_path, format = "text";
    } br;
    auto* opt_k = bracket->add_option("--k", br.k, "weight of the first form");
    auto* opt_l = bracket->add_option("--l", br.l, "weight of the second form");
    bracket->add_option("--t", br.t, "bracket index t >= 0")->required();
    bracket->add_option("--terms", br.terms, "truncation order");
    bracket->add_option("--f", br.f_path, "JSON q-expansion for the first form");
    bracket->add_option("--g", br.g_path, "JSON q-expansion for the second form");
    bracket->add_option("--format", br.format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));
    bracket->callback([&] {
        auto load = [&](const std::string& path, CLI::Option* opt, int w,
                        const char* flag) -> brackets::QExpansion {
            if (!path.empty()) {
                brackets::QExpansion f =
                    json_io::qexp_from_json(ordered_json::parse(detail::read_file(path)));
                if (opt->count() && f.weight != w)
                    throw std::invalid_argument(std::string(flag) + " disagrees with the weight " +
                                                std::to_string(f.weight) + " stored in " + path);
                if (f.truncation > br.terms) f = brackets::q_truncate(f, br.terms);
                return f;
            }
            if (!opt->count())
                throw std::invalid_argument(std::string("need ") + flag +
                                            " (or a file) for each argument form");
            return brackets::eisenstein(w, br.terms);
        };
        brackets::QExpansion f = load(br.f_path, opt_k, br.k, "--k");
        brackets::QExpansion g = load(br.g_path, opt_l, br.l, "--l");
        detail::emit_qexp(brackets::rc_bracket_genus1(f, g, br.t), br.format, out);
    });

    // ---- cusp-check -----------------------------------------------------
    auto* cusp = app.add_subcommand("cusp-check",
                                    "evaluate the operator on random singular PSD pairs");
    struct {
        int n = 1, v = 0, d1 = 1, d2 = 1, trials = 100;
        std::uint64_t seed = 0;
        std::string format = "text";
    } cu;
    cusp->add_option("--n", cu.n, "genus")->required();
    cusp->add_option("--v", cu.v, "polynomial weight")->required();
    cusp->add_option("--d1", cu.d1, "first parameter")->required();
    cusp->add_option("--d2", cu.d2, "second parameter")->required();
    cusp->add_option("--trials", cu.trials, "number of random pairs");
    cusp->add_option("--seed", cu.seed, "RNG seed");
    cusp->add_option("--format", cu.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    cusp->callback([&] {
        rcsolve::OperatorParams p{cu.n, cu.v, cu.d1, cu.d2};
        brackets::CuspReport report = brackets::cusp_vanishing_check(p, cu.trials, cu.seed);
        bool sanity_nonzero = report.sanity_value != 0;
        if (cu.format == "json") {
            ordered_json j = json_io::to_json(report);
            j["sanity_nonzero"] = sanity_nonzero;
            out << j.dump(2) << "\n";
        } else {
            int passed = 0;
            for (const auto& r : report.results) passed += r.pass ? 1 : 0;
            out << "cusp-check n=" << cu.n << " v=" << cu.v << " d1=" << cu.d1
                << " d2=" << cu.d2 << ": " << passed << "/" << report.trials
                << " trials vanish, sanity value " << detail::fmt_rat(report.sanity_value)
                << "\n";
        }
        if (!report.all_pass || !sanity_nonzero) rc = 2;
    });

    // ---- vector ---------------------------------------------------------
    auto* vector = app.add_subcommand("vector", "vector-valued operator families");
    struct {
        std::string kind;
        int n = 2, m = 0, d1 = 1, d2 = 1, equiv_trials = 0;
        std::uint64_t seed = 0;
        std::string format = "text";
    } ve;
    vector->add_option("--kind", ve.kind, "lift (symmetric genus-n) or mixed (genus-2)")
        ->required()
        ->check(CLI::IsMember({"lift", "mixed"}));
    vector->add_option("--n", ve.n, "genus (lift only; mixed is genus 2)");
    vector->add_option("--m", ve.m, "Sym^m degree")->required();
    vector->add_option("--d1", ve.d1, "first parameter")->required();
    vector->add_option("--d2", ve.d2, "second parameter")->required();
    vector->add_option("--equiv-trials", ve.equiv_trials,
                       "also verify equivariance on this many random matrices");
    vector->add_option("--seed", ve.seed, "RNG seed for the equivariance trials");
    vector->add_option("--format", ve.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    vector->callback([&] {
        vectorops::VecPoly vec;
        if (ve.kind == "lift") {
            vec = vectorops::lift_symmetric(ve.n, ve.m, ve.d1, ve.d2);
        } else {
            if (ve.n != 2)
                throw std::invalid_argument("--kind mixed is the genus-2 construction (--n 2)");
            vec = vectorops::mixed_m2_genus2(ve.m, ve.d1, ve.d2);
        }
        std::optional<vectorops::EquivReport> eq;
        if (ve.equiv_trials > 0)
            eq = vectorops::verify_equivariance(vec, ve.equiv_trials, ve.seed);
        if (ve.format == "json") {
            ordered_json j = json_io::to_json(vec);
            if (eq) j["equivariance"] = json_io::to_json(*eq);
            out << j.dump(2) << "\n";
        } else {
            detail::vecpoly_text(vec, out);
            if (eq)
                out << "equivariance: " << (eq->all_pass ? "pass" : "FAIL") << " ("
                    << eq->trials << " trials, seed " << eq->seed << ")\n";
        }
        if (eq && !eq->all_pass) rc = 2;
    });

    // ---- export ---------------------------------------------------------
    auto* exp = app.add_subcommand("export", "render a stored or computed expression");
    struct {
        std::string input;
        int n = 1, v = 0, d1 = 1, d2 = 1;
        std::string format = "latex", cache_dir;
    } ex;
    auto* opt_in = exp->add_option("--input", ex.input, "PBasisExpr JSON file");
    auto* opt_n = exp->add_option("--n", ex.n, "genus");
    auto* opt_v = exp->add_option("--v", ex.v, "polynomial weight");
    auto* opt_d1 = exp->add_option("--d1", ex.d1, "first parameter");
    auto* opt_d2 = exp->add_option("--d2", ex.d2, "second parameter");
    exp->add_option("--format", ex.format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));
    exp->add_option("--cache-dir", ex.cache_dir, "artifact cache directory");
    opt_n->excludes(opt_in);
    opt_v->excludes(opt_in);
    opt_d1->excludes(opt_in);
    opt_d2->excludes(opt_in);
    exp->callback([&] {
        rcsolve::PBasisExpr e;
        if (opt_in->count()) {
            e = json_io::pbasis_from_json(ordered_json::parse(detail::read_file(ex.input)));
        } else {
            if (!opt_n->count() || !opt_v->count() || !opt_d1->count() || !opt_d2->count())
                throw std::invalid_argument("export needs --input FILE or all of --n --v --d1 --d2");
            rcsolve::OperatorParams p{ex.n, ex.v, ex.d1, ex.d2};
            e = detail::solve_cached(p, detail::resolve_cache_dir(ex.cache_dir));
        }
        detail::emit_pbasis(e, ex.format, out);
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;  // collapse CLI11's error enum to the documented usage code
    } catch (const VerificationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

}  // namespace rcs::cli
