#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rcsiegel/cli.hpp"

using namespace rcs;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("rcsiegel_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("cli: help and usage errors") {
    REQUIRE(run({"--help"}).code == 0);
    REQUIRE(run({"solve", "--help"}).code == 0);
    REQUIRE(run({}).code == 1);                                      // missing subcommand
    REQUIRE(run({"frobnicate"}).code == 1);                          // unknown subcommand
    REQUIRE(run({"solve", "--n", "2"}).code == 1);                   // missing required
    REQUIRE(run({"solve", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4", "--format",
                 "yaml"})
                .code == 1);                                         // bad format
}

TEST_CASE("cli: solve") {
    RunResult r = run({"solve", "--n", "2", "--v", "4", "--d1", "4", "--d2", "4", "--format",
                       "json"});
    REQUIRE(r.code == 0);
    auto j = json_io::ordered_json::parse(r.out);
    REQUIRE(j.at("coefficients").size() == 6);
    REQUIRE(j.at("normalization") == "C_last=1");
    rcsolve::PBasisExpr round = json_io::pbasis_from_json(j);
    REQUIRE(round.coeffs == rcsolve::solve_recursion({2, 4, 4, 4}).coeffs);

    RunResult text = run({"solve", "--n", "1", "--v", "2", "--d1", "4", "--d2", "6"});
    REQUIRE(text.code == 0);
    REQUIRE(text.out == "n=1 v=1 d1=4 d2=6 normalization=C_last=1\n"
                        "C(0,1) = 1\n"
                        "C(1,0) = -3/2\n");
}

TEST_CASE("cli: mathematical precondition failures exit with 3") {
    RunResult odd = run({"solve", "--n", "1", "--v", "3", "--d1", "8", "--d2", "12"});
    REQUIRE(odd.code == 3);
    REQUIRE(odd.err.find("trivial space: v must be even") != std::string::npos);
    RunResult sing = run({"solve", "--n", "2", "--v", "2", "--d1", "1", "--d2", "5"});
    REQUIRE(sing.code == 3);
    REQUIRE(sing.err.find("singular") != std::string::npos);
}

TEST_CASE("cli: closed-form families") {
    RunResult v2 = run({"closed-form", "--family", "v2", "--n", "1", "--d1", "2", "--d2", "4",
                        "--format", "latex"});
    REQUIRE(v2.code == 0);
    REQUIRE(v2.out == "4 P_{0} - 2 P_{1}\n");
    REQUIRE(run({"closed-form", "--family", "v2", "--n", "1", "--v", "4", "--d1", "2", "--d2",
                 "4"})
                .code == 1);  // weight contradicts the family
    REQUIRE(run({"closed-form", "--family", "cohen", "--n", "2", "--v", "2", "--d1", "4",
                 "--d2", "4"})
                .code == 1);  // cohen is genus 1
    REQUIRE(run({"closed-form", "--family", "ce", "--n", "2", "--d1", "4", "--d2", "4"}).code ==
            1);               // ce needs --v
    RunResult ce = run({"closed-form", "--family", "ce", "--n", "2", "--v", "2", "--d1", "6",
                        "--d2", "6"});
    REQUIRE(ce.code == 0);
    REQUIRE(ce.out.find("C(0,1,0) = 25/4") != std::string::npos);
}

TEST_CASE("cli: verify") {
    RunResult good = run({"verify", "--n", "1", "--v", "2", "--d1", "4", "--d2", "6"});
    REQUIRE(good.code == 0);
    REQUIRE(good.out.find("all checks passed") != std::string::npos);
    RunResult j = run({"verify", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4", "--format",
                       "json"});
    REQUIRE(j.code == 0);
    REQUIRE(json_io::ordered_json::parse(j.out).at("all_pass") == true);
}

TEST_CASE("cli: kernel-dim") {
    RunResult r = run({"kernel-dim", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4",
                       "--format", "json"});
    REQUIRE(r.code == 0);
    REQUIRE(json_io::ordered_json::parse(r.out).at("dimension") == 1);
    REQUIRE(run({"kernel-dim", "--n", "2", "--v", "2", "--d1", "1", "--d2", "1"}).out ==
            "dimension = 2\n");
    // over the cost cap
    REQUIRE(run({"kernel-dim", "--n", "2", "--v", "40", "--d1", "4", "--d2", "4", "--cap",
                 "5"})
                .code == 1);
}

TEST_CASE("cli: bracket") {
    RunResult r = run({"bracket", "--k", "4", "--l", "6", "--t", "1", "--terms", "20"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("q^0: 0\n") != std::string::npos);
    REQUIRE(r.out.find("q^1: -3456\n") != std::string::npos);
    REQUIRE(run({"bracket", "--t", "1"}).code == 1);  // no weights, no files

    // file ingestion matches the internally generated series
    fs::path dir = fresh_dir("bracket");
    std::ofstream(dir / "e4.json") << json_io::to_json(brackets::eisenstein(4, 20)).dump(2);
    RunResult viaFile = run({"bracket", "--f", (dir / "e4.json").string(), "--l", "6", "--t",
                             "1", "--terms", "20"});
    REQUIRE(viaFile.code == 0);
    REQUIRE(viaFile.out == r.out);
    REQUIRE(run({"bracket", "--f", (dir / "e4.json").string(), "--k", "6", "--l", "6", "--t",
                 "1"})
                .code == 1);  // --k contradicts the stored weight
    fs::remove_all(dir);
}

TEST_CASE("cli: cusp-check") {
    RunResult r = run({"cusp-check", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4",
                       "--trials", "5", "--seed", "9", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = json_io::ordered_json::parse(r.out);
    REQUIRE(j.at("all_pass") == true);
    REQUIRE(j.at("sanity_nonzero") == true);
}

TEST_CASE("cli: vector") {
    RunResult r = run({"vector", "--kind", "lift", "--n", "2", "--m", "2", "--d1", "4", "--d2",
                       "4", "--equiv-trials", "3", "--seed", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = json_io::ordered_json::parse(r.out);
    REQUIRE(j.at("components").size() == 3);
    REQUIRE(j.at("equivariance").at("all_pass") == true);
    REQUIRE(run({"vector", "--kind", "mixed", "--n", "3", "--m", "2", "--d1", "6", "--d2",
                 "6"})
                .code == 1);  // mixed is genus 2
    REQUIRE(run({"vector", "--kind", "mixed", "--m", "2", "--d1", "2", "--d2", "6"}).code ==
            3);               // parameters below the construction's range
}

TEST_CASE("cli: export") {
    fs::path dir = fresh_dir("export");
    RunResult direct = run({"solve", "--n", "1", "--v", "2", "--d1", "4", "--d2", "6",
                            "--format", "json"});
    std::ofstream(dir / "expr.json") << direct.out;
    RunResult fromFile = run({"export", "--input", (dir / "expr.json").string()});
    REQUIRE(fromFile.code == 0);
    RunResult computed = run({"export", "--n", "1", "--v", "2", "--d1", "4", "--d2", "6"});
    REQUIRE(fromFile.out == computed.out);
    REQUIRE(run({"export", "--n", "1", "--v", "2"}).code == 1);  // incomplete parameters
    REQUIRE(run({"export", "--input", (dir / "missing.json").string()}).code == 1);
    fs::remove_all(dir);
}

TEST_CASE("cli: cache reuse is byte-identical and creates one artifact") {
    fs::path dir = fresh_dir("cache");
    std::vector<std::string> args{"solve", "--n",  "2", "--v",        "2",
                                  "--d1",  "4",    "--d2", "6",
                                  "--format", "json", "--cache-dir", dir.string()};
    RunResult first = run(args);
    REQUIRE(first.code == 0);
    auto count = std::distance(fs::directory_iterator(dir), fs::directory_iterator{});
    REQUIRE(count == 1);
    RunResult second = run(args);
    REQUIRE(second.out == first.out);
    REQUIRE(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);

    // environment variable override
    ::setenv("RCSIEGEL_CACHE_DIR", dir.string().c_str(), 1);
    RunResult viaEnv = run({"solve", "--n", "2", "--v", "2", "--d1", "4", "--d2", "6",
                            "--format", "json"});
    ::unsetenv("RCSIEGEL_CACHE_DIR");
    REQUIRE(viaEnv.out == first.out);
    fs::remove_all(dir);
}

TEST_CASE("json round trips") {
    rcsolve::PBasisExpr e = rcsolve::solve_recursion({2, 2, 4, 6});
    rcsolve::PBasisExpr e2 = json_io::pbasis_from_json(json_io::to_json(e));
    REQUIRE(e2.n == e.n);
    REQUIRE(e2.v == e.v);
    REQUIRE(e2.d1 == e.d1);
    REQUIRE(e2.d2 == e.d2);
    REQUIRE(e2.normalization == e.normalization);
    REQUIRE(e2.coeffs == e.coeffs);

    brackets::QExpansion f = brackets::eisenstein(6, 12);
    brackets::QExpansion f2 = json_io::qexp_from_json(json_io::to_json(f));
    REQUIRE(f2.weight == f.weight);
    REQUIRE(f2.truncation == f.truncation);
    REQUIRE(f2.coefficients == f.coefficients);

    vectorops::VecPoly v = vectorops::lift_symmetric(2, 2, 4, 6);
    vectorops::VecPoly v2 = json_io::vecpoly_from_json(json_io::to_json(v));
    REQUIRE(v2.n == v.n);
    REQUIRE(v2.m == v.m);
    REQUIRE(v2.v == v.v);
    REQUIRE(v2.components == v.components);
}

TEST_CASE("latex rendering") {
    rcsolve::PBasisExpr empty{1, 1, 2, 2, "x", {}};
    REQUIRE(json_io::export_latex(empty) == "0");
    rcsolve::PBasisExpr one{1, 1, 2, 2, "x", {{{0, 1}, exactpoly::Rational(1)}}};
    REQUIRE(json_io::export_latex(one) == "P_{1}");
    rcsolve::PBasisExpr mixed{
        1, 2, 2, 2, "x",
        {{{2, 0}, exactpoly::Rational(-3, 2)}, {{1, 1}, exactpoly::Rational(1, 1)}}};
    REQUIRE(json_io::export_latex(mixed) == "-\\frac{3}{2} P_{0}^{2} + P_{0} P_{1}");
    REQUIRE(json_io::export_latex(brackets::delta(3)) == "q - 24 q^{2} + 252 q^{3}");
}
