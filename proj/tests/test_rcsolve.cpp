#include <catch2/catch_amalgamated.hpp>

#include "rcsiegel/laplace.hpp"
#include "rcsiegel/pencil.hpp"
#include "rcsiegel/rcsolve.hpp"

using namespace rcs;
using exactpoly::Rational;
using rcsolve::MultiIndex;
using rcsolve::PBasisExpr;

namespace {

// reverse every multi-index; the coefficient duality swaps the two slots
PBasisExpr reversed(const PBasisExpr& e) {
    PBasisExpr out{e.n, e.v, e.d2, e.d1, e.normalization, {}};
    for (const auto& [a, c] : e.coeffs) out.coeffs[MultiIndex(a.rbegin(), a.rend())] = c;
    return out;
}

}  // namespace

TEST_CASE("index_set enumerates ascending compositions") {
    auto idx = rcsolve::index_set(2, 2);
    REQUIRE(idx == std::vector<MultiIndex>{
                       {0, 0, 2}, {0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 0}, {2, 0, 0}});
    REQUIRE(rcsolve::index_set(4, 6).size() == 210);
    REQUIRE_THROWS_AS(rcsolve::index_set(0, 1), std::invalid_argument);
}

TEST_CASE("solver output at n=1 weight 2") {
    PBasisExpr e = rcsolve::solve_recursion({1, 2, 4, 6});
    REQUIRE(e.coeffs == std::map<MultiIndex, Rational>{{{0, 1}, Rational(1)},
                                                       {{1, 0}, Rational(-3, 2)}});
    REQUIRE(e.normalization == "C_last=1");
}

TEST_CASE("weight-2 closed form") {
    PBasisExpr e = rcsolve::closed_v2(1, 2, 4);
    REQUIRE(e.coeffs == std::map<MultiIndex, Rational>{{{0, 1}, Rational(-2)},
                                                       {{1, 0}, Rational(4)}});
    for (int n : {1, 2, 3, 4, 5}) {
        auto r = rcsolve::proportional_equal(rcsolve::solve_recursion({n, 2, 2 * n, 2 * n}),
                                             rcsolve::closed_v2(n, 2 * n, 2 * n));
        REQUIRE(r.has_value());
    }
}

TEST_CASE("weight-4 closed form and its recurrence") {
    rcsolve::ZagierTable t = rcsolve::zagier_table(2, 4, 4);
    REQUIRE(t.c[0][0] == 51840);
    REQUIRE(t.c[0][1] == -64800);
    REQUIRE(t.c[1][1] == 32400);
    REQUIRE(t.c[0][2] == 194400);
    REQUIRE(t.c[1][2] == -64800);
    REQUIRE(t.c[2][2] == 51840);
    REQUIRE(rcsolve::zagier_recurrence_holds(t));

    auto ratio = [](int n, int d1, int d2) {
        return rcsolve::proportional_equal(rcsolve::solve_recursion({n, 4, d1, d2}),
                                           rcsolve::closed_v4(n, d1, d2));
    };
    REQUIRE(ratio(1, 2, 2) == Rational(1, 288));
    REQUIRE(ratio(1, 2, 6) == Rational(1, 2016));
    REQUIRE(ratio(2, 4, 4) == Rational(1, 51840));
    REQUIRE(ratio(2, 4, 8) == Rational(1, 241920));
    REQUIRE(ratio(3, 6, 6) == Rational(1, 16128000));
    REQUIRE(ratio(3, 6, 10) == Rational(1, 58060800));
}

TEST_CASE("genus-1 closed form") {
    PBasisExpr e = rcsolve::cohen_n1(1, 8, 12);
    REQUIRE(e.coeffs == std::map<MultiIndex, Rational>{{{0, 1}, Rational(4)},
                                                       {{1, 0}, Rational(-6)}});
    for (int t = 1; t <= 5; ++t) {
        auto r = rcsolve::proportional_equal(rcsolve::solve_recursion({1, 2 * t, 4, 6}),
                                             rcsolve::cohen_n1(t, 4, 6));
        REQUIRE(r == Rational(1, t + 1));
    }
}

TEST_CASE("genus-2 closed form and its recursions") {
    PBasisExpr e = rcsolve::choie_eholzer_n2(1, 6, 6);
    REQUIRE(e.coeffs == std::map<MultiIndex, Rational>{{{0, 0, 1}, Rational(-15, 2)},
                                                       {{0, 1, 0}, Rational(25, 4)},
                                                       {{1, 0, 0}, Rational(-15, 2)}});
    auto ratio = [](int v, int d1, int d2) {
        return rcsolve::proportional_equal(rcsolve::solve_recursion({2, 2 * v, d1, d2}),
                                           rcsolve::choie_eholzer_n2(v, d1, d2));
    };
    REQUIRE(ratio(1, 4, 4) == Rational(-1, 3));
    REQUIRE(ratio(1, 6, 8) == Rational(-2, 15));
    REQUIRE(ratio(2, 4, 4) == Rational(4, 45));
    REQUIRE(ratio(2, 6, 8) == Rational(2, 105));
    REQUIRE(ratio(3, 4, 4) == Rational(-2, 105));
    REQUIRE(ratio(3, 6, 8) == Rational(-4, 1575));
    for (int v = 1; v <= 3; ++v) {
        REQUIRE(rcsolve::ce_recursions_hold(rcsolve::ce_table(v, 4, 4)));
        REQUIRE(rcsolve::ce_recursions_hold(rcsolve::ce_table(v, 6, 8)));
    }
}

TEST_CASE("swapping d1 and d2 reverses the coefficient vector up to scale") {
    auto dual_ratio = [](int n, int v, int d1, int d2) {
        auto x = rcsolve::solve_recursion({n, v, d1, d2});
        auto y = rcsolve::solve_recursion({n, v, d2, d1});
        return rcsolve::proportional_equal(x, reversed(y));
    };
    REQUIRE(dual_ratio(2, 4, 4, 6) == Rational(14, 3));
    REQUIRE(dual_ratio(3, 2, 4, 6) == Rational(-5));
    REQUIRE(dual_ratio(1, 6, 4, 6) == Rational(-5, 2));
}

TEST_CASE("odd weight is rejected as trivial") {
    REQUIRE_THROWS_WITH(rcsolve::solve_recursion({1, 3, 8, 12}),
                        Catch::Matchers::ContainsSubstring("trivial space: v must be even"));
    REQUIRE_THROWS_AS(rcsolve::solve_recursion({2, 5, 4, 4}), TrivialSpaceError);
}

TEST_CASE("d1 below the genus can make the recursion singular") {
    REQUIRE_THROWS_AS(rcsolve::solve_recursion({2, 2, 1, 5}), SingularRecursionError);
}

TEST_CASE("solver output is pluri-harmonic") {
    for (auto [n, v, d1, d2] : {std::tuple{1, 4, 4, 4}, {2, 2, 4, 6}, {3, 2, 6, 6}}) {
        rcsolve::OperatorParams p{n, v, d1, d2};
        PBasisExpr e = rcsolve::solve_recursion(p, /*post_check=*/false);
        REQUIRE(laplace::harmonicity_defect(p, pencil::expand_pbasis(e)).is_zero());
    }
}

TEST_CASE("kernel dimension") {
    REQUIRE(rcsolve::kernel_dimension({1, 2, 2, 2}).dimension == 1);
    rcsolve::KernelResult k = rcsolve::kernel_dimension({2, 2, 4, 4});
    REQUIRE(k.dimension == 1);
    // the kernel vector really is a pluri-harmonic combination
    PBasisExpr e{2, 1, 4, 4, "kernel", {}};
    for (std::size_t i = 0; i < k.basis_indices.size(); ++i)
        if (k.vectors[0][i] != 0) e.coeffs[k.basis_indices[i]] = k.vectors[0][i];
    REQUIRE(laplace::harmonicity_defect({2, 2, 4, 4}, pencil::expand_pbasis(e)).is_zero());

    REQUIRE(rcsolve::kernel_dimension({2, 2, 1, 1}).dimension == 2);
    REQUIRE_THROWS_AS(rcsolve::kernel_dimension({2, 40, 4, 4}, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(rcsolve::kernel_dimension({2, 3, 4, 4}), TrivialSpaceError);
}

TEST_CASE("proportional_equal edge cases") {
    PBasisExpr a{1, 1, 2, 2, "x", {}};
    PBasisExpr b{1, 1, 2, 2, "y", {}};
    REQUIRE(rcsolve::proportional_equal(a, b) == Rational(1));
    b.coeffs[{0, 1}] = 3;
    REQUIRE(!rcsolve::proportional_equal(a, b).has_value());
    a.coeffs[{1, 0}] = 1;
    REQUIRE(!rcsolve::proportional_equal(a, b).has_value());
    a.coeffs.clear();
    a.coeffs[{0, 1}] = -6;
    REQUIRE(rcsolve::proportional_equal(a, b) == Rational(-2));
}
