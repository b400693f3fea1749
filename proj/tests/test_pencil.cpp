#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <map>
#include <random>

#include "rcsiegel/pencil.hpp"
#include "rcsiegel/rcsolve.hpp"

using namespace rcs;
using exactpoly::Poly;
using exactpoly::Rational;

namespace {

Rational binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= Rational(n - i, i + 1);
    return r;
}

// evaluate every variable of both slots at given integer matrices
Rational eval_at(const Poly& p, int n, const std::vector<std::vector<long>>& a,
                 const std::vector<std::vector<long>>& b) {
    std::map<exactpoly::VarId, Rational> at;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            at[exactpoly::var_r(i, j)] = a[i - 1][j - 1];
            at[exactpoly::var_rp(i, j)] = b[i - 1][j - 1];
        }
    return p.evaluate(at);
}

}  // namespace

TEST_CASE("P_alpha at the identity pair is binom(n, alpha)") {
    for (int n = 1; n <= 5; ++n) {
        pencil::PencilFamily fam = pencil::p_alpha_family(n);
        REQUIRE(fam.degree() == n);
        std::vector<std::vector<long>> id(n, std::vector<long>(n, 0));
        for (int i = 0; i < n; ++i) id[i][i] = 1;
        for (int alpha = 0; alpha <= n; ++alpha)
            REQUIRE(eval_at(fam.coeffs[alpha], n, id, id) == binom(n, alpha));
    }
}

TEST_CASE("pencil coefficients reconstruct det(R + lambda R') pointwise") {
    // det at random symmetric integer pairs, lambda swept over integers:
    // sum_alpha P_alpha(A,B) x^alpha must equal det(A + x B) for n+1 values of x
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> pick(-4, 4);
    for (int n = 2; n <= 4; ++n) {
        pencil::PencilFamily fam = pencil::p_alpha_family(n);
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<std::vector<long>> a(n, std::vector<long>(n)), b = a;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    a[i][j] = a[j][i] = pick(rng);
                    b[i][j] = b[j][i] = pick(rng);
                }
            for (long x = 0; x <= n; ++x) {
                // integer determinant by fraction-free expansion
                std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) m[i][j] = Rational(a[i][j] + x * b[i][j]);
                std::function<Rational(std::vector<std::vector<Rational>>)> det =
                    [&](std::vector<std::vector<Rational>> w) -> Rational {
                    int k = (int)w.size();
                    if (k == 1) return w[0][0];
                    Rational acc = 0;
                    for (int c = 0; c < k; ++c) {
                        std::vector<std::vector<Rational>> sub(k - 1,
                                                               std::vector<Rational>(k - 1));
                        for (int i = 1; i < k; ++i)
                            for (int j = 0, q = 0; j < k; ++j)
                                if (j != c) sub[i - 1][q++] = w[i][j];
                        acc += ((c % 2) ? Rational(-1) : Rational(1)) * w[0][c] * det(sub);
                    }
                    return acc;
                };
                Rational direct = det(m);
                Rational viaPencil = 0;
                for (int alpha = 0; alpha <= n; ++alpha)
                    viaPencil += eval_at(fam.coeffs[alpha], n, a, b) *
                                 exactpoly::rat_pow(Rational(x), alpha);
                REQUIRE(direct == viaPencil);
            }
        }
    }
}

TEST_CASE("genus 1 pencil is r + lambda r'") {
    pencil::PencilFamily fam = pencil::p_alpha_family(1);
    REQUIRE(fam.coeffs[0] == Poly::variable(exactpoly::var_r(1, 1)));
    REQUIRE(fam.coeffs[1] == Poly::variable(exactpoly::var_rp(1, 1)));
}

TEST_CASE("minor family drops the requested row and column") {
    // deleting row i and column i of the n=2 pencil leaves the opposite 1x1 entry
    pencil::PencilFamily m11 = pencil::minor_family(2, {1}, {1});
    REQUIRE(m11.coeffs[0] == Poly::variable(exactpoly::var_r(2, 2)));
    REQUIRE(m11.coeffs[1] == Poly::variable(exactpoly::var_rp(2, 2)));
    // off-diagonal deletion keeps the symmetric labels of the original matrix
    pencil::PencilFamily m12 = pencil::minor_family(2, {1}, {2});
    REQUIRE(m12.coeffs[0] == Poly::variable(exactpoly::var_r(1, 2)));
    REQUIRE(m12.coeffs[1] == Poly::variable(exactpoly::var_rp(1, 2)));
}

TEST_CASE("expand_pbasis multiplies out coefficient vectors") {
    rcsolve::PBasisExpr e{1, 1, 2, 4, "test", {{{1, 0}, Rational(4)}, {{0, 1}, Rational(-2)}}};
    Poly expect = Rational(4) * Poly::variable(exactpoly::var_r(1, 1)) -
                  Rational(2) * Poly::variable(exactpoly::var_rp(1, 1));
    REQUIRE(pencil::expand_pbasis(e) == expect);
    rcsolve::PBasisExpr zero{1, 1, 2, 4, "test", {}};
    REQUIRE(pencil::expand_pbasis(zero).is_zero());
}
