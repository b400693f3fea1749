#include <catch2/catch_amalgamated.hpp>

#include "rcsiegel/laplace.hpp"
#include "rcsiegel/pencil.hpp"
#include "rcsiegel/rcsolve.hpp"

using namespace rcs;
using exactpoly::Poly;
using exactpoly::Rational;
using exactpoly::Slot;

TEST_CASE("operator identities on the pencil basis") {
    for (int n : {1, 2, 3})
        for (auto [d1, d2] : {std::pair{3, 3}, {4, 6}}) {
            laplace::LemmaReport r = laplace::verify_lemma_deltagrad(n, d1, d2);
            INFO("n=" << n << " d1=" << d1 << " d2=" << d2);
            REQUIRE(!r.checks.empty());
            REQUIRE(r.all_pass());
        }
}

TEST_CASE("edge actions vanish") {
    // L_ii kills det R', L'_ii kills det R
    pencil::PencilFamily fam = pencil::p_alpha_family(2);
    for (int i = 1; i <= 2; ++i) {
        REQUIRE(laplace::apply_L(2, 4, i, i, fam.coeffs[2]).is_zero());
        REQUIRE(laplace::apply_Lprime(2, 6, i, i, fam.coeffs[0]).is_zero());
    }
}

TEST_CASE("product rule with the pairing correction") {
    // L_ii(q q') = (L_ii q) q' + q (L_ii q') + 8 (q, q')_{i,R}, same with primes
    pencil::PencilFamily fam = pencil::p_alpha_family(2);
    const Poly& q = fam.coeffs[0];
    const Poly& q2 = fam.coeffs[1];
    for (int i = 1; i <= 2; ++i) {
        Poly lhs = laplace::apply_L(2, 5, i, i, q * q2);
        Poly rhs = laplace::apply_L(2, 5, i, i, q) * q2 + q * laplace::apply_L(2, 5, i, i, q2) +
                   Rational(8) * laplace::pairing(2, q, q2, i, Slot::R);
        REQUIRE(lhs == rhs);
        Poly lhsp = laplace::apply_Lprime(2, 7, i, i, q * q2);
        Poly rhsp = laplace::apply_Lprime(2, 7, i, i, q) * q2 +
                    q * laplace::apply_Lprime(2, 7, i, i, q2) +
                    Rational(8) * laplace::pairing(2, q, q2, i, Slot::Rp);
        REQUIRE(lhsp == rhsp);
    }
}

TEST_CASE("pairing is symmetric in its arguments") {
    pencil::PencilFamily fam = pencil::p_alpha_family(2);
    for (int i = 1; i <= 2; ++i) {
        REQUIRE(laplace::pairing(2, fam.coeffs[0], fam.coeffs[2], i, Slot::R) ==
                laplace::pairing(2, fam.coeffs[2], fam.coeffs[0], i, Slot::R));
        REQUIRE(laplace::pairing(2, fam.coeffs[1], fam.coeffs[2], i, Slot::Rp) ==
                laplace::pairing(2, fam.coeffs[2], fam.coeffs[1], i, Slot::Rp));
    }
}

TEST_CASE("harmonicity defect separates solutions from non-solutions") {
    rcsolve::OperatorParams p{2, 2, 4, 6};
    Poly good = pencil::expand_pbasis(rcsolve::closed_v2(2, 4, 6));
    REQUIRE(laplace::harmonicity_defect(p, good).is_zero());
    // a single basis vector is not pluri-harmonic at generic weights
    Poly bad = pencil::p_alpha_family(2).coeffs[0];
    REQUIRE(!laplace::harmonicity_defect(p, bad).is_zero());
}

TEST_CASE("operator index validation") {
    Poly q = Poly::one();
    REQUIRE_THROWS_AS(laplace::apply_L(2, 4, 0, 1, q), std::invalid_argument);
    REQUIRE_THROWS_AS(laplace::apply_L(2, 4, 1, 3, q), std::invalid_argument);
    REQUIRE_THROWS_AS(laplace::pairing(2, q, q, 3, Slot::R), std::invalid_argument);
    REQUIRE_THROWS_AS(laplace::pairing(2, q, q, 1, Slot::U), std::invalid_argument);
}
