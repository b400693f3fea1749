#pragma once

// The second-order operators L^{(d)}_{i,j} acting on polynomials in the
// entries of a symmetric matrix, the associated bilinear pairing, and the
// pluri-harmonicity defect sum_i (L_ii + L'_ii).
//
// With D_{a,b} = d/dR[a,b] (one derivative per symmetric entry):
//
//   L^{(d)}_{i,j} q = d (1 + delta_ij) D_ij q
//                   + 4 R_ij D_ii D_jj q
//                   + sum_{m' != j, m != i} R_{m'm} D_{m'j} D_{mi} q
//                   + 2 sum_{m' != j} R_{m'i} D_{m'j} D_ii q
//                   + 2 sum_{m != i}  R_{mj} D_jj D_{mi} q
//
// and the same with primed variables for L'.  The two inner sums run over
// the full index range with only the stated exclusion.

#include <optional>
#include <string>
#include <vector>

#include "rcsiegel/exactpoly.hpp"
#include "rcsiegel/pbasis.hpp"
#include "rcsiegel/pencil.hpp"

namespace rcs::laplace {

using exactpoly::Poly;
using exactpoly::Rational;
using exactpoly::Slot;
using exactpoly::VarId;

namespace detail {

inline VarId slot_var(Slot s, int a, int b) {
    return s == Slot::R ? exactpoly::var_r(a, b) : exactpoly::var_rp(a, b);
}

inline Poly apply_L_slot(int n, int d, int i, int j, Slot s, const Poly& q) {
    if (n < 1 || i < 1 || i > n || j < 1 || j > n)
        throw std::invalid_argument("operator indices out of range");
    auto entry = [&](int a, int b) { return Poly::variable(slot_var(s, a, b)); };

    // first partials D_{m,i} q and D_{j,j} q, reused by the double sums
    std::vector<Poly> d_mi(n + 1);
    for (int m = 1; m <= n; ++m) d_mi[m] = q.partial(slot_var(s, m, i));
    Poly d_jj = q.partial(slot_var(s, j, j));

    Poly out = Rational(d * (i == j ? 2 : 1)) * q.partial(slot_var(s, i, j));
    out += Rational(4) * (entry(i, j) * d_mi[i].partial(slot_var(s, j, j)));
    for (int mp = 1; mp <= n; ++mp) {
        if (mp == j) continue;
        for (int m = 1; m <= n; ++m) {
            if (m == i) continue;
            out += entry(mp, m) * d_mi[m].partial(slot_var(s, mp, j));
        }
    }
    for (int mp = 1; mp <= n; ++mp) {
        if (mp == j) continue;
        out += Rational(2) * (entry(mp, i) * d_mi[i].partial(slot_var(s, mp, j)));
    }
    for (int m = 1; m <= n; ++m) {
        if (m == i) continue;
        out += Rational(2) * (entry(m, j) * d_mi[m].partial(slot_var(s, j, j)));
    }
    return out;
}

}  // namespace detail

inline Poly apply_L(int n, int d1, int i, int j, const Poly& q) {
    return detail::apply_L_slot(n, d1, i, j, Slot::R, q);
}

inline Poly apply_Lprime(int n, int d2, int i, int j, const Poly& q) {
    return detail::apply_L_slot(n, d2, i, j, Slot::Rp, q);
}

// (q, q2)_{i,R} or (q, q2)_{i,R'}; all single sums run over the full range
inline Poly pairing(int n, const Poly& q, const Poly& q2, int i, Slot which) {
    if (n < 1 || i < 1 || i > n) throw std::invalid_argument("pairing index out of range");
    if (which == Slot::U) throw std::invalid_argument("pairing slot must be R or Rp");
    auto entry = [&](int a, int b) { return Poly::variable(detail::slot_var(which, a, b)); };
    std::vector<Poly> dq(n + 1), dq2(n + 1);
    for (int m = 1; m <= n; ++m) {
        dq[m] = q.partial(detail::slot_var(which, m, i));
        dq2[m] = q2.partial(detail::slot_var(which, m, i));
    }
    Poly four = entry(i, i) * (dq[i] * dq2[i]);
    for (int l = 1; l <= n; ++l) four += entry(l, i) * (dq[l] * dq2[i]);
    for (int m = 1; m <= n; ++m) four += entry(m, i) * (dq[i] * dq2[m]);
    for (int l = 1; l <= n; ++l)
        for (int m = 1; m <= n; ++m) four += entry(l, m) * (dq[l] * dq2[m]);
    return Rational(1, 4) * four;
}

// sum_i (L^{(d1)}_{ii} + L'^{(d2)}_{ii}) q; zero iff q is pluri-harmonic
// for these weights
inline Poly harmonicity_defect(const rcsolve::OperatorParams& params, const Poly& q) {
    params.validate();
    Poly out;
    for (int i = 1; i <= params.n; ++i) {
        out += apply_L(params.n, params.d1, i, i, q);
        out += apply_Lprime(params.n, params.d2, i, i, q);
    }
    return out;
}

struct LemmaCheck {
    std::string identity;
    int i = 0;
    std::optional<int> alpha, beta;
    bool pass = false;
};

struct LemmaReport {
    int n = 0, d1 = 0, d2 = 0;
    std::vector<LemmaCheck> checks;

    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Symbolic verification of the operator action on the pencil basis:
//   L_ii  P_alpha = 2 (d1 + 1 - n + alpha) (P_{i;i})_alpha      (alpha <= n-1)
//   L'_ii P_alpha = 2 (d2 + 1 - alpha)     (P_{i;i})_{alpha-1}  (alpha >= 1)
//   L_ii  P_n = 0,  L'_ii P_0 = 0
// and the pairing recursions
//   (P_a,P_b)_{i,R}  = P_a (P_ii)_b - P_{b+1} (P_ii)_{a-1} + (P_{a-1},P_{b+1})_{i,R}
//   (P_a,P_b)_{i,R'} = P_b (P_ii)_{a-1} - P_{a-1} (P_ii)_b + (P_{a-1},P_{b+1})_{i,R'}
// for 0 <= a <= b <= n, with out-of-range terms zero.
inline LemmaReport verify_lemma_deltagrad(int n, int d1, int d2) {
    if (n < 1 || n > 4) throw std::invalid_argument("lemma verification supports 1 <= n <= 4");
    LemmaReport rep{n, d1, d2, {}};
    pencil::PencilFamily full = pencil::p_alpha_family(n);

    auto P = [&](int g) { return (g < 0 || g > n) ? Poly::zero() : full.coeffs[g]; };

    for (int i = 1; i <= n; ++i) {
        pencil::PencilFamily mi = pencil::minor_family(n, {i}, {i});
        auto Pii = [&](int g) { return (g < 0 || g > n - 1) ? Poly::zero() : mi.coeffs[g]; };

        for (int alpha = 0; alpha <= n - 1; ++alpha) {
            bool ok = apply_L(n, d1, i, i, P(alpha)) ==
                      Rational(2 * (d1 + 1 - n + alpha)) * Pii(alpha);
            rep.checks.push_back({"L_on_P", i, alpha, std::nullopt, ok});
        }
        for (int alpha = 1; alpha <= n; ++alpha) {
            bool ok = apply_Lprime(n, d2, i, i, P(alpha)) ==
                      Rational(2 * (d2 + 1 - alpha)) * Pii(alpha - 1);
            rep.checks.push_back({"Lprime_on_P", i, alpha, std::nullopt, ok});
        }
        rep.checks.push_back(
            {"L_on_P_top", i, n, std::nullopt, apply_L(n, d1, i, i, P(n)).is_zero()});
        rep.checks.push_back(
            {"Lprime_on_P_bottom", i, 0, std::nullopt, apply_Lprime(n, d2, i, i, P(0)).is_zero()});

        for (int a = 0; a <= n; ++a)
            for (int b = a; b <= n; ++b) {
                Poly lhs_r = pairing(n, P(a), P(b), i, Slot::R);
                Poly rhs_r = P(a) * Pii(b) - P(b + 1) * Pii(a - 1) +
                             pairing(n, P(a - 1), P(b + 1), i, Slot::R);
                rep.checks.push_back({"pairing_R", i, a, b, lhs_r == rhs_r});

                Poly lhs_p = pairing(n, P(a), P(b), i, Slot::Rp);
                Poly rhs_p = P(b) * Pii(a - 1) - P(a - 1) * Pii(b) +
                             pairing(n, P(a - 1), P(b + 1), i, Slot::Rp);
                rep.checks.push_back({"pairing_Rp", i, a, b, lhs_p == rhs_p});
            }
    }
    return rep;
}

}  // namespace rcs::laplace
