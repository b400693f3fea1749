#pragma once

// Construction of the invariant pluri-harmonic polynomials behind the
// Rankin-Cohen type brackets: the general coefficient recursion in the
// pencil basis, the closed forms for special weights and genera, and the
// kernel (solution space) computation for boundary parameters.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcsiegel/errors.hpp"
#include "rcsiegel/exactpoly.hpp"
#include "rcsiegel/laplace.hpp"
#include "rcsiegel/linalg.hpp"
#include "rcsiegel/pbasis.hpp"
#include "rcsiegel/pencil.hpp"

namespace rcs::rcsolve {

using exactpoly::binomial_rat;
using exactpoly::factorial;
using exactpoly::falling;
using exactpoly::Int;
using exactpoly::Poly;
using exactpoly::Rational;

namespace detail {

inline std::string index_str(const MultiIndex& a) {
    std::string s = "(";
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(a[k]);
    }
    return s + ")";
}

inline PBasisExpr finalize(PBasisExpr e) {
    for (auto it = e.coeffs.begin(); it != e.coeffs.end();)
        it = (it->second == 0) ? e.coeffs.erase(it) : std::next(it);
    e.validate();
    return e;
}

}  // namespace detail

// throws if the expansion of expr is not pluri-harmonic for (d1, d2)
inline void require_harmonic(const OperatorParams& params, const PBasisExpr& expr,
                             const std::string& who) {
    Poly defect = laplace::harmonicity_defect(params, pencil::expand_pbasis(expr));
    if (!defect.is_zero())
        throw VerificationError(who + ": harmonicity post-check failed for n=" +
                                std::to_string(params.n) + " v=" + std::to_string(params.v) +
                                " d1=" + std::to_string(params.d1) +
                                " d2=" + std::to_string(params.d2));
}

// Solve the coefficient recursion anchored at C((0,...,0,v)) = 1, visiting
// multi-indices in ascending lexicographic order.  With i the least index
// carrying weight:
//
//   (d1+1-n+i+2(a_i-1)) a_i C(a) =
//       -(d2-i)(a_{i+1}+1) C(a - e_i + e_{i+1})
//       + 2 sum_{i<l<=l', l+l'-i   <= n} w(at) C(at)
//       - 2 sum_{i<l<=l', l+l'-i-1 <= n} w(ah) C(ah)
//
// where at = a - e_i + e_l + e_{l'} - e_{l+l'-i}, ah likewise with the last
// index lowered by one, w(x) = 2 x_l x_{l'} for l < l' and x_l (x_l - 1)
// for l = l', and terms with a negative component are dropped.  The
// equation is what expanding sum_k (L_kk + L'_kk) prod P^a through the
// product rule and the pairing recursions yields for the coefficient of
// (sum_k (P_k;k)_i) prod P^{a - e_i}.  Every referenced index is
// lexicographically smaller, so one ascending sweep determines all
// coefficients.  The result is checked for pluri-harmonicity before it is
// returned.
inline PBasisExpr solve_recursion(const OperatorParams& params, bool post_check = true) {
    params.validate();
    if (params.v % 2 != 0)
        throw TrivialSpaceError("trivial space: v must be even, got " +
                                std::to_string(params.v));
    const int n = params.n, v = params.v / 2;

    std::map<MultiIndex, Rational> c;  // includes zeros while solving
    for (const MultiIndex& a : index_set(n, v)) {
        if (c.empty()) {  // anchor (0,...,0,v)
            c[a] = 1;
            continue;
        }
        int i = 0;
        while (a[i] == 0) ++i;
        Rational lead = Rational((long)(params.d1 + 1 - n + i + 2 * (a[i] - 1)) * a[i]);
        Rational rhs = 0;

        MultiIndex b = a;
        b[i] -= 1;
        b[i + 1] += 1;
        rhs -= Rational((params.d2 - i) * b[i + 1]) * c.at(b);

        for (int l = i + 1; l <= n; ++l)
            for (int lp = l; lp <= n; ++lp) {
                long w_scale = (l == lp) ? 1 : 2;
                if (int k = l + lp - i; k <= n) {
                    MultiIndex at = a;
                    at[i] -= 1, at[l] += 1, at[lp] += 1, at[k] -= 1;
                    if (at[k] >= 0)
                        rhs += Rational(2 * w_scale * at[l] * (at[lp] - (l == lp ? 1 : 0))) * c.at(at);
                }
                if (int k = l + lp - i - 1; k <= n) {
                    MultiIndex ah = a;
                    ah[i] -= 1, ah[l] += 1, ah[lp] += 1, ah[k] -= 1;
                    if (ah[k] >= 0)
                        rhs -= Rational(2 * w_scale * ah[l] * (ah[lp] - (l == lp ? 1 : 0))) * c.at(ah);
                }
            }

        if (lead == 0)
            throw SingularRecursionError(
                "recursion singular at index " + detail::index_str(a) +
                (rhs == 0 ? " (underdetermined)" : " (inconsistent)") +
                "; the construction requires d1 >= n");
        c[a] = rhs / lead;
    }

    PBasisExpr expr{n, v, params.d1, params.d2, "C_last=1", std::move(c)};
    expr = detail::finalize(std::move(expr));
    if (post_check) require_harmonic(params, expr, "solve_recursion");
    return expr;
}

// weight-2 closed form: C(e_alpha) = (-1)^alpha alpha! beta!
//   binom(d2-alpha, beta) binom(d1-beta, alpha), beta = n - alpha
inline PBasisExpr closed_v2(int n, int d1, int d2) {
    if (n < 1) throw std::invalid_argument("genus must be >= 1");
    PBasisExpr e{n, 1, d1, d2, "closed_v2", {}};
    for (int alpha = 0; alpha <= n; ++alpha) {
        int beta = n - alpha;
        Rational c = Rational(factorial(alpha) * factorial(beta)) *
                     binomial_rat(d2 - alpha, beta) * binomial_rat(d1 - beta, alpha);
        if (alpha % 2 != 0) c = -c;
        MultiIndex a(n + 1, 0);
        a[alpha] = 1;
        if (c != 0) e.coeffs[a] = c;
    }
    e.validate();
    return e;
}

// the quartic kernel polynomial of the weight-4 closed form; depends on e^2
inline Rational p_quartic(int e, const Rational& x, const Rational& y) {
    Rational e2 = Rational(e) * e;
    return x * x * y * y + (e2 - 1) * x * y * (x + y + (e2 - 6) / 6) +
           e2 * (e2 - 4) / 12 * (x * x + y * y - Rational(1, 4));
}

struct ZagierTable {
    int n = 0, d1 = 0, d2 = 0;
    std::vector<std::vector<Rational>> c;  // (n+1) x (n+1)
};

// weight-4 closed form, table form:
//   C_{r,s} = (-1)^{r-s} (n-1-d1)_r (n-1-d1)_s (n-1-d2)_{n-r} (n-1-d2)_{n-s}
//             p_{r-s}(kappa1((r+s)/2), kappa2((r+s)/2))
// with kappa1(t) = d1+2-(n-t), kappa2(t) = d2+2-t, falling factorials
inline ZagierTable zagier_table(int n, int d1, int d2) {
    if (n < 1) throw std::invalid_argument("genus must be >= 1");
    ZagierTable t{n, d1, d2, std::vector<std::vector<Rational>>(n + 1)};
    for (int r = 0; r <= n; ++r) {
        t.c[r].resize(n + 1);
        for (int s = 0; s <= n; ++s) {
            Rational half(r + s, 2);
            Rational kappa1 = Rational(d1 + 2 - n) + half;
            Rational kappa2 = Rational(d2 + 2) - half;
            Rational val = falling(n - 1 - d1, r) * falling(n - 1 - d1, s) *
                           falling(n - 1 - d2, n - r) * falling(n - 1 - d2, n - s) *
                           p_quartic(r - s, kappa1, kappa2);
            if ((r - s) % 2 != 0) val = -val;
            t.c[r][s] = val;
        }
    }
    return t;
}

// the four-term contiguity relation satisfied by every table, checked on
// the fully in-range window r in [1, n-1], s in [0, n-1]
inline bool zagier_recurrence_holds(const ZagierTable& t) {
    auto kappa1 = [&](int x) { return Rational(t.d1 + 2 - t.n + x); };
    auto kappa2 = [&](int x) { return Rational(t.d2 + 2 - x); };
    for (int r = 1; r <= t.n - 1; ++r)
        for (int s = 0; s <= t.n - 1; ++s) {
            Rational lhs = kappa1(r + 3) * t.c[r][s] + kappa2(r + 2) * t.c[r + 1][s];
            Rational rhs = kappa1(r - 2) * t.c[r - 1][s + 1] + kappa2(r - 3) * t.c[r][s + 1];
            if (lhs != rhs) return false;
        }
    return true;
}

// fold the symmetric double sum sum_{r,s} C_{r,s} P_r P_s onto multi-indices
inline PBasisExpr closed_v4(int n, int d1, int d2) {
    ZagierTable t = zagier_table(n, d1, d2);
    PBasisExpr e{n, 2, d1, d2, "closed_v4", {}};
    for (int r = 0; r <= n; ++r)
        for (int s = 0; s <= n; ++s) {
            MultiIndex a(n + 1, 0);
            a[r] += 1;
            a[s] += 1;
            e.coeffs[a] += t.c[r][s];
        }
    return detail::finalize(std::move(e));
}

// genus-1 closed form of half-weight t (polynomial weight 2t); needs even
// d1, d2:  C((r,s)) = (-1)^r binom(t + d2/2 - 1, r) binom(t + d1/2 - 1, s)
inline PBasisExpr cohen_n1(int t, int d1, int d2) {
    if (t < 0) throw std::invalid_argument("half-weight must be >= 0");
    if (d1 % 2 != 0 || d2 % 2 != 0)
        throw std::invalid_argument("the genus-1 closed form requires even d1, d2");
    PBasisExpr e{1, t, d1, d2, "cohen", {}};
    for (int r = 0; r <= t; ++r) {
        int s = t - r;
        Rational c = binomial_rat(t + d2 / 2 - 1, r) * binomial_rat(t + d1 / 2 - 1, s);
        if (r % 2 != 0) c = -c;
        if (c != 0) e.coeffs[{r, s}] = c;
    }
    e.validate();
    return e;
}

struct CETable {
    int v = 0, d1 = 0, d2 = 0;
    std::map<std::array<int, 3>, Rational> c;  // (r,s,p), r+s+p = v
};

// genus-2 closed form, raw coefficients of (P0*)^r (P2*)^s (P1*)^p with
// P1* = P0 + P1 + P2:
//   C_{r,s,p} = (d1/2 - 3/2 + v)_{v-r} (d2/2 - 3/2 + v)_{v-s}
//               (-(d1+d2)/2 + 3/2 - v)_{v-p} / (r! s! p!)
inline CETable ce_table(int v, int d1, int d2) {
    if (v < 0) throw std::invalid_argument("half-weight must be >= 0");
    CETable t{v, d1, d2, {}};
    Rational A = Rational(d1, 2) - Rational(3, 2) + v;
    Rational B = Rational(d2, 2) - Rational(3, 2) + v;
    Rational E = -(Rational(d1 + d2, 2) - Rational(3, 2) + v);
    for (int r = 0; r <= v; ++r)
        for (int s = 0; r + s <= v; ++s) {
            int p = v - r - s;
            t.c[{r, s, p}] = falling(A, v - r) * falling(B, v - s) * falling(E, v - p) /
                             Rational(factorial(r) * factorial(s) * factorial(p));
        }
    return t;
}

// the two 2-term recursions that determine the raw table, with the second
// constant (d1+d2-3)/2 + 2v-1-p (see ledger: the factor depends on v)
inline bool ce_recursions_hold(const CETable& t) {
    auto C = [&](int r, int s, int p) { return t.c.at({r, s, p}); };
    Rational g = Rational(t.d1 + t.d2 - 3, 2);
    for (int r = 0; r <= t.v - 1; ++r)
        for (int s = 0; r + s <= t.v - 1; ++s) {
            int p = t.v - 1 - r - s;
            Rational mix = Rational(p + 1) * (g + 2 * t.v - 1 - p) * C(r, s, p + 1);
            Rational lhs1 =
                Rational(r + 1) * (Rational(t.d1 - 3, 2) + r + 1) * C(r + 1, s, p) + mix;
            Rational lhs2 =
                Rational(s + 1) * (Rational(t.d2 - 3, 2) + s + 1) * C(r, s + 1, p) + mix;
            if (lhs1 != 0 || lhs2 != 0) return false;
        }
    return true;
}

inline PBasisExpr choie_eholzer_n2(int v, int d1, int d2) {
    CETable t = ce_table(v, d1, d2);
    PBasisExpr e{2, v, d1, d2, "choie_eholzer", {}};
    for (auto& [rsp, c] : t.c) {
        auto [r, s, p] = rsp;
        // expand (P0 + P1 + P2)^p multinomially
        for (int x = 0; x <= p; ++x)
            for (int y = 0; x + y <= p; ++y) {
                int z = p - x - y;
                Rational mult(factorial(p), factorial(x) * factorial(y) * factorial(z));
                e.coeffs[{r + x, y, s + z}] += c * mult;
            }
    }
    return detail::finalize(std::move(e));
}

// scale relating two expressions with equal support: x = c * y.  Both zero
// gives 1; mismatched support or exactly one zero gives nothing.
inline std::optional<Rational> proportional_equal(const PBasisExpr& x, const PBasisExpr& y) {
    if (x.n != y.n || x.v != y.v)
        throw std::invalid_argument("proportional_equal: index sets differ");
    if (x.coeffs.empty() && y.coeffs.empty()) return Rational(1);
    if (x.coeffs.empty() || y.coeffs.empty()) return std::nullopt;
    if (x.coeffs.size() != y.coeffs.size()) return std::nullopt;
    Rational scale = x.coeffs.rbegin()->second / y.coeffs.rbegin()->second;
    auto ix = x.coeffs.begin();
    for (auto& [a, cy] : y.coeffs) {
        if (ix->first != a || ix->second != scale * cy) return std::nullopt;
        ++ix;
    }
    return scale;
}

struct KernelResult {
    int dimension = 0;
    std::vector<MultiIndex> basis_indices;              // the full index set, ascending
    std::vector<std::vector<Rational>> vectors;         // kernel basis over basis_indices
};

// dimension (and basis) of { C : sum_a C(a) prod P^a is pluri-harmonic }
inline KernelResult kernel_dimension(const OperatorParams& params, long cost_cap = 5000) {
    params.validate();
    if (params.v % 2 != 0)
        throw TrivialSpaceError("trivial space: v must be even, got " +
                                std::to_string(params.v));
    const int n = params.n, v = params.v / 2;

    Rational count = binomial_rat(v + n, n);
    if (count > cost_cap)
        throw std::invalid_argument("kernel basis size " + exactpoly::rat_str(count) +
                                    " exceeds the cost cap; use smaller parameters");

    std::vector<MultiIndex> idx = index_set(n, v);
    std::vector<std::vector<Poly>> powers(n + 1, {Poly::one()});
    pencil::PencilFamily fam = pencil::p_alpha_family(n);
    auto power = [&](int alpha, int e) -> const Poly& {
        auto& pw = powers[alpha];
        while ((int)pw.size() <= e) pw.push_back(pw.back() * fam.coeffs[alpha]);
        return pw[e];
    };

    // defect of each basis monomial, as a column of the constraint matrix
    std::map<exactpoly::Monomial, std::size_t, exactpoly::GrlexGreater> row_of;
    std::vector<std::vector<Rational>> cols(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        Poly prod = Poly::one();
        for (int alpha = 0; alpha <= n; ++alpha)
            if (idx[k][alpha] > 0) prod = prod * power(alpha, idx[k][alpha]);
        Poly defect = laplace::harmonicity_defect(params, prod);
        for (auto& [m, c] : defect.terms()) {
            auto [it, fresh] = row_of.try_emplace(m, row_of.size());
            cols[k].resize(std::max(cols[k].size(), it->second + 1));
            cols[k][it->second] = c;
        }
    }
    linalg::Matrix m(row_of.size(), std::vector<Rational>(idx.size(), 0));
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t r = 0; r < cols[k].size(); ++r) m[r][k] = cols[k][r];

    KernelResult out;
    out.basis_indices = std::move(idx);
    out.vectors = linalg::null_space(std::move(m), out.basis_indices.size());
    out.dimension = (int)out.vectors.size();
    return out;
}

}  // namespace rcs::rcsolve
