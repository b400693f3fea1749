#pragma once

// The determinant pencil det(R + lambda R') and its row/column-deleted
// minors, expanded exactly as polynomials in lambda.  The coefficient of
// lambda^alpha of the full pencil is the basis polynomial P_alpha; the
// coefficient family of a deleted minor keeps the original index labels.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rcsiegel/exactpoly.hpp"
#include "rcsiegel/pbasis.hpp"

namespace rcs::pencil {

using exactpoly::Poly;
using exactpoly::Rational;

struct PencilFamily {
    int n = 0;                 // genus of the ambient matrices
    std::vector<Poly> coeffs;  // lambda^0 .. lambda^degree

    int degree() const { return (int)coeffs.size() - 1; }
};

namespace detail {

// determinant of the submatrix with the given (1-based) row/column labels,
// entries R[r,c] + lambda * Rp[r,c]; returned as lambda-coefficients
inline std::vector<Poly> pencil_det(const std::vector<int>& rows, const std::vector<int>& cols) {
    const std::size_t m = rows.size();
    if (m == 0) return {Poly::one()};

    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    std::vector<Poly> out(m + 1, Poly::zero());
    std::vector<int> sub_cols(m - 1);
    for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t k = 0, t = 0; k < m; ++k)
            if (k != b) sub_cols[t++] = cols[k];
        std::vector<Poly> minor = pencil_det(sub_rows, sub_cols);
        Poly re = Poly::variable(exactpoly::var_r(rows[0], cols[b]));
        Poly rpe = Poly::variable(exactpoly::var_rp(rows[0], cols[b]));
        Rational sign = (b % 2 == 0) ? 1 : -1;
        for (std::size_t k = 0; k < minor.size(); ++k) {
            out[k] += sign * (minor[k] * re);
            out[k + 1] += sign * (minor[k] * rpe);
        }
    }
    return out;
}

}  // namespace detail

// P_0 .. P_n for genus n
inline PencilFamily p_alpha_family(int n) {
    if (n < 1) throw std::invalid_argument("genus must be >= 1");
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i + 1;
    return PencilFamily{n, detail::pencil_det(all, all)};
}

// pencil of the minor with rows/cols deleted (1-based, strictly increasing,
// equal count); deleting everything leaves the 0 x 0 determinant [1]
inline PencilFamily minor_family(int n, const std::vector<int>& drop_rows,
                                 const std::vector<int>& drop_cols) {
    if (n < 1) throw std::invalid_argument("genus must be >= 1");
    if (drop_rows.size() != drop_cols.size())
        throw std::invalid_argument("row and column deletion lists must have equal length");
    auto check = [n](const std::vector<int>& d) {
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (d[k] < 1 || d[k] > n) throw std::invalid_argument("deleted index out of range");
            if (k > 0 && d[k] <= d[k - 1])
                throw std::invalid_argument("deletion lists must be strictly increasing");
        }
    };
    check(drop_rows);
    check(drop_cols);
    std::vector<int> rows, cols;
    for (int i = 1; i <= n; ++i) {
        if (!std::binary_search(drop_rows.begin(), drop_rows.end(), i)) rows.push_back(i);
        if (!std::binary_search(drop_cols.begin(), drop_cols.end(), i)) cols.push_back(i);
    }
    return PencilFamily{n, detail::pencil_det(rows, cols)};
}

// expand sum_a C(a) prod_alpha P_alpha^{a_alpha} into a Poly in R, R'
inline Poly expand_pbasis(const rcsolve::PBasisExpr& expr) {
    expr.validate();
    PencilFamily fam = p_alpha_family(expr.n);
    // cached powers, powers[alpha][e] = P_alpha^e
    std::vector<std::vector<Poly>> powers(expr.n + 1, {Poly::one()});
    auto power = [&](int alpha, int e) -> const Poly& {
        auto& pw = powers[alpha];
        while ((int)pw.size() <= e) pw.push_back(pw.back() * fam.coeffs[alpha]);
        return pw[e];
    };
    Poly out;
    for (auto& [a, c] : expr.coeffs) {
        Poly term = Poly::constant(c);
        for (int alpha = 0; alpha <= expr.n; ++alpha)
            if (a[alpha] > 0) term = term * power(alpha, a[alpha]);
        out += term;
    }
    return out;
}

}  // namespace rcs::pencil
