#pragma once

// Multi-indexed expressions in the determinant pencil basis.
//
// A PBasisExpr stores sum_a C(a) * prod_alpha P_alpha^{a_alpha} where
// P_0..P_n are the lambda-coefficients of det(R + lambda R').  Multi-indices
// a have length n+1 and fixed sum v (so the polynomial weight is 2v).

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcsiegel/errors.hpp"
#include "rcsiegel/exactpoly.hpp"

namespace rcs::rcsolve {

using exactpoly::Rational;

// lexicographic order from index 0; (0,...,0,v) is the minimum for fixed sum
using MultiIndex = std::vector<int>;

struct OperatorParams {
    int n = 1;   // genus
    int v = 0;   // polynomial weight, must be even for a nonzero space
    int d1 = 1;
    int d2 = 1;

    void validate() const {
        if (n < 1) throw std::invalid_argument("genus must be >= 1");
        if (v < 0) throw std::invalid_argument("weight must be >= 0");
        if (d1 < 1 || d2 < 1) throw std::invalid_argument("d1, d2 must be >= 1");
    }
    friend bool operator==(const OperatorParams&, const OperatorParams&) = default;
};

struct PBasisExpr {
    int n = 1;
    int v = 0;  // sum of every stored multi-index (half the polynomial weight)
    int d1 = 0;
    int d2 = 0;
    std::string normalization;
    std::map<MultiIndex, Rational> coeffs;  // ascending lex, zeros omitted

    void validate() const {
        for (auto& [a, c] : coeffs) {
            if ((int)a.size() != n + 1)
                throw std::invalid_argument("multi-index length must be n+1");
            int sum = 0;
            for (int x : a) {
                if (x < 0) throw std::invalid_argument("multi-index entries must be >= 0");
                sum += x;
            }
            if (sum != v) throw std::invalid_argument("multi-index sum must equal v");
            if (c == 0) throw std::invalid_argument("zero coefficients must be omitted");
        }
    }
};

// all multi-indices of length n+1 with sum v, ascending lexicographic,
// so the anchor (0,...,0,v) comes first
inline std::vector<MultiIndex> index_set(int n, int v) {
    if (n < 1 || v < 0) throw std::invalid_argument("index_set needs n >= 1, v >= 0");
    std::vector<MultiIndex> out;
    MultiIndex cur(n + 1, 0);
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == n) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int x = 0; x <= rem; ++x) {
            cur[pos] = x;
            self(self, pos + 1, rem - x);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, v);
    return out;
}

}  // namespace rcs::rcsolve
