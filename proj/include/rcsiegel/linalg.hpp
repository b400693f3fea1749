#pragma once

// Exact Gaussian elimination over the rationals: reduced row echelon form
// and a deterministic null-space basis (one vector per free column, free
// coordinate set to 1, columns visited left to right).

#include <vector>

#include "rcsiegel/exactpoly.hpp"

namespace rcs::linalg {

using exactpoly::Rational;
using Matrix = std::vector<std::vector<Rational>>;

// in-place RREF; returns the pivot column of each nonzero row
inline std::vector<int> rref(Matrix& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t sel = rank;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[rank]);
        Rational inv = m[rank][c];
        for (std::size_t k = c; k < cols; ++k) m[rank][k] /= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        pivots.push_back((int)c);
        ++rank;
    }
    return pivots;
}

inline int rank(Matrix m) { return (int)rref(m).size(); }

inline std::vector<std::vector<Rational>> null_space(Matrix m, std::size_t cols) {
    if (!m.empty() && m[0].size() != cols)
        throw std::invalid_argument("column count mismatch");
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;

    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> x(cols, 0);
        x[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m[r][f];
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace rcs::linalg
