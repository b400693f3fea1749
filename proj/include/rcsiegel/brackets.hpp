#pragma once

// Truncated q-expansions, classical Eisenstein series and delta, the genus-1
// Rankin-Cohen bracket driven by the cohen_n1 coefficient table, and the
// formal Fourier-coefficient cusp test on singular positive semi-definite
// half-integral pairs.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <future>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "exactpoly.hpp"
#include "seeds.hpp"
#include "pencil.hpp"
#include "rcsolve.hpp"

namespace rcs::brackets {

using exactpoly::Int;
using exactpoly::Rational;

// ---------------------------------------------------------------------------
// q-expansions

// Coefficients c[0..truncation] of a weight-tagged series sum c_m q^m.
struct QExpansion {
    int weight = 0;
    int truncation = 0;
    std::vector<Rational> coefficients;

    void validate() const {
        if (truncation < 0)
            throw std::invalid_argument("QExpansion: negative truncation");
        if (coefficients.size() != static_cast<size_t>(truncation) + 1)
            throw std::invalid_argument(
                "QExpansion: coefficient count must be truncation + 1");
    }

    bool operator==(const QExpansion&) const = default;
};

inline QExpansion q_zero(int weight, int N) {
    return {weight, N, std::vector<Rational>(static_cast<size_t>(N) + 1, Rational(0))};
}

inline QExpansion q_truncate(const QExpansion& f, int N) {
    if (N > f.truncation)
        throw std::invalid_argument("q_truncate: cannot extend a series");
    QExpansion g{f.weight, N, {f.coefficients.begin(), f.coefficients.begin() + N + 1}};
    return g;
}

inline QExpansion q_add(const QExpansion& f, const QExpansion& g) {
    if (f.weight != g.weight)
        throw std::invalid_argument("q_add: weight mismatch");
    int N = std::min(f.truncation, g.truncation);
    QExpansion h = q_zero(f.weight, N);
    for (int m = 0; m <= N; ++m)
        h.coefficients[m] = f.coefficients[m] + g.coefficients[m];
    return h;
}

inline QExpansion q_scale(const Rational& c, const QExpansion& f) {
    QExpansion g = f;
    for (auto& x : g.coefficients) x *= c;
    return g;
}

inline QExpansion q_mul(const QExpansion& f, const QExpansion& g) {
    int N = std::min(f.truncation, g.truncation);
    QExpansion h = q_zero(f.weight + g.weight, N);
    for (int a = 0; a <= N; ++a) {
        if (f.coefficients[a] == 0) continue;
        for (int b = 0; a + b <= N; ++b)
            h.coefficients[a + b] += f.coefficients[a] * g.coefficients[b];
    }
    return h;
}

// theta = q d/dq; the weight tag moves up by 2.
inline QExpansion q_theta(const QExpansion& f) {
    QExpansion g = f;
    g.weight += 2;
    for (int m = 0; m <= g.truncation; ++m)
        g.coefficients[m] *= Rational(m);
    return g;
}

inline bool q_is_zero(const QExpansion& f) {
    return std::all_of(f.coefficients.begin(), f.coefficients.end(),
                       [](const Rational& c) { return c == 0; });
}

// First f = c*g with c != 0, coefficientwise; requires equal truncations.
inline bool q_proportional(const QExpansion& f, const QExpansion& g, Rational* ratio = nullptr) {
    if (f.truncation != g.truncation) return false;
    Rational c;
    bool have = false;
    for (int m = 0; m <= f.truncation; ++m) {
        const Rational& a = f.coefficients[m];
        const Rational& b = g.coefficients[m];
        if (b == 0) {
            if (a != 0) return false;
            continue;
        }
        Rational r = a / b;
        if (!have) { c = r; have = true; }
        else if (r != c) return false;
    }
    if (!have || c == 0) return false;
    if (ratio) *ratio = c;
    return true;
}

// ---------------------------------------------------------------------------
// Classical series

// Exact Bernoulli number B_k (B_1 = -1/2 convention).
inline Rational bernoulli(int k) {
    if (k < 0) throw std::invalid_argument("bernoulli: negative index");
    std::vector<Rational> b(static_cast<size_t>(k) + 1);
    for (int m = 0; m <= k; ++m) {
        Rational s = 0;
        for (int j = 0; j < m; ++j)
            s += exactpoly::binomial_rat(Rational(m + 1), m + 1 - j) * b[j];
        b[m] = (m == 0) ? Rational(1) : -s / Rational(m + 1);
    }
    return b[k];
}

inline Int sigma_power(int e, int m) {
    Int s = 0;
    for (int d = 1; d <= m; ++d)
        if (m % d == 0) {
            Int p = 1;
            for (int j = 0; j < e; ++j) p *= d;
            s += p;
        }
    return s;
}

// Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(m) q^m, to q^N.
inline QExpansion eisenstein(int k, int N) {
    if (k < 4 || k % 2 != 0)
        throw std::invalid_argument("eisenstein: weight must be even and >= 4");
    QExpansion f = q_zero(k, N);
    f.coefficients[0] = 1;
    Rational factor = Rational(-2 * k) / bernoulli(k);
    for (int m = 1; m <= N; ++m)
        f.coefficients[m] = factor * Rational(sigma_power(k - 1, m));
    return f;
}

// delta = q prod_{m>=1} (1-q^m)^24, weight 12, to q^N.
inline QExpansion delta(int N) {
    // Euler's pentagonal expansion of prod (1-q^m), then a 24th power by
    // squaring, then the shift by q.
    int M = std::max(N - 1, 0);
    QExpansion eta = q_zero(0, M);
    for (int j = 0;; ++j) {
        long long p1 = static_cast<long long>(j) * (3 * j - 1) / 2;
        long long p2 = static_cast<long long>(j) * (3 * j + 1) / 2;
        if (p1 > M && p2 > M) break;
        Rational sgn((j % 2 == 0) ? 1 : -1);
        if (p1 <= M) eta.coefficients[static_cast<size_t>(p1)] += sgn;
        if (p2 <= M && j > 0) eta.coefficients[static_cast<size_t>(p2)] += sgn;
    }
    QExpansion pw = q_zero(0, M);
    pw.coefficients[0] = 1;
    QExpansion base = eta;
    for (int e = 24; e > 0; e >>= 1) {
        if (e & 1) pw = q_mul(pw, base);
        if (e > 1) base = q_mul(base, base);
    }
    QExpansion d = q_zero(12, N);
    for (int m = 1; m <= N; ++m)
        d.coefficients[m] = pw.coefficients[m - 1];
    return d;
}

// ---------------------------------------------------------------------------
// The genus-1 bracket

// sum_{r+s=t} C((r,s)) theta^r f theta^s g with C from cohen_n1(t, 2k, 2l);
// a P_0 factor differentiates f, a P_1 factor differentiates g.  Result
// weight k + l + 2t.
inline QExpansion rc_bracket_genus1(const QExpansion& f, const QExpansion& g, int t) {
    if (f.weight <= 0 || g.weight <= 0 || f.weight % 2 != 0 || g.weight % 2 != 0)
        throw std::invalid_argument(
            "rc_bracket_genus1: weights must be positive even integers");
    if (t < 0) throw std::invalid_argument("rc_bracket_genus1: negative order");

    rcsolve::PBasisExpr table = rcsolve::cohen_n1(t, 2 * f.weight, 2 * g.weight);

    int N = std::min(f.truncation, g.truncation);
    std::vector<QExpansion> tf{q_truncate(f, N)}, tg{q_truncate(g, N)};
    for (int r = 1; r <= t; ++r) {
        tf.push_back(q_theta(tf.back()));
        tg.push_back(q_theta(tg.back()));
    }

    QExpansion out = q_zero(f.weight + g.weight + 2 * t, N);
    for (const auto& [a, c] : table.coeffs) {
        int r = a[0], s = a[1];
        out = q_add(out, q_scale(c, q_mul(tf[r], tg[s])));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Half-integral matrices and the singular-pair cusp test

// Symmetric T with 2T integral and even diagonal, stored doubled.
struct HalfIntegralMatrix {
    int n = 0;
    std::vector<std::vector<long long>> doubled;  // 2T

    void validate() const {
        if (n <= 0 || doubled.size() != static_cast<size_t>(n))
            throw std::invalid_argument("HalfIntegralMatrix: bad shape");
        for (int i = 0; i < n; ++i) {
            if (doubled[i].size() != static_cast<size_t>(n))
                throw std::invalid_argument("HalfIntegralMatrix: bad shape");
            if (doubled[i][i] % 2 != 0)
                throw std::invalid_argument("HalfIntegralMatrix: diagonal of 2T must be even");
            for (int j = 0; j < n; ++j)
                if (doubled[i][j] != doubled[j][i])
                    throw std::invalid_argument("HalfIntegralMatrix: not symmetric");
        }
    }

    Rational entry(int i, int j) const { return Rational(doubled[i][j]) / 2; }
};

inline HalfIntegralMatrix half_identity(int n) {
    HalfIntegralMatrix T{n, std::vector<std::vector<long long>>(
                                n, std::vector<long long>(n, 0))};
    for (int i = 0; i < n; ++i) T.doubled[i][i] = 2;
    return T;
}

// diag(1, ..., 1, 2): a non-singular PSD pair partner that is not fixed by
// swapping the slots, so the sanity evaluation cannot vanish by symmetry.
inline HalfIntegralMatrix half_diag_last2(int n) {
    HalfIntegralMatrix T = half_identity(n);
    T.doubled[n - 1][n - 1] = 4;
    return T;
}

namespace detail {

inline Int int_det(const std::vector<std::vector<Int>>& m) {
    size_t k = m.size();
    if (k == 0) return 1;
    if (k == 1) return m[0][0];
    Int det = 0;
    for (size_t r = 0; r < k; ++r) {
        std::vector<std::vector<Int>> sub;
        for (size_t i = 0; i < k; ++i) {
            if (i == r) continue;
            std::vector<Int> row;
            for (size_t j = 1; j < k; ++j) row.push_back(m[i][j]);
            sub.push_back(std::move(row));
        }
        Int c = m[r][0] * int_det(sub);
        det += (r % 2 == 0) ? c : -c;
    }
    return det;
}

}  // namespace detail

// Exact positive semi-definiteness: every principal minor of T (equivalently
// of 2T) is nonnegative.
inline bool is_psd(const HalfIntegralMatrix& T) {
    T.validate();
    for (unsigned mask = 1; mask < (1u << T.n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < T.n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        std::vector<std::vector<Int>> sub(idx.size(), std::vector<Int>(idx.size()));
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j)
                sub[i][j] = Int(T.doubled[idx[i]][idx[j]]);
        if (detail::int_det(sub) < 0) return false;
    }
    return true;
}

inline Rational evaluate_poly_at(const exactpoly::Poly& q, int n,
                                 const HalfIntegralMatrix& T1,
                                 const HalfIntegralMatrix& T2) {
    std::map<exactpoly::VarId, Rational> bind;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            bind[exactpoly::var_r(i, j)] = T1.entry(i - 1, j - 1);
            bind[exactpoly::var_rp(i, j)] = T2.entry(i - 1, j - 1);
        }
    return q.evaluate(bind);
}

// Evaluate an expanded basis expression at matrix arguments.
inline Rational evaluate_at(const rcsolve::PBasisExpr& expr,
                            const HalfIntegralMatrix& T1,
                            const HalfIntegralMatrix& T2) {
    if (T1.n != expr.n || T2.n != expr.n)
        throw std::invalid_argument("evaluate_at: genus mismatch");
    exactpoly::Poly q = pencil::expand_pbasis(expr);
    return evaluate_poly_at(q, expr.n, T1, T2);
}

namespace detail {

using rcs::detail::splitmix64;

// Random PSD half-integral T with zero last row and column: an (n-1)-block
// Gram matrix B^T B with one extra 0/1 row fixing every diagonal entry to be
// even, divided by two.
inline HalfIntegralMatrix random_singular_psd(int n, std::mt19937_64& rng) {
    int k = n - 1;
    std::uniform_int_distribution<int> dist(-3, 3);
    std::vector<std::vector<long long>> B(k + 1, std::vector<long long>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) B[i][j] = dist(rng);
    for (int j = 0; j < k; ++j) {
        long long norm = 0;
        for (int i = 0; i < k; ++i) norm += B[i][j] * B[i][j];
        B[k][j] = norm % 2 == 0 ? 0 : 1;
    }
    HalfIntegralMatrix T{n, std::vector<std::vector<long long>>(
                                n, std::vector<long long>(n, 0))};
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            long long g = 0;
            for (int i = 0; i <= k; ++i) g += B[i][a] * B[i][b];
            T.doubled[a][b] = g;
        }
    return T;
}

}  // namespace detail

struct CuspTrial {
    int trial = 0;
    bool psd_ok = false;
    bool vanishes = false;
    bool pass = false;
};

struct CuspReport {
    rcsolve::OperatorParams params;
    int trials = 0;
    uint64_t seed = 0;
    std::vector<CuspTrial> results;
    bool all_pass = false;
    Rational sanity_value;  // at (identity, diag(1,...,1,2)); nonzero in practice
};

// For seeded random singular PSD pairs (shared zero last row/column, so
// det(T1 + T2) = 0), the solved basis expression must evaluate to exactly
// zero.  Trials run in parallel with per-trial seeds derived from the master
// seed.
inline CuspReport cusp_vanishing_check(const rcsolve::OperatorParams& params,
                                       int trials, uint64_t seed) {
    params.validate();
    if (params.v <= 0)
        throw std::domain_error("cusp_vanishing_check: weight must be positive");
    rcsolve::PBasisExpr expr = rcsolve::solve_recursion(params);
    exactpoly::Poly q = pencil::expand_pbasis(expr);

    CuspReport report;
    report.params = params;
    report.trials = trials;
    report.seed = seed;
    report.results.resize(static_cast<size_t>(std::max(trials, 0)));

    auto run_trial = [&](int t) {
        std::mt19937_64 rng(detail::splitmix64(seed + static_cast<uint64_t>(t)));
        HalfIntegralMatrix T1 = detail::random_singular_psd(params.n, rng);
        HalfIntegralMatrix T2 = detail::random_singular_psd(params.n, rng);
        CuspTrial r;
        r.trial = t;
        r.psd_ok = is_psd(T1) && is_psd(T2);
        r.vanishes = evaluate_poly_at(q, params.n, T1, T2) == 0;
        r.pass = r.psd_ok && r.vanishes;
        return r;
    };

    unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&] {
            for (int t; (t = next.fetch_add(1)) < trials;)
                report.results[static_cast<size_t>(t)] = run_trial(t);
        }));
    for (auto& f : futures) f.get();

    report.all_pass = std::all_of(report.results.begin(), report.results.end(),
                                  [](const CuspTrial& r) { return r.pass; });
    report.sanity_value = evaluate_poly_at(q, params.n, half_identity(params.n),
                                           half_diag_last2(params.n));
    return report;
}

}  // namespace rcs::brackets
