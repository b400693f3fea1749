#pragma once

// Exact sparse multivariate polynomials over the rationals.
//
// Variables are the entries of two symmetric n x n matrices R, R' plus an
// auxiliary vector u.  Symmetry is built into the variable type: R[i,j] and
// R[j,i] are the same variable, stored with row <= col, and a single partial
// derivative d/dR[i,j] differentiates that one variable once.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rcs::exactpoly {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

// x(x-1)...(x-k+1), the falling factorial, over the rationals
inline Rational falling(const Rational& x, unsigned k) {
    Rational p = 1;
    for (unsigned i = 0; i < k; ++i) p *= x - i;
    return p;
}

// binomial(q, k) = q(q-1)...(q-k+1)/k! for arbitrary rational q
inline Rational binomial_rat(const Rational& q, unsigned k) {
    return falling(q, k) / Rational(factorial(k));
}

inline Rational rat_pow(const Rational& base, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline std::string rat_str(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rat(std::string_view s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(Int(std::string(s)));
        Int num(std::string(s.substr(0, slash)));
        Int den(std::string(s.substr(slash + 1)));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("bad rational '" + std::string(s) + "': " + e.what());
    }
}

enum class Slot : std::uint8_t { R = 0, Rp = 1, U = 2 };

struct VarId {
    Slot slot{Slot::R};
    std::uint8_t row{1};
    std::uint8_t col{1};  // row <= col for matrix slots; col == 0 for U

    friend constexpr auto operator<=>(const VarId&, const VarId&) = default;
};

inline VarId var_r(int i, int j) {
    if (i < 1 || j < 1) throw std::invalid_argument("matrix index must be >= 1");
    if (i > j) std::swap(i, j);
    return VarId{Slot::R, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
}

inline VarId var_rp(int i, int j) {
    VarId v = var_r(i, j);
    v.slot = Slot::Rp;
    return v;
}

inline VarId var_u(int i) {
    if (i < 1) throw std::invalid_argument("vector index must be >= 1");
    return VarId{Slot::U, static_cast<std::uint8_t>(i), 0};
}

inline std::string var_name(VarId v) {
    switch (v.slot) {
        case Slot::R:
            return "R[" + std::to_string(v.row) + "," + std::to_string(v.col) + "]";
        case Slot::Rp:
            return "Rp[" + std::to_string(v.row) + "," + std::to_string(v.col) + "]";
        default:
            return "u[" + std::to_string(v.row) + "]";
    }
}

// exponent map, kept sorted by VarId with all exponents positive
struct Monomial {
    std::vector<std::pair<VarId, int>> factors;

    int degree() const {
        int d = 0;
        for (auto& [v, e] : factors) d += e;
        return d;
    }
    int exponent(VarId v) const {
        for (auto& [w, e] : factors)
            if (w == v) return e;
        return 0;
    }
    bool empty() const { return factors.empty(); }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

inline Monomial mono_one() { return {}; }

inline Monomial mono_var(VarId v, int e = 1) {
    Monomial m;
    if (e > 0) m.factors.emplace_back(v, e);
    return m;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    auto i = a.factors.begin(), j = b.factors.begin();
    while (i != a.factors.end() && j != b.factors.end()) {
        if (i->first < j->first)
            r.factors.push_back(*i++);
        else if (j->first < i->first)
            r.factors.push_back(*j++);
        else {
            r.factors.emplace_back(i->first, i->second + j->second);
            ++i, ++j;
        }
    }
    r.factors.insert(r.factors.end(), i, a.factors.end());
    r.factors.insert(r.factors.end(), j, b.factors.end());
    return r;
}

// graded lexicographic: higher total degree first, ties broken by the
// exponent vector read in increasing VarId order (larger exponent on an
// earlier variable wins)
inline std::strong_ordering grlex_order(const Monomial& a, const Monomial& b) {
    if (int da = a.degree(), db = b.degree(); da != db)
        return da < db ? std::strong_ordering::less : std::strong_ordering::greater;
    auto i = a.factors.begin(), j = b.factors.begin();
    while (i != a.factors.end() && j != b.factors.end()) {
        if (i->first < j->first) return std::strong_ordering::greater;
        if (j->first < i->first) return std::strong_ordering::less;
        if (i->second != j->second)
            return i->second < j->second ? std::strong_ordering::less
                                         : std::strong_ordering::greater;
        ++i, ++j;
    }
    if (i != a.factors.end()) return std::strong_ordering::greater;
    if (j != b.factors.end()) return std::strong_ordering::less;
    return std::strong_ordering::equal;
}

inline bool grlex_less(const Monomial& a, const Monomial& b) {
    return grlex_order(a, b) == std::strong_ordering::less;
}

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

class Poly {
  public:
    using Term = std::pair<Monomial, Rational>;

    Poly() = default;

    static Poly zero() { return {}; }
    static Poly constant(const Rational& c) {
        Poly p;
        if (c != 0) p.terms_.emplace_back(mono_one(), c);
        return p;
    }
    static Poly one() { return constant(1); }
    static Poly variable(VarId v) {
        Poly p;
        p.terms_.emplace_back(mono_var(v), Rational(1));
        return p;
    }
    static Poly monomial(const Monomial& m, const Rational& c) {
        Poly p;
        if (c != 0) p.terms_.emplace_back(m, c);
        return p;
    }

    // terms in descending graded lex order, all coefficients nonzero
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }
    int degree() const { return terms_.empty() ? -1 : terms_.front().first.degree(); }

    Rational coefficient(const Monomial& m) const {
        for (auto& [mm, c] : terms_)
            if (mm == m) return c;
        return 0;
    }

    friend bool operator==(const Poly&, const Poly&) = default;

    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin(), j = b.terms_.begin();
        while (i != a.terms_.end() && j != b.terms_.end()) {
            auto ord = grlex_order(i->first, j->first);
            if (ord == std::strong_ordering::greater)
                r.terms_.push_back(*i++);
            else if (ord == std::strong_ordering::less)
                r.terms_.push_back(*j++);
            else {
                Rational c = i->second + j->second;
                if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
                ++i, ++j;
            }
        }
        r.terms_.insert(r.terms_.end(), i, a.terms_.end());
        r.terms_.insert(r.terms_.end(), j, b.terms_.end());
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Rational& s) {
        if (s == 0) return {};
        Poly r = a;
        for (auto& [m, c] : r.terms_) c *= s;
        return r;
    }
    friend Poly operator*(const Rational& s, const Poly& a) { return a * s; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        std::map<Monomial, Rational, GrlexGreater> acc;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) acc[mono_mul(ma, mb)] += ca * cb;
        Poly r;
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.terms_.emplace_back(m, c);
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rational& s) { return *this = *this * s; }

    Poly pow(unsigned e) const {
        Poly r = one();
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    // d/dv; differentiating by a symmetric entry treats R[i,j] (= R[j,i])
    // as one variable
    Poly partial(VarId v) const {
        Poly r;
        r.terms_.reserve(terms_.size());
        for (auto& [m, c] : terms_) {
            int e = m.exponent(v);
            if (e == 0) continue;
            Monomial dm;
            dm.factors.reserve(m.factors.size());
            for (auto& [w, we] : m.factors) {
                if (w == v) {
                    if (we > 1) dm.factors.emplace_back(w, we - 1);
                } else
                    dm.factors.emplace_back(w, we);
            }
            r.terms_.emplace_back(std::move(dm), c * e);
        }
        return r;
    }

    // replace bound variables by polynomials; unbound variables stay fixed
    Poly substitute(const std::map<VarId, Poly>& bind) const {
        std::map<VarId, std::vector<Poly>> powers;  // cached powers of bound vars
        Poly result;
        for (auto& [m, c] : terms_) {
            Poly term = constant(c);
            Monomial fixed;
            for (auto& [v, e] : m.factors) {
                auto it = bind.find(v);
                if (it == bind.end()) {
                    fixed.factors.emplace_back(v, e);
                    continue;
                }
                auto& pw = powers[v];
                if (pw.empty()) pw.push_back(one());
                while ((int)pw.size() <= e) pw.push_back(pw.back() * it->second);
                term = term * pw[e];
            }
            if (!fixed.empty()) term = term * monomial(fixed, 1);
            result += term;
        }
        return result;
    }

    // total evaluation; every variable present must be bound
    Rational evaluate(const std::map<VarId, Rational>& bind) const {
        Rational sum = 0;
        for (auto& [m, c] : terms_) {
            Rational t = c;
            for (auto& [v, e] : m.factors) {
                auto it = bind.find(v);
                if (it == bind.end())
                    throw std::invalid_argument("unbound variable " + var_name(v));
                t *= rat_pow(it->second, static_cast<unsigned>(e));
            }
            sum += t;
        }
        return sum;
    }

    // canonical text form: terms in descending graded lex order, coefficients
    // always as num/den, e.g. "2/1 R[1,1] Rp[2,2] + -1/2 u[1]^2"
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [m, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += rat_str(c);
            for (auto& [v, e] : m.factors) {
                s += " " + var_name(v);
                if (e > 1) s += "^" + std::to_string(e);
            }
        }
        return s;
    }

    static Poly parse(std::string_view text);

  private:
    std::vector<Term> terms_;
};

namespace detail {

inline VarId parse_var(std::string_view tok) {
    Slot slot;
    std::size_t base;
    if (tok.rfind("Rp[", 0) == 0)
        slot = Slot::Rp, base = 3;
    else if (tok.rfind("R[", 0) == 0)
        slot = Slot::R, base = 2;
    else if (tok.rfind("u[", 0) == 0)
        slot = Slot::U, base = 2;
    else
        throw std::invalid_argument("bad variable token '" + std::string(tok) + "'");
    if (tok.back() != ']') throw std::invalid_argument("bad variable token '" + std::string(tok) + "'");
    std::string inner(tok.substr(base, tok.size() - base - 1));
    if (slot == Slot::U) return var_u(std::stoi(inner));
    auto comma = inner.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("bad variable token '" + std::string(tok) + "'");
    int i = std::stoi(inner.substr(0, comma)), j = std::stoi(inner.substr(comma + 1));
    return slot == Slot::R ? var_r(i, j) : var_rp(i, j);
}

}  // namespace detail

inline Poly Poly::parse(std::string_view text) {
    if (text == "0") return zero();
    Poly result;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(" + ", pos);
        std::string_view term =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 3;

        std::vector<std::string_view> toks;
        std::size_t t = 0;
        while (t < term.size()) {
            std::size_t sp = term.find(' ', t);
            if (sp == std::string_view::npos) sp = term.size();
            if (sp > t) toks.push_back(term.substr(t, sp - t));
            t = sp + 1;
        }
        if (toks.empty()) throw std::invalid_argument("empty term in polynomial text");
        Rational coeff = parse_rat(toks[0]);
        Monomial m;
        for (std::size_t k = 1; k < toks.size(); ++k) {
            std::string_view tok = toks[k];
            int e = 1;
            if (auto caret = tok.find('^'); caret != std::string_view::npos) {
                e = std::stoi(std::string(tok.substr(caret + 1)));
                tok = tok.substr(0, caret);
            }
            if (e < 1) throw std::invalid_argument("bad exponent in polynomial text");
            m = mono_mul(m, mono_var(detail::parse_var(tok), e));
        }
        result += monomial(m, coeff);
    }
    return result;
}

}  // namespace rcs::exactpoly
