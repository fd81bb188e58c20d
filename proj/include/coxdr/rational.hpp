#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coxdr {

// mpq_class keeps values canonical (lowest terms, positive denominator) after
// every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

using RationalVector = std::vector<Rational>;

inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos)
        throw std::invalid_argument("empty rational literal");
    s = s.substr(first, last - first + 1);
    // accept a leading '+' and decimal integers only; "p/q" or "p"
    if (!s.empty() && s.front() == '+')
        s.erase(0, 1);
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
            throw std::invalid_argument("malformed rational literal: " + std::string(text));
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal: " + std::string(text));
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + std::string(text));
    r.canonicalize();
    return r;
}

/// num/den in lowest terms; mpq_class(num, den) alone does not reduce.
inline Rational make_rational(long num, long den) {
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline int sign(const Rational& r) { return sgn(r); }

inline RationalVector zeros(std::size_t n) { return RationalVector(n, Rational(0)); }

inline RationalVector unit_vector(std::size_t n, std::size_t i) {
    auto v = zeros(n);
    v.at(i) = 1;
    return v;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0)
            s += a[i] * b[i];
    return s;
}

inline RationalVector operator+(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector add: dimension mismatch");
    RationalVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

inline RationalVector operator-(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector sub: dimension mismatch");
    RationalVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline RationalVector operator*(const Rational& s, const RationalVector& a) {
    RationalVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = s * a[i];
    return r;
}

inline bool is_zero(const RationalVector& v) {
    for (const auto& x : v)
        if (sgn(x) != 0)
            return false;
    return true;
}

/// Scale so that the first nonzero entry has absolute value one; keeps the sign.
inline RationalVector normalize_leading(RationalVector v) {
    for (const auto& x : v) {
        if (sgn(x) != 0) {
            Rational s = abs(x);
            for (auto& y : v)
                y /= s;
            return v;
        }
    }
    return v;
}

/// Positive multiple of v with coprime integer entries.
inline RationalVector primitive_integer(const RationalVector& v) {
    Integer l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    Integer g = 0;
    std::vector<Integer> ints(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        ints[i] = v[i].get_num() * (l / v[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
    }
    RationalVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = g == 0 ? Rational(0) : Rational(ints[i] / g);
    return r;
}

/// Whether a and b are nonzero rational multiples of each other.
inline bool parallel(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size() || is_zero(a) || is_zero(b))
        return false;
    return normalize_leading(a) == normalize_leading(b) ||
           normalize_leading(a) == normalize_leading(Rational(-1) * b);
}

struct LexLess {
    bool operator()(const RationalVector& a, const RationalVector& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

} // namespace coxdr
