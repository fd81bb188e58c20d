#pragma once

#include "coxdr/coxeter.hpp"
#include "coxdr/equations.hpp"

#include <algorithm>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxdr {

/// An element of Q u {inf} with min as tropical addition and + as tropical
/// multiplication.
class TropicalValue {
public:
    TropicalValue() = default; // infinity
    TropicalValue(Rational v) : value_(std::move(v)) {}
    TropicalValue(long v) : value_(Rational(v)) {}

    static TropicalValue infinity() { return {}; }

    bool finite() const { return value_.has_value(); }
    bool is_infinite() const { return !value_.has_value(); }
    const Rational& value() const {
        if (!value_)
            throw std::logic_error("TropicalValue: infinite value has no rational part");
        return *value_;
    }

    friend TropicalValue operator*(const TropicalValue& a, const TropicalValue& b) {
        if (!a.value_ || !b.value_)
            return {};
        return TropicalValue(*a.value_ + *b.value_);
    }
    friend TropicalValue tmin(const TropicalValue& a, const TropicalValue& b) { return a <= b ? a : b; }

    friend bool operator==(const TropicalValue& a, const TropicalValue& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const TropicalValue& a, const TropicalValue& b) {
        if (!a.value_ && !b.value_)
            return std::strong_ordering::equal;
        if (!a.value_)
            return std::strong_ordering::greater;
        if (!b.value_)
            return std::strong_ordering::less;
        int c = cmp(*a.value_, *b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    std::string str() const { return value_ ? value_->get_str() : "inf"; }

private:
    std::optional<Rational> value_;
};

inline TropicalValue parse_tropical(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "oo")
        return TropicalValue::infinity();
    return TropicalValue(parse_rational(s));
}

/// Heights on the vertices of a quotient, indexed like its vertex list.
struct HeightFunction {
    std::vector<TropicalValue> values;

    HeightFunction() = default;
    explicit HeightFunction(std::vector<TropicalValue> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    const TropicalValue& operator[](std::size_t i) const { return values.at(i); }
    TropicalValue& operator[](std::size_t i) { return values.at(i); }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i].finite())
                s.push_back(i);
        return s;
    }
    bool all_finite() const {
        return std::all_of(values.begin(), values.end(), [](const TropicalValue& v) { return v.finite(); });
    }

    friend bool operator==(const HeightFunction&, const HeightFunction&) = default;
};

inline HeightFunction finite_heights(const std::vector<Rational>& xs) {
    HeightFunction h;
    for (const auto& x : xs)
        h.values.emplace_back(x);
    return h;
}

struct AffineFunctional {
    RationalVector linear;
    Rational constant;

    Rational operator()(const RationalVector& x) const { return dot(linear, x) + constant; }
};

struct Evaluation {
    TropicalValue minimum;
    std::vector<std::size_t> argmin; // positions in the quadric's monomial list
};

inline TropicalValue monomial_value(const Monomial& m, const HeightFunction& mu) { return mu[m.first] * mu[m.second]; }

inline Evaluation evaluate(const TropicalQuadric& f, const HeightFunction& mu) {
    Evaluation e;
    for (std::size_t k = 0; k < f.monomials.size(); ++k) {
        auto v = monomial_value(f.monomials[k], mu);
        if (k == 0 || v < e.minimum) {
            e.minimum = v;
            e.argmin.assign(1, k);
        } else if (v == e.minimum) {
            e.argmin.push_back(k);
        }
    }
    return e;
}

/// Tropical vanishing: the minimum is infinite or attained at least twice.
inline bool satisfies(const TropicalQuadric& f, const HeightFunction& mu) {
    auto e = evaluate(f, mu);
    return e.minimum.is_infinite() || e.argmin.size() >= 2;
}

struct Membership {
    bool member = true;
    std::optional<std::size_t> failing; // first failing equation in canonical order
};

inline Membership is_member(const HeightFunction& mu, const EquationSystem& sys) {
    if (mu.size() != sys.quotient->size())
        throw std::invalid_argument("is_member: height function size does not match the quotient");
    for (std::size_t k = 0; k < sys.equations.size(); ++k)
        if (!satisfies(sys.equations[k], mu))
            return {false, k};
    return {};
}

inline HeightFunction add_affine(const MinusculeQuotient& q, const HeightFunction& mu, const AffineFunctional& phi) {
    if (phi.linear.size() != q.ambient())
        throw std::invalid_argument("add_affine: functional dimension does not match the quotient");
    if (mu.size() != q.size())
        throw std::invalid_argument("add_affine: height function size does not match the quotient");
    HeightFunction out = mu;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (mu[i].finite())
            out[i] = TropicalValue(mu[i].value() + phi(q.coord(i)));
    return out;
}

/// 0 on the cell, infinity elsewhere.
inline HeightFunction indicator(const MinusculeQuotient& q, const std::vector<std::size_t>& cell) {
    if (cell.empty())
        throw std::invalid_argument("indicator: empty cell");
    HeightFunction h;
    h.values.assign(q.size(), TropicalValue::infinity());
    for (auto i : cell)
        h.values.at(i) = TropicalValue(0L);
    return h;
}

/// Pushes heights on 2^[n] to the even half of 2^[n+1] via A -> A-bar.
inline HeightFunction embed_bn_to_dn1(const MinusculeQuotient& qb, const MinusculeQuotient& qd,
                                      const HeightFunction& mu) {
    const int n = qb.pair().rank;
    if (qb.pair().type != LieType::B)
        throw std::invalid_argument("embed_bn_to_dn1: source must be type B");
    if (qd.pair() != MinusculePair{LieType::D, n + 1, n + 1})
        throw std::invalid_argument("embed_bn_to_dn1: target must be (D_{n+1}, P_{n+1})");
    if (mu.size() != qb.size())
        throw std::invalid_argument("embed_bn_to_dn1: height function size does not match");
    HeightFunction out;
    out.values.assign(qd.size(), TropicalValue::infinity());
    for (std::size_t v = 0; v < qb.size(); ++v) {
        auto bits = std::get<Subset>(qb.label(v)).bits;
        auto target = qd.index_of(CosetLabel{Subset{bar_subset(bits, n)}});
        if (!target)
            throw std::logic_error("embed_bn_to_dn1: missing image vertex");
        out[*target] = mu[v];
    }
    return out;
}

} // namespace coxdr
