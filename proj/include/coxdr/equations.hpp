#pragma once

#include "coxdr/coxeter.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coxdr {

using Monomial = std::pair<std::size_t, std::size_t>; // x_i * x_j with i <= j

/// A square-free quadratic tropical polynomial with trivial coefficients.
struct TropicalQuadric {
    std::vector<Monomial> monomials; // sorted, each with first < second
    std::string provenance;          // generating data of the first occurrence

    std::size_t size() const { return monomials.size(); }
};

inline std::vector<Monomial> canonical_monomials(std::vector<Monomial> ms) {
    for (auto& m : ms)
        if (m.first > m.second)
            std::swap(m.first, m.second);
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

struct EquationSystem {
    QuotientPtr quotient;
    std::vector<TropicalQuadric> equations;
    std::map<std::string, std::size_t> index; // every provenance tag -> equation

    std::size_t size() const { return equations.size(); }

    const TropicalQuadric& by_provenance(const std::string& tag) const {
        auto it = index.find(tag);
        if (it == index.end())
            throw std::out_of_range("no equation with provenance " + tag);
        return equations[it->second];
    }

    /// Adds an equation unless one with the same monomial set exists; the tag
    /// is indexed either way. Returns the equation's position.
    std::size_t add(std::vector<Monomial> monomials, const std::string& tag) {
        monomials = canonical_monomials(std::move(monomials));
        if (monomials.size() < 2)
            throw std::logic_error("equation with fewer than two monomials: " + tag);
        for (const auto& m : monomials)
            if (m.first == m.second || m.second >= quotient->size())
                throw std::logic_error("equation monomial out of range: " + tag);
        auto it = by_monomials_.find(monomials);
        std::size_t pos;
        if (it == by_monomials_.end()) {
            pos = equations.size();
            by_monomials_.emplace(monomials, pos);
            equations.push_back({std::move(monomials), tag});
        } else {
            pos = it->second;
        }
        index.emplace(tag, pos);
        return pos;
    }

    std::optional<std::size_t> find(const std::vector<Monomial>& monomials) const {
        auto it = by_monomials_.find(canonical_monomials(monomials));
        if (it == by_monomials_.end())
            return std::nullopt;
        return it->second;
    }

private:
    std::map<std::vector<Monomial>, std::size_t> by_monomials_;
};

inline std::string pair_tag(std::uint32_t i, std::uint32_t j) {
    return "(" + subset_string(i) + "," + subset_string(j) + ")";
}

namespace detail {

inline std::size_t subset_vertex(const MinusculeQuotient& q, std::uint32_t bits) {
    auto v = q.index_of(CosetLabel{Subset{bits}});
    if (!v)
        throw std::logic_error("no vertex for subset " + subset_string(bits));
    return *v;
}

// f^B_{I,J} (and f^D_{I,J} when `with_pair` is false and I, J are odd).
inline std::vector<Monomial> exchange_monomials(const MinusculeQuotient& q, std::uint32_t I, std::uint32_t J,
                                                bool with_pair) {
    std::vector<Monomial> ms;
    std::uint32_t diff = I ^ J;
    for (int i = 0; i < 32; ++i)
        if (diff >> i & 1u)
            ms.emplace_back(subset_vertex(q, I ^ (1u << i)), subset_vertex(q, J ^ (1u << i)));
    if (with_pair)
        ms.emplace_back(subset_vertex(q, I), subset_vertex(q, J));
    return ms;
}

inline void type_b(EquationSystem& sys, int max_diff) {
    const auto& q = *sys.quotient;
    const int n = q.pair().rank;
    for (std::uint32_t I = 0; I < (1u << n); ++I)
        for (std::uint32_t J = I + 1; J < (1u << n); ++J) {
            int d = std::popcount(I ^ J);
            if (d < 3 || d > max_diff)
                continue;
            sys.add(exchange_monomials(q, I, J, d % 2 == 1), pair_tag(I, J));
        }
}

inline void type_d_spinor(EquationSystem& sys) {
    const auto& q = *sys.quotient;
    const int n = q.pair().rank;
    for (std::uint32_t I = 0; I < (1u << n); ++I) {
        if (std::popcount(I) % 2 == 0)
            continue;
        for (std::uint32_t J = I + 1; J < (1u << n); ++J) {
            if (std::popcount(J) % 2 == 0 || std::popcount(I ^ J) < 4)
                continue;
            sys.add(exchange_monomials(q, I, J, false), pair_tag(I, J));
        }
    }
}

inline void type_d_cross(EquationSystem& sys) {
    const auto& q = *sys.quotient;
    const int n = q.pair().rank;
    std::vector<Monomial> ms;
    for (int i = 1; i <= n; ++i)
        ms.emplace_back(*q.index_of(CosetLabel{SignedIndex{i}}), *q.index_of(CosetLabel{SignedIndex{-i}}));
    sys.add(std::move(ms), "cross");
}

inline void type_a(EquationSystem& sys) {
    const auto& q = *sys.quotient;
    const int m = q.pair().rank + 1;
    const int r = q.pair().parabolic;
    for (std::uint32_t S = 0; S < (1u << m); ++S) {
        if (std::popcount(S) != r - 1)
            continue;
        for (std::uint32_t T = 0; T < (1u << m); ++T) {
            if (std::popcount(T) != r + 1)
                continue;
            std::uint32_t only_t = T & ~S;
            if (std::popcount(only_t) < 3)
                continue; // fewer distinct monomials than a genuine relation
            std::vector<Monomial> ms;
            for (int i = 0; i < m; ++i)
                if (only_t >> i & 1u)
                    ms.emplace_back(subset_vertex(q, S | (1u << i)), subset_vertex(q, T & ~(1u << i)));
            sys.add(std::move(ms), pair_tag(S, T));
        }
    }
}

inline void type_e(EquationSystem& sys) {
    const auto& q = *sys.quotient;
    auto faces = q.cross_polytope_faces();
    // one tag per distance-two pair; every pair of a face yields the same monomials
    for (std::size_t f = 0; f < faces.size(); ++f)
        for (const auto& [a, b] : faces[f].antipode_pairs)
            sys.add(faces[f].antipode_pairs, "(" + q.label_str(a) + "," + q.label_str(b) + ")");
    if (q.pair().type == LieType::E7) {
        std::vector<Monomial> global;
        for (std::size_t a = 0; a < q.size(); ++a) {
            auto b = q.antipode(a);
            if (!b)
                throw std::logic_error("E7 vertex without antipode");
            if (a < *b)
                global.emplace_back(a, *b);
        }
        sys.add(std::move(global), "global");
    }
}

} // namespace detail

/// All strong exchange equations of a minuscule quotient, deduplicated by
/// monomial set.
inline EquationSystem strong_exchange_system(const QuotientPtr& q) {
    EquationSystem sys;
    sys.quotient = q;
    const auto& p = q->pair();
    switch (p.type) {
    case LieType::A: detail::type_a(sys); break;
    case LieType::B: detail::type_b(sys, p.rank); break;
    case LieType::C: break;
    case LieType::D:
        if (p.parabolic == 1)
            detail::type_d_cross(sys);
        else
            detail::type_d_spinor(sys);
        break;
    case LieType::E6:
    case LieType::E7: detail::type_e(sys); break;
    }
    return sys;
}

/// Type-B subsystem with |I xor J| <= k.
inline EquationSystem equations_up_to(const QuotientPtr& q, int k) {
    if (q->pair().type != LieType::B)
        throw std::invalid_argument("equations_up_to: only defined for type B");
    if (k < 3)
        throw std::invalid_argument("equations_up_to: k must be at least 3");
    EquationSystem sys;
    sys.quotient = q;
    detail::type_b(sys, k);
    return sys;
}

/// Subset bar map 2^[n] -> even subsets of [n+1].
inline std::uint32_t bar_subset(std::uint32_t A, int n) {
    return std::popcount(A) % 2 == 0 ? A : (A | (1u << n));
}

/// The parity-adjusted index pair (I', J') for f^B_{I,J}.
inline std::pair<std::uint32_t, std::uint32_t> bar_pair(std::uint32_t I, std::uint32_t J, int n) {
    auto adj = [n](std::uint32_t X) { return std::popcount(X) % 2 == 0 ? (X | (1u << n)) : X; };
    return {adj(I), adj(J)};
}

struct EquationBijection {
    QuotientPtr b_quotient;
    QuotientPtr d_quotient;
    EquationSystem b_system;
    EquationSystem d_system;
    std::vector<std::size_t> b_to_d; // equation index in b_system -> index in d_system
};

/// Matches the deduplicated B_n and D_{n+1}/P_{n+1} systems through the bar map;
/// throws if the correspondence fails to be a bijection.
inline EquationBijection bn_dn1_equation_bijection(int n) {
    if (n < 3)
        throw std::invalid_argument("bn_dn1_equation_bijection: n must be at least 3");
    EquationBijection bij;
    bij.b_quotient = build_quotient({LieType::B, n, n});
    bij.d_quotient = build_quotient({LieType::D, n + 1, n + 1});
    bij.b_system = strong_exchange_system(bij.b_quotient);
    bij.d_system = strong_exchange_system(bij.d_quotient);
    const auto& qb = *bij.b_quotient;
    const auto& qd = *bij.d_quotient;
    auto vertex_bar = [&](std::size_t v) {
        auto bits = std::get<Subset>(qb.label(v)).bits;
        return detail::subset_vertex(qd, bar_subset(bits, n));
    };
    bij.b_to_d.assign(bij.b_system.size(), QuotientPtr::element_type::npos);
    std::vector<bool> hit(bij.d_system.size(), false);
    for (std::uint32_t I = 0; I < (1u << n); ++I)
        for (std::uint32_t J = I + 1; J < (1u << n); ++J) {
            if (std::popcount(I ^ J) < 3)
                continue;
            std::size_t eb = bij.b_system.index.at(pair_tag(I, J));
            auto [Ip, Jp] = bar_pair(I, J, n);
            auto lo = std::min(Ip, Jp), hi = std::max(Ip, Jp);
            auto it = bij.d_system.index.find(pair_tag(lo, hi));
            if (it == bij.d_system.index.end())
                throw std::logic_error("bijection: no D equation for " + pair_tag(lo, hi));
            std::vector<Monomial> image;
            for (const auto& [a, b] : bij.b_system.equations[eb].monomials)
                image.emplace_back(vertex_bar(a), vertex_bar(b));
            if (canonical_monomials(image) != bij.d_system.equations[it->second].monomials)
                throw std::logic_error("bijection: monomials disagree for " + pair_tag(I, J));
            if (bij.b_to_d[eb] != QuotientPtr::element_type::npos && bij.b_to_d[eb] != it->second)
                throw std::logic_error("bijection: equation maps to two targets");
            bij.b_to_d[eb] = it->second;
            hit[it->second] = true;
        }
    for (bool h : hit)
        if (!h)
            throw std::logic_error("bijection: D equation without preimage");
    std::vector<std::size_t> sorted = bij.b_to_d;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::logic_error("bijection: two B equations share a target");
    return bij;
}

} // namespace coxdr
