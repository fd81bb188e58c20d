#pragma once

#include "coxdr/hull.hpp"
#include "coxdr/linalg.hpp"
#include "coxdr/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace coxdr {

enum class LieType { A, B, C, D, E6, E7 };

inline std::string to_string(LieType t) {
    switch (t) {
    case LieType::A: return "A";
    case LieType::B: return "B";
    case LieType::C: return "C";
    case LieType::D: return "D";
    case LieType::E6: return "E6";
    case LieType::E7: return "E7";
    }
    return "?";
}

inline LieType parse_lie_type(const std::string& s) {
    if (s == "A" || s == "a") return LieType::A;
    if (s == "B" || s == "b") return LieType::B;
    if (s == "C" || s == "c") return LieType::C;
    if (s == "D" || s == "d") return LieType::D;
    if (s == "E6" || s == "e6") return LieType::E6;
    if (s == "E7" || s == "e7") return LieType::E7;
    throw std::invalid_argument("unknown Lie type '" + s + "' (expected A, B, C, D, E6 or E7)");
}

struct MinusculePair {
    LieType type = LieType::A;
    int rank = 1;
    int parabolic = 1;

    friend bool operator==(const MinusculePair&, const MinusculePair&) = default;
};

inline std::string to_string(const MinusculePair& p) {
    return "(" + to_string(p.type) + (p.type == LieType::E6 || p.type == LieType::E7 ? "" : std::to_string(p.rank)) +
           ", P" + std::to_string(p.parabolic) + ")";
}

inline const char* minuscule_pair_table() {
    return "valid minuscule pairs: (A_m, P_r) for 1 <= r <= m; (B_n, P_n) for n >= 2; (C_n, P_1) for n >= 2; "
           "(D_n, P_1) or (D_n, P_n) for n >= 3; (E6, P_1) or (E6, P_6); (E7, P_7) (P_1 accepted as an alias)";
}

/// Throws std::invalid_argument unless (type, rank, parabolic) is minuscule.
inline void validate(const MinusculePair& p) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument(to_string(p) + " is not supported: " + why + "; " + minuscule_pair_table());
    };
    switch (p.type) {
    case LieType::A:
        if (p.rank < 1 || p.parabolic < 1 || p.parabolic > p.rank)
            fail("parabolic index out of range");
        if (p.rank > 20)
            fail("rank too large");
        break;
    case LieType::B:
        if (p.rank < 2 || p.rank > 16)
            fail("rank out of range");
        if (p.parabolic != p.rank)
            fail("the only minuscule parabolic of B_n is P_n");
        break;
    case LieType::C:
        if (p.rank < 2 || p.rank > 30)
            fail("rank out of range");
        if (p.parabolic != 1)
            fail("the only minuscule parabolic of C_n is P_1");
        break;
    case LieType::D:
        if (p.rank < 3 || p.rank > 16)
            fail("rank out of range");
        if (p.parabolic == p.rank - 1)
            throw std::invalid_argument(to_string(p) +
                                        " is not built separately: P_{n-1} and P_n are isomorphic as subgroups of "
                                        "W(D_n); use P_n (parabolic " + std::to_string(p.rank) + ") instead");
        if (p.parabolic != 1 && p.parabolic != p.rank)
            fail("minuscule parabolics of D_n are P_1, P_{n-1}, P_n");
        break;
    case LieType::E6:
        if (p.rank != 6)
            fail("E6 has rank 6");
        if (p.parabolic != 1 && p.parabolic != 6)
            fail("minuscule parabolics of E6 are P_1 and P_6");
        break;
    case LieType::E7:
        if (p.rank != 7)
            fail("E7 has rank 7");
        if (p.parabolic != 7 && p.parabolic != 1)
            fail("the minuscule parabolic of E7 is P_7");
        break;
    }
}

struct Subset {
    std::uint32_t bits = 0; // bit i-1 set iff i in the subset
    friend auto operator<=>(const Subset&, const Subset&) = default;
};
struct SignedIndex {
    int value = 1; // +-i
    friend auto operator<=>(const SignedIndex&, const SignedIndex&) = default;
};
struct OrbitIndex {
    int value = 0;
    friend auto operator<=>(const OrbitIndex&, const OrbitIndex&) = default;
};
using CosetLabel = std::variant<Subset, SignedIndex, OrbitIndex>;

inline std::string subset_string(std::uint32_t bits) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i)
        if (bits >> i & 1u) {
            if (!first)
                s += ",";
            s += std::to_string(i + 1);
            first = false;
        }
    return s + "}";
}

inline std::string label_string(const CosetLabel& l) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Subset>)
                return subset_string(x.bits);
            else if constexpr (std::is_same_v<T, SignedIndex>)
                return (x.value > 0 ? "+" : "-") + std::to_string(std::abs(x.value));
            else
                return "v" + std::to_string(x.value);
        },
        l);
}

inline std::uint32_t parse_subset_bits(const std::string& s) {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        throw std::invalid_argument("malformed subset label '" + s + "'");
    std::uint32_t bits = 0;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            throw std::invalid_argument("malformed subset label '" + s + "'");
        int v = std::stoi(tok);
        if (v < 1 || v > 32)
            throw std::invalid_argument("subset element out of range in '" + s + "'");
        bits |= 1u << (v - 1);
    }
    return bits;
}

inline CosetLabel parse_label(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("empty coset label");
    if (s.front() == '{')
        return Subset{parse_subset_bits(s)};
    if (s.front() == '+' || s.front() == '-')
        return SignedIndex{std::stoi(s)};
    if (s.front() == 'v')
        return OrbitIndex{std::stoi(s.substr(1))};
    throw std::invalid_argument("unrecognized coset label '" + s + "'");
}

struct CrossPolytopeFace {
    std::vector<std::size_t> vertices;                               // sorted
    std::vector<std::pair<std::size_t, std::size_t>> antipode_pairs; // sorted, first < second
};

class MinusculeQuotient;
using QuotientPtr = std::shared_ptr<const MinusculeQuotient>;

/// The orbit W.v of a minuscule weight, identified with W/P, together with the
/// root system, edge graph and reflection action.
class MinusculeQuotient {
public:
    const MinusculePair& pair() const { return pair_; }
    std::size_t size() const { return coords_.size(); }
    std::size_t ambient() const { return centroid_.size(); }
    std::size_t dimension() const { return dimension_; }
    const std::vector<CosetLabel>& labels() const { return labels_; }
    const CosetLabel& label(std::size_t i) const { return labels_.at(i); }
    std::string label_str(std::size_t i) const { return label_string(labels_.at(i)); }
    const std::vector<RationalVector>& coords() const { return coords_; }
    const RationalVector& coord(std::size_t i) const { return coords_.at(i); }
    const std::vector<RationalVector>& roots() const { return roots_; }
    const RationalVector& centroid() const { return centroid_; }
    const std::vector<std::vector<std::size_t>>& neighbors() const { return neighbors_; }
    bool adjacent(std::size_t i, std::size_t j) const { return adjacency_.at(i).test(j); }
    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& nb : neighbors_)
            n += nb.size();
        return n / 2;
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> es;
        for (std::size_t i = 0; i < size(); ++i)
            for (auto j : neighbors_[i])
                if (i < j)
                    es.emplace_back(i, j);
        return es;
    }

    std::optional<std::size_t> index_of(const RationalVector& x) const {
        auto it = by_coords_.find(x);
        if (it == by_coords_.end())
            return std::nullopt;
        return it->second;
    }
    std::optional<std::size_t> index_of(const CosetLabel& l) const {
        auto it = by_label_.find(l);
        if (it == by_label_.end())
            return std::nullopt;
        return it->second;
    }

    RationalVector reflect(std::size_t root, const RationalVector& x) const {
        const auto& a = roots_.at(root);
        Rational t = 2 * dot(a, x - centroid_) / dot(a, a);
        return x - t * a;
    }

    /// Index of s_alpha(p_v), if that point is a vertex of the quotient.
    std::optional<std::size_t> reflect_vertex(std::size_t root, std::size_t v) const {
        auto r = reflection_.at(root).at(v);
        if (r == npos)
            return std::nullopt;
        return r;
    }

    /// Sign of <alpha, p_v - c>.
    int side(std::size_t root, std::size_t v) const { return side_.at(root).at(v); }

    /// The mirror of alpha strictly separates p_i and p_j.
    bool separates(std::size_t root, std::size_t i, std::size_t j) const {
        if (i == j)
            throw std::invalid_argument("separates: identical vertices");
        return side(root, i) * side(root, j) < 0;
    }

    int graph_distance(std::size_t i, std::size_t j) const { return distance_.at(i).at(j); }
    int diameter() const {
        int d = 0;
        for (const auto& row : distance_)
            for (int x : row)
                d = std::max(d, x);
        return d;
    }

    /// Vertex at 2c - p_i, if present.
    std::optional<std::size_t> antipode(std::size_t i) const {
        RationalVector y = Rational(2) * centroid_ - coords_.at(i);
        return index_of(y);
    }

    /// The cross-polytope faces spanned by distance-two pairs (E6 and E7 only).
    std::vector<CrossPolytopeFace> cross_polytope_faces() const {
        if (pair_.type != LieType::E6 && pair_.type != LieType::E7)
            throw std::invalid_argument("cross_polytope_faces: only defined for E6 and E7 quotients");
        std::map<std::vector<std::size_t>, CrossPolytopeFace> faces;
        for (std::size_t a = 0; a < size(); ++a)
            for (std::size_t b = a + 1; b < size(); ++b) {
                if (distance_[a][b] != 2)
                    continue;
                std::vector<std::size_t> common;
                auto both = adjacency_[a] & adjacency_[b];
                for (auto c : members(both))
                    common.push_back(c);
                std::vector<std::size_t> verts = common;
                verts.push_back(a);
                verts.push_back(b);
                std::sort(verts.begin(), verts.end());
                if (faces.count(verts))
                    continue;
                CrossPolytopeFace face;
                face.vertices = verts;
                face.antipode_pairs.emplace_back(a, b);
                RationalVector target = coords_[a] + coords_[b];
                std::vector<bool> used(common.size(), false);
                for (std::size_t x = 0; x < common.size(); ++x) {
                    if (used[x])
                        continue;
                    for (std::size_t y = x + 1; y < common.size(); ++y) {
                        if (!used[y] && coords_[common[x]] + coords_[common[y]] == target) {
                            used[x] = used[y] = true;
                            face.antipode_pairs.emplace_back(std::min(common[x], common[y]),
                                                             std::max(common[x], common[y]));
                            break;
                        }
                    }
                    if (!used[x])
                        throw std::logic_error("cross_polytope_faces: common neighbor without antipode");
                }
                std::sort(face.antipode_pairs.begin(), face.antipode_pairs.end());
                faces.emplace(std::move(verts), std::move(face));
            }
        std::vector<CrossPolytopeFace> out;
        for (auto& [k, f] : faces)
            out.push_back(std::move(f));
        return out;
    }

    /// Root-parallel test for a difference vector.
    bool root_parallel(const RationalVector& d) const {
        if (is_zero(d))
            return false;
        auto n = normalize_leading(d);
        if (sgn(*std::find_if(n.begin(), n.end(), [](const Rational& x) { return sgn(x) != 0; })) < 0)
            n = Rational(-1) * n;
        return root_directions_.count(n) > 0;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    friend QuotientPtr build_quotient(const MinusculePair& pair);

    void finish();

    MinusculePair pair_;
    std::vector<CosetLabel> labels_;
    std::vector<RationalVector> coords_;
    std::vector<RationalVector> roots_;
    RationalVector centroid_;
    std::size_t dimension_ = 0;
    std::vector<std::vector<std::size_t>> neighbors_;
    std::vector<PointSet> adjacency_;
    std::vector<std::vector<int>> distance_;
    std::vector<std::vector<std::size_t>> reflection_;
    std::vector<std::vector<int>> side_;
    std::map<RationalVector, std::size_t, LexLess> by_coords_;
    std::map<CosetLabel, std::size_t> by_label_;
    std::set<RationalVector, LexLess> root_directions_;
};

namespace detail {

inline std::vector<std::uint32_t> subsets_by_size_then_lex(int n, bool (*keep)(std::uint32_t, int), int param) {
    std::vector<std::uint32_t> all;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (keep(m, param))
            all.push_back(m);
    auto elems = [](std::uint32_t m) {
        std::vector<int> e;
        for (int i = 0; i < 32; ++i)
            if (m >> i & 1u)
                e.push_back(i);
        return e;
    };
    std::sort(all.begin(), all.end(), [&](std::uint32_t a, std::uint32_t b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        if (pa != pb)
            return pa < pb;
        return elems(a) < elems(b);
    });
    return all;
}

inline RationalVector shifted_indicator(std::uint32_t bits, int n) {
    RationalVector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = (bits >> i & 1u) ? Rational(1, 2) : Rational(-1, 2);
    return v;
}

inline std::vector<RationalVector> classical_roots(LieType t, int n) {
    std::vector<RationalVector> roots;
    auto e = [&](int i) { return unit_vector(n, i); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            roots.push_back(e(i) - e(j));
            if (t != LieType::A && i < j) {
                roots.push_back(e(i) + e(j));
                roots.push_back(Rational(-1) * (e(i) + e(j)));
            }
        }
    if (t == LieType::B)
        for (int i = 0; i < n; ++i) {
            roots.push_back(e(i));
            roots.push_back(Rational(-1) * e(i));
        }
    if (t == LieType::C)
        for (int i = 0; i < n; ++i) {
            roots.push_back(Rational(2) * e(i));
            roots.push_back(Rational(-2) * e(i));
        }
    return roots;
}

// Simple roots of E8 in the even coordinate system; E6 and E7 use prefixes.
inline std::vector<RationalVector> e8_simple_roots() {
    std::vector<RationalVector> s;
    RationalVector a1(8, Rational(-1, 2));
    a1[0] = Rational(1, 2);
    a1[7] = Rational(1, 2);
    s.push_back(a1);
    auto e = [](int i) { return unit_vector(8, i); };
    s.push_back(e(0) + e(1));
    for (int i = 0; i < 6; ++i)
        s.push_back(e(i + 1) - e(i));
    return s;
}

inline RationalVector reflect_through(const RationalVector& a, const RationalVector& x) {
    Rational t = 2 * dot(a, x) / dot(a, a);
    return x - t * a;
}

inline std::vector<RationalVector> root_closure(const std::vector<RationalVector>& simple) {
    std::set<RationalVector, LexLess> seen(simple.begin(), simple.end());
    std::deque<RationalVector> queue(simple.begin(), simple.end());
    while (!queue.empty()) {
        auto r = queue.front();
        queue.pop_front();
        for (const auto& s : simple) {
            auto y = reflect_through(s, r);
            if (seen.insert(y).second)
                queue.push_back(y);
        }
    }
    return {seen.begin(), seen.end()};
}

// Fundamental weight dual to simple root r inside the span of the simple roots.
inline RationalVector fundamental_weight(const std::vector<RationalVector>& simple, std::size_t r) {
    const std::size_t k = simple.size();
    RationalMatrix gram(k, RationalVector(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            gram[i][j] = dot(simple[i], simple[j]);
    RationalVector rhs = zeros(k);
    rhs[r] = 1; // simply laced: coroots coincide with roots
    auto c = solve(gram, rhs, k);
    if (!c)
        throw std::logic_error("fundamental_weight: singular Cartan matrix");
    RationalVector w = zeros(simple.front().size());
    for (std::size_t i = 0; i < k; ++i)
        w = w + (*c)[i] * simple[i];
    return w;
}

// Orbit closure in BFS layers; each new layer sorted lexicographically.
inline std::vector<RationalVector> weight_orbit(const std::vector<RationalVector>& simple, const RationalVector& w) {
    std::set<RationalVector, LexLess> seen{w};
    std::vector<RationalVector> order{w};
    std::vector<RationalVector> layer{w};
    while (!layer.empty()) {
        std::set<RationalVector, LexLess> next;
        for (const auto& x : layer)
            for (const auto& s : simple) {
                auto y = reflect_through(s, x);
                if (!seen.count(y))
                    next.insert(y);
            }
        layer.assign(next.begin(), next.end());
        for (const auto& y : layer) {
            seen.insert(y);
            order.push_back(y);
        }
    }
    return order;
}

} // namespace detail

inline void MinusculeQuotient::finish() {
    const std::size_t n = coords_.size();
    const std::size_t amb = coords_.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!by_coords_.emplace(coords_[i], i).second)
            throw std::logic_error("build_quotient: repeated vertex coordinates");
        by_label_.emplace(labels_[i], i);
    }
    centroid_ = zeros(amb);
    for (const auto& p : coords_)
        centroid_ = centroid_ + p;
    centroid_ = Rational(1, static_cast<unsigned long>(n)) * centroid_;
    dimension_ = affine_hull(coords_).dimension;

    std::sort(roots_.begin(), roots_.end(), LexLess{});
    roots_.erase(std::unique(roots_.begin(), roots_.end()), roots_.end());
    for (const auto& r : roots_) {
        auto d = normalize_leading(r);
        if (sgn(*std::find_if(d.begin(), d.end(), [](const Rational& x) { return sgn(x) != 0; })) < 0)
            d = Rational(-1) * d;
        root_directions_.insert(d);
    }

    reflection_.assign(roots_.size(), std::vector<std::size_t>(n, npos));
    side_.assign(roots_.size(), std::vector<int>(n, 0));
    for (std::size_t r = 0; r < roots_.size(); ++r)
        for (std::size_t v = 0; v < n; ++v) {
            side_[r][v] = sgn(dot(roots_[r], coords_[v] - centroid_));
            if (auto w = index_of(reflect(r, coords_[v])))
                reflection_[r][v] = *w;
        }

    neighbors_.assign(n, {});
    adjacency_.assign(n, PointSet(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (is_edge(coords_, i, j)) {
                neighbors_[i].push_back(j);
                neighbors_[j].push_back(i);
                adjacency_[i].set(j);
                adjacency_[j].set(i);
            }

    distance_.assign(n, std::vector<int>(n, -1));
    for (std::size_t s = 0; s < n; ++s) {
        std::deque<std::size_t> q{s};
        distance_[s][s] = 0;
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (auto v : neighbors_[u])
                if (distance_[s][v] < 0) {
                    distance_[s][v] = distance_[s][u] + 1;
                    q.push_back(v);
                }
        }
    }
}

/// Builds the vertex set, root system and edge graph of a minuscule quotient.
inline QuotientPtr build_quotient(const MinusculePair& pair) {
    validate(pair);
    auto q = std::shared_ptr<MinusculeQuotient>(new MinusculeQuotient());
    q->pair_ = pair;
    const int n = pair.rank;
    switch (pair.type) {
    case LieType::A: {
        const int m = n + 1;
        auto subs = detail::subsets_by_size_then_lex(
            m, [](std::uint32_t b, int r) { return __builtin_popcount(b) == r; }, pair.parabolic);
        for (auto b : subs) {
            RationalVector v = zeros(m);
            for (int i = 0; i < m; ++i)
                if (b >> i & 1u)
                    v[i] = 1;
            q->labels_.push_back(Subset{b});
            q->coords_.push_back(std::move(v));
        }
        q->roots_ = detail::classical_roots(LieType::A, m);
        break;
    }
    case LieType::B: {
        auto subs = detail::subsets_by_size_then_lex(n, [](std::uint32_t, int) { return true; }, 0);
        for (auto b : subs) {
            q->labels_.push_back(Subset{b});
            q->coords_.push_back(detail::shifted_indicator(b, n));
        }
        q->roots_ = detail::classical_roots(LieType::B, n);
        break;
    }
    case LieType::C:
    case LieType::D: {
        if (pair.type == LieType::D && pair.parabolic == n) {
            auto subs = detail::subsets_by_size_then_lex(
                n, [](std::uint32_t b, int) { return __builtin_popcount(b) % 2 == 0; }, 0);
            for (auto b : subs) {
                q->labels_.push_back(Subset{b});
                q->coords_.push_back(detail::shifted_indicator(b, n));
            }
        } else {
            for (int sgn_ : {1, -1})
                for (int i = 1; i <= n; ++i) {
                    q->labels_.push_back(SignedIndex{sgn_ * i});
                    q->coords_.push_back(Rational(sgn_) * unit_vector(n, i - 1));
                }
        }
        q->roots_ = detail::classical_roots(pair.type, n);
        break;
    }
    case LieType::E6:
    case LieType::E7: {
        auto e8 = detail::e8_simple_roots();
        const std::size_t k = pair.type == LieType::E6 ? 6 : 7;
        std::vector<RationalVector> simple(e8.begin(), e8.begin() + static_cast<long>(k));
        std::size_t r = pair.type == LieType::E7 ? 6 : static_cast<std::size_t>(pair.parabolic - 1);
        auto w = detail::fundamental_weight(simple, r);
        auto orbit = detail::weight_orbit(simple, w);
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            q->labels_.push_back(OrbitIndex{static_cast<int>(i)});
            q->coords_.push_back(orbit[i]);
        }
        q->roots_ = detail::root_closure(simple);
        break;
    }
    }
    q->finish();
    return q;
}

} // namespace coxdr
