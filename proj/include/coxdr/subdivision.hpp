#pragma once

#include "coxdr/coxeter.hpp"
#include "coxdr/hull.hpp"
#include "coxdr/lp.hpp"
#include "coxdr/tropical.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxdr {

struct Cell {
    std::vector<std::size_t> vertices; // sorted
    std::size_t dimension = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Maximal cells of the regular subdivision of a point configuration.
struct PointSubdivision {
    std::vector<Cell> cells; // indices into the configuration, sorted
    std::size_t dimension = 0;
    bool is_triangulation = false;
};

/// Lower faces of the lifted configuration {(p_i, h_i)}. A point p* above the
/// centroid makes the lifted polytope full-dimensional even for a flat lift;
/// lower facets are those with an upward inward normal and never contain p*.
inline PointSubdivision lower_cells(const std::vector<RationalVector>& points, const std::vector<Rational>& heights) {
    if (points.empty())
        throw std::invalid_argument("regular subdivision of an empty configuration");
    if (points.size() != heights.size())
        throw std::invalid_argument("lower_cells: one height per point required");
    const std::size_t n = points.size();
    const std::size_t d = points.front().size();
    PointSubdivision out;
    out.dimension = affine_hull(points).dimension;
    if (out.dimension == 0) {
        out.cells.push_back({{0}, 0});
        for (std::size_t i = 1; i < n; ++i)
            out.cells.front().vertices.push_back(i);
        out.is_triangulation = n == 1;
        return out;
    }
    std::vector<RationalVector> lifted;
    RationalVector centroid = zeros(d);
    Rational top = heights.front();
    for (std::size_t i = 0; i < n; ++i) {
        auto p = points[i];
        centroid = centroid + p;
        p.push_back(heights[i]);
        lifted.push_back(std::move(p));
        top = std::max(top, heights[i]);
    }
    centroid = Rational(1, static_cast<unsigned long>(n)) * centroid;
    centroid.push_back(top + 1);
    lifted.push_back(std::move(centroid));

    auto hull = convex_hull(lifted);
    for (const auto& f : hull.facets) {
        if (sgn(f.halfspace.normal.back()) <= 0)
            continue;
        if (std::binary_search(f.incident.begin(), f.incident.end(), n))
            throw std::logic_error("lower_cells: the cap point lies on a lower facet");
        out.cells.push_back({f.incident, out.dimension});
    }
    std::sort(out.cells.begin(), out.cells.end());
    out.is_triangulation = std::all_of(out.cells.begin(), out.cells.end(),
                                       [&](const Cell& c) { return c.vertices.size() == out.dimension + 1; });
    return out;
}

/// Checks that the cells form a polyhedral subdivision: any two meet in a
/// common face, and every facet of a cell is either on the boundary of the
/// configuration or shared by exactly two cells. Returns a description of the
/// first problem found.
inline std::optional<std::string> audit_subdivision(const std::vector<RationalVector>& points,
                                                    const std::vector<Cell>& cells) {
    const std::size_t d = points.front().size();
    auto pts_of = [&](const std::vector<std::size_t>& idx) {
        std::vector<RationalVector> out;
        for (auto i : idx)
            out.push_back(points[i]);
        return out;
    };
    for (std::size_t a = 0; a < cells.size(); ++a)
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
            const auto& A = cells[a].vertices;
            const auto& B = cells[b].vertices;
            std::vector<std::size_t> common;
            std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(common));
            // c . x == c0 on the common points, < on the rest of A, > on the rest of B
            HalfspaceSystem sys(d + 1);
            auto row = [&](std::size_t i) {
                RationalVector r = points[i];
                r.push_back(-1);
                return r;
            };
            for (auto i : common)
                sys.add_eq(row(i), 0);
            for (auto i : A)
                if (!std::binary_search(common.begin(), common.end(), i))
                    sys.add_le(row(i), -1);
            for (auto i : B)
                if (!std::binary_search(common.begin(), common.end(), i))
                    sys.add_ge(row(i), 1);
            if (!lp_feasible(sys))
                return "cells " + std::to_string(a) + " and " + std::to_string(b) + " do not meet in a common face";
        }
    const std::size_t dim = affine_hull(points).dimension;
    if (dim == 0)
        return std::nullopt;
    auto whole = convex_hull(points);
    std::map<std::vector<std::size_t>, int> ridge_count;
    for (const auto& c : cells) {
        auto h = convex_hull(pts_of(c.vertices));
        if (h.dimension != dim)
            return "cell is not full-dimensional";
        for (const auto& f : h.facets) {
            std::vector<std::size_t> ridge;
            for (auto i : f.incident)
                ridge.push_back(c.vertices[i]);
            ++ridge_count[ridge];
        }
    }
    for (const auto& [ridge, count] : ridge_count) {
        bool boundary = false;
        for (const auto& f : whole.facets)
            if (std::includes(f.incident.begin(), f.incident.end(), ridge.begin(), ridge.end()))
                boundary = true;
        if (boundary ? count != 1 : count != 2)
            return "a cell facet is covered " + std::to_string(count) + " times";
    }
    return std::nullopt;
}

/// Regular subdivision of conv(supp mu) induced by finite heights on a quotient.
struct Subdivision {
    QuotientPtr quotient;
    HeightFunction heights;
    std::vector<Cell> cells; // vertex indices of the quotient
    std::size_t dimension = 0;
    bool is_triangulation = false;
};

inline Subdivision regular_subdivision(const QuotientPtr& q, const HeightFunction& mu) {
    if (mu.size() != q->size())
        throw std::invalid_argument("regular_subdivision: height function size does not match the quotient");
    auto supp = mu.support();
    if (supp.empty())
        throw std::invalid_argument("regular_subdivision: empty support");
    std::vector<RationalVector> pts;
    std::vector<Rational> hs;
    for (auto i : supp) {
        pts.push_back(q->coord(i));
        hs.push_back(mu[i].value());
    }
    auto ps = lower_cells(pts, hs);
    Subdivision s;
    s.quotient = q;
    s.heights = mu;
    s.dimension = ps.dimension;
    s.is_triangulation = ps.is_triangulation;
    for (auto& c : ps.cells) {
        Cell cell{{}, c.dimension};
        for (auto i : c.vertices)
            cell.vertices.push_back(supp[i]);
        s.cells.push_back(std::move(cell));
    }
    std::sort(s.cells.begin(), s.cells.end());
    return s;
}

struct CellReport {
    Cell cell;
    bool is_coxeter_matroid = true;
    bool is_strong_matroid = true;
    std::optional<std::pair<std::size_t, std::size_t>> bad_edge;      // edge not parallel to a root
    std::optional<std::pair<std::size_t, std::size_t>> exchange_less; // pair without a strong exchange
};

struct EdgeCheck {
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> bad_edge;
};

/// Every edge of conv(cell) is parallel to a root. Pairs that share their
/// midpoint with another pair of the cell are diagonals and skip the LP.
inline EdgeCheck is_coxeter_matroid(const MinusculeQuotient& q, const std::vector<std::size_t>& cell) {
    if (cell.empty())
        throw std::invalid_argument("is_coxeter_matroid: empty cell");
    std::vector<RationalVector> pts;
    for (auto v : cell)
        pts.push_back(q.coord(v));
    std::map<RationalVector, int, LexLess> midpoint_count;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            ++midpoint_count[pts[a] + pts[b]];
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            if (q.root_parallel(pts[a] - pts[b]))
                continue;
            if (midpoint_count[pts[a] + pts[b]] > 1)
                continue;
            if (is_edge(pts, a, b))
                return {false, std::make_pair(cell[a], cell[b])};
        }
    return {};
}

struct ExchangeCheck {
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> exchange_less;
};

/// First root (in canonical order) whose mirror strictly separates a and b
/// with both reflections inside `in`.
inline std::optional<std::size_t> exchange_root(const MinusculeQuotient& q, const PointSet& in, std::size_t a,
                                                std::size_t b) {
    for (std::size_t r = 0; r < q.roots().size(); ++r) {
        if (!q.separates(r, a, b))
            continue;
        auto sa = q.reflect_vertex(r, a);
        auto sb = q.reflect_vertex(r, b);
        if (sa && sb && in.test(*sa) && in.test(*sb))
            return r;
    }
    return std::nullopt;
}

/// For every pair A, B in the cell some mirror strictly separates them with
/// s_alpha(A) and s_alpha(B) both in the cell.
inline ExchangeCheck is_strong_matroid(const MinusculeQuotient& q, const std::vector<std::size_t>& cell) {
    if (cell.empty())
        throw std::invalid_argument("is_strong_matroid: empty cell");
    PointSet in(q.size());
    for (auto v : cell)
        in.set(v);
    for (std::size_t x = 0; x < cell.size(); ++x)
        for (std::size_t y = x + 1; y < cell.size(); ++y)
            if (!exchange_root(q, in, cell[x], cell[y]))
                return {false, std::make_pair(cell[x], cell[y])};
    return {};
}

inline CellReport report_cell(const MinusculeQuotient& q, const Cell& cell) {
    CellReport r;
    r.cell = cell;
    auto e = is_coxeter_matroid(q, cell.vertices);
    r.is_coxeter_matroid = e.ok;
    r.bad_edge = e.bad_edge;
    auto s = is_strong_matroid(q, cell.vertices);
    r.is_strong_matroid = s.ok;
    r.exchange_less = s.exchange_less;
    return r;
}

enum class SubdivisionClass { strong_matroidal, matroidal, neither };

inline std::string to_string(SubdivisionClass c) {
    switch (c) {
    case SubdivisionClass::strong_matroidal: return "strong_matroidal";
    case SubdivisionClass::matroidal: return "matroidal";
    case SubdivisionClass::neither: return "neither";
    }
    return "?";
}

struct Classification {
    Subdivision subdivision;
    std::vector<CellReport> reports;
    SubdivisionClass summary = SubdivisionClass::strong_matroidal;
};

inline Classification classify(const QuotientPtr& q, const HeightFunction& mu) {
    Classification c;
    c.subdivision = regular_subdivision(q, mu);
    bool all_cox = true, all_strong = true;
    for (const auto& cell : c.subdivision.cells) {
        c.reports.push_back(report_cell(*q, cell));
        all_cox = all_cox && c.reports.back().is_coxeter_matroid;
        all_strong = all_strong && c.reports.back().is_strong_matroid;
    }
    // strong exchange implies the Coxeter matroid property, so report the
    // weaker class only when every cell has it
    c.summary = all_strong && all_cox ? SubdivisionClass::strong_matroidal
                : all_cox             ? SubdivisionClass::matroidal
                                      : SubdivisionClass::neither;
    return c;
}

/// Whether a pair of cell points is antipodal within the whole quotient.
inline bool has_antipodal_pair(const MinusculeQuotient& q, const std::vector<std::size_t>& cell) {
    for (auto v : cell) {
        auto a = q.antipode(v);
        if (a && std::binary_search(cell.begin(), cell.end(), *a))
            return true;
    }
    return false;
}

} // namespace coxdr
