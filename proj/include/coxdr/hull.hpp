#pragma once

#include "coxdr/linalg.hpp"
#include "coxdr/lp.hpp"
#include "coxdr/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace coxdr {

using PointSet = boost::dynamic_bitset<>;

inline std::vector<std::size_t> members(const PointSet& s) {
    std::vector<std::size_t> out;
    for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i))
        out.push_back(i);
    return out;
}

struct HullFacet {
    Halfspace halfspace;              // ambient coordinates; valid on the affine hull
    std::vector<std::size_t> incident; // input indices with equality, sorted
};

struct HullResult {
    std::vector<std::size_t> vertex_indices; // first occurrence of each vertex, sorted
    std::vector<HullFacet> facets;
    std::size_t dimension = 0;
};

namespace detail {

// Repeated points are merged; `rep[i]` is the index of the unique point for input i.
struct Deduplicated {
    std::vector<RationalVector> unique;
    std::vector<std::size_t> first; // input index of each unique point
    std::vector<std::size_t> rep;
};

inline Deduplicated deduplicate(const std::vector<RationalVector>& pts) {
    Deduplicated d;
    std::map<RationalVector, std::size_t, LexLess> seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto [it, inserted] = seen.emplace(pts[i], d.unique.size());
        if (inserted) {
            d.unique.push_back(pts[i]);
            d.first.push_back(i);
        }
        d.rep.push_back(it->second);
    }
    return d;
}

struct BBFacet {
    RationalVector normal; // inward: normal . x >= offset on the hull
    Rational offset;
    PointSet on;
};

// Hyperplane through the given points (affinely spanning a hyperplane of R^k),
// oriented so `inside` is strictly on the positive side.
inline std::optional<BBFacet> hyperplane_through(const std::vector<RationalVector>& pts,
                                                 const RationalVector& inside, std::size_t k) {
    RationalMatrix diffs;
    for (std::size_t i = 1; i < pts.size(); ++i)
        diffs.push_back(pts[i] - pts[0]);
    auto ns = nullspace(diffs, k);
    if (ns.size() != 1)
        return std::nullopt;
    BBFacet f;
    f.normal = normalize_leading(ns[0]);
    f.offset = dot(f.normal, pts[0]);
    Rational side = dot(f.normal, inside) - f.offset;
    if (sgn(side) == 0)
        throw std::logic_error("convex_hull: interior point on a facet hyperplane");
    if (sgn(side) < 0) {
        for (auto& x : f.normal)
            x = -x;
        f.offset = -f.offset;
    }
    return f;
}

// Beneath-beyond over full-dimensional points in R^k (k >= 1).
inline std::vector<BBFacet> beneath_beyond(const std::vector<RationalVector>& pts, std::size_t k) {
    const std::size_t n = pts.size();
    // initial simplex: greedy affinely independent choice in index order
    std::vector<std::size_t> simplex{0};
    RationalMatrix dirs;
    for (std::size_t i = 1; i < n && simplex.size() < k + 1; ++i) {
        auto trial = dirs;
        trial.push_back(pts[i] - pts[0]);
        if (rank(trial, k) == trial.size()) {
            dirs = std::move(trial);
            simplex.push_back(i);
        }
    }
    if (simplex.size() != k + 1)
        throw std::logic_error("convex_hull: points not full-dimensional after projection");
    RationalVector interior = zeros(k);
    for (auto i : simplex)
        interior = interior + pts[i];
    interior = Rational(1, static_cast<unsigned long>(k + 1)) * interior;

    std::vector<bool> processed(n, false);
    for (auto i : simplex)
        processed[i] = true;

    auto points_on = [&](const BBFacet& f) {
        PointSet on(n);
        for (std::size_t i = 0; i < n; ++i)
            if (processed[i] && dot(f.normal, pts[i]) == f.offset)
                on.set(i);
        return on;
    };

    std::vector<BBFacet> facets;
    for (std::size_t omit = 0; omit < simplex.size(); ++omit) {
        std::vector<RationalVector> face;
        for (std::size_t j = 0; j < simplex.size(); ++j)
            if (j != omit)
                face.push_back(pts[simplex[j]]);
        auto f = hyperplane_through(face, interior, k);
        if (!f)
            throw std::logic_error("convex_hull: degenerate initial simplex");
        f->on = points_on(*f);
        facets.push_back(std::move(*f));
    }

    for (std::size_t p = 0; p < n; ++p) {
        if (processed[p])
            continue;
        std::vector<int> side(facets.size());
        bool any_visible = false;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            side[f] = sgn(dot(facets[f].normal, pts[p]) - facets[f].offset);
            if (side[f] < 0)
                any_visible = true;
        }
        processed[p] = true;
        if (!any_visible) {
            for (std::size_t f = 0; f < facets.size(); ++f)
                if (side[f] == 0)
                    facets[f].on.set(p);
            continue;
        }
        // Ridges of a facet F are the inclusion-maximal sets F & G over G != F.
        std::map<RationalVector, BBFacet, LexLess> fresh;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (side[f] >= 0)
                continue;
            std::vector<std::pair<PointSet, std::size_t>> cuts;
            for (std::size_t g = 0; g < facets.size(); ++g) {
                if (g == f)
                    continue;
                cuts.emplace_back(facets[f].on & facets[g].on, g);
            }
            for (std::size_t a = 0; a < cuts.size(); ++a) {
                const auto g = cuts[a].second;
                if (side[g] < 0 || side[g] == 0)
                    continue;
                bool maximal = true;
                for (std::size_t b = 0; b < cuts.size() && maximal; ++b)
                    if (b != a && cuts[a].first.is_proper_subset_of(cuts[b].first))
                        maximal = false;
                if (!maximal)
                    continue;
                std::vector<RationalVector> through{pts[p]};
                for (auto i : members(cuts[a].first))
                    through.push_back(pts[i]);
                auto nf = hyperplane_through(through, interior, k);
                if (!nf)
                    throw std::logic_error("convex_hull: horizon ridge is not a ridge");
                auto key = nf->normal;
                key.push_back(nf->offset);
                fresh.emplace(std::move(key), std::move(*nf));
            }
        }
        std::vector<BBFacet> next;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (side[f] < 0)
                continue;
            if (side[f] == 0)
                facets[f].on.set(p);
            next.push_back(std::move(facets[f]));
        }
        for (auto& [key, f] : fresh) {
            f.on = points_on(f);
            next.push_back(std::move(f));
        }
        facets = std::move(next);
    }
    return facets;
}

} // namespace detail

/// Convex hull of a finite point set, computed inside the affine hull of the
/// input. Lower-dimensional inputs give lower-dimensional results; a single
/// point has dimension 0 and no facets.
inline HullResult convex_hull(const std::vector<RationalVector>& points) {
    if (points.empty())
        throw std::invalid_argument("convex_hull: empty input");
    auto dd = detail::deduplicate(points);
    auto ah = affine_hull(dd.unique);
    HullResult out;
    out.dimension = ah.dimension;
    const std::size_t ambient = points.front().size();
    if (ah.dimension == 0) {
        out.vertex_indices = {dd.first[0]};
        return out;
    }
    std::vector<RationalVector> proj;
    for (const auto& p : dd.unique)
        proj.push_back(project(p, ah.pivots));
    auto facets = detail::beneath_beyond(proj, ah.dimension);

    // expand unique indices back to input indices
    std::vector<std::vector<std::size_t>> copies(dd.unique.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        copies[dd.rep[i]].push_back(i);
    for (const auto& f : facets) {
        HullFacet hf;
        hf.halfspace.normal = zeros(ambient);
        for (std::size_t c = 0; c < ah.pivots.size(); ++c)
            hf.halfspace.normal[ah.pivots[c]] = f.normal[c];
        hf.halfspace.offset = f.offset;
        for (auto u : members(f.on))
            for (auto i : copies[u])
                hf.incident.push_back(i);
        std::sort(hf.incident.begin(), hf.incident.end());
        out.facets.push_back(std::move(hf));
    }
    std::sort(out.facets.begin(), out.facets.end(),
              [](const HullFacet& a, const HullFacet& b) { return a.incident < b.incident; });

    // a point is a vertex iff the facets through it meet only in it
    const std::size_t u = dd.unique.size();
    for (std::size_t i = 0; i < u; ++i) {
        PointSet meet(u);
        meet.set();
        bool on_any = false;
        for (const auto& f : facets)
            if (f.on.test(i)) {
                meet &= f.on;
                on_any = true;
            }
        if (on_any && meet.count() == 1)
            out.vertex_indices.push_back(dd.first[i]);
    }
    std::sort(out.vertex_indices.begin(), out.vertex_indices.end());
    return out;
}

/// Whether [p_i, p_j] is an edge of conv(points): some linear functional is
/// minimized over the input exactly at {p_i, p_j}.
inline bool is_edge(const std::vector<RationalVector>& points, std::size_t i, std::size_t j) {
    if (i == j)
        throw std::invalid_argument("is_edge: identical endpoints");
    if (i >= points.size() || j >= points.size())
        throw std::out_of_range("is_edge: index out of range");
    const auto& pi = points[i];
    const auto& pj = points[j];
    if (pi == pj)
        return false;
    HalfspaceSystem sys(pi.size());
    sys.add_eq(pj - pi, 0);
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k] == pi || points[k] == pj)
            continue;
        sys.add_ge(points[k] - pi, 1);
    }
    return lp_feasible(sys).has_value();
}

/// Edges of conv(points) read off the facet lattice: {i,j} is an edge iff the
/// facets containing both meet in exactly {p_i, p_j}.
inline std::vector<std::pair<std::size_t, std::size_t>> hull_edges(const std::vector<RationalVector>& points,
                                                                   const HullResult& hull) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const auto& vs = hull.vertex_indices;
    const std::size_t n = points.size();
    std::vector<PointSet> on;
    for (const auto& f : hull.facets) {
        PointSet s(n);
        for (auto i : f.incident)
            s.set(i);
        on.push_back(std::move(s));
    }
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            PointSet meet(n);
            meet.set();
            for (const auto& s : on)
                if (s.test(vs[a]) && s.test(vs[b]))
                    meet &= s;
            std::size_t distinct = 0;
            for (auto k : members(meet))
                if (points[k] != points[vs[a]] && points[k] != points[vs[b]])
                    ++distinct;
            if (hull.dimension == 1 || distinct == 0)
                edges.emplace_back(vs[a], vs[b]);
        }
    return edges;
}

} // namespace coxdr
