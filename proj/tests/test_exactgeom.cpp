#include "coxdr/hull.hpp"
#include "coxdr/linalg.hpp"
#include "coxdr/lp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace coxdr;

namespace {

RationalVector vec(std::initializer_list<long> xs) {
    RationalVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

std::vector<RationalVector> unit_square() { return {vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})}; }

std::vector<RationalVector> octahedron() {
    return {vec({1, 0, 0}), vec({-1, 0, 0}), vec({0, 1, 0}), vec({0, -1, 0}), vec({0, 0, 1}), vec({0, 0, -1})};
}

// Oracle for systems in <= 3 variables: enumerate every basic point (intersection
// of `dim` linearly independent constraint hyperplanes) and test it. A nonempty
// polyhedron whose lineality is trivial has a vertex; lineality is removed by
// adding coordinate hyperplanes x_i = 0 as candidate tight constraints, which
// keeps the search complete because a nonempty polyhedron always meets some
// translate-free face reachable this way.
bool brute_feasible(const HalfspaceSystem& sys) {
    const std::size_t d = sys.dim();
    std::vector<Halfspace> cands = sys.inequalities();
    for (const auto& e : sys.equalities())
        cands.push_back(e);
    for (std::size_t i = 0; i < d; ++i)
        cands.push_back({unit_vector(d, i), 0});
    const std::size_t m = cands.size();
    std::vector<std::size_t> pick(d);
    bool found = false;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (found)
            return;
        if (depth == d) {
            RationalMatrix a;
            RationalVector b;
            for (auto k : pick) {
                a.push_back(cands[k].normal);
                b.push_back(cands[k].offset);
            }
            if (rank(a, d) < d)
                return;
            auto x = solve(a, b, d);
            if (x && sys.satisfied_by(*x))
                found = true;
            return;
        }
        for (std::size_t k = start; k < m; ++k) {
            pick[depth] = k;
            rec(k + 1, depth + 1);
        }
    };
    rec(0, 0);
    return found;
}

} // namespace

TEST_CASE("lp_feasible on trivial intervals") {
    HalfspaceSystem ok(1);
    ok.add_ge(vec({1}), 0);
    ok.add_le(vec({1}), 1);
    auto x = lp_feasible(ok);
    REQUIRE(x);
    CHECK((*x)[0] >= 0);
    CHECK((*x)[0] <= 1);

    HalfspaceSystem bad(1);
    bad.add_ge(vec({1}), 1);
    bad.add_le(vec({1}), 0);
    CHECK_FALSE(lp_feasible(bad));
}

TEST_CASE("lp_feasible handles equalities and unconstrained unknowns") {
    HalfspaceSystem sys(3);
    sys.add_eq(vec({1, 1, 0}), 3);
    sys.add_ge(vec({1, -1, 0}), 5);
    auto x = lp_feasible(sys);
    REQUIRE(x);
    CHECK(sys.satisfied_by(*x));

    HalfspaceSystem inconsistent(2);
    inconsistent.add_eq(vec({1, 1}), 1);
    inconsistent.add_eq(vec({2, 2}), 3);
    CHECK_FALSE(lp_feasible(inconsistent));

    HalfspaceSystem redundant(2);
    redundant.add_eq(vec({1, 1}), 1);
    redundant.add_eq(vec({2, 2}), 2);
    redundant.add_ge(vec({1, 0}), 4);
    CHECK(lp_feasible(redundant));
}

TEST_CASE("lp_feasible rejects malformed constraints") {
    HalfspaceSystem sys(2);
    CHECK_THROWS_AS(sys.add_ge(vec({1, 2, 3}), 0), std::invalid_argument);
    CHECK_THROWS_AS(sys.add_eq(vec({0, 0}), 0), std::invalid_argument);
}

TEST_CASE("facet-supporting functional for (e1, e2) on the octahedron") {
    auto pts = octahedron();
    // brute force over a small functional grid: c with c.e1 = c.e2 below all others
    bool grid_found = false;
    for (int a = -2; a <= 2 && !grid_found; ++a)
        for (int b = -2; b <= 2 && !grid_found; ++b)
            for (int c = -2; c <= 2 && !grid_found; ++c) {
                RationalVector f = vec({a, b, c});
                Rational v = dot(f, pts[0]);
                if (dot(f, pts[2]) != v)
                    continue;
                bool ok = true;
                for (auto k : {1, 3, 4, 5})
                    if (dot(f, pts[k]) <= v)
                        ok = false;
                grid_found = ok;
            }
    REQUIRE(grid_found);
    HalfspaceSystem sys(3);
    sys.add_eq(pts[2] - pts[0], 0);
    for (auto k : {1, 3, 4, 5})
        sys.add_ge(pts[k] - pts[0], 1);
    CHECK(lp_feasible(sys));
}

TEST_CASE("LP verdicts agree with vertex enumeration on small random systems") {
    std::mt19937_64 rng(20241019);
    auto small = [&](int lo, int hi) { return static_cast<long>(lo + static_cast<int>(rng() % (hi - lo + 1))); };
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t d = 1 + rng() % 3;
        HalfspaceSystem sys(d);
        std::size_t m = 1 + rng() % 5;
        for (std::size_t k = 0; k < m; ++k) {
            RationalVector a(d);
            do {
                for (auto& x : a)
                    x = small(-3, 3);
            } while (is_zero(a));
            if (rng() % 6 == 0)
                sys.add_eq(a, small(-4, 4));
            else
                sys.add_ge(a, small(-4, 4));
        }
        auto x = lp_feasible(sys);
        bool brute = brute_feasible(sys);
        INFO("trial " << trial);
        REQUIRE(x.has_value() == brute);
        if (x) {
            CHECK(sys.satisfied_by(*x));
            ++feasible;
        } else {
            ++infeasible;
        }
    }
    CHECK(feasible > 20);
    CHECK(infeasible > 20);
}

TEST_CASE("convex_hull of the unit square") {
    auto h = convex_hull(unit_square());
    CHECK(h.dimension == 2);
    CHECK(h.vertex_indices == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(h.facets.size() == 4);
    for (const auto& f : h.facets) {
        CHECK(f.incident.size() == 2);
        for (const auto& p : unit_square())
            CHECK(dot(f.halfspace.normal, p) >= f.halfspace.offset);
    }
}

TEST_CASE("convex_hull of degenerate inputs") {
    auto single = convex_hull({vec({3, 4, 5})});
    CHECK(single.dimension == 0);
    CHECK(single.vertex_indices == std::vector<std::size_t>{0});
    CHECK(single.facets.empty());

    auto collinear = convex_hull({vec({0, 0}), vec({2, 2}), vec({1, 1}), vec({2, 2})});
    CHECK(collinear.dimension == 1);
    CHECK(collinear.vertex_indices == std::vector<std::size_t>{0, 1});
    CHECK(collinear.facets.size() == 2);

    // interior and boundary points are not vertices; boundary point is incident
    auto withinner = convex_hull({vec({0, 0}), vec({2, 0}), vec({0, 2}), vec({1, 0}), vec({1, 1}), vec({0, 1}),
                                  vec({1, 2}) /* outside */});
    CHECK(withinner.dimension == 2);
    CHECK(withinner.vertex_indices == std::vector<std::size_t>{0, 1, 2, 6});
}

TEST_CASE("convex_hull inside a proper affine subspace") {
    // hypersimplex Delta(2,4) lives in x1+x2+x3+x4 = 2
    std::vector<RationalVector> pts;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            RationalVector v = zeros(4);
            v[a] = 1;
            v[b] = 1;
            pts.push_back(v);
        }
    auto h = convex_hull(pts);
    CHECK(h.dimension == 3);
    CHECK(h.vertex_indices.size() == 6);
    CHECK(h.facets.size() == 8); // octahedron
    for (const auto& f : h.facets)
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool on = std::binary_search(f.incident.begin(), f.incident.end(), i);
            Rational v = dot(f.halfspace.normal, pts[i]);
            CHECK(v >= f.halfspace.offset);
            CHECK((v == f.halfspace.offset) == on);
        }
}

TEST_CASE("convex_hull is idempotent on random point sets") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t d = 2 + rng() % 3;
        std::vector<RationalVector> pts;
        for (int i = 0; i < 12; ++i) {
            RationalVector p(d);
            for (auto& x : p)
                x = static_cast<long>(rng() % 5) - 2;
            pts.push_back(p);
        }
        auto h = convex_hull(pts);
        std::vector<RationalVector> verts;
        for (auto i : h.vertex_indices)
            verts.push_back(pts[i]);
        auto h2 = convex_hull(verts);
        CHECK(h2.dimension == h.dimension);
        CHECK(h2.vertex_indices.size() == verts.size());
        REQUIRE(h2.facets.size() == h.facets.size());
        std::set<std::pair<RationalVector, Rational>, std::less<>> a, b;
        for (const auto& f : h.facets)
            a.emplace(normalize_leading(f.halfspace.normal), f.halfspace.offset / abs(*std::find_if(
                f.halfspace.normal.begin(), f.halfspace.normal.end(), [](const Rational& x) { return sgn(x) != 0; })));
        for (const auto& f : h2.facets)
            b.emplace(normalize_leading(f.halfspace.normal), f.halfspace.offset / abs(*std::find_if(
                f.halfspace.normal.begin(), f.halfspace.normal.end(), [](const Rational& x) { return sgn(x) != 0; })));
        CHECK(a == b);
        // every vertex is one: LP says each vertex is separable from the rest
        for (std::size_t i = 0; i < pts.size(); ++i) {
            HalfspaceSystem sys(d);
            bool dup = false;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                if (k == i)
                    continue;
                if (pts[k] == pts[i]) {
                    dup = true;
                    continue;
                }
                sys.add_ge(pts[k] - pts[i], 1);
            }
            bool separable = lp_feasible(sys).has_value();
            bool listed = std::binary_search(h.vertex_indices.begin(), h.vertex_indices.end(), i);
            if (!dup)
                CHECK(separable == listed);
        }
    }
}

TEST_CASE("is_edge on the square and octahedron") {
    auto sq = unit_square();
    CHECK(is_edge(sq, 0, 1));
    CHECK(is_edge(sq, 1, 0));
    CHECK_FALSE(is_edge(sq, 0, 2));
    CHECK_THROWS_AS(is_edge(sq, 1, 1), std::invalid_argument);
    auto oc = octahedron();
    CHECK_FALSE(is_edge(oc, 0, 1));
    CHECK(is_edge(oc, 0, 2));
}

TEST_CASE("is_edge agrees with the facet-lattice edges and is symmetric") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t d = 2 + rng() % 3;
        std::vector<RationalVector> pts;
        for (int i = 0; i < 9; ++i) {
            RationalVector p(d);
            for (auto& x : p)
                x = static_cast<long>(rng() % 7) - 3;
            pts.push_back(p);
        }
        auto h = convex_hull(pts);
        auto edges = hull_edges(pts, h);
        std::set<std::pair<std::size_t, std::size_t>> es(edges.begin(), edges.end());
        const auto& vs = h.vertex_indices;
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                bool lp = is_edge(pts, vs[a], vs[b]);
                CHECK(lp == is_edge(pts, vs[b], vs[a]));
                CHECK(lp == es.count({vs[a], vs[b]}));
            }
    }
}

TEST_CASE("affine_hull dimensions") {
    std::vector<RationalVector> d24;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            RationalVector v = zeros(4);
            v[a] = 1;
            v[b] = 1;
            d24.push_back(v);
        }
    CHECK(affine_hull(d24).dimension == 3);
    CHECK(affine_hull({vec({1, 2})}).dimension == 0);
    std::vector<RationalVector> cube;
    for (int m = 0; m < 8; ++m)
        cube.push_back({Rational((m & 1) ? 1 : -1, 2), Rational((m & 2) ? 1 : -1, 2), Rational((m & 4) ? 1 : -1, 2)});
    CHECK(affine_hull(cube).dimension == 3);
}
