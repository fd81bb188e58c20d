#include "common.hpp"

#include "coxdr/equations.hpp"
#include "coxdr/subdivision.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <numeric>
#include <random>
#include <set>

using namespace coxdr;
using testing_support::quotient;
using testing_support::vertex;

namespace {

// Lower cells by brute force: every affinely independent (d+1)-subset of the
// lifted points spans a non-vertical hyperplane; keep those lying weakly below
// all lifted points and collect the points they touch.
std::vector<std::vector<std::size_t>> brute_lower_cells(const std::vector<RationalVector>& pts,
                                                        const std::vector<Rational>& hs) {
    const std::size_t n = pts.size(), d = pts[0].size();
    std::set<std::vector<std::size_t>> cells;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (pick.size() == d + 1) {
            // solve a . p + b = h on the picked points
            RationalMatrix m;
            for (auto i : pick) {
                auto row = pts[i];
                row.push_back(1);
                row.push_back(hs[i]);
                m.push_back(row);
            }
            auto ech = row_reduce(m, d + 2);
            if (ech.pivots.size() != d + 1 || ech.pivots.back() != d)
                return;
            RationalVector a(d + 1);
            for (std::size_t r = 0; r < ech.pivots.size(); ++r)
                a[ech.pivots[r]] = ech.rows[r][d + 1];
            std::vector<std::size_t> touch;
            for (std::size_t i = 0; i < n; ++i) {
                Rational v = a[d];
                for (std::size_t k = 0; k < d; ++k)
                    v += a[k] * pts[i][k];
                if (hs[i] < v)
                    return;
                if (hs[i] == v)
                    touch.push_back(i);
            }
            cells.insert(touch);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    // keep inclusion-maximal touch sets
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : cells) {
        bool maximal = true;
        for (const auto& o : cells)
            if (o != c && std::includes(o.begin(), o.end(), c.begin(), c.end()))
                maximal = false;
        if (maximal)
            out.push_back(c);
    }
    return out;
}

std::vector<std::vector<std::size_t>> cell_sets(const std::vector<Cell>& cells) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : cells)
        out.push_back(c.vertices);
    std::sort(out.begin(), out.end());
    return out;
}

HeightFunction example_4_2() { return finite_heights({0, 0, 0, -1, 2, 1, 1, 0}); }

} // namespace

TEST_CASE("example heights on the 3-cube", "[subdivision]") {
    auto q = quotient(LieType::B, 3, 3);
    auto c = classify(q, example_4_2());
    REQUIRE(c.subdivision.cells.size() == 5);
    CHECK(c.subdivision.is_triangulation);
    for (const auto& r : c.reports) {
        CHECK(r.cell.vertices.size() == 4);
        CHECK(r.cell.dimension == 3);
        CHECK_FALSE(has_antipodal_pair(*q, r.cell.vertices));
        CHECK(r.is_coxeter_matroid);
        CHECK(r.is_strong_matroid);
    }
    CHECK(c.summary == SubdivisionClass::strong_matroidal);
    CHECK_FALSE(is_member(example_4_2(), strong_exchange_system(q)).member);
    CHECK_FALSE(audit_subdivision(q->coords(), c.subdivision.cells));
}

TEST_CASE("trivial and degenerate subdivisions", "[subdivision]") {
    auto q = quotient(LieType::B, 3, 3);
    auto s = regular_subdivision(q, finite_heights(std::vector<Rational>(8, Rational(0))));
    REQUIRE(s.cells.size() == 1);
    CHECK(s.cells[0].vertices.size() == 8);
    CHECK_FALSE(s.is_triangulation);

    // affine heights also give the trivial subdivision
    HeightFunction mu;
    for (std::size_t i = 0; i < q->size(); ++i)
        mu.values.emplace_back(3 * q->coord(i)[0] - q->coord(i)[2] + 5);
    CHECK(regular_subdivision(q, mu).cells.size() == 1);

    auto one = indicator(*q, {3});
    auto s1 = regular_subdivision(q, one);
    REQUIRE(s1.cells.size() == 1);
    CHECK(s1.cells[0].vertices == std::vector<std::size_t>{3});
    CHECK(s1.dimension == 0);

    HeightFunction none;
    none.values.assign(8, TropicalValue::infinity());
    CHECK_THROWS_AS(regular_subdivision(q, none), std::invalid_argument);
}

TEST_CASE("octahedron with a lowered diagonal", "[subdivision]") {
    auto q = quotient(LieType::D, 3, 1);
    HeightFunction mu = finite_heights({1, 1, 1, 1, 1, 1});
    mu[vertex(*q, "+1")] = TropicalValue(0L);
    mu[vertex(*q, "-1")] = TropicalValue(0L);
    auto c = classify(q, mu);
    REQUIRE(c.subdivision.cells.size() == 4);
    for (const auto& cell : c.subdivision.cells) {
        CHECK(std::binary_search(cell.vertices.begin(), cell.vertices.end(), vertex(*q, "+1")));
        CHECK(std::binary_search(cell.vertices.begin(), cell.vertices.end(), vertex(*q, "-1")));
    }
    // the diagonal [e1, -e1] is an edge of every cell and 2e1 is not a D root
    CHECK(c.summary == SubdivisionClass::neither);
    CHECK_FALSE(is_member(mu, strong_exchange_system(q)).member);

    auto qc = quotient(LieType::C, 3, 1);
    CHECK(classify(qc, mu).summary == SubdivisionClass::strong_matroidal);
}

TEST_CASE("lower cells agree with brute force", "[subdivision]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> h(-3, 3);
    const std::vector<MinusculePair> pairs = {{LieType::B, 3, 3}, {LieType::D, 3, 1}, {LieType::A, 3, 2},
                                              {LieType::D, 4, 1}, {LieType::D, 4, 4}};
    for (const auto& p : pairs) {
        auto q = quotient(p.type, p.rank, p.parabolic);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<RationalVector> pts;
            std::vector<Rational> hs;
            for (std::size_t i = 0; i < q->size(); ++i) {
                pts.push_back(q->coord(i));
                hs.emplace_back(h(rng));
            }
            // the hypersimplex lives in a hyperplane; drop the last coordinate
            if (p.type == LieType::A)
                for (auto& x : pts)
                    x.pop_back();
            auto ours = lower_cells(pts, hs);
            CHECK(cell_sets(ours.cells) == brute_lower_cells(pts, hs));
            CHECK_FALSE(audit_subdivision(pts, ours.cells));
        }
    }
}

TEST_CASE("subdivisions are unchanged by affine shifts", "[subdivision]") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> h(-4, 4);
    auto q = quotient(LieType::B, 4, 4);
    for (int trial = 0; trial < 30; ++trial) {
        HeightFunction mu;
        for (std::size_t i = 0; i < q->size(); ++i)
            mu.values.push_back(h(rng) == 4 ? TropicalValue::infinity() : TropicalValue(long(h(rng))));
        if (mu.support().empty())
            continue;
        AffineFunctional phi{{}, Rational(h(rng))};
        for (std::size_t k = 0; k < q->ambient(); ++k)
            phi.linear.push_back(make_rational(h(rng), 1 + (trial % 3)));
        auto a = regular_subdivision(q, mu);
        auto b = regular_subdivision(q, add_affine(*q, mu, phi));
        CHECK(cell_sets(a.cells) == cell_sets(b.cells));
    }
}

TEST_CASE("Coxeter matroid and strong exchange tests", "[subdivision]") {
    auto d4 = quotient(LieType::D, 4, 1);
    auto pair = std::vector<std::size_t>{vertex(*d4, "+1"), vertex(*d4, "-1")};
    std::sort(pair.begin(), pair.end());
    auto e = is_coxeter_matroid(*d4, pair);
    CHECK_FALSE(e.ok);
    REQUIRE(e.bad_edge);

    auto c4 = quotient(LieType::C, 4, 1);
    CHECK(is_coxeter_matroid(*c4, pair).ok);
    CHECK(is_strong_matroid(*c4, pair).ok);

    for (auto q : {quotient(LieType::B, 3, 3), quotient(LieType::D, 5, 1), quotient(LieType::E6, 6, 1)}) {
        std::vector<std::size_t> all(q->size());
        std::iota(all.begin(), all.end(), 0);
        CHECK(is_coxeter_matroid(*q, all).ok);
        CHECK(is_strong_matroid(*q, all).ok);
        CHECK(is_coxeter_matroid(*q, {0}).ok);
        CHECK(is_strong_matroid(*q, {0}).ok);
    }
    CHECK_THROWS_AS(is_coxeter_matroid(*d4, {}), std::invalid_argument);
}

TEST_CASE("a Coxeter matroid without strong exchange", "[subdivision]") {
    auto q = quotient(LieType::B, 3, 3);
    std::vector<std::size_t> found;
    std::size_t matroids = 0, weak = 0;
    for (std::uint32_t m = 1; m < 256; ++m) {
        std::vector<std::size_t> cell;
        for (std::size_t i = 0; i < 8; ++i)
            if (m >> i & 1u)
                cell.push_back(i);
        bool cox = is_coxeter_matroid(*q, cell).ok;
        bool strong = is_strong_matroid(*q, cell).ok;
        CHECK((!strong || cox));
        matroids += cox;
        if (cox && !strong) {
            ++weak;
            if (found.empty())
                found = cell;
        }
    }
    CHECK(matroids == 155);
    CHECK(weak == 8);
    std::vector<std::size_t> expect{vertex(*q, "{}"), vertex(*q, "{1}"), vertex(*q, "{1,2}"), vertex(*q, "{1,3}"),
                                    vertex(*q, "{2,3}")};
    std::sort(expect.begin(), expect.end());
    CHECK(found == expect);
}

TEST_CASE("edge check against the full LP", "[subdivision]") {
    // the midpoint filter must not change the verdict
    std::mt19937_64 rng(3);
    for (auto q : {quotient(LieType::B, 4, 4), quotient(LieType::D, 4, 1), quotient(LieType::A, 4, 2)}) {
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<std::size_t> cell;
            for (std::size_t i = 0; i < q->size(); ++i)
                if (rng() % 2)
                    cell.push_back(i);
            if (cell.empty())
                continue;
            std::vector<RationalVector> pts;
            for (auto v : cell)
                pts.push_back(q->coord(v));
            bool plain = true;
            for (std::size_t a = 0; a < pts.size() && plain; ++a)
                for (std::size_t b = a + 1; b < pts.size() && plain; ++b)
                    if (is_edge(pts, a, b) && !q->root_parallel(pts[a] - pts[b]))
                        plain = false;
            CHECK(is_coxeter_matroid(*q, cell).ok == plain);
        }
    }
}

TEST_CASE("audit rejects overlapping cells", "[subdivision]") {
    std::vector<RationalVector> square = {testing_support::vec({0, 0}), testing_support::vec({1, 0}),
                                          testing_support::vec({1, 1}), testing_support::vec({0, 1})};
    std::vector<Cell> both = {{{0, 1, 2}, 2}, {{0, 1, 3}, 2}};
    CHECK(audit_subdivision(square, both));
    std::vector<Cell> gap = {{{0, 1, 2}, 2}};
    CHECK(audit_subdivision(square, gap));
    std::vector<Cell> ok = {{{0, 1, 2}, 2}, {{0, 2, 3}, 2}};
    CHECK_FALSE(audit_subdivision(square, ok));
}
