#include "common.hpp"

#include "coxdr/coxeter.hpp"
#include "coxdr/linalg.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace coxdr;
using testing_support::quotient;
using testing_support::root_index;
using testing_support::vec;
using testing_support::vertex;

namespace {

struct Golden {
    MinusculePair pair;
    std::size_t vertices, dimension, roots, edges;
    int diameter;
};

// Edge counts come from is_edge over all vertex pairs and are frozen here.
const std::vector<Golden> kGolden = {
    {{LieType::A, 3, 2}, 6, 3, 12, 12, 2},
    {{LieType::A, 4, 2}, 10, 4, 20, 30, 2},
    {{LieType::B, 3, 3}, 8, 3, 18, 12, 3},
    {{LieType::B, 4, 4}, 16, 4, 32, 32, 4},
    {{LieType::C, 3, 1}, 6, 3, 18, 12, 2},
    {{LieType::D, 3, 1}, 6, 3, 12, 12, 2},
    {{LieType::D, 4, 1}, 8, 4, 24, 24, 2},
    {{LieType::D, 4, 4}, 8, 4, 24, 24, 2},
    {{LieType::D, 5, 5}, 16, 5, 40, 80, 2},
    {{LieType::E6, 6, 1}, 27, 6, 72, 216, 2},
    {{LieType::E6, 6, 6}, 27, 6, 72, 216, 2},
    {{LieType::E7, 7, 7}, 56, 7, 126, 756, 3},
};

QuotientPtr get(const MinusculePair& p) { return quotient(p.type, p.rank, p.parabolic); }

} // namespace

TEST_CASE("quotient golden counts", "[coxeter]") {
    for (const auto& g : kGolden) {
        INFO(to_string(g.pair));
        auto q = get(g.pair);
        CHECK(q->size() == g.vertices);
        CHECK(q->dimension() == g.dimension);
        CHECK(q->roots().size() == g.roots);
        CHECK(q->edge_count() == g.edges);
        CHECK(q->diameter() == g.diameter);
        CHECK(affine_hull(q->coords()).dimension == g.dimension);
    }
}

TEST_CASE("hull dimension and vertex set agree with the quotient", "[coxeter]") {
    for (const auto& g : kGolden) {
        INFO(to_string(g.pair));
        auto q = get(g.pair);
        auto h = convex_hull(q->coords());
        CHECK(h.dimension == g.dimension);
        CHECK(h.vertex_indices.size() == q->size());
    }
}

TEST_CASE("orbit closure, centroid fixedness and root-parallel edges", "[coxeter]") {
    for (const auto& g : kGolden) {
        INFO(to_string(g.pair));
        auto q = get(g.pair);
        for (std::size_t r = 0; r < q->roots().size(); ++r) {
            CHECK(q->reflect(r, q->centroid()) == q->centroid());
            for (std::size_t v = 0; v < q->size(); ++v) {
                auto img = q->reflect_vertex(r, v);
                REQUIRE(img);
                CHECK(q->coord(*img) == q->reflect(r, q->coord(v)));
                CHECK(q->reflect_vertex(r, *img) == v);
            }
        }
        for (auto [i, j] : q->edges())
            CHECK(q->root_parallel(q->coord(i) - q->coord(j)));
    }
}

TEST_CASE("edges match the facet lattice on small quotients", "[coxeter]") {
    for (const auto& g : kGolden) {
        if (g.vertices > 16)
            continue;
        INFO(to_string(g.pair));
        auto q = get(g.pair);
        auto lattice = hull_edges(q->coords(), convex_hull(q->coords()));
        CHECK(lattice == q->edges());
    }
}

TEST_CASE("any two distinct vertices are separated by some mirror", "[coxeter]") {
    for (const auto& g : kGolden) {
        INFO(to_string(g.pair));
        auto q = get(g.pair);
        for (std::size_t i = 0; i < q->size(); ++i)
            for (std::size_t j = i + 1; j < q->size(); ++j) {
                bool found = false;
                for (std::size_t r = 0; r < q->roots().size() && !found; ++r)
                    found = q->separates(r, i, j);
                CHECK(found);
            }
    }
}

TEST_CASE("vertex orderings and labels", "[coxeter]") {
    auto b3 = quotient(LieType::B, 3, 3);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < b3->size(); ++i)
        labels.push_back(b3->label_str(i));
    CHECK(labels == std::vector<std::string>{"{}", "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"});
    CHECK(b3->coord(vertex(*b3, "{1,2}")) ==
          RationalVector{Rational(1, 2), Rational(1, 2), Rational(-1, 2)});

    auto d4 = quotient(LieType::D, 4, 1);
    CHECK(d4->label_str(0) == "+1");
    CHECK(d4->label_str(4) == "-1");
    CHECK(d4->coord(vertex(*d4, "-3")) == vec({0, 0, -1, 0}));

    auto a = quotient(LieType::A, 3, 2);
    for (std::size_t i = 0; i < a->size(); ++i)
        CHECK(std::get<Subset>(a->label(i)).bits != 0);
    CHECK(a->label_str(0) == "{1,2}");

    auto d5 = quotient(LieType::D, 5, 5);
    for (std::size_t i = 0; i < d5->size(); ++i)
        CHECK(std::popcount(std::get<Subset>(d5->label(i)).bits) % 2 == 0);

    auto e6 = quotient(LieType::E6, 6, 1);
    CHECK(e6->label_str(0) == "v0");
    CHECK(e6->index_of(parse_label("v26")) == 26u);
    for (std::size_t i = 0; i < e6->size(); ++i)
        CHECK(parse_label(e6->label_str(i)) == e6->label(i));
}

TEST_CASE("reflection and separation examples", "[coxeter]") {
    auto b3 = quotient(LieType::B, 3, 3);
    auto e3 = root_index(*b3, vec({0, 0, 1}));
    CHECK(b3->reflect_vertex(e3, vertex(*b3, "{1,2}")) == vertex(*b3, "{1,2,3}"));
    // set action A -> A xor {3}
    for (std::size_t v = 0; v < b3->size(); ++v) {
        auto bits = std::get<Subset>(b3->label(v)).bits;
        CHECK(b3->reflect_vertex(e3, v) == b3->index_of(CosetLabel{Subset{bits ^ 4u}}));
    }
    auto e1e2 = root_index(*b3, vec({1, 1, 0}));
    CHECK(b3->separates(e1e2, vertex(*b3, "{1,2}"), vertex(*b3, "{}")));
    // {1} lies on the mirror of e1 + e2
    CHECK(b3->side(e1e2, vertex(*b3, "{1}")) == 0);
    CHECK_FALSE(b3->separates(e1e2, vertex(*b3, "{1}"), vertex(*b3, "{}")));
    CHECK(b3->reflect_vertex(e1e2, vertex(*b3, "{1}")) == vertex(*b3, "{1}"));

    auto d4 = quotient(LieType::D, 4, 1);
    auto r = root_index(*d4, vec({1, -1, 0, 0}));
    CHECK(d4->reflect_vertex(r, vertex(*d4, "+1")) == vertex(*d4, "+2"));
    CHECK(d4->separates(r, vertex(*d4, "+1"), vertex(*d4, "+2")));
    CHECK_THROWS_AS(d4->separates(r, 0, 0), std::invalid_argument);
}

TEST_CASE("cross polytope antipodes and distances", "[coxeter]") {
    for (int n : {3, 4, 5}) {
        auto q = quotient(LieType::D, n, 1);
        for (int i = 1; i <= n; ++i) {
            auto p = vertex(*q, "+" + std::to_string(i));
            auto m = vertex(*q, "-" + std::to_string(i));
            CHECK(q->antipode(p) == m);
            CHECK(q->graph_distance(p, m) == 2);
            CHECK_FALSE(q->adjacent(p, m));
        }
    }
    // 2e_i is a C root, so the C cross polytope has the same edge graph but
    // the diagonal is root-parallel
    auto c = quotient(LieType::C, 3, 1);
    CHECK(c->root_parallel(c->coord(vertex(*c, "+1")) - c->coord(vertex(*c, "-1"))));
    auto d = quotient(LieType::D, 3, 1);
    CHECK_FALSE(d->root_parallel(d->coord(vertex(*d, "+1")) - d->coord(vertex(*d, "-1"))));
}

TEST_CASE("E6 structure", "[coxeter][e6]") {
    for (int p : {1, 6}) {
        auto q = quotient(LieType::E6, 6, p);
        std::size_t d2 = 0;
        for (std::size_t i = 0; i < q->size(); ++i) {
            CHECK(q->neighbors()[i].size() == 16);
            CHECK_FALSE(q->antipode(i));
            for (std::size_t j = i + 1; j < q->size(); ++j)
                d2 += q->graph_distance(i, j) == 2;
        }
        CHECK(d2 == 135);
        auto faces = q->cross_polytope_faces();
        REQUIRE(faces.size() == 27);
        std::map<std::pair<std::size_t, std::size_t>, int> pair_faces;
        for (const auto& f : faces) {
            CHECK(f.vertices.size() == 10);
            CHECK(f.antipode_pairs.size() == 5);
            std::vector<RationalVector> pts;
            for (auto v : f.vertices)
                pts.push_back(q->coord(v));
            CHECK(affine_hull(pts).dimension == 5);
            for (const auto& pr : f.antipode_pairs) {
                CHECK(q->graph_distance(pr.first, pr.second) == 2);
                ++pair_faces[pr];
            }
        }
        CHECK(pair_faces.size() == 135);
        for (const auto& [pr, k] : pair_faces)
            CHECK(k == 1);
    }
}

TEST_CASE("E7 structure", "[coxeter][e7]") {
    auto q = quotient(LieType::E7, 7, 7);
    std::size_t d2 = 0, d3 = 0, with_antipode = 0;
    for (std::size_t i = 0; i < q->size(); ++i) {
        CHECK(q->neighbors()[i].size() == 27);
        auto a = q->antipode(i);
        if (a) {
            ++with_antipode;
            CHECK(q->graph_distance(i, *a) == 3);
        }
        for (std::size_t j = i + 1; j < q->size(); ++j) {
            d2 += q->graph_distance(i, j) == 2;
            if (q->graph_distance(i, j) == 3) {
                ++d3;
                CHECK(q->antipode(i) == j);
            }
        }
    }
    CHECK(with_antipode == 56);
    CHECK(d3 == 28);
    CHECK(d2 == 756);
    auto faces = q->cross_polytope_faces();
    REQUIRE(faces.size() == 126);
    for (const auto& f : faces) {
        CHECK(f.antipode_pairs.size() == 6);
        std::vector<RationalVector> pts;
        for (auto v : f.vertices)
            pts.push_back(q->coord(v));
        CHECK(affine_hull(pts).dimension == 6);
    }
}

TEST_CASE("E7 accepts P1 as an alias", "[coxeter][e7]") {
    CHECK_NOTHROW(validate({LieType::E7, 7, 1}));
}

TEST_CASE("invalid pairs are rejected", "[coxeter]") {
    CHECK_THROWS_AS(validate({LieType::B, 3, 1}), std::invalid_argument);
    CHECK_THROWS_AS(validate({LieType::C, 3, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate({LieType::D, 5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate({LieType::E6, 6, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate({LieType::A, 3, 4}), std::invalid_argument);
    try {
        validate({LieType::D, 5, 4});
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("use P_n") != std::string::npos);
    }
    try {
        validate({LieType::B, 3, 2});
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("valid minuscule pairs") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_lie_type("F4"), std::invalid_argument);
}
