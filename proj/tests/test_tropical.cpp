#include "common.hpp"

#include "coxdr/subdivision.hpp"
#include "coxdr/tropical.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

using namespace coxdr;
using testing_support::quotient;
using testing_support::vertex;

namespace {

HeightFunction random_heights(std::mt19937_64& rng, std::size_t n, int range, int inf_one_in) {
    std::uniform_int_distribution<int> h(-range, range);
    HeightFunction mu;
    for (std::size_t i = 0; i < n; ++i)
        mu.values.push_back(inf_one_in > 0 && rng() % inf_one_in == 0 ? TropicalValue::infinity()
                                                                        : TropicalValue(long(h(rng))));
    return mu;
}

} // namespace

TEST_CASE("tropical values", "[tropical]") {
    TropicalValue inf, two(2L), half(make_rational(1, 2));
    CHECK(inf.is_infinite());
    CHECK((two * half).value() == make_rational(5, 2));
    CHECK((two * inf).is_infinite());
    CHECK(half < two);
    CHECK(two < inf);
    CHECK(tmin(inf, two) == two);
    CHECK(parse_tropical("inf").is_infinite());
    CHECK(parse_tropical("-3/6").value() == make_rational(-1, 2));
    CHECK(parse_tropical("7").str() == "7");
    CHECK(inf.str() == "inf");
    CHECK_THROWS_AS(inf.value(), std::logic_error);
    CHECK_THROWS_AS(parse_tropical("x"), std::invalid_argument);
}

TEST_CASE("evaluating the B3 equation", "[tropical]") {
    auto q = quotient(LieType::B, 3, 3);
    auto sys = strong_exchange_system(q);
    const auto& f = sys.equations[0];
    auto mu = finite_heights({0, 0, 0, -1, 2, 1, 1, 0});
    auto e = evaluate(f, mu);
    CHECK(e.minimum == TropicalValue(0L));
    REQUIRE(e.argmin.size() == 1);
    auto m = f.monomials[e.argmin[0]];
    CHECK(m == Monomial{vertex(*q, "{}"), vertex(*q, "{1,2,3}")});
    CHECK_FALSE(satisfies(f, mu));
    auto verdict = is_member(mu, sys);
    CHECK_FALSE(verdict.member);
    REQUIRE(verdict.failing);
    CHECK(sys.equations[*verdict.failing].provenance == "({},{1,2,3})");

    auto zero = finite_heights(std::vector<Rational>(8, Rational(0)));
    CHECK(evaluate(f, zero).argmin.size() == 4);
    CHECK(is_member(zero, sys).member);

    HeightFunction none;
    none.values.assign(8, TropicalValue::infinity());
    auto ei = evaluate(f, none);
    CHECK(ei.minimum.is_infinite());
    CHECK(ei.argmin.size() == 4);
    CHECK(satisfies(f, none));
}

TEST_CASE("the B4 example with infinite heights", "[tropical]") {
    auto q = quotient(LieType::B, 4, 4);
    HeightFunction mu;
    mu.values.assign(q->size(), TropicalValue::infinity());
    mu[vertex(*q, "{}")] = TropicalValue(0L);
    mu[vertex(*q, "{1,2,3,4}")] = TropicalValue(0L);
    mu[vertex(*q, "{1,2}")] = TropicalValue(0L);
    mu[vertex(*q, "{3,4}")] = TropicalValue(1L);
    auto full = strong_exchange_system(q);
    auto verdict = is_member(mu, full);
    CHECK_FALSE(verdict.member);
    REQUIRE(verdict.failing);
    const auto& f = full.equations[*verdict.failing];
    CHECK(f.provenance == "({1},{2,3,4})");
    CHECK(full.index.at("({1},{2,3,4})") == *verdict.failing);
    CHECK(is_member(mu, equations_up_to(q, 3)).member);
}

TEST_CASE("type C has no constraints", "[tropical]") {
    std::mt19937_64 rng(1);
    for (int n : {3, 4, 5}) {
        auto q = quotient(LieType::C, n, 1);
        auto sys = strong_exchange_system(q);
        for (int i = 0; i < 50; ++i)
            CHECK(is_member(random_heights(rng, q->size(), 5, 8), sys).member);
    }
}

TEST_CASE("indicators", "[tropical]") {
    auto q = quotient(LieType::B, 3, 3);
    std::vector<std::size_t> all(8);
    std::iota(all.begin(), all.end(), 0);
    CHECK(indicator(*q, all) == finite_heights(std::vector<Rational>(8, Rational(0))));
    for (auto p : {MinusculePair{LieType::B, 4, 4}, MinusculePair{LieType::E6, 6, 1}, MinusculePair{LieType::D, 5, 5}}) {
        auto qq = quotient(p.type, p.rank, p.parabolic);
        auto sys = strong_exchange_system(qq);
        for (std::size_t v = 0; v < qq->size(); ++v)
            CHECK(is_member(indicator(*qq, {v}), sys).member);
    }
    CHECK_THROWS_AS(indicator(*q, {}), std::invalid_argument);
}

TEST_CASE("0/inf heights are members exactly on strong Coxeter matroids", "[tropical]") {
    for (auto p : {MinusculePair{LieType::B, 3, 3}, MinusculePair{LieType::D, 4, 1}, MinusculePair{LieType::D, 4, 4},
                   MinusculePair{LieType::A, 3, 2}, MinusculePair{LieType::C, 3, 1}}) {
        INFO(to_string(p));
        auto q = quotient(p.type, p.rank, p.parabolic);
        auto sys = strong_exchange_system(q);
        for (std::uint32_t m = 1; m < (1u << q->size()); ++m) {
            std::vector<std::size_t> cell;
            for (std::size_t i = 0; i < q->size(); ++i)
                if (m >> i & 1u)
                    cell.push_back(i);
            bool strong = is_strong_matroid(*q, cell).ok && is_coxeter_matroid(*q, cell).ok;
            CHECK(is_member(indicator(*q, cell), sys).member == strong);
        }
    }
}

TEST_CASE("affine shifts preserve argmin sets", "[tropical]") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> c(-5, 5);
    for (auto p : {MinusculePair{LieType::B, 4, 4}, MinusculePair{LieType::D, 5, 1}, MinusculePair{LieType::A, 4, 2},
                   MinusculePair{LieType::E6, 6, 1}, MinusculePair{LieType::E7, 7, 7}}) {
        INFO(to_string(p));
        auto q = quotient(p.type, p.rank, p.parabolic);
        auto sys = strong_exchange_system(q);
        for (int trial = 0; trial < 20; ++trial) {
            auto mu = random_heights(rng, q->size(), 4, 8);
            AffineFunctional phi{{}, Rational(c(rng))};
            for (std::size_t k = 0; k < q->ambient(); ++k)
                phi.linear.push_back(make_rational(c(rng), 1 + trial % 4));
            auto shifted = add_affine(*q, mu, phi);
            for (const auto& f : sys.equations)
                CHECK(evaluate(f, mu).argmin == evaluate(f, shifted).argmin);
            CHECK(is_member(mu, sys).member == is_member(shifted, sys).member);
        }
        auto mu = random_heights(rng, q->size(), 4, 8);
        CHECK(add_affine(*q, mu, {zeros(q->ambient()), 0}) == mu);
        CHECK_THROWS_AS(add_affine(*q, mu, {zeros(q->ambient() + 1), 0}), std::invalid_argument);
    }
}

TEST_CASE("bar embedding of heights", "[tropical]") {
    std::mt19937_64 rng(4);
    auto qb3 = quotient(LieType::B, 3, 3);
    auto qd4 = quotient(LieType::D, 4, 4);
    HeightFunction mu;
    mu.values.assign(8, TropicalValue::infinity());
    mu[vertex(*qb3, "{1,2}")] = TropicalValue(3L);
    mu[vertex(*qb3, "{1}")] = TropicalValue(5L);
    auto bar = embed_bn_to_dn1(*qb3, *qd4, mu);
    CHECK(bar[vertex(*qd4, "{1,2}")] == TropicalValue(3L));
    CHECK(bar[vertex(*qd4, "{1,4}")] == TropicalValue(5L));
    CHECK(bar.support().size() == 2);

    auto ex = finite_heights({0, 0, 0, -1, 2, 1, 1, 0});
    CHECK_FALSE(is_member(embed_bn_to_dn1(*qb3, *qd4, ex), strong_exchange_system(qd4)).member);

    for (int n : {3, 4}) {
        auto qb = quotient(LieType::B, n, n);
        auto qd = quotient(LieType::D, n + 1, n + 1);
        auto sb = strong_exchange_system(qb);
        auto sd = strong_exchange_system(qd);
        for (int trial = 0; trial < 200; ++trial) {
            auto h = random_heights(rng, qb->size(), 2, 8);
            CHECK(is_member(h, sb).member == is_member(embed_bn_to_dn1(*qb, *qd, h), sd).member);
        }
    }
    CHECK_THROWS_AS(embed_bn_to_dn1(*qb3, *quotient(LieType::D, 5, 5), ex), std::invalid_argument);
    CHECK_THROWS_AS(embed_bn_to_dn1(*qd4, *qd4, ex), std::invalid_argument);
}
