#include "doctest.h"
#include "pnpair/gf.hpp"

#include <random>
#include <set>

using namespace pnp;

namespace {

// multiplicative order by repeated multiplication, the brute-force oracle
std::uint64_t brute_order(const FieldTower& T, const TopElem& a) {
    TopElem x = a;
    std::uint64_t k = 1;
    while (x != T.one()) {
        x = T.mul(x, a);
        ++k;
    }
    return k;
}

// absolute trace as the sum of the km conjugates a^(p^i)
std::uint32_t brute_abs_trace(const FieldTower& T, const TopElem& a) {
    TopElem acc = T.zero(), x = a;
    for (unsigned i = 0; i < T.k() * T.m(); ++i) {
        acc = T.add(acc, x);
        x = T.pow(x, BigInt(T.p()));
    }
    REQUIRE(T.in_mid(acc));
    REQUIRE(acc.c[0] < T.p());
    return acc.c[0];
}

} // namespace

TEST_SUITE("gf") {

TEST_CASE("tower construction") {
    FieldTower a(7, 1, 7);
    CHECK(a.order() == 823543);
    FieldTower b(7, 2, 7);
    CHECK(b.q() == 49);
    CHECK(b.order() == ipow(49, 7));
    CHECK_FALSE(b.enumerable());
    FieldTower c(3, 1, 4);
    CHECK(c.size() == 81);
    FieldTower again(7, 2, 7);
    CHECK(again.ext_modulus() == b.ext_modulus());
    CHECK(again.mid().modulus() == b.mid().modulus());
    CHECK_THROWS_AS(FieldTower(6, 1, 2), Error);
    CHECK_THROWS_AS(FieldTower(7, 0, 2), Error);
    CHECK_THROWS_AS(FieldTower(7, 1, 0), Error);
    // smallest monic irreducible quadratic over F_7 is x^2+1
    CHECK(b.mid().modulus() == std::vector<std::uint32_t>{1, 0, 1});
}

TEST_CASE("field axioms on random elements") {
    for (auto [p, k, m] : {std::tuple{7u, 1u, 7u}, {3u, 2u, 3u}, {2u, 3u, 5u}, {7u, 2u, 7u}}) {
        FieldTower T(p, k, m);
        std::mt19937_64 rng(p * 100 + k * 10 + m);
        for (int i = 0; i < 300; ++i) {
            TopElem x = T.random(rng), y = T.random(rng), z = T.random(rng);
            CHECK(T.is_zero(T.add(x, T.neg(x))));
            CHECK(T.mul(x, T.add(y, z)) == T.add(T.mul(x, y), T.mul(x, z)));
            CHECK(T.mul(T.mul(x, y), z) == T.mul(x, T.mul(y, z)));
            if (T.is_zero(x)) continue;
            CHECK(T.mul(T.inv(x), x) == T.one());
            CHECK(T.pow(x, T.order() - 1) == T.one());
        }
        CHECK_THROWS_AS(T.inv(T.zero()), Error);
    }
}

TEST_CASE("inverse for 1000 random elements of F_{7^7}") {
    FieldTower T(7, 1, 7);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        TopElem x = T.random(rng);
        if (T.is_zero(x)) continue;
        REQUIRE(T.mul(T.inv(x), x) == T.one());
    }
}

TEST_CASE("trace") {
    FieldTower T(3, 1, 4);
    CHECK(T.trace_to_mid(T.zero()) == 0);
    for (std::uint32_t c = 0; c < 3; ++c) CHECK(T.trace_to_mid(T.embed(c)) == T.mid().mul(T.mid().from_int(4), c));
    std::vector<int> fiber(3, 0);
    for (std::uint64_t i = 0; i < T.size(); ++i) fiber[T.trace_to_mid(T.element(i))]++;
    for (int n : fiber) CHECK(n == 27);

    FieldTower U(7, 2, 3);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        TopElem x = U.random(rng);
        CHECK(U.abs_trace(x) == brute_abs_trace(U, x));
    }
}

TEST_CASE("norm") {
    FieldTower T(3, 1, 4);
    CHECK(T.norm_to_mid(T.one()) == 1);
    CHECK(T.norm_to_mid(T.zero()) == 0);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        TopElem x = T.random(rng), y = T.random(rng);
        CHECK(T.norm_to_mid(T.mul(x, y)) == T.mid().mul(T.norm_to_mid(x), T.norm_to_mid(y)));
    }
    for (std::uint64_t i = 1; i < T.size(); ++i) {
        TopElem x = T.element(i);
        if (T.is_primitive(x)) CHECK(T.mid().is_primitive(T.norm_to_mid(x)));
    }
}

TEST_CASE("primitive counts against brute-force orders") {
    for (auto [p, m, expect] : {std::tuple{3u, 4u, 32}, {7u, 2u, 16}}) {
        FieldTower T(p, 1, m);
        int count = 0, oracle = 0;
        const std::uint64_t n = T.size() - 1;
        for (std::uint64_t i = 1; i < T.size(); ++i) {
            TopElem x = T.element(i);
            count += T.is_primitive(x);
            oracle += brute_order(T, x) == n;
        }
        CHECK(count == expect);
        CHECK(oracle == expect);
    }
    FieldTower T(3, 1, 4);
    CHECK_FALSE(T.is_primitive(T.one()));
}

TEST_CASE("element index encoding") {
    FieldTower T(7, 2, 3);
    CHECK(T.is_zero(T.element(0)));
    CHECK(T.element(1) == T.one());
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t idx = rng() % T.size();
        REQUIRE(T.index(T.element(idx)) == idx);
    }
    CHECK_THROWS_AS(T.element(T.size()), Error);
    CHECK_THROWS_AS(T.element_big(T.order()), Error);
    // constant coefficient is the least-significant digit
    CHECK(T.element(49) == T.t());
    CHECK(T.element(7) == T.embed(T.mid().generator_u()));
}

TEST_CASE("Frobenius") {
    FieldTower T(7, 2, 5);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        TopElem x = T.random(rng), y = T.random(rng);
        std::uint32_t c = T.mid().random(rng);
        CHECK(T.frobenius(x) == T.pow(x, BigInt(T.q())));
        CHECK(T.frobenius(T.mul(x, y)) == T.mul(T.frobenius(x), T.frobenius(y)));
        CHECK(T.frobenius(T.add(T.scale(x, c), y)) == T.add(T.scale(T.frobenius(x), c), T.frobenius(y)));
        CHECK(T.frobenius_power(x, T.m()) == x);
    }
}

TEST_CASE("text formats") {
    FieldTower T(7, 2, 3);
    for (std::uint64_t i : {0ull, 1ull, 7ull, 8ull, 49ull, 1234ull, 117648ull}) {
        TopElem x = T.element(i);
        CHECK(T.parse(T.format(x)) == x);
        CHECK(T.parse(std::to_string(i)) == x);
    }
    TopElem y = T.parse("(3*u+1)*t^2 + u");
    CHECK(y.c == std::vector<std::uint32_t>{7, 0, 22});
    CHECK(T.format(y) == "(3*u+1)*t^2 + u");
    CHECK(T.parse("t^3") == T.pow(T.t(), BigInt(3)));
    CHECK(T.parse("-t") == T.neg(T.t()));
    CHECK_THROWS_AS(T.parse("t+"), Error);
    CHECK_THROWS_AS(T.parse("v"), Error);
    FieldTower P(7, 1, 2);
    CHECK_THROWS_AS(P.parse("u"), Error);
    CHECK(P.format(P.parse("3*t+5")) == "3*t + 5");
}

TEST_CASE("discrete log table") {
    FieldTower T(3, 1, 4);
    DiscreteLogTable L(T);
    CHECK(L.n() == 80);
    std::uint64_t g = L.generator_index();
    for (std::uint64_t i = 1; i < g; ++i) CHECK_FALSE(T.is_primitive(T.element(i)));
    CHECK(T.is_primitive(T.element(g)));
    for (std::uint64_t i = 1; i < T.size(); ++i)
        CHECK(T.pow(T.element(g), BigInt(static_cast<unsigned long>(L.log(i)))) == T.element(i));
}

TEST_CASE("mid field tables") {
    MidField F(7, 3);
    CHECK(F.q() == 343);
    for (std::uint32_t a = 1; a < F.q(); ++a) CHECK(F.mul(a, F.inv(a)) == 1);
    std::set<std::uint32_t> traces;
    for (std::uint32_t a = 0; a < F.q(); ++a) traces.insert(F.abs_trace(a));
    CHECK(traces.size() == 7);
    CHECK(parse_mid_elem(F, "u^3") == F.pow(F.generator_u(), std::uint64_t(3)));
}

}
