#include "doctest.h"
#include "pnpair/arith.hpp"
#include "pnpair/error.hpp"

#include <numeric>
#include <random>

using namespace pnp;

namespace {

// smallest-prime-factor sieve, the independent oracle for small factorizations
std::vector<std::uint32_t> spf_table(std::uint32_t n) {
    std::vector<std::uint32_t> spf(n + 1, 0);
    for (std::uint32_t i = 2; i <= n; ++i)
        if (!spf[i])
            for (std::uint64_t j = i; j <= n; j += i)
                if (!spf[j]) spf[j] = i;
    return spf;
}

std::map<BigInt, unsigned> oracle_factor(std::uint32_t n, const std::vector<std::uint32_t>& spf) {
    std::map<BigInt, unsigned> t;
    while (n > 1) {
        t[BigInt(spf[n])]++;
        n /= spf[n];
    }
    return t;
}

std::map<BigInt, unsigned> as_map(const Factorization& f) {
    std::map<BigInt, unsigned> t;
    for (auto& pp : f.factors) t[pp.prime] = pp.exponent;
    return t;
}

BigInt brute_gcd(BigInt a, BigInt b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

} // namespace

TEST_SUITE("arith") {

TEST_CASE("factor examples") {
    auto f1 = factor(1);
    CHECK(f1.factors.empty());
    CHECK(f1.complete());
    CHECK(as_map(factor(823542)) == std::map<BigInt, unsigned>{{2, 1}, {3, 1}, {29, 1}, {4733, 1}});
    CHECK(as_map(factor(12)) == std::map<BigInt, unsigned>{{2, 2}, {3, 1}});
    CHECK(factor(12).to_line() == "12=2^2*3");
}

TEST_CASE("factor agrees with a sieve up to 10^6") {
    const std::uint32_t N = 1000000;
    auto spf = spf_table(N);
    for (std::uint32_t n = 1; n <= N; ++n) {
        auto f = factor(n);
        REQUIRE(f.complete());
        REQUIRE(f.reassemble() == n);
        REQUIRE(as_map(f) == oracle_factor(n, spf));
    }
}

TEST_CASE("rho splits products of two large primes") {
    BigInt p("1000000007"), q("998244353");
    auto f = factor(p * q * p);
    CHECK(as_map(f) == std::map<BigInt, unsigned>{{q, 1}, {p, 2}});
    BigInt r("4294967311");
    CHECK(as_map(factor(r * r * r)) == std::map<BigInt, unsigned>{{r, 3}});
}

TEST_CASE("budget exhaustion yields an incomplete factorization") {
    BigInt a("166003607842448777"), b("2192537062271178641");
    FactorOptions opt;
    opt.budget = 1000;
    auto f = factor(a * b * 6, opt);
    CHECK_FALSE(f.complete());
    CHECK(f.reassemble() == a * b * 6);
    CHECK(f.cofactor == a * b);
    CHECK_THROWS_AS(multiplicative_functions(f), Error);
    CHECK(w_lower_bound(f) == 8);
}

TEST_CASE("primality") {
    CHECK(primality(2) == Primality::Prime);
    CHECK(primality(1) == Primality::Composite);
    CHECK(primality(BigInt("3317044064679887385961981")) == Primality::Composite);
    CHECK(primality(BigInt("63681511996418550459487")) == Primality::Prime);
    // 2^127-1 is above the deterministic range
    CHECK(primality(ipow(2, 127) - 1) == Primality::ProbablePrime);
    CHECK(primality(ipow(2, 128) + 1) == Primality::Composite);
}

TEST_CASE("factor cache round trip and validation") {
    FactorCache c;
    BigInt n = BigInt("166003607842448777") * BigInt("2192537062271178641");
    c.load_text("# comment\n" + n.get_str() + "=166003607842448777*2192537062271178641\n");
    REQUIRE(c.lookup(n));
    FactorOptions opt;
    opt.cache = &c;
    opt.budget = 10;
    CHECK(factor(n * 29, opt).complete());
    CHECK_THROWS_AS(c.load_text("12=2*5\n"), Error);
    CHECK_THROWS_AS(c.load_text("12=4*3\n"), Error);
    FactorCache d;
    d.load_text(c.dump());
    CHECK(d.digest() == c.digest());
}

TEST_CASE("factor_qm_minus_1 examples and product checks") {
    auto f = factor_qm_minus_1(7, 7);
    CHECK(f.value == 823542);
    CHECK(f.primes() == std::vector<BigInt>{2, 3, 29, 4733});
    CHECK(as_map(factor_qm_minus_1(7, 1)) == std::map<BigInt, unsigned>{{2, 1}, {3, 1}});
    auto g = factor_qm_minus_1(49, 7);
    CHECK(g.complete());
    CHECK(g.reassemble() == ipow(49, 7) - 1);
    CHECK(as_map(g) == as_map(factor(ipow(49, 7) - 1)));
    for (unsigned q : {2u, 3u, 5u, 7u, 49u})
        for (unsigned m = 1; m <= 12; ++m) {
            BigInt prod = 1;
            for (auto d : divisors_u64(m)) prod *= cyclotomic_value(d, q);
            CHECK(prod == ipow(q, m) - 1);
        }
}

TEST_CASE("multiplicative functions") {
    auto v = multiplicative_functions(factor(12));
    CHECK(v.omega == 2);
    CHECK(v.W == 4);
    CHECK(v.phi == 4);
    CHECK(v.mu == 0);
    auto w = multiplicative_functions(factor(30));
    CHECK(w.mu == -1);
    CHECK(w.phi == 8);
    CHECK(w.theta == Rational(4, 15));
    CHECK(multiplicative_functions(factor(823542)).W == 16);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        std::uint64_t a = rng() % 100000 + 1, b = rng() % 100000 + 1;
        if (gcd_u64(a, b) != 1) continue;
        auto fa = multiplicative_functions(factor(a)), fb = multiplicative_functions(factor(b));
        auto fab = multiplicative_functions(factor(BigInt(a) * b));
        CHECK(fab.W == fa.W * fb.W);
        CHECK(fab.mu == fa.mu * fb.mu);
        CHECK(fab.phi == fa.phi * fb.phi);
    }
}

TEST_CASE("p-free part") {
    CHECK(p_free_part(std::uint64_t(14), 7) == 2);
    CHECK(p_free_part(std::uint64_t(7), 7) == 1);
    CHECK(p_free_part(std::uint64_t(12), 7) == 12);
    CHECK(p_free_part(BigInt(7 * 7 * 36), BigInt(7)) == 36);
}

TEST_CASE("largest coprime divisor") {
    CHECK(largest_coprime_divisor(factor(823542), 6).value == 137257);
    CHECK(largest_coprime_divisor(factor(12), 1).value == 12);
    CHECK(largest_coprime_divisor(factor(12), 6).value == 1);
}

TEST_CASE("coprime divisor against the norm cofactor formula") {
    // The coprime part always divides (q^m-1)/((q-1)gcd(m,q-1)); they coincide exactly when
    // the formula value is itself coprime to q-1.
    std::mt19937_64 rng(11);
    const unsigned qs[] = {2, 3, 5, 7, 49};
    int equal = 0, differ = 0;
    for (int i = 0; i < 50; ++i) {
        unsigned q = qs[rng() % 5];
        unsigned m = 1 + rng() % 12;
        auto e = factor_qm_minus_1(q, m);
        auto coprime = largest_coprime_divisor(e, q - 1);
        auto formula = norm_cofactor(q, m, e);
        CHECK(formula.value * (q - 1) * gcd_u64(m, q - 1) == e.value);
        CHECK(formula.value % coprime.value == 0);
        bool formula_coprime = brute_gcd(formula.value, q - 1) == 1;
        CHECK((coprime.value == formula.value) == formula_coprime);
        (formula_coprime ? equal : differ)++;
    }
    CHECK(equal > 0);
    CHECK(differ > 0);
    CHECK(norm_cofactor(7, 4, factor_qm_minus_1(7, 4)).value == 200);
    CHECK(largest_coprime_divisor(factor_qm_minus_1(7, 4), 6).value == 25);
}

TEST_CASE("divisors and multiplicative order") {
    CHECK(squarefree_divisors(factor(12)) == std::vector<BigInt>{1, 2, 3, 6});
    CHECK(divisors(factor(12)).size() == 6);
    CHECK(multiplicative_order(7, 5) == 4);
    CHECK(multiplicative_order(7, 1) == 1);
    CHECK_THROWS_AS(multiplicative_order(7, 14), Error);
}

}
