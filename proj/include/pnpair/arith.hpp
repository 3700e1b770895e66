#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pnp {

using BigInt = mpz_class;
using Rational = mpq_class;

std::string to_string(const BigInt& n);
std::string to_string(const Rational& r);
BigInt parse_bigint(const std::string& text);
BigInt ipow(const BigInt& base, unsigned long e);
std::uint64_t to_u64(const BigInt& n);

enum class Primality { Composite, Prime, ProbablePrime };

// Deterministic below 3.3e24 (bases 2..41), otherwise 64 fixed-seed rounds.
Primality primality(const BigInt& n);
inline bool is_prime(const BigInt& n) { return primality(n) != Primality::Composite; }

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;
    bool probable = false;
};

struct Factorization {
    BigInt value = 1;
    std::vector<PrimePower> factors;  // strictly increasing primes
    BigInt cofactor = 1;              // composite part left unfactored, 1 when complete

    bool complete() const { return cofactor == 1; }
    std::size_t omega() const { return factors.size(); }
    std::vector<BigInt> primes() const;
    bool has_prime(const BigInt& p) const;
    unsigned exponent_of(const BigInt& p) const;
    BigInt reassemble() const;
    // Cache/CLI line format: N=p1^e1*p2*... ; an unfactored cofactor shows as C<digits>.
    std::string to_line() const;
};

Factorization make_factorization(const std::map<BigInt, unsigned>& table, const BigInt& cofactor = 1);

class FactorCache {
public:
    FactorCache() = default;
    FactorCache(const FactorCache& other);
    FactorCache& operator=(const FactorCache& other);

    // Reads entries and validates each one (product and primality); throws Error on a bad line.
    void load(const std::string& path);
    void load_text(const std::string& text);
    void save(const std::string& path) const;
    std::optional<Factorization> lookup(const BigInt& n) const;
    void insert(const Factorization& f);
    std::size_t size() const;
    std::string digest() const;
    std::string dump() const;

    static Factorization parse_line(const std::string& line);

private:
    mutable std::mutex mu_;
    std::map<BigInt, Factorization> entries_;
};

struct FactorOptions {
    std::uint64_t budget = 10'000'000;  // rho iterations per cofactor
    FactorCache* cache = nullptr;
};

Factorization factor(const BigInt& n, const FactorOptions& opt = {});

// Process-wide cache: loaded from $PNPAIR_FACTOR_CACHE if set, else the shipped data file.
FactorCache& shared_factor_cache();
std::string shared_factor_cache_path();
FactorOptions default_factor_options();

// q = p^k; returns (p, k) or nothing when q is not a prime power.
std::optional<std::pair<BigInt, unsigned>> prime_power_parts(const BigInt& q);
BigInt cyclotomic_value(unsigned long d, const BigInt& x);

struct CyclotomicPiece {
    unsigned long d;  // piece is Phi_d(p)
    BigInt value;
    Factorization fac;
};

std::vector<CyclotomicPiece> cyclotomic_pieces(const BigInt& q, unsigned long m, const FactorOptions& opt = {});
Factorization factor_qm_minus_1(const BigInt& q, unsigned long m, const FactorOptions& opt = {});

struct MultiplicativeValues {
    std::size_t omega = 0;
    BigInt W, phi;
    int mu = 1;
    BigInt radical;
    Rational theta;
};

MultiplicativeValues multiplicative_functions(const Factorization& f);
BigInt w_lower_bound(const Factorization& f);
inline BigInt W_of(const Factorization& f) { return multiplicative_functions(f).W; }
inline Rational theta_of(const Factorization& f) { return multiplicative_functions(f).theta; }

BigInt p_free_part(BigInt r, const BigInt& p);
std::uint64_t p_free_part(std::uint64_t r, std::uint64_t p);

Factorization largest_coprime_divisor(const Factorization& e, const BigInt& sigma);
Factorization restrict_to(const Factorization& e, const std::vector<BigInt>& primes);
Factorization times(const Factorization& a, const Factorization& b);
Factorization divide_exact(const Factorization& n, const Factorization& d);

// (q^m-1)/((q-1)·gcd(m,q-1)), factored from a factorization of q^m-1.
Factorization norm_cofactor(const BigInt& q, unsigned long m, const Factorization& qm1);

std::vector<BigInt> squarefree_divisors(const Factorization& f);
std::vector<BigInt> divisors(const Factorization& f);
int mobius(const Factorization& f);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::vector<std::uint64_t> divisors_u64(std::uint64_t n);
std::uint64_t multiplicative_order(std::uint64_t q, std::uint64_t n);  // order of q mod n, n>=1

} // namespace pnp
