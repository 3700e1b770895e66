#pragma once

#include "pnpair/characters.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pnp {

// Per-element flags of a small tower. Bit i of prime_mask: free for the i-th prime of q^m-1;
// bit j of poly_mask: free for the j-th irreducible factor of x^m-1.
class FlagTable {
public:
    FlagTable(const CharacterTables& C, bool atoms = true, unsigned workers = 1);

    const CharacterTables& tables() const { return C_; }
    const FieldTower& tower() const { return C_.tower(); }
    bool atoms() const { return atoms_; }
    const std::vector<BigInt>& primes() const { return primes_; }
    const MidFactorization& xm1() const { return C_.xm1(); }

    bool is_primitive(std::uint64_t i) const { return prime_[i] == full_prime_; }
    bool is_normal(std::uint64_t i) const { return poly_[i] == full_poly_; }
    std::uint32_t trace_class(std::uint64_t i) const { return C_.trace(i); }
    std::uint32_t norm_class(std::uint64_t i) const { return C_.norm(i); }
    std::uint32_t prime_mask(std::uint64_t i) const { return prime_[i]; }
    std::uint32_t poly_mask(std::uint64_t i) const { return poly_[i]; }

    // masks selecting the primes of e (e | q^m-1) and the irreducible factors of g (g | x^m-1)
    std::uint32_t prime_bits(const Factorization& e) const;
    std::uint32_t poly_bits(const MidFactorization& g) const;

    // compares 1000 seeded random indices against the freeness predicates
    bool spot_check(std::uint64_t seed, std::size_t samples = 1000) const;

private:
    const CharacterTables& C_;
    bool atoms_;
    std::vector<BigInt> primes_;
    std::vector<std::uint32_t> prime_, poly_;
    std::uint32_t full_prime_ = 0, full_poly_ = 0;
};

// Build the table and run the spot check; throws TowerTooLarge above 2^24 elements.
FlagTable precompute_flags(const CharacterTables& C, bool atoms = true, unsigned workers = 1);

struct DivisorTuple {
    Factorization e1, e2;
    MidFactorization g1, g2;
};

// e1 = e2 = q^m-1, g1 = g2 = x^m-1
DivisorTuple full_tuple(const FlagTable& flags);
// e1 = e2 = 1, g1 = g2 = 1
DivisorTuple trivial_tuple();

struct NfabCount {
    std::uint64_t count = 0;
    std::optional<std::uint64_t> witness;  // smallest qualifying element index
};

// Counts for every (norm, trace) class at once: cell a*q + b.
struct NfabMatrix {
    std::uint32_t q = 0;
    std::vector<std::uint64_t> count;
    std::vector<std::uint64_t> witness;  // UINT64_MAX when the cell is empty
    std::vector<std::uint64_t> strict;   // counted elements with α and f(α) primitive and normal
    std::uint64_t at(std::uint32_t a, std::uint32_t b) const { return count[std::size_t(a) * q + b]; }
    std::uint64_t total() const;
};

NfabMatrix count_nfab_all(const FlagTable& flags, const RationalFunction& f, const DivisorTuple& d, unsigned workers = 1);

// α outside P with α Q_{e1}-free and R_{g1}-free, f(α) e2-free and g2-free, N(α) = a, Tr(α) = b.
// With check_preconditions, a must be primitive in F_q, b nonzero and f in R_n.
NfabCount count_nfab(const FlagTable& flags, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                     const DivisorTuple& d, bool check_preconditions = false);

// The same count from the freeness predicates directly, without the flag table.
NfabCount count_nfab_direct(const FieldTower& T, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                            const DivisorTuple& d);

// Base divisors plus leftover primes and factors; the full divisors are the base times all leftovers.
struct SieveConfig {
    DivisorTuple base;
    std::vector<BigInt> extra_e1, extra_e2;
    std::vector<MidPoly> extra_g1, extra_g2;
    std::size_t leftovers() const { return extra_e1.size() + extra_e2.size() + extra_g1.size() + extra_g2.size(); }
};

struct SieveIdentity {
    std::int64_t lhs = 0;  // N with the full divisors
    std::int64_t rhs = 0;  // Σ single-leftover counts − (L−1)·N(base)
    bool holds() const { return lhs >= rhs; }
};

SieveIdentity check_sieve_identity(const FlagTable& flags, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                                   const SieveConfig& cfg);

enum class SampleStrategy { Uniform, Adversarial, Exhaustive };
const char* strategy_name(SampleStrategy s) noexcept;
SampleStrategy parse_strategy(const std::string& s);

// Degree-(1,1) members of R_n: (a1 x + a0)/(x + b0) with a1 != 0 and a0 != a1 b0.
// Exhaustive mode returns every such function and needs q^m <= 400; count is then ignored.
std::vector<RationalFunction> sample_functions(const FieldTower& T, std::size_t count, std::uint64_t seed,
                                               SampleStrategy strategy);

struct SettleCell {
    std::uint32_t a = 0, b = 0;
    std::uint64_t count = 0;
    std::optional<std::uint64_t> witness;
};

struct SettleFunction {
    std::string text;
    std::vector<SettleCell> cells;  // primitive a, nonzero b
    std::uint64_t min_count = 0;
    bool strict_agrees = true;      // count equals the count with α and f(α) primitive and normal
};

struct ZeroTriple {
    std::size_t function = 0;
    std::uint32_t a = 0, b = 0;
    bool confirmed = false;  // the direct recount is also zero
};

struct SettleReport {
    std::uint32_t p = 0;
    unsigned k = 0, m = 0;
    std::uint64_t seed = 0;
    SampleStrategy strategy = SampleStrategy::Uniform;
    std::vector<SettleFunction> functions;
    std::vector<ZeroTriple> zeros;
    std::uint64_t min_count = 0;
    bool counterexample() const;
    std::string verdict() const;  // no-counterexample-found or counterexample
};

SettleReport settle(std::uint32_t p, unsigned k, unsigned m, std::size_t samples, std::uint64_t seed,
                    SampleStrategy strategy = SampleStrategy::Uniform, unsigned workers = 1);

// the elements of F_q* that are primitive, ascending
std::vector<std::uint32_t> primitive_mid_elements(const MidField& F);

} // namespace pnp
