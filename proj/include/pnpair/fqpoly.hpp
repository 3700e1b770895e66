#pragma once

#include "pnpair/gf.hpp"

#include <cstdint>
#include <vector>

namespace pnp {

using MidRing = PolyRing<MidField>;
using MidFactorization = PolyFactorization<MidField>;

MidFactorization poly_factor(const MidField& F, const MidPoly& f);

// q-cyclotomic cosets mod n (requires gcd(q, n) = 1), each sorted, ordered by smallest member.
std::vector<std::vector<std::uint64_t>> cyclotomic_cosets(std::uint64_t q, std::uint64_t n);
std::vector<unsigned> coset_sizes(std::uint64_t q, std::uint64_t n);  // sorted ascending

// Factorization of x^m-1 over F_q: the distinct factors of x^{m'}-1, each with multiplicity p^a.
// The degree multiset is checked against the cyclotomic cosets.
MidFactorization factor_xm_minus_1(const MidField& F, unsigned m);

BigInt poly_euler_phi(const MidFactorization& f, std::uint64_t q);
Rational poly_theta(const MidFactorization& f, std::uint64_t q);
BigInt poly_W(const MidFactorization& f);
MidFactorization radical(const MidFactorization& f);
// monic product of the listed factors; the unit is ignored
MidPoly product(const MidField& F, const MidFactorization& f);

// f∘α = Σ a_i α^{q^i}
TopElem module_action(const FieldTower& T, const MidPoly& f, const TopElem& alpha);

// Monic divisor g of x^m-1 of least degree with g∘α = 0.
MidPoly fq_order(const FieldTower& T, const TopElem& alpha);
MidPoly fq_order(const FieldTower& T, const MidFactorization& xm1, const TopElem& alpha);

// g with every factor equal to the irreducible h removed.
MidFactorization largest_coprime_poly_divisor(const MidField& F, const MidFactorization& g, const MidPoly& h);

// Degree data for x^m-1 over F_q without building the field: cosets of q modulo m'.
struct XmStructure {
    std::uint64_t q = 0, p = 0, m = 0, m_prime = 0;
    std::uint64_t u = 0;             // order of q mod m'
    std::vector<unsigned> degrees;   // distinct irreducible factor degrees, ascending
    bool linear_one_first = true;    // degrees[0] belongs to x-1
    std::size_t count() const { return degrees.size(); }
};
XmStructure xm_structure(std::uint64_t q, std::uint64_t m);

struct Sigma {
    Rational value;
    std::uint64_t u = 0;
    std::uint64_t small_factors = 0;  // distinct irreducible factors of degree below u
    bool synthetic = false;           // m' = 1, where u is undefined and 1/m is used
};
Sigma sigma_ratio(std::uint64_t q, std::uint64_t m);

// Upper bound 2^{(m+gcd(m,q-1))/2} on W(x^m-1), returned as the exponent (m+gcd)/2 in halves.
Rational coset_log2_bound(std::uint64_t q, std::uint64_t m);

} // namespace pnp
