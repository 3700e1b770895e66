#pragma once

#include "pnpair/fqpoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pnp {

using TopRing = PolyRing<FieldTower>;
using TopFactorization = PolyFactorization<FieldTower>;

// α e-free: α^{(q^m-1)/l} != 1 for each prime l | e. Requires e | q^m-1 and α != 0.
bool is_e_free(const FieldTower& T, const TopElem& alpha, const Factorization& e);
// a in F_q* is s-free: a^{(q-1)/l} != 1 for each prime l | s, s | q-1.
bool is_mid_free(const MidField& F, std::uint32_t a, const Factorization& s);

// α g-free, per irreducible factor: ((x^m-1)/h)∘α != 0 for every h | g.
bool is_g_free(const FieldTower& T, const MidFactorization& xm1, const TopElem& alpha, const MidFactorization& g);
// the same predicate through gcd((x^m-1)/Ord(α), g) = 1
bool is_g_free_by_order(const FieldTower& T, const MidFactorization& xm1, const TopElem& alpha, const MidFactorization& g);

struct DecompositionCheck {
    bool lhs = false;
    bool rhs = false;
};
DecompositionCheck lemma31_check(const FieldTower& T, const TopElem& alpha, const Factorization& l);

struct RationalFunction {
    TopPoly f1, f2;  // gcd 1, f2 monic
    int n1 = 0, n2 = 0;
};

// Normalizes the denominator to be monic; throws NotReduced when gcd(f1, f2) != 1.
RationalFunction make_rational(const FieldTower& T, TopPoly num, TopPoly den);
RationalFunction parse_rational(const FieldTower& T, const std::string& text);
std::string format_rational(const FieldTower& T, const RationalFunction& f);

// Roots in F_{q^m} of a polynomial over F_{q^m}, ascending by index.
std::vector<TopElem> roots_in_field(const FieldTower& T, const TopPoly& f);
// 0 together with the zeros and poles of f
std::vector<TopElem> pole_zero_set(const FieldTower& T, const RationalFunction& f);

enum class RnReason { Member, Monomial, PowerOfDivisor, DenominatorPower };
const char* rn_reason_name(RnReason r);

struct RnResult {
    bool member = false;
    RnReason reason = RnReason::Member;
    BigInt D;  // gcd of multiplicities of the irreducible factors other than x (0 if none)
};
RnResult rn_membership(const FieldTower& T, const RationalFunction& f);

// f1(α)/f2(α); nullopt marks a pole.
std::optional<TopElem> eval_rational(const FieldTower& T, const RationalFunction& f, const TopElem& alpha);

unsigned m_constant(unsigned n1, unsigned n2);

} // namespace pnp
