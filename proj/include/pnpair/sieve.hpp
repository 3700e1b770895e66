#pragma once

#include "pnpair/arith.hpp"
#include "pnpair/fqpoly.hpp"
#include "pnpair/real.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pnp {

enum class Verdict { Passes, Fails, Unknown };
enum class Method { ExactW, CosetBound, DivisorBound, SigmaBound, Sieve };

const char* verdict_name(Verdict v) noexcept;

struct ConditionVerdict {
    Verdict verdict = Verdict::Unknown;
    Method method = Method::ExactW;
    int t = 0;             // W(N) < C_t N^{1/t} exponent when method is DivisorBound or SigmaBound
    Real lhs_log, rhs_log; // natural logarithms of both sides
    bool exact_tie = false;
    std::string form;      // inequality that was evaluated
    std::string reason;    // set when the verdict is not a plain comparison

    bool passes() const { return verdict == Verdict::Passes; }
    std::string method_label() const;
};

// Data of (q, m) that needs no factorization: the cosets of q modulo m'.
struct PairInfo {
    std::uint32_t p = 0;
    unsigned k = 0, m = 0;
    std::uint64_t q = 0;
    BigInt q_big;
    XmStructure xm;
    bool route_divides = false;  // m' | q-1
    std::uint64_t m_prime() const { return xm.m_prime; }
    std::size_t x_factor_count() const { return xm.count(); }
};

PairInfo pair_info(std::uint32_t p, unsigned k, unsigned m);

enum class AtomKind { QPrime, NPrime, RFactor, XFactor };

// One sieving atom: a prime of Q_{q^m-1} or q^m-1, or an irreducible factor of R_{x^m-1} or x^m-1.
struct Atom {
    AtomKind kind;
    BigInt prime;         // prime atoms
    std::size_t factor;   // index into SieveContext::factors() for polynomial atoms
    unsigned degree = 0;  // polynomial atoms
    Rational weight;      // 1/p or q^{-deg}
    std::string label;
};

struct XFactor {
    unsigned degree = 0;
    bool x_minus_1 = false;
    std::optional<MidPoly> poly;  // known when q fits the mid-field tables
    std::string label;
};

class SieveContext {
public:
    SieveContext(std::uint32_t p, unsigned k, unsigned m, const FactorOptions& opt = default_factor_options());

    const PairInfo& info() const { return info_; }
    const Factorization& qm1() const { return qm1_; }
    const Factorization& Q() const { return Q_; }
    bool complete() const { return qm1_.complete(); }
    bool has_field() const { return field_ != nullptr; }
    const MidField& field() const;
    const std::vector<XFactor>& factors() const { return factors_; }
    // throws IncompleteFactorization when q^m-1 is not fully factored
    const std::vector<Atom>& atoms() const;
    std::size_t x_factor_count() const { return factors_.size(); }

private:
    PairInfo info_;
    Factorization qm1_, Q_;
    std::shared_ptr<MidField> field_;
    std::vector<XFactor> factors_;
    std::vector<Atom> atoms_;
};

struct SievePlan {
    std::vector<bool> chosen;  // per atom of the context
    Rational lambda, Lambda;
    bool lambda_positive = false;
    std::size_t r = 0, s = 0, t = 0, u = 0;  // leftover counts per kind
    std::size_t chosen_count = 0;

    std::size_t leftovers() const { return r + s + t + u; }
};

SievePlan plan_evaluate(const SieveContext& ctx, const std::vector<bool>& chosen);

// Chosen mask from divisors d' | Q, d | q^m-1 and polynomial divisors g' | R_{x^m-1}, g | x^m-1.
// Polynomials have coefficients in F_q; they are factored over F_q. Throws InvalidSubset.
std::vector<bool> plan_from_divisors(const SieveContext& ctx, const BigInt& d_prime, const BigInt& d,
                                     const MidPoly& g_prime, const MidPoly& g);

// Degree-cut choice: d' = Q, d = q^m-1, g the factors of degree below u, g' = g/(x-1).
std::vector<bool> degree_cut_choice(const SieveContext& ctx);

struct PlanText {
    std::string d_prime, d, g_prime, g;
};
PlanText plan_text(const SieveContext& ctx, const SievePlan& plan);

// q^{m/2-2} > M·W(d')W(d)W(g')W(g)·Λ; fails with reason lambda-nonpositive when λ <= 0.
ConditionVerdict sieve_condition(const SieveContext& ctx, const SievePlan& plan, unsigned n1, unsigned n2);

struct PlanSearch {
    std::optional<SievePlan> passing;
    SievePlan best;  // smallest RHS/LHS
    ConditionVerdict verdict;
    bool exhaustive = false;   // exhaustive enumeration also ran
    bool methods_agree = true; // exhaustive optimum equals the weight-prefix optimum
    std::size_t atoms = 0;
};

PlanSearch plan_search(const SieveContext& ctx, unsigned n1, unsigned n2);

// q^{m/2-2} > M·W(Q)·W(q^m-1)·W(R_{x^m-1})·W(x^m-1) with exact W values
ConditionVerdict base_condition(const SieveContext& ctx, unsigned n1, unsigned n2);
// q^{m/2-2} > c·W(q^m-1)^2
ConditionVerdict square_condition(const SieveContext& ctx, const BigInt& c);
// base condition with W(Q) replaced by its upper bound W(q^m-1): q^{m/2-2} > M·W(q^m-1)^2·W(R)·W(x^m-1).
// For m' = 1, 4, 5 this is the 8, 128, 32 times W(q^m-1)^2 form.
ConditionVerdict coarse_base_condition(const SieveContext& ctx, unsigned n1, unsigned n2);
// q^{m/2-2} > M W(Q)W(q^m-1)W(R)W(x^m-1) with W(x^m-1) replaced by 2^{(m'+gcd(m',q-1))/2}; W(Q), W(q^m-1) exact
ConditionVerdict coset_bound_condition(const SieveContext& ctx, unsigned n1, unsigned n2);
// q^{m/2-2} > M W(Q)W(q^m-1)W(R)W(x^m-1) with W(Q)W(q^m-1) < C_t^2 q^{2m/t}; W of x^m-1 from cosets
ConditionVerdict divisor_bound_condition(const PairInfo& info, unsigned n1, unsigned n2, int t);
// full multiplicative plan when m' | q-1: M·C_t^2 q^{2m/t}·(2 + 2q(m'-1)/(q-2m'+1))
ConditionVerdict full_multiplicative_bound(const PairInfo& info, unsigned n1, unsigned n2, int t);
// q^{m/2-2} > 2M·m·W(q^m-1)^2·2^{2mσ} with W(q^m-1) < C_t q^{m/t}; needs m' ∤ q-1, m' >= 8 and u > 2
ConditionVerdict sigma_bound(const PairInfo& info, unsigned n1, unsigned n2, int t);

// Lower bound ϑ(q^m - M q^{m/2+2} W(Q_{e1})W(e2)W(R_{g1})W(g2)); may be negative.
Real lower_bound_N(const MidField& F, unsigned m, unsigned n1, unsigned n2, const Factorization& e1,
                   const Factorization& e2, const MidFactorization& g1, const MidFactorization& g2);

Rational divisor_bound_constant(int t);  // t in {7, 10, 14}
// log of C_t·N^{1/t}
Real divisor_log_bound(int t, const Real& logN);
enum class XBoundMode { General, Divides, NotDivides };
// log2 of the coset bound on W(x^m-1): (m+gcd)/2, m, or 3m/4
Rational xm_bound_exponent(std::uint64_t q, std::uint64_t m, XBoundMode mode);

struct ThresholdEntry {
    std::string id;
    std::string variable;  // k or m or j
    std::string text;
    long start = 1;
    long printed = 0;
    bool anchor = false;
    std::function<std::pair<PowerProduct, PowerProduct>(long)> sides;  // lhs > rhs must hold
};

const std::vector<ThresholdEntry>& threshold_catalogue();
const ThresholdEntry& threshold_entry(const std::string& id);
bool threshold_holds(const ThresholdEntry& e, long n);
// Minimal n >= start with lhs > rhs. Each catalogue inequality has a set of solutions closed upward,
// so galloping plus bisection applies; the boundary is checked on both sides.
long threshold_solve(const std::string& id);

// m <= m_max with m' >= 8, m' ∤ q-1 and m' != 6·gcd(q-1, m'), the m scanned with coarse_base_condition
std::vector<unsigned> case1_scan_values(std::uint64_t q, unsigned m_min, unsigned m_max);

enum class Status { ResolvedByBound, ResolvedByCondition, ResolvedBySieve, Unresolved, Unknown };
const char* status_name(Status s) noexcept;

struct ClassifyEntry {
    std::uint32_t p = 0;
    unsigned k = 0, m = 0;
    BigInt q;
    std::uint64_t m_prime = 0;
    bool route_divides = false;
    Status status = Status::Unknown;
    ConditionVerdict verdict;
    std::optional<PlanText> plan;
    std::optional<Rational> lambda, Lambda;
};

struct ClassifyOptions {
    unsigned n1 = 1, n2 = 1;
    FactorOptions factor = default_factor_options();
    unsigned workers = 1;
};

ClassifyEntry classify_pair(std::uint32_t p, unsigned k, unsigned m, const ClassifyOptions& opt = {});
std::vector<ClassifyEntry> classify(std::uint32_t p, unsigned k_lo, unsigned k_hi, unsigned m_lo, unsigned m_hi,
                                    const ClassifyOptions& opt = {});

std::string format_fixed(const Rational& r, int digits = 15);  // significant digits

} // namespace pnp
