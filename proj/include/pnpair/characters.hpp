#pragma once

#include "pnpair/freeness.hpp"

#include <complex>
#include <mutex>
#include <vector>

namespace pnp {

using Complex = std::complex<double>;

// Per-index tables for a small tower: discrete logs, traces and norms. Element indices are the
// currency of this module.
class CharacterTables {
public:
    static constexpr std::uint64_t kLimit = 1ULL << 24;
    explicit CharacterTables(const FieldTower& tower);

    const FieldTower& tower() const { return T_; }
    const DiscreteLogTable& dlog() const { return dlog_; }
    std::uint64_t size() const { return size_; }
    std::uint64_t n() const { return size_ - 1; }  // q^m - 1

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint32_t abs_trace(std::uint64_t a) const { return abs_tr_[a]; }
    std::uint32_t trace(std::uint64_t a) const { return tr_[a]; }  // into F_q
    std::uint32_t norm(std::uint64_t a) const { return norm_[a]; }  // into F_q

    // ζ_p^t and ω_n^t
    Complex zeta_p(std::uint64_t t) const { return zp_[t % zp_.size()]; }
    Complex omega(std::uint64_t t, std::uint64_t n) const;

    // index of the monic annihilator of ψ_u among x^m-1's divisors, as a polynomial
    const MidPoly& add_char_order(std::uint64_t u) const;
    const MidFactorization& xm1() const { return xm1_; }
    const Factorization& qm1() const { return qm1_; }

private:
    const FieldTower& T_;
    std::uint64_t size_;
    DiscreteLogTable dlog_;
    std::vector<std::uint32_t> abs_tr_, tr_, norm_;
    std::vector<Complex> zp_;
    MidFactorization xm1_;
    Factorization qm1_;
    mutable std::once_flag orders_once_;
    mutable std::vector<MidPoly> add_orders_;
};

// α ↦ ω_n^{k log α}; the exponent k fixes the character, its order is n/gcd(k, n).
struct MultChar {
    std::uint64_t order = 1;
    std::uint64_t exponent = 0;
};
// β ↦ ψ̂_1(uβ); `order` is its F_q-order.
struct AddChar {
    MidPoly order;
    std::uint64_t u = 0;
};

// the j-th character of order d, j coprime to d
MultChar mult_char_of(const CharacterTables& C, std::uint64_t d, std::uint64_t j);
std::vector<MultChar> mult_chars_of_order(const CharacterTables& C, std::uint64_t d);
// additive characters whose F_q-order is h (h monic, dividing x^m-1)
std::vector<AddChar> add_chars_of_order(const CharacterTables& C, const MidPoly& h);

Complex mult_char(const CharacterTables& C, const MultChar& chi, std::uint64_t alpha);
Complex mult_char(const CharacterTables& C, std::uint64_t d, std::uint64_t j, std::uint64_t alpha);
// ψ̂_1(α) = ζ_p^{Tr(α)} on the top field, and ψ_1 on F_q
Complex canonical_add_char(const CharacterTables& C, std::uint64_t alpha);
Complex canonical_add_char(const MidField& F, std::uint32_t beta);
Complex add_char(const CharacterTables& C, const AddChar& psi, std::uint64_t alpha);
// χ_{q-1}^i on F_q (χ_{q-1} built on the F_q primitive root), 0 at 0 unless i ≡ 0
Complex mid_mult_char(const MidField& F, std::uint64_t i, std::uint32_t beta);

// The four characteristic functions, each evaluated as its character sum.
double rho_e(const CharacterTables& C, std::uint64_t alpha, const Factorization& e);
double kappa_g(const CharacterTables& C, std::uint64_t alpha, const MidFactorization& g);
double tau_b(const CharacterTables& C, std::uint64_t alpha, std::uint32_t b);
double eta_a(const CharacterTables& C, std::uint64_t alpha, std::uint32_t a);

struct CharSum {
    Complex sum;
    double bound = 0;
    bool hypothesis = true;  // false: the bound does not apply
    bool within() const { return !hypothesis || std::abs(sum) <= bound * (1 + 1e-9) + 1e-9; }
};

// degree sum of the distinct irreducible factors of f1 and f2
unsigned distinct_degree_sum(const FieldTower& T, const RationalFunction& f);
// f = c g^d for some rational g
bool is_constant_times_power(const FieldTower& T, const RationalFunction& f, std::uint64_t d);

CharSum weil_sum(const CharacterTables& C, const RationalFunction& f, const MultChar& chi);
// Summation range of the hybrid sum. Printed is the stated range, which drops α with g(α) = 0 as well as the poles.
// Dropping those terms can push |sum| past the bound, so PolesOnly keeps them.
enum class HybridRange { Printed, PolesOnly };
CharSum hybrid_weil_sum(const CharacterTables& C, const RationalFunction& f, const RationalFunction& g,
                        const MultChar& chi, const AddChar& psi, HybridRange range = HybridRange::Printed);

struct ChiFab {
    Complex sum;
    double bound = 0;   // trivial tuple: allowed deviation from q^m - |P|
    double center = 0;  // q^m - |P| for the trivial tuple, else 0
    bool trivial = false;
    bool within() const { return std::abs(sum - center) <= bound * (1 + 1e-9) + 1e-9; }
};

// The triple sum over i, c and α outside P, evaluated term by term.
ChiFab chi_fab(const CharacterTables& C, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
               const MultChar& chi1, const MultChar& chi2, const AddChar& psi1, const AddChar& psi2);

// N_{f,a,b}(Q_{e1}, e2, R_{g1}, g2) rebuilt from the weighted sum of χ_{f,a,b} over all divisor tuples
// and characters. The (i, c) part of each χ_{f,a,b} is summed once per α and shared by all tuples.
double reassembled_count(const CharacterTables& C, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                         const Factorization& e1, const Factorization& e2, const MidFactorization& g1,
                         const MidFactorization& g2);

// monic reciprocal x^{deg h} h(1/x)
MidPoly monic_reciprocal(const MidField& F, const MidPoly& h);
// R_g: drop the factor x-1
MidFactorization drop_x_minus_1(const MidField& F, const MidFactorization& g);

} // namespace pnp
