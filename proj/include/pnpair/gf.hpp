#pragma once

#include "pnpair/arith.hpp"
#include "pnpair/poly.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace pnp {

/// F_q = F_p[u]/(base modulus), elements coded as base-p integers with the constant term as lowest digit.
class MidField {
public:
    using Elem = std::uint32_t;

    MidField(std::uint32_t p, unsigned k);

    std::uint32_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint32_t q() const { return q_; }
    // ascending coefficients over F_p, leading 1 included
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    // primitive element of F_q used for the multiplicative tables
    Elem primitive_root() const { return exp_[1]; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const {
        if (k_ == 1) return static_cast<Elem>((std::uint64_t(a) * b) % p_);
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Elem inv(Elem a) const;
    Elem pow(Elem a, const BigInt& e) const;
    Elem pow(Elem a, std::uint64_t e) const;
    Elem from_int(long v) const;
    Elem pth_root(Elem a) const { return pow(a, static_cast<std::uint64_t>(q_ / p_)); }
    Elem random(std::mt19937_64& rng) const { return static_cast<Elem>(rng() % q_); }
    BigInt order() const { return BigInt(q_); }
    std::uint32_t characteristic() const { return p_; }
    BigInt encode(Elem a) const { return BigInt(a); }
    std::uint32_t digit(Elem a, unsigned i) const;
    // Tr_{F_q/F_p}
    std::uint32_t abs_trace(Elem a) const { return abs_trace_[a]; }
    // discrete log with respect to primitive_root(); a != 0
    std::uint32_t log(Elem a) const { return log_[a]; }
    Elem exp_log(std::uint64_t e) const { return exp_[e % (q_ - 1)]; }
    Elem generator_u() const;
    std::string format(Elem a) const;
    bool is_primitive(Elem a) const;

private:
    std::uint32_t p_;
    unsigned k_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> exp_;  // length 2(q-1) for k>1, so log sums need no reduction
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> abs_trace_;
    std::vector<std::uint32_t> pow_p_;  // p^i
};

struct TopElem {
    std::vector<std::uint32_t> c;  // m coefficients in F_q, ascending
    bool operator==(const TopElem& o) const { return c == o.c; }
    bool operator!=(const TopElem& o) const { return c != o.c; }
};

/// F_{q^m} = F_q[t]/(ext modulus) over F_q = F_p[u]/(base modulus).
class FieldTower {
public:
    using Elem = TopElem;
    static constexpr std::uint64_t kEnumerationLimit = 1ULL << 31;

    FieldTower(std::uint32_t p, unsigned k, unsigned m);

    std::uint32_t p() const { return mid_->p(); }
    unsigned k() const { return mid_->k(); }
    unsigned m() const { return m_; }
    std::uint32_t q() const { return mid_->q(); }
    const BigInt& order_big() const { return order_; }
    BigInt order() const { return order_; }
    bool enumerable() const { return order_ <= BigInt(static_cast<unsigned long>(kEnumerationLimit)); }
    std::uint64_t size() const;  // requires enumerable()
    const MidField& mid() const { return *mid_; }
    const std::vector<std::uint32_t>& ext_modulus() const { return ext_modulus_; }

    // factorization of q^m-1; computed on first use unless supplied
    const Factorization& qm1() const;
    void set_qm1(const Factorization& f);
    void compute_qm1(const FactorOptions& opt) const;

    TopElem zero() const { return TopElem{std::vector<std::uint32_t>(m_, 0)}; }
    TopElem one() const;
    TopElem t() const;
    TopElem embed(std::uint32_t a) const;
    bool is_zero(const TopElem& a) const;
    bool in_mid(const TopElem& a) const;
    std::uint32_t to_mid(const TopElem& a) const;  // requires in_mid

    TopElem add(const TopElem& a, const TopElem& b) const;
    TopElem sub(const TopElem& a, const TopElem& b) const;
    TopElem neg(const TopElem& a) const;
    TopElem scale(const TopElem& a, std::uint32_t s) const;
    TopElem mul(const TopElem& a, const TopElem& b) const;
    TopElem inv(const TopElem& a) const;
    TopElem pow(const TopElem& a, const BigInt& e) const;
    TopElem from_int(long v) const { return embed(mid_->from_int(v)); }
    TopElem pth_root(const TopElem& a) const;
    TopElem random(std::mt19937_64& rng) const;
    std::uint32_t characteristic() const { return p(); }
    BigInt encode(const TopElem& a) const { return index_big(a); }

    TopElem frobenius(const TopElem& a) const;  // a^q
    TopElem frobenius_power(const TopElem& a, unsigned i) const;
    std::uint32_t trace_to_mid(const TopElem& a) const;
    std::uint32_t norm_to_mid(const TopElem& a) const;
    std::uint32_t abs_trace(const TopElem& a) const { return mid_->abs_trace(trace_to_mid(a)); }
    bool is_primitive(const TopElem& a) const;

    std::uint64_t index(const TopElem& a) const;  // requires enumerable()
    TopElem element(std::uint64_t i) const;       // IndexOutOfRange
    BigInt index_big(const TopElem& a) const;
    TopElem element_big(const BigInt& i) const;

    std::string format(const TopElem& a) const;
    TopElem parse(const std::string& text) const;

    // Linear map view: columns are images of the basis t^j, entries in F_q.
    const std::vector<TopElem>& frobenius_columns() const { return frob_cols_; }

private:
    std::shared_ptr<const MidField> mid_;
    unsigned m_;
    BigInt order_;
    std::vector<std::uint32_t> ext_modulus_;
    std::vector<TopElem> frob_cols_;
    mutable std::shared_ptr<Factorization> qm1_;
    mutable std::shared_ptr<std::once_flag> qm1_once_;
};

/// Full exp/log tables for an enumerable tower. The generator is the smallest-index primitive element.
class DiscreteLogTable {
public:
    static constexpr std::uint64_t kLimit = 1ULL << 26;
    explicit DiscreteLogTable(const FieldTower& tower);

    std::uint64_t n() const { return n_; }  // q^m - 1
    std::uint64_t generator_index() const { return exp_[1]; }
    std::uint32_t log(std::uint64_t index) const { return log_[index]; }  // index != 0
    std::uint32_t exp(std::uint64_t e) const { return exp_[e % n_]; }
    const std::vector<std::uint32_t>& exp_table() const { return exp_; }
    const std::vector<std::uint32_t>& log_table() const { return log_; }

private:
    std::uint64_t n_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

using MidPoly = Poly<MidField>;
using TopPoly = Poly<FieldTower>;

// Expression parsing for the text formats; integers are reduced mod p, `u` is the F_q generator,
// `t` the top generator, `x` the polynomial variable where allowed.
MidPoly parse_mid_poly(const MidField& f, const std::string& text);
TopPoly parse_top_poly(const FieldTower& t, const std::string& text);
std::uint32_t parse_mid_elem(const MidField& f, const std::string& text);

} // namespace pnp
