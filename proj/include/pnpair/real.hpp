#pragma once

#include "pnpair/arith.hpp"

#include <mpfr.h>

#include <string>
#include <vector>

namespace pnp {

// MPFR real at a process-wide precision (200 bits unless changed before use).
class Real {
public:
    static void set_precision(long bits);
    static long precision();

    Real();
    Real(long v);  // NOLINT: implicit from small integers
    explicit Real(const BigInt& v);
    explicit Real(const Rational& v);
    static Real parse(const std::string& decimal);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    Real operator+(const Real& o) const;
    Real operator-(const Real& o) const;
    Real operator*(const Real& o) const;
    Real operator/(const Real& o) const;
    Real operator-() const;
    Real& operator+=(const Real& o) { return *this = *this + o; }
    bool operator<(const Real& o) const { return mpfr_less_p(v_, o.v_); }
    bool operator>(const Real& o) const { return mpfr_greater_p(v_, o.v_); }
    bool operator<=(const Real& o) const { return mpfr_lessequal_p(v_, o.v_); }
    bool operator>=(const Real& o) const { return mpfr_greaterequal_p(v_, o.v_); }
    bool operator==(const Real& o) const { return mpfr_equal_p(v_, o.v_); }

    Real log() const;
    Real exp() const;
    Real abs() const;
    Real sqrt() const;
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // significant digits, scientific notation when the exponent is large
    std::string str(int digits = 15) const;

    const mpfr_t& raw() const { return v_; }

private:
    mpfr_t v_;
};

// Π base_i^{exp_i} with positive rational bases and rational exponents.
class PowerProduct {
public:
    struct Term {
        Rational base;
        Rational exponent;
    };
    PowerProduct() = default;
    PowerProduct& times(const Rational& base, const Rational& exponent = 1);
    const std::vector<Term>& terms() const { return terms_; }
    Real log() const;
    std::string describe() const;

private:
    std::vector<Term> terms_;
};

struct Comparison {
    Real lhs_log, rhs_log;
    int sign = 0;        // sign of lhs - rhs
    bool exact = false;  // decided by exact arithmetic after a near tie
    bool decided = true;
};

// Log-domain comparison; within 1e-30 relative the sides are compared exactly by raising both to
// the common denominator of the exponents, when the result stays below ~2^26 bits.
Comparison compare(const PowerProduct& lhs, const PowerProduct& rhs);

Rational parse_decimal(const std::string& text);

} // namespace pnp
