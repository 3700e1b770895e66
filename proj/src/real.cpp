#include "pnpair/real.hpp"

#include "pnpair/error.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <sstream>

namespace pnp {

namespace {
std::atomic<long> g_precision{200};
}

void Real::set_precision(long bits) {
    require(bits >= 53 && bits <= 1 << 20, Errc::InputError, "precision out of range");
    g_precision = bits;
}
long Real::precision() { return g_precision; }

Real::Real() {
    mpfr_init2(v_, g_precision);
    mpfr_set_zero(v_, 1);
}
Real::Real(long v) {
    mpfr_init2(v_, g_precision);
    mpfr_set_si(v_, v, MPFR_RNDN);
}
Real::Real(const BigInt& v) {
    mpfr_init2(v_, g_precision);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}
Real::Real(const Rational& v) {
    mpfr_init2(v_, g_precision);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}
Real Real::parse(const std::string& decimal) {
    Real r;
    if (mpfr_set_str(r.v_, decimal.c_str(), 10, MPFR_RNDN) != 0) fail(Errc::InputError, "bad decimal: " + decimal);
    return r;
}
Real::Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}
Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}
Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}
Real::~Real() { mpfr_clear(v_); }

#define PNP_BINOP(op, fn)                               \
    Real Real::operator op(const Real& o) const {       \
        Real r;                                         \
        fn(r.v_, v_, o.v_, MPFR_RNDN);                 \
        return r;                                       \
    }
PNP_BINOP(+, mpfr_add)
PNP_BINOP(-, mpfr_sub)
PNP_BINOP(*, mpfr_mul)
PNP_BINOP(/, mpfr_div)
#undef PNP_BINOP

Real Real::operator-() const {
    Real r;
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}
Real Real::log() const {
    require(sign() > 0, Errc::PreconditionViolated, "log of a non-positive real");
    Real r;
    mpfr_log(r.v_, v_, MPFR_RNDN);
    return r;
}
Real Real::exp() const {
    Real r;
    mpfr_exp(r.v_, v_, MPFR_RNDN);
    return r;
}
Real Real::sqrt() const {
    Real r;
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::abs() const {
    Real r;
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

std::string Real::str(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    std::unique_ptr<char, void (*)(char*)> buf(nullptr, [](char* p) { mpfr_free_str(p); });
    mpfr_exp_t e;
    buf.reset(mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), v_, MPFR_RNDN));
    std::string s = buf.get();
    bool neg = s[0] == '-';
    if (neg) s.erase(0, 1);
    std::string out;
    if (e > 0 && e <= digits + 6) {
        if (static_cast<std::size_t>(e) >= s.size()) out = s + std::string(static_cast<std::size_t>(e) - s.size(), '0');
        else out = s.substr(0, static_cast<std::size_t>(e)) + "." + s.substr(static_cast<std::size_t>(e));
    } else if (e <= 0 && e > -6) {
        out = "0." + std::string(static_cast<std::size_t>(-e), '0') + s;
    } else {
        out = s.substr(0, 1) + "." + s.substr(1) + "e" + std::to_string(e - 1);
    }
    if (out.find('.') != std::string::npos && out.find('e') == std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return neg ? "-" + out : out;
}

PowerProduct& PowerProduct::times(const Rational& base, const Rational& exponent) {
    require(base > 0, Errc::PreconditionViolated, "power base must be positive");
    if (exponent != 0 && base != 1) terms_.push_back(Term{base, exponent});
    return *this;
}

Real PowerProduct::log() const {
    Real s;
    for (auto& t : terms_) s += Real(t.base).log() * Real(t.exponent);
    return s;
}

std::string PowerProduct::describe() const {
    std::ostringstream os;
    if (terms_.empty()) return "1";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << "*";
        os << terms_[i].base.get_str();
        if (terms_[i].exponent != 1) os << "^(" << terms_[i].exponent.get_str() << ")";
    }
    return os.str();
}

namespace {

// Π over terms of base^{exponent·L} as an exact rational, or nullopt when too large
bool exact_power(const std::vector<PowerProduct::Term>& terms, const BigInt& L, Rational& out) {
    double bits = 0;
    for (auto& t : terms) {
        Rational e = t.exponent * L;
        bits += std::fabs(e.get_d()) * (std::log2(std::fabs(t.base.get_num().get_d()) + 1) + std::log2(t.base.get_den().get_d() + 1));
    }
    if (bits > 6.7e7) return false;
    out = 1;
    for (auto& t : terms) {
        Rational e = t.exponent * L;
        e.canonicalize();
        const unsigned long n = BigInt(abs(e.get_num())).get_ui();
        Rational b = t.base;
        BigInt num, den;
        mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), n);
        mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), n);
        Rational pw(num, den);
        pw.canonicalize();
        if (e < 0) out /= pw;
        else out *= pw;
    }
    return true;
}

} // namespace

Comparison compare(const PowerProduct& lhs, const PowerProduct& rhs) {
    Comparison c;
    c.lhs_log = lhs.log();
    c.rhs_log = rhs.log();
    Real diff = c.lhs_log - c.rhs_log;
    Real scale = c.lhs_log.abs() > c.rhs_log.abs() ? c.lhs_log.abs() : c.rhs_log.abs();
    if (scale < Real(1)) scale = Real(1);
    if (diff.abs() > scale * Real::parse("1e-30")) {
        c.sign = diff.sign() > 0 ? 1 : -1;
        return c;
    }
    BigInt L = 1;
    for (auto* side : {&lhs, &rhs})
        for (auto& t : side->terms()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), t.exponent.get_den_mpz_t());
    Rational a, b;
    if (!exact_power(lhs.terms(), L, a) || !exact_power(rhs.terms(), L, b)) {
        c.decided = false;
        c.sign = 0;
        return c;
    }
    c.exact = true;
    c.sign = a > b ? 1 : (a < b ? -1 : 0);
    return c;
}

Rational parse_decimal(const std::string& text) {
    std::string s = text;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stol(s.substr(epos + 1));
        s = s.substr(0, epos);
    }
    bool neg = !s.empty() && s[0] == '-';
    if (neg || (!s.empty() && s[0] == '+')) s.erase(0, 1);
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<long>(s.size() - dot - 1);
        s.erase(dot, 1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail(Errc::InputError, "bad decimal: " + text);
    Rational r{BigInt(s, 10)};
    BigInt p = ipow(10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 < 0) r /= p;
    else r *= p;
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

} // namespace pnp
