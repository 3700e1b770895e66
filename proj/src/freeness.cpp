#include "pnpair/freeness.hpp"

#include "pnpair/error.hpp"

#include <algorithm>

namespace pnp {

namespace {

void require_divides(const BigInt& e, const BigInt& n, const char* what) {
    if (e < 1 || !mpz_divisible_p(n.get_mpz_t(), e.get_mpz_t())) fail(Errc::NotDividing, std::string(what) + ": " + e.get_str() + " does not divide " + n.get_str());
}

} // namespace

bool is_e_free(const FieldTower& T, const TopElem& alpha, const Factorization& e) {
    if (!e.complete()) fail(Errc::IncompleteFactorization, "e-freeness needs a complete factorization of e");
    const BigInt n = T.order() - 1;
    require_divides(e.value, n, "e-free");
    if (T.is_zero(alpha)) fail(Errc::PreconditionViolated, "freeness is defined on nonzero elements");
    const TopElem one = T.one();
    for (auto& pp : e.factors)
        if (T.pow(alpha, n / pp.prime) == one) return false;
    return true;
}

bool is_mid_free(const MidField& F, std::uint32_t a, const Factorization& s) {
    if (!s.complete()) fail(Errc::IncompleteFactorization, "freeness needs a complete factorization");
    const BigInt n(F.q() - 1);
    require_divides(s.value, n, "F_q freeness");
    if (a == 0) fail(Errc::PreconditionViolated, "freeness is defined on nonzero elements");
    for (auto& pp : s.factors)
        if (F.pow(a, BigInt(n / pp.prime)) == 1) return false;
    return true;
}

namespace {

void require_poly_divides(const MidField& F, const MidFactorization& xm1, const MidFactorization& g) {
    for (auto& [h, e] : g.factors) {
        bool found = std::any_of(xm1.factors.begin(), xm1.factors.end(), [&](auto& fe) { return fe.first == h; });
        if (!found) fail(Errc::NotDividing, MidRing(F).format(h) + " does not divide x^m-1");
    }
}

} // namespace

bool is_g_free(const FieldTower& T, const MidFactorization& xm1, const TopElem& alpha, const MidFactorization& g) {
    require_poly_divides(T.mid(), xm1, g);
    MidRing R(T.mid());
    MidPoly full = R.xn_minus_one(T.m());
    for (auto& [h, e] : g.factors)
        if (T.is_zero(module_action(T, R.div_exact(full, h), alpha))) return false;
    return true;
}

bool is_g_free_by_order(const FieldTower& T, const MidFactorization& xm1, const TopElem& alpha, const MidFactorization& g) {
    require_poly_divides(T.mid(), xm1, g);
    MidRing R(T.mid());
    MidPoly co = R.div_exact(R.xn_minus_one(T.m()), fq_order(T, xm1, alpha));
    return R.gcd(co, product(T.mid(), radical(g))).deg() == 0;
}

DecompositionCheck lemma31_check(const FieldTower& T, const TopElem& alpha, const Factorization& l) {
    DecompositionCheck r;
    r.lhs = is_e_free(T, alpha, l);
    BigInt sigma;
    BigInt qm1(T.q() - 1);
    mpz_gcd(sigma.get_mpz_t(), l.value.get_mpz_t(), qm1.get_mpz_t());
    Factorization sf = factor(sigma);
    Factorization Ql = largest_coprime_divisor(l, sigma);
    r.rhs = is_mid_free(T.mid(), T.norm_to_mid(alpha), sf) && is_e_free(T, alpha, Ql);
    return r;
}

RationalFunction make_rational(const FieldTower& T, TopPoly num, TopPoly den) {
    TopRing R(T);
    if (den.is_zero()) fail(Errc::DivisionByZero, "zero denominator");
    if (R.gcd(num, den).deg() > 0) fail(Errc::NotReduced, "numerator and denominator share a factor");
    TopElem lead = den.lead();
    TopElem li = T.inv(lead);
    RationalFunction f;
    f.f1 = R.scale(num, li);
    f.f2 = R.scale(den, li);
    f.n1 = std::max(0, f.f1.deg());
    f.n2 = f.f2.deg();
    return f;
}

RationalFunction parse_rational(const FieldTower& T, const std::string& text) {
    int depth = 0;
    std::size_t slash = std::string::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (c == '/' && depth == 0) {
            if (slash != std::string::npos) fail(Errc::InputError, "rational function with more than one '/'");
            slash = i;
        }
    }
    TopRing R(T);
    if (slash == std::string::npos) return make_rational(T, parse_top_poly(T, text), R.one());
    return make_rational(T, parse_top_poly(T, text.substr(0, slash)), parse_top_poly(T, text.substr(slash + 1)));
}

std::string format_rational(const FieldTower& T, const RationalFunction& f) {
    TopRing R(T);
    std::string a = R.format(f.f1);
    if (f.f2.deg() == 0) return a;
    return "(" + a + ")/(" + R.format(f.f2) + ")";
}

std::vector<TopElem> roots_in_field(const FieldTower& T, const TopPoly& f) {
    TopRing R(T);
    std::vector<TopElem> out;
    if (f.deg() < 1) return out;
    for (auto& [g, e] : R.factor(f).factors)
        if (g.deg() == 1) out.push_back(T.neg(g.c[0]));
    std::sort(out.begin(), out.end(), [&](const TopElem& a, const TopElem& b) { return T.index_big(a) < T.index_big(b); });
    return out;
}

std::vector<TopElem> pole_zero_set(const FieldTower& T, const RationalFunction& f) {
    std::vector<TopElem> s = roots_in_field(T, f.f1);
    for (auto& r : roots_in_field(T, f.f2)) s.push_back(r);
    s.push_back(T.zero());
    std::sort(s.begin(), s.end(), [&](const TopElem& a, const TopElem& b) { return T.index_big(a) < T.index_big(b); });
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

const char* rn_reason_name(RnReason r) {
    switch (r) {
    case RnReason::Member: return "member";
    case RnReason::Monomial: return "monomial";
    case RnReason::PowerOfDivisor: return "power-of-divisor";
    case RnReason::DenominatorPower: return "denominator-power";
    }
    return "unknown";
}

RnResult rn_membership(const FieldTower& T, const RationalFunction& f) {
    TopRing R(T);
    if (f.f1.is_zero()) fail(Errc::InputError, "the zero function is not a rational function in simplest form");
    if (R.gcd(f.f1, f.f2).deg() > 0) fail(Errc::NotReduced, "function is not in simplest form");
    RnResult r;
    const TopPoly X = R.x();
    BigInt D = 0;
    auto absorb = [&](const TopPoly& p) {
        if (p.deg() < 1) return;
        for (auto& [g, e] : R.factor(p).factors) {
            if (g == X) continue;
            mpz_gcd_ui(D.get_mpz_t(), D.get_mpz_t(), e);
        }
    };
    absorb(f.f1);
    absorb(f.f2);
    r.D = D;
    if (D == 0) {
        r.reason = RnReason::Monomial;
        return r;
    }
    BigInt g;
    BigInt n = T.order() - 1;
    mpz_gcd(g.get_mpz_t(), D.get_mpz_t(), n.get_mpz_t());
    if (g > 1) {
        r.reason = RnReason::PowerOfDivisor;
        return r;
    }
    bool some_free = false;
    if (f.f2.deg() >= 1)
        for (auto& [h, e] : R.factor(f.f2).factors)
            if (!mpz_divisible_p(BigInt(e).get_mpz_t(), T.order().get_mpz_t())) some_free = true;
    if (!some_free) {
        r.reason = RnReason::DenominatorPower;
        return r;
    }
    r.member = true;
    return r;
}

std::optional<TopElem> eval_rational(const FieldTower& T, const RationalFunction& f, const TopElem& alpha) {
    TopRing R(T);
    TopElem den = R.eval(f.f2, alpha);
    if (T.is_zero(den)) return std::nullopt;
    return T.mul(R.eval(f.f1, alpha), T.inv(den));
}

unsigned m_constant(unsigned n1, unsigned n2) { return n1 > n2 ? 2 * n1 + n2 : n1 + 2 * n2 + 1; }

} // namespace pnp
