#include "pnpair/fqpoly.hpp"

#include "pnpair/error.hpp"

#include <algorithm>

namespace pnp {

MidFactorization poly_factor(const MidField& F, const MidPoly& f) { return MidRing(F).factor(f); }

std::vector<std::vector<std::uint64_t>> cyclotomic_cosets(std::uint64_t q, std::uint64_t n) {
    if (n == 0) fail(Errc::InputError, "coset modulus must be positive");
    if (gcd_u64(q % n, n) != 1 && n > 1) fail(Errc::NotCoprime, "q and n must be coprime");
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::uint64_t>> out;
    for (std::uint64_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::uint64_t> c;
        std::uint64_t x = s;
        while (!seen[x]) {
            seen[x] = true;
            c.push_back(x);
            x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * q) % n);
        }
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<unsigned> coset_sizes(std::uint64_t q, std::uint64_t n) {
    std::vector<unsigned> s;
    for (auto& c : cyclotomic_cosets(q, n)) s.push_back(static_cast<unsigned>(c.size()));
    std::sort(s.begin(), s.end());
    return s;
}

MidFactorization factor_xm_minus_1(const MidField& F, unsigned m) {
    if (m == 0) fail(Errc::DegreeZero, "x^m-1 needs m >= 1");
    MidRing R(F);
    const std::uint64_t mp = p_free_part(std::uint64_t(m), F.p());
    const unsigned pa = static_cast<unsigned>(m / mp);
    MidFactorization f = R.factor(R.xn_minus_one(static_cast<unsigned>(mp)));
    std::vector<unsigned> degs;
    for (auto& [g, e] : f.factors) {
        if (e != 1) fail(Errc::PreconditionViolated, "x^{m'}-1 is not square-free");
        e = pa;
        degs.push_back(static_cast<unsigned>(g.deg()));
    }
    std::sort(degs.begin(), degs.end());
    if (degs != coset_sizes(F.q(), mp)) fail(Errc::PreconditionViolated, "factor degrees disagree with cyclotomic cosets");
    return f;
}

BigInt poly_euler_phi(const MidFactorization& f, std::uint64_t q) {
    BigInt r = 1;
    for (auto& [g, e] : f.factors) {
        BigInt qd = ipow(BigInt(static_cast<unsigned long>(q)), g.deg());
        r *= ipow(qd, e - 1) * (qd - 1);
    }
    return r;
}

Rational poly_theta(const MidFactorization& f, std::uint64_t q) {
    Rational r = 1;
    for (auto& [g, e] : f.factors) {
        BigInt qd = ipow(BigInt(static_cast<unsigned long>(q)), g.deg());
        r *= Rational(qd - 1, qd);
    }
    r.canonicalize();
    return r;
}

BigInt poly_W(const MidFactorization& f) { return ipow(2, f.factors.size()); }

MidFactorization radical(const MidFactorization& f) {
    MidFactorization r = f;
    r.unit = 1;
    for (auto& fe : r.factors) fe.second = 1;
    return r;
}

MidPoly product(const MidField& F, const MidFactorization& f) {
    MidRing R(F);
    MidPoly r = R.one();
    for (auto& [g, e] : f.factors) r = R.mul(r, R.pow(g, e));
    return r;
}

TopElem module_action(const FieldTower& T, const MidPoly& f, const TopElem& alpha) {
    TopElem acc = T.zero(), beta = alpha;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (f.c[i]) acc = T.add(acc, T.scale(beta, f.c[i]));
        if (i + 1 < f.c.size()) beta = T.frobenius(beta);
    }
    return acc;
}

MidPoly fq_order(const FieldTower& T, const MidFactorization& xm1, const TopElem& alpha) {
    MidRing R(T.mid());
    MidPoly g = product(T.mid(), xm1);
    for (auto& [h, e] : xm1.factors) {
        for (unsigned i = 0; i < e; ++i) {
            MidPoly cand = R.div_exact(g, h);
            if (!T.is_zero(module_action(T, cand, alpha))) break;
            g = cand;
        }
    }
    return g;
}

MidPoly fq_order(const FieldTower& T, const TopElem& alpha) {
    return fq_order(T, factor_xm_minus_1(T.mid(), T.m()), alpha);
}

MidFactorization largest_coprime_poly_divisor(const MidField& F, const MidFactorization& g, const MidPoly& h) {
    MidRing R(F);
    if (!R.is_irreducible(h)) fail(Errc::PreconditionViolated, "h must be irreducible");
    MidPoly hm = R.monic(h);
    MidFactorization r;
    r.unit = g.unit;
    for (auto& fe : g.factors)
        if (fe.first != hm) r.factors.push_back(fe);
    return r;
}

XmStructure xm_structure(std::uint64_t q, std::uint64_t m) {
    auto pk = prime_power_parts(BigInt(static_cast<unsigned long>(q)));
    if (!pk) fail(Errc::InputError, "q must be a prime power");
    if (m == 0) fail(Errc::DegreeZero, "m must be positive");
    XmStructure s;
    s.q = q;
    s.p = pk->first.get_ui();
    s.m = m;
    s.m_prime = p_free_part(m, s.p);
    s.u = multiplicative_order(q, s.m_prime);
    s.degrees = coset_sizes(q, s.m_prime);
    return s;
}

Sigma sigma_ratio(std::uint64_t q, std::uint64_t m) {
    XmStructure s = xm_structure(q, m);
    Sigma out;
    out.u = s.u;
    if (s.m_prime == 1) {
        out.synthetic = true;
        out.small_factors = 1;
        out.value = Rational(1, static_cast<unsigned long>(m));
        return out;
    }
    for (unsigned d : s.degrees)
        if (d < s.u) ++out.small_factors;
    out.value = Rational(static_cast<unsigned long>(out.small_factors), static_cast<unsigned long>(m));
    out.value.canonicalize();
    return out;
}

Rational coset_log2_bound(std::uint64_t q, std::uint64_t m) {
    Rational r(static_cast<unsigned long>(m + gcd_u64(m, q - 1)), 2ul);
    r.canonicalize();
    return r;
}

} // namespace pnp
