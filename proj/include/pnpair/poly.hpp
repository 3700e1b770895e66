#pragma once

// Dense univariate polynomials over any field type exposing the small interface used below
// (zero/one/add/sub/neg/mul/inv, order, characteristic, pth_root, random, encode, format).

#include "pnpair/arith.hpp"
#include "pnpair/error.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace pnp {

template <class F>
struct Poly {
    using Elem = typename F::Elem;
    std::vector<Elem> c;  // ascending; empty means zero

    int deg() const { return c.empty() ? -1 : static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Elem& lead() const { return c.back(); }
    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return c != o.c; }
};

template <class F>
struct PolyFactorization {
    typename F::Elem unit{};
    std::vector<std::pair<Poly<F>, unsigned>> factors;  // monic irreducibles, sorted by (degree, encoding)
};

template <class F>
class PolyRing {
public:
    using Elem = typename F::Elem;
    using P = Poly<F>;

    explicit PolyRing(const F& field) : f_(field) {}
    const F& field() const { return f_; }

    P zero() const { return {}; }
    P constant(const Elem& a) const {
        P r;
        if (!f_.is_zero(a)) r.c.push_back(a);
        return r;
    }
    P one() const { return constant(f_.one()); }
    P x() const { return monomial(f_.one(), 1); }
    P monomial(const Elem& a, unsigned e) const {
        P r;
        if (f_.is_zero(a)) return r;
        r.c.assign(e + 1, f_.zero());
        r.c[e] = a;
        return r;
    }
    // x^n - 1
    P xn_minus_one(unsigned n) const {
        P r = monomial(f_.one(), n);
        r.c[0] = f_.sub(r.c[0], f_.one());
        trim(r);
        return r;
    }
    P from_coeffs(std::vector<Elem> c) const {
        P r{std::move(c)};
        trim(r);
        return r;
    }

    void trim(P& a) const {
        while (!a.c.empty() && f_.is_zero(a.c.back())) a.c.pop_back();
    }

    P add(const P& a, const P& b) const {
        P r;
        r.c.resize(std::max(a.c.size(), b.c.size()), f_.zero());
        for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = f_.add(r.c[i], b.c[i]);
        trim(r);
        return r;
    }
    P neg(const P& a) const {
        P r = a;
        for (auto& x : r.c) x = f_.neg(x);
        return r;
    }
    P sub(const P& a, const P& b) const { return add(a, neg(b)); }
    P scale(const P& a, const Elem& s) const {
        if (f_.is_zero(s)) return {};
        P r = a;
        for (auto& x : r.c) x = f_.mul(x, s);
        return r;
    }
    P mul(const P& a, const P& b) const {
        if (a.is_zero() || b.is_zero()) return {};
        P r;
        r.c.assign(a.c.size() + b.c.size() - 1, f_.zero());
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (f_.is_zero(a.c[i])) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = f_.add(r.c[i + j], f_.mul(a.c[i], b.c[j]));
        }
        trim(r);
        return r;
    }
    P pow(P a, unsigned long e) const {
        P r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }

    std::pair<P, P> divmod(const P& a, const P& b) const {
        if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
        P r = a, q;
        if (a.deg() < b.deg()) return {q, r};
        q.c.assign(a.c.size() - b.c.size() + 1, f_.zero());
        Elem li = f_.inv(b.lead());
        for (int i = r.deg(); i >= b.deg(); --i) {
            Elem coef = r.c[i];
            if (f_.is_zero(coef)) continue;
            coef = f_.mul(coef, li);
            int shift = i - b.deg();
            q.c[shift] = coef;
            for (int j = 0; j <= b.deg(); ++j) r.c[shift + j] = f_.sub(r.c[shift + j], f_.mul(coef, b.c[j]));
        }
        trim(r);
        trim(q);
        return {q, r};
    }
    P mod(const P& a, const P& b) const { return divmod(a, b).second; }
    P div_exact(const P& a, const P& b) const {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) fail(Errc::NotDividing, "polynomial does not divide");
        return q;
    }
    bool divides(const P& d, const P& a) const { return mod(a, d).is_zero(); }

    P monic(const P& a) const {
        if (a.is_zero()) return a;
        return scale(a, f_.inv(a.lead()));
    }
    bool is_monic(const P& a) const { return !a.is_zero() && a.lead() == f_.one(); }
    P gcd(P a, P b) const {
        while (!b.is_zero()) {
            P r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }
    P mulmod(const P& a, const P& b, const P& m) const { return mod(mul(a, b), m); }
    P powmod(P a, const BigInt& e, const P& m) const {
        P r = mod(one(), m);
        a = mod(a, m);
        for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
            r = mulmod(r, r, m);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, a, m);
        }
        return r;
    }
    P derivative(const P& a) const {
        P r;
        if (a.deg() < 1) return r;
        r.c.resize(a.c.size() - 1);
        for (std::size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = f_.mul(f_.from_int(static_cast<long>(i)), a.c[i]);
        trim(r);
        return r;
    }
    Elem eval(const P& a, const Elem& x) const {
        Elem acc = f_.zero();
        for (std::size_t i = a.c.size(); i-- > 0;) acc = f_.add(f_.mul(acc, x), a.c[i]);
        return acc;
    }

    BigInt encode(const P& a) const {
        BigInt r = 0, order = f_.order();
        for (std::size_t i = a.c.size(); i-- > 0;) r = r * order + f_.encode(a.c[i]);
        return r;
    }
    bool less(const P& a, const P& b) const {
        if (a.deg() != b.deg()) return a.deg() < b.deg();
        return encode(a) < encode(b);
    }

    std::string format(const P& a, char var = 'x') const {
        if (a.is_zero()) return "0";
        std::string out;
        for (int i = a.deg(); i >= 0; --i) {
            if (f_.is_zero(a.c[i])) continue;
            std::string cs = f_.format(a.c[i]);
            bool compound = cs.find_first_of("+-") != std::string::npos && !(cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos);
            std::string term;
            if (i == 0) term = cs;
            else {
                std::string mono = std::string(1, var) + (i > 1 ? "^" + std::to_string(i) : "");
                if (a.c[i] == f_.one()) term = mono;
                else term = (compound ? "(" + cs + ")" : cs) + "*" + mono;
            }
            if (!out.empty()) out += "+";
            out += term;
        }
        return out;
    }

    // x^(order^i) mod m by repeated powering
    P frobenius_xpow(const P& h, const P& m) const { return powmod(h, f_.order(), m); }

    bool is_irreducible(const P& a) const {
        int n = a.deg();
        if (n < 1) return false;
        if (n == 1) return true;
        P fm = monic(a), xx = x();
        std::vector<P> xp(n + 1);
        xp[0] = mod(xx, fm);
        for (int i = 1; i <= n; ++i) xp[i] = frobenius_xpow(xp[i - 1], fm);
        if (!sub(xp[n], xp[0]).is_zero()) return false;
        for (std::uint64_t r : prime_divisors_small(n)) {
            P g = gcd(fm, sub(xp[n / r], xx));
            if (g.deg() != 0) return false;
        }
        return true;
    }

    // Square-free decomposition: pairs (square-free factor, multiplicity).
    std::vector<std::pair<P, unsigned>> squarefree(const P& a) const {
        std::vector<std::pair<P, unsigned>> out;
        sqf_rec(monic(a), 1, out);
        return out;
    }

    // Distinct-degree split of a monic square-free polynomial: (product of degree-d irreducibles, d).
    std::vector<std::pair<P, unsigned>> distinct_degree(P a) const {
        std::vector<std::pair<P, unsigned>> out;
        P h = x();
        unsigned d = 0;
        while (a.deg() >= 2 * static_cast<int>(d + 1)) {
            ++d;
            h = frobenius_xpow(mod(h, a), a);
            P g = gcd(a, sub(h, x()));
            if (g.deg() > 0) {
                out.push_back({g, d});
                a = div_exact(a, g);
                h = mod(h, a);
            }
        }
        if (a.deg() > 0) out.push_back({a, static_cast<unsigned>(a.deg())});
        return out;
    }

    // Equal-degree splitting with a fixed-seed generator.
    std::vector<P> equal_degree(const P& a, unsigned d) const {
        std::vector<P> result;
        std::vector<P> work{a};
        std::mt19937_64 rng(0x51b3ULL + static_cast<unsigned>(a.deg()) * 131u + d);
        const BigInt order = f_.order();
        const BigInt qd = ipow(order, d);
        const bool even = f_.characteristic() == 2;
        while (!work.empty()) {
            P g = work.back();
            work.pop_back();
            if (g.deg() == static_cast<int>(d)) {
                result.push_back(g);
                continue;
            }
            for (;;) {
                P r;
                r.c.resize(g.deg());
                for (auto& coef : r.c) coef = f_.random(rng);
                trim(r);
                if (r.deg() < 1) continue;
                P b;
                if (!even) {
                    b = powmod(r, (qd - 1) / 2, g);
                    b = sub(b, one());
                } else {
                    // absolute trace map: sum of r^(2^i) for i below log2(order^d)
                    unsigned long bits = mpz_sizeinbase(qd.get_mpz_t(), 2) - 1;
                    P t = mod(r, g), acc = t;
                    for (unsigned long i = 1; i < bits; ++i) {
                        t = mulmod(t, t, g);
                        acc = add(acc, t);
                    }
                    b = acc;
                }
                P s = gcd(g, b);
                if (s.deg() > 0 && s.deg() < g.deg()) {
                    work.push_back(s);
                    work.push_back(div_exact(g, s));
                    break;
                }
            }
        }
        return result;
    }

    PolyFactorization<F> factor(const P& a) const {
        if (a.is_zero()) fail(Errc::InputError, "cannot factor the zero polynomial");
        PolyFactorization<F> out;
        out.unit = a.lead();
        for (auto& [sq, mult] : squarefree(a)) {
            for (auto& [part, d] : distinct_degree(sq)) {
                for (auto& irr : equal_degree(part, d)) out.factors.push_back({monic(irr), mult});
            }
        }
        std::sort(out.factors.begin(), out.factors.end(), [&](auto& u, auto& v) { return less(u.first, v.first); });
        // merge equal factors arising from different square-free layers
        std::vector<std::pair<P, unsigned>> merged;
        for (auto& fe : out.factors) {
            if (!merged.empty() && merged.back().first == fe.first) merged.back().second += fe.second;
            else merged.push_back(fe);
        }
        out.factors = std::move(merged);
        return out;
    }

    P reassemble(const PolyFactorization<F>& pf) const {
        P r = constant(pf.unit);
        for (auto& [g, e] : pf.factors) r = mul(r, pow(g, e));
        return r;
    }

private:
    static std::vector<std::uint64_t> prime_divisors_small(std::uint64_t n) {
        std::vector<std::uint64_t> r;
        for (std::uint64_t p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            r.push_back(p);
            while (n % p == 0) n /= p;
        }
        if (n > 1) r.push_back(n);
        return r;
    }

    void sqf_rec(const P& a, unsigned base, std::vector<std::pair<P, unsigned>>& out) const {
        if (a.deg() < 1) return;
        P da = derivative(a);
        if (da.is_zero()) {
            sqf_rec(pth_root_poly(a), base * f_.characteristic(), out);
            return;
        }
        P c = gcd(a, da);
        P w = div_exact(a, c);
        unsigned i = 1;
        while (w.deg() > 0) {
            P y = gcd(w, c);
            P fac = div_exact(w, y);
            if (fac.deg() > 0) out.push_back({fac, i * base});
            w = y;
            c = div_exact(c, y);
            ++i;
        }
        if (c.deg() > 0) sqf_rec(pth_root_poly(c), base * f_.characteristic(), out);
    }

    P pth_root_poly(const P& a) const {
        const unsigned p = f_.characteristic();
        P r;
        r.c.assign(a.deg() / p + 1, f_.zero());
        for (int i = 0; i <= a.deg(); ++i) {
            if (f_.is_zero(a.c[i])) continue;
            if (i % p) fail(Errc::PreconditionViolated, "p-th root of a non-p-th-power polynomial");
            r.c[i / p] = f_.pth_root(a.c[i]);
        }
        trim(r);
        return r;
    }

    const F& f_;
};

} // namespace pnp
