#include "pnpair/characters.hpp"

#include "pnpair/error.hpp"

#include <cmath>
#include <numbers>

namespace pnp {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t checked_size(const FieldTower& T) {
    if (!T.enumerable() || T.size() > CharacterTables::kLimit)
        fail(Errc::TowerTooLarge, "character tables need a tower of at most 2^24 elements");
    return T.size();
}

std::vector<MidPoly> subset_products(const MidField& F, const MidFactorization& rad, std::vector<int>& signs) {
    MidRing R(F);
    const std::size_t k = rad.factors.size();
    std::vector<MidPoly> out;
    signs.clear();
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        MidPoly p = R.one();
        int s = 1;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) {
                p = R.mul(p, rad.factors[i].first);
                s = -s;
            }
        out.push_back(p);
        signs.push_back(s);
    }
    return out;
}

void require_divides_xm1(const CharacterTables& C, const MidFactorization& g) {
    for (auto& [h, e] : g.factors) {
        bool found = false;
        for (auto& fe : C.xm1().factors)
            if (fe.first == h && e <= fe.second) found = true;
        if (!found) fail(Errc::NotDividing, "g must divide x^m-1");
    }
}

double q_pow_half_m(const FieldTower& T) { return std::pow(static_cast<double>(T.q()), T.m() / 2.0); }

// f(α) per index; kNone at poles, and at zeros unless they are kept
constexpr std::uint64_t kNone = ~0ULL;

std::vector<std::uint64_t> tabulate(const CharacterTables& C, const RationalFunction& f, bool keep_zeros = false) {
    const FieldTower& T = C.tower();
    std::vector<std::uint64_t> v(C.size(), kNone);
    for (std::uint64_t i = 0; i < C.size(); ++i) {
        auto y = eval_rational(T, f, T.element(i));
        if (y && (keep_zeros || !T.is_zero(*y))) v[i] = T.index(*y);
    }
    return v;
}

} // namespace

CharacterTables::CharacterTables(const FieldTower& tower)
    : T_(tower), size_(checked_size(tower)), dlog_(tower), xm1_(factor_xm_minus_1(tower.mid(), tower.m())), qm1_(tower.qm1()) {
    abs_tr_.resize(size_);
    tr_.resize(size_);
    norm_.resize(size_);
    const MidField& F = T_.mid();
    const std::uint32_t ng = T_.norm_to_mid(T_.element(dlog_.generator_index()));
    for (std::uint64_t i = 0; i < size_; ++i) {
        TopElem a = T_.element(i);
        tr_[i] = T_.trace_to_mid(a);
        abs_tr_[i] = F.abs_trace(tr_[i]);
        norm_[i] = i == 0 ? 0 : F.pow(ng, static_cast<std::uint64_t>(dlog_.log(i)));
    }
    const std::uint32_t p = T_.p();
    for (std::uint32_t t = 0; t < p; ++t) zp_.push_back(std::polar(1.0, kTwoPi * t / p));
}

std::uint64_t CharacterTables::mul(std::uint64_t a, std::uint64_t b) const {
    if (a == 0 || b == 0) return 0;
    return dlog_.exp(std::uint64_t(dlog_.log(a)) + dlog_.log(b));
}

Complex CharacterTables::omega(std::uint64_t t, std::uint64_t n) const {
    return std::polar(1.0, kTwoPi * static_cast<double>(t % n) / static_cast<double>(n));
}

const MidPoly& CharacterTables::add_char_order(std::uint64_t u) const {
    std::call_once(orders_once_, [this] {
        add_orders_.resize(size_);
        for (std::uint64_t i = 0; i < size_; ++i) add_orders_[i] = monic_reciprocal(T_.mid(), fq_order(T_, xm1_, T_.element(i)));
    });
    return add_orders_.at(u);
}

MidPoly monic_reciprocal(const MidField& F, const MidPoly& h) {
    MidRing R(F);
    if (h.is_zero()) fail(Errc::InputError, "reciprocal of zero");
    std::size_t low = 0;
    while (h.c[low] == 0) ++low;
    std::vector<std::uint32_t> c(h.c.rbegin(), h.c.rend() - static_cast<std::ptrdiff_t>(low));
    return R.monic(R.from_coeffs(c));
}

MidFactorization drop_x_minus_1(const MidField& F, const MidFactorization& g) {
    MidRing R(F);
    MidFactorization r;
    r.unit = g.unit;
    const MidPoly xm1 = R.sub(R.x(), R.one());
    for (auto& fe : g.factors)
        if (fe.first != xm1) r.factors.push_back(fe);
    return r;
}

MultChar mult_char_of(const CharacterTables& C, std::uint64_t d, std::uint64_t j) {
    const std::uint64_t n = C.n();
    if (d == 0 || n % d != 0) fail(Errc::NotDividing, "character order must divide q^m-1");
    if (gcd_u64(j % d, d) != 1 && d > 1) fail(Errc::NotCoprime, "index must be coprime to the order");
    return MultChar{d, (j % d) * (n / d)};
}

std::vector<MultChar> mult_chars_of_order(const CharacterTables& C, std::uint64_t d) {
    std::vector<MultChar> out;
    for (std::uint64_t j = 1; j <= d; ++j)
        if (d == 1 || gcd_u64(j, d) == 1) out.push_back(mult_char_of(C, d, j));
    return out;
}

std::vector<AddChar> add_chars_of_order(const CharacterTables& C, const MidPoly& h) {
    MidRing R(C.tower().mid());
    const MidPoly hm = R.monic(h);
    std::vector<AddChar> out;
    for (std::uint64_t u = 0; u < C.size(); ++u)
        if (C.add_char_order(u) == hm) out.push_back(AddChar{hm, u});
    return out;
}

Complex mult_char(const CharacterTables& C, const MultChar& chi, std::uint64_t alpha) {
    if (alpha == 0) return chi.exponent == 0 ? 1.0 : 0.0;
    return C.omega(mulmod(chi.exponent, C.dlog().log(alpha), C.n()), C.n());
}

Complex mult_char(const CharacterTables& C, std::uint64_t d, std::uint64_t j, std::uint64_t alpha) {
    return mult_char(C, mult_char_of(C, d, j), alpha);
}

Complex canonical_add_char(const CharacterTables& C, std::uint64_t alpha) { return C.zeta_p(C.abs_trace(alpha)); }

Complex canonical_add_char(const MidField& F, std::uint32_t beta) {
    return std::polar(1.0, kTwoPi * F.abs_trace(beta) / F.p());
}

Complex add_char(const CharacterTables& C, const AddChar& psi, std::uint64_t alpha) {
    return C.zeta_p(C.abs_trace(C.mul(psi.u, alpha)));
}

Complex mid_mult_char(const MidField& F, std::uint64_t i, std::uint32_t beta) {
    const std::uint64_t n = F.q() - 1;
    if (i % n == 0) return 1.0;
    if (beta == 0) return 0.0;
    return std::polar(1.0, kTwoPi * static_cast<double>(mulmod(i % n, F.log(beta), n)) / static_cast<double>(n));
}

double rho_e(const CharacterTables& C, std::uint64_t alpha, const Factorization& e) {
    if (!e.complete()) fail(Errc::IncompleteFactorization, "rho_e needs a complete factorization");
    if (e.value < 1 || BigInt(C.n()) % e.value != 0) fail(Errc::NotDividing, "e must divide q^m-1");
    Complex acc = 0;
    for (auto& d : squarefree_divisors(e)) {
        const std::uint64_t du = d.get_ui();
        Factorization fd = factor(d);
        auto mv = multiplicative_functions(fd);
        Complex s = 0;
        for (auto& chi : mult_chars_of_order(C, du)) s += mult_char(C, chi, alpha);
        acc += s * (static_cast<double>(mv.mu) / mv.phi.get_d());
    }
    return (acc * multiplicative_functions(e).theta.get_d()).real();
}

double kappa_g(const CharacterTables& C, std::uint64_t alpha, const MidFactorization& g) {
    require_divides_xm1(C, g);
    const MidField& F = C.tower().mid();
    MidFactorization rad = radical(g);
    std::vector<int> signs;
    auto divs = subset_products(F, rad, signs);
    Complex acc = 0;
    for (std::size_t i = 0; i < divs.size(); ++i) {
        Complex s = 0;
        for (auto& psi : add_chars_of_order(C, divs[i])) s += add_char(C, psi, alpha);
        acc += s * (signs[i] / poly_euler_phi(poly_factor(F, divs[i]), F.q()).get_d());
    }
    return (acc * poly_theta(rad, F.q()).get_d()).real();
}

double tau_b(const CharacterTables& C, std::uint64_t alpha, std::uint32_t b) {
    const MidField& F = C.tower().mid();
    Complex acc = 0;
    // u ∈ F_q embeds at index u
    for (std::uint32_t u = 0; u < F.q(); ++u)
        acc += canonical_add_char(C, C.mul(u, alpha)) * canonical_add_char(F, F.neg(F.mul(u, b)));
    return (acc / static_cast<double>(F.q())).real();
}

double eta_a(const CharacterTables& C, std::uint64_t alpha, std::uint32_t a) {
    const MidField& F = C.tower().mid();
    if (a == 0) fail(Errc::PreconditionViolated, "eta_a needs a != 0");
    const std::uint32_t ainv = F.inv(a);
    Complex acc = 0;
    for (std::uint64_t i = 1; i <= F.q() - 1; ++i)
        acc += mid_mult_char(F, 1, F.pow(ainv, i)) * mid_mult_char(F, i, C.norm(alpha));
    return (acc / static_cast<double>(F.q() - 1)).real();
}

unsigned distinct_degree_sum(const FieldTower& T, const RationalFunction& f) {
    TopRing R(T);
    unsigned s = 0;
    for (const TopPoly* p : {&f.f1, &f.f2})
        if (p->deg() >= 1)
            for (auto& [g, e] : R.factor(*p).factors) s += static_cast<unsigned>(g.deg());
    return s;
}

bool is_constant_times_power(const FieldTower& T, const RationalFunction& f, std::uint64_t d) {
    TopRing R(T);
    for (const TopPoly* p : {&f.f1, &f.f2})
        if (p->deg() >= 1)
            for (auto& [g, e] : R.factor(*p).factors)
                if (e % d != 0) return false;
    return true;
}

CharSum weil_sum(const CharacterTables& C, const RationalFunction& f, const MultChar& chi) {
    const FieldTower& T = C.tower();
    CharSum r;
    auto fv = tabulate(C, f);
    for (std::uint64_t i = 0; i < C.size(); ++i)
        if (fv[i] != kNone) r.sum += mult_char(C, chi, fv[i]);
    const bool squarefree = multiplicative_functions(factor(BigInt(static_cast<unsigned long>(chi.order)))).mu != 0;
    r.hypothesis = chi.order > 1 && squarefree && !is_constant_times_power(T, f, chi.order);
    r.bound = (static_cast<double>(distinct_degree_sum(T, f)) - 1) * q_pow_half_m(T);
    return r;
}

CharSum hybrid_weil_sum(const CharacterTables& C, const RationalFunction& f, const RationalFunction& g,
                        const MultChar& chi, const AddChar& psi, HybridRange range) {
    const FieldTower& T = C.tower();
    TopRing R(T);
    CharSum r;
    auto fv = tabulate(C, f), gv = tabulate(C, g, range == HybridRange::PolesOnly);
    for (std::uint64_t i = 0; i < C.size(); ++i)
        if (fv[i] != kNone && gv[i] != kNone) r.sum += mult_char(C, chi, fv[i]) * add_char(C, psi, gv[i]);

    std::vector<TopPoly> fj;
    for (const TopPoly* p : {&f.f1, &f.f2})
        if (p->deg() >= 1)
            for (auto& [h, e] : R.factor(*p).factors) fj.push_back(h);
    double D1 = 0, D4 = 0;
    for (auto& h : fj) D1 += h.deg();
    const int dg = g.f1.deg() - g.f2.deg();
    const double D2 = std::max(dg, 0), D3 = g.f2.deg();
    if (g.f2.deg() >= 1)
        for (auto& [h, e] : R.factor(g.f2).factors)
            if (std::find(fj.begin(), fj.end(), h) == fj.end()) D4 += h.deg();
    r.bound = (D1 + D2 + D3 + D4 - 1) * q_pow_half_m(T);

    // A nonzero r^Q - r has numerator or denominator degree at least Q, so below that degree
    // the excluded form is exactly g = 0.
    if (BigInt(g.f1.deg()) >= T.order() || BigInt(g.f2.deg()) >= T.order())
        fail(Errc::PreconditionViolated, "cannot decide the r^Q - r form at this degree");
    r.hypothesis = psi.u != 0 && !g.f1.is_zero();
    return r;
}

ChiFab chi_fab(const CharacterTables& C, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
               const MultChar& chi1, const MultChar& chi2, const AddChar& psi1, const AddChar& psi2) {
    const FieldTower& T = C.tower();
    const MidField& F = T.mid();
    if (a == 0) fail(Errc::PreconditionViolated, "a must be nonzero");
    auto fv = tabulate(C, f);
    auto P = pole_zero_set(T, f);
    std::vector<bool> inP(C.size(), false);
    for (auto& x : P) inP[T.index(x)] = true;
    const std::uint32_t ainv = F.inv(a);

    ChiFab r;
    for (std::uint64_t i = 1; i <= F.q() - 1; ++i)
        for (std::uint32_t c = 0; c < F.q(); ++c) {
            Complex outer = mid_mult_char(F, 1, F.pow(ainv, i)) * canonical_add_char(F, F.neg(F.mul(c, b)));
            Complex inner = 0;
            for (std::uint64_t al = 0; al < C.size(); ++al) {
                if (inP[al]) continue;
                inner += mult_char(C, chi1, al) * mult_char(C, chi2, fv[al]) * add_char(C, psi1, al) *
                         add_char(C, psi2, fv[al]) * mid_mult_char(F, i, C.norm(al)) *
                         canonical_add_char(F, F.mul(c, C.trace(al)));
            }
            r.sum += outer * inner;
        }
    r.trivial = chi1.exponent == 0 && chi2.exponent == 0 && psi1.u == 0 && psi2.u == 0;
    const double q = F.q(), hm = q_pow_half_m(T);
    const double np = static_cast<double>(P.size());
    if (r.trivial) {
        r.center = static_cast<double>(C.size()) - np;
        r.bound = (q - 2) * (np - 1) + (q - 1) * (q - 1) * hm;
    } else {
        r.bound = m_constant(f.n1, f.n2) * (q - 1) * hm * q;
    }
    return r;
}

double reassembled_count(const CharacterTables& C, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                         const Factorization& e1, const Factorization& e2, const MidFactorization& g1,
                         const MidFactorization& g2) {
    const FieldTower& T = C.tower();
    const MidField& F = T.mid();
    if (a == 0) fail(Errc::PreconditionViolated, "a must be nonzero");
    require_divides_xm1(C, g1);
    require_divides_xm1(C, g2);
    BigInt sigma;
    BigInt qm1(F.q() - 1);
    mpz_gcd(sigma.get_mpz_t(), e1.value.get_mpz_t(), qm1.get_mpz_t());
    const Factorization Q1 = largest_coprime_divisor(e1, sigma);
    const MidFactorization R1 = radical(drop_x_minus_1(F, g1)), G2 = radical(g2);

    auto fv = tabulate(C, f);
    auto P = pole_zero_set(T, f);
    std::vector<bool> inP(C.size(), false);
    for (auto& x : P) inP[T.index(x)] = true;
    std::vector<std::uint64_t> pts;
    for (std::uint64_t al = 0; al < C.size(); ++al)
        if (!inP[al]) pts.push_back(al);

    // Σ_i Σ_c χ_{q-1}(a^{-i}) ψ_1(-cb) χ^i(N α) ψ_1(c Tr α) for each α
    const std::uint32_t ainv = F.inv(a);
    std::vector<Complex> E(pts.size(), 0.0);
    for (std::uint64_t i = 1; i <= F.q() - 1; ++i)
        for (std::uint32_t c = 0; c < F.q(); ++c) {
            Complex outer = mid_mult_char(F, 1, F.pow(ainv, i)) * canonical_add_char(F, F.neg(F.mul(c, b)));
            for (std::size_t k = 0; k < pts.size(); ++k)
                E[k] += outer * mid_mult_char(F, i, C.norm(pts[k])) * canonical_add_char(F, F.mul(c, C.trace(pts[k])));
        }

    struct Side {
        double weight;
        std::vector<Complex> v;
    };
    // α side (d1, h1) and f(α) side (d2, h2); weights μ/φ and μ'/Φ
    auto build = [&](const Factorization& e, const MidFactorization& g, bool image) {
        std::vector<Side> out;
        std::vector<int> signs;
        auto hs = subset_products(F, g, signs);
        for (auto& d : squarefree_divisors(e)) {
            auto mv = multiplicative_functions(factor(d));
            for (auto& chi : mult_chars_of_order(C, d.get_ui()))
                for (std::size_t hi = 0; hi < hs.size(); ++hi) {
                    const double w = static_cast<double>(mv.mu) / mv.phi.get_d() * signs[hi] /
                                     poly_euler_phi(poly_factor(F, hs[hi]), F.q()).get_d();
                    for (auto& psi : add_chars_of_order(C, hs[hi])) {
                        Side s{w, std::vector<Complex>(pts.size())};
                        for (std::size_t k = 0; k < pts.size(); ++k) {
                            const std::uint64_t x = image ? fv[pts[k]] : pts[k];
                            s.v[k] = mult_char(C, chi, x) * add_char(C, psi, x);
                            if (!image) s.v[k] *= E[k];
                        }
                        out.push_back(std::move(s));
                    }
                }
        }
        return out;
    };
    auto A = build(Q1, R1, false), B = build(e2, G2, true);
    Complex total = 0;
    for (auto& sa : A)
        for (auto& sb : B) {
            Complex dot = 0;
            for (std::size_t k = 0; k < pts.size(); ++k) dot += sa.v[k] * sb.v[k];
            total += sa.weight * sb.weight * dot;
        }
    const double theta = multiplicative_functions(Q1).theta.get_d() * multiplicative_functions(e2).theta.get_d() *
                         poly_theta(R1, F.q()).get_d() * poly_theta(G2, F.q()).get_d() /
                         (static_cast<double>(F.q()) * (F.q() - 1));
    return (total * theta).real();
}

} // namespace pnp
