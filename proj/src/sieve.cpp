#include "pnpair/sieve.hpp"

#include "pnpair/error.hpp"
#include "pnpair/freeness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace pnp {

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
    case Verdict::Passes: return "passes";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
    }
    return "?";
}

const char* status_name(Status s) noexcept {
    switch (s) {
    case Status::ResolvedByBound: return "resolved-by-bound";
    case Status::ResolvedByCondition: return "resolved-by-condition";
    case Status::ResolvedBySieve: return "resolved-by-sieve";
    case Status::Unresolved: return "unresolved";
    case Status::Unknown: return "unknown";
    }
    return "?";
}

std::string ConditionVerdict::method_label() const {
    auto roman = [](int t) { return t == 7 ? "i" : t == 10 ? "ii" : "iii"; };
    switch (method) {
    case Method::ExactW: return "exact-W";
    case Method::CosetBound: return "lemma-2.3";
    case Method::DivisorBound: return std::string("lemma-5.1(") + roman(t) + ")";
    case Method::SigmaBound: return std::string("sigma-bound/lemma-5.1(") + roman(t) + ")";
    case Method::Sieve: return "sieve";
    }
    return "?";
}

PairInfo pair_info(std::uint32_t p, unsigned k, unsigned m) {
    require(is_prime(BigInt(p)), Errc::NotPrime, "p must be prime");
    require(k >= 1 && m >= 1, Errc::InputError, "k and m must be positive");
    PairInfo info;
    info.p = p;
    info.k = k;
    info.m = m;
    info.q_big = ipow(BigInt(p), k);
    require(info.q_big < ipow(2, 62), Errc::InputError, "q must be below 2^62");
    info.q = to_u64(info.q_big);
    info.xm = xm_structure(info.q, m);
    info.route_divides = (info.q - 1) % info.xm.m_prime == 0;
    return info;
}

namespace {

Rational q_pow_neg(std::uint64_t q, unsigned deg) {
    Rational w(BigInt(1), ipow(BigInt(static_cast<unsigned long>(q)), deg));
    w.canonicalize();
    return w;
}

BigInt W_count(std::size_t omega) { return ipow(2, omega); }

PowerProduct lhs_power(const PairInfo& info) {
    PowerProduct l;
    l.times(Rational(info.q_big), Rational(static_cast<unsigned long>(info.m), 2ul) - 2);
    return l;
}

ConditionVerdict decide(const PowerProduct& lhs, const PowerProduct& rhs, Method method, std::string form) {
    ConditionVerdict v;
    v.method = method;
    v.form = std::move(form);
    Comparison c = compare(lhs, rhs);
    v.lhs_log = c.lhs_log;
    v.rhs_log = c.rhs_log;
    v.exact_tie = c.exact;
    if (!c.decided) {
        v.verdict = Verdict::Unknown;
        v.reason = "near-tie too large for exact comparison";
    } else {
        v.verdict = c.sign > 0 ? Verdict::Passes : Verdict::Fails;
    }
    return v;
}

ConditionVerdict unknown_verdict(Method method, std::string form, std::string reason) {
    ConditionVerdict v;
    v.method = method;
    v.form = std::move(form);
    v.reason = std::move(reason);
    return v;
}

ConditionVerdict not_applicable(Method method, int t, std::string form, std::string reason) {
    ConditionVerdict v = unknown_verdict(method, std::move(form), std::move(reason));
    v.verdict = Verdict::Fails;
    v.t = t;
    return v;
}

} // namespace

SieveContext::SieveContext(std::uint32_t p, unsigned k, unsigned m, const FactorOptions& opt)
    : info_(pair_info(p, k, m)) {
    qm1_ = factor_qm_minus_1(info_.q_big, m, opt);
    if (qm1_.complete()) Q_ = norm_cofactor(info_.q_big, m, qm1_);

    if (info_.q <= (1u << 24)) {
        field_ = std::make_shared<MidField>(p, k);
        MidRing R(*field_);
        MidPoly xm1 = R.sub(R.x(), R.one());
        for (auto& [g, e] : factor_xm_minus_1(*field_, m).factors) {
            XFactor f;
            f.degree = static_cast<unsigned>(g.deg());
            f.x_minus_1 = g == xm1;
            f.poly = g;
            f.label = R.format(g);
            factors_.push_back(std::move(f));
        }
    } else {
        auto cosets = cyclotomic_cosets(info_.q % info_.xm.m_prime, info_.xm.m_prime);
        for (std::size_t i = 0; i < cosets.size(); ++i) {
            XFactor f;
            f.degree = static_cast<unsigned>(cosets[i].size());
            f.x_minus_1 = cosets[i].front() == 0;
            f.label = f.x_minus_1 ? "x-1" : "coset" + std::to_string(cosets[i].front());
            factors_.push_back(std::move(f));
        }
    }

    if (!qm1_.complete()) return;
    for (auto& pp : Q_.factors)
        atoms_.push_back(Atom{AtomKind::QPrime, pp.prime, 0, 0, Rational(BigInt(1), pp.prime), "p'" + pp.prime.get_str()});
    for (auto& pp : qm1_.factors)
        atoms_.push_back(Atom{AtomKind::NPrime, pp.prime, 0, 0, Rational(BigInt(1), pp.prime), "p" + pp.prime.get_str()});
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (!factors_[i].x_minus_1)
            atoms_.push_back(Atom{AtomKind::RFactor, 0, i, factors_[i].degree, q_pow_neg(info_.q, factors_[i].degree),
                                  "g'" + factors_[i].label});
    for (std::size_t i = 0; i < factors_.size(); ++i)
        atoms_.push_back(Atom{AtomKind::XFactor, 0, i, factors_[i].degree, q_pow_neg(info_.q, factors_[i].degree),
                              "g" + factors_[i].label});
}

const MidField& SieveContext::field() const {
    require(field_ != nullptr, Errc::TowerTooLarge, "no mid-field tables for q > 2^24");
    return *field_;
}

const std::vector<Atom>& SieveContext::atoms() const {
    require(complete(), Errc::IncompleteFactorization, "sieve atoms need a complete factorization of q^m-1");
    return atoms_;
}

SievePlan plan_evaluate(const SieveContext& ctx, const std::vector<bool>& chosen) {
    const auto& atoms = ctx.atoms();
    require(chosen.size() == atoms.size(), Errc::InvalidSubset, "chosen mask does not match the atom list");
    SievePlan plan;
    plan.chosen = chosen;
    plan.lambda = 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (chosen[i]) {
            ++plan.chosen_count;
            continue;
        }
        plan.lambda -= atoms[i].weight;
        switch (atoms[i].kind) {
        case AtomKind::QPrime: ++plan.r; break;
        case AtomKind::NPrime: ++plan.s; break;
        case AtomKind::RFactor: ++plan.t; break;
        case AtomKind::XFactor: ++plan.u; break;
        }
    }
    plan.lambda.canonicalize();
    plan.lambda_positive = plan.lambda > 0;
    if (plan.lambda_positive) {
        plan.Lambda = Rational(static_cast<long>(plan.leftovers()) - 1) / plan.lambda + 2;
        plan.Lambda.canonicalize();
    }
    return plan;
}

std::vector<bool> plan_from_divisors(const SieveContext& ctx, const BigInt& d_prime, const BigInt& d,
                                     const MidPoly& g_prime, const MidPoly& g) {
    const auto& atoms = ctx.atoms();
    require(d_prime > 0 && ctx.Q().value % d_prime == 0, Errc::InvalidSubset, "d' must divide Q");
    require(d > 0 && ctx.qm1().value % d == 0, Errc::InvalidSubset, "d must divide q^m-1");
    const MidField& F = ctx.field();
    MidRing R(F);
    auto factor_set = [&](const MidPoly& h, bool allow_x_minus_1) {
        std::vector<bool> in(ctx.factors().size(), false);
        require(!h.is_zero(), Errc::InvalidSubset, "polynomial divisor must be nonzero");
        if (h.deg() == 0) return in;
        for (auto& [f, e] : R.factor(h).factors) {
            bool found = false;
            for (std::size_t i = 0; i < ctx.factors().size(); ++i) {
                const XFactor& x = ctx.factors()[i];
                if (x.poly && *x.poly == f && (allow_x_minus_1 || !x.x_minus_1)) {
                    in[i] = true;
                    found = true;
                }
            }
            require(found, Errc::InvalidSubset, R.format(f) + " is not an admissible factor");
        }
        return in;
    };
    auto gp = factor_set(g_prime, false), gg = factor_set(g, true);
    std::vector<bool> chosen(atoms.size(), false);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Atom& a = atoms[i];
        switch (a.kind) {
        case AtomKind::QPrime: chosen[i] = d_prime % a.prime == 0; break;
        case AtomKind::NPrime: chosen[i] = d % a.prime == 0; break;
        case AtomKind::RFactor: chosen[i] = gp[a.factor]; break;
        case AtomKind::XFactor: chosen[i] = gg[a.factor]; break;
        }
    }
    return chosen;
}

std::vector<bool> degree_cut_choice(const SieveContext& ctx) {
    const PairInfo& info = ctx.info();
    require(!info.route_divides, Errc::PreconditionViolated, "the construction needs m' not dividing q-1");
    const auto& atoms = ctx.atoms();
    std::vector<bool> chosen(atoms.size(), false);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Atom& a = atoms[i];
        if (a.kind == AtomKind::QPrime || a.kind == AtomKind::NPrime) chosen[i] = true;
        else chosen[i] = a.degree < info.xm.u;
    }
    return chosen;
}

PlanText plan_text(const SieveContext& ctx, const SievePlan& plan) {
    const auto& atoms = ctx.atoms();
    BigInt dp = 1, d = 1;
    std::vector<std::size_t> gp, g;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!plan.chosen[i]) continue;
        switch (atoms[i].kind) {
        case AtomKind::QPrime: dp *= atoms[i].prime; break;
        case AtomKind::NPrime: d *= atoms[i].prime; break;
        case AtomKind::RFactor: gp.push_back(atoms[i].factor); break;
        case AtomKind::XFactor: g.push_back(atoms[i].factor); break;
        }
    }
    auto poly_text = [&](const std::vector<std::size_t>& idx) -> std::string {
        if (idx.empty()) return "1";
        if (ctx.has_field()) {
            MidRing R(ctx.field());
            MidPoly prod = R.one();
            for (auto i : idx) prod = R.mul(prod, *ctx.factors()[i].poly);
            return R.format(prod);
        }
        std::string s;
        for (auto i : idx) s += (s.empty() ? "" : "*") + ("(" + ctx.factors()[i].label + ")");
        return s;
    };
    return PlanText{dp.get_str(), d.get_str(), poly_text(gp), poly_text(g)};
}

ConditionVerdict sieve_condition(const SieveContext& ctx, const SievePlan& plan, unsigned n1, unsigned n2) {
    const std::string form = "q^{m/2-2} > M W(d')W(d)W(g')W(g) Lambda";
    if (!plan.lambda_positive) {
        ConditionVerdict v = not_applicable(Method::Sieve, 0, form, "lambda-nonpositive");
        return v;
    }
    PowerProduct rhs;
    rhs.times(Rational(m_constant(n1, n2))).times(2, static_cast<unsigned long>(plan.chosen_count)).times(plan.Lambda);
    return decide(lhs_power(ctx.info()), rhs, Method::Sieve, form);
}

PlanSearch plan_search(const SieveContext& ctx, unsigned n1, unsigned n2) {
    const auto& atoms = ctx.atoms();
    const std::size_t n = atoms.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = atoms[i].weight.get_d();
    const double log2 = std::log(2.0);
    // log RHS for a leftover set of size k and weight sum s, without the common log M
    auto rhs_of = [&](std::size_t k, double s) {
        double lambda = 1 - s;
        if (lambda <= 0) return HUGE_VAL;
        return static_cast<double>(n - k) * log2 + std::log((static_cast<double>(k) - 1) / lambda + 2);
    };

    // leftovers taken as the k lightest atoms
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a].weight < atoms[b].weight; });
    std::size_t best_k = 0;
    double best = rhs_of(0, 0), s = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        s += w[order[k - 1]];
        double r = rhs_of(k, s);
        if (r < best - 1e-12) {
            best = r;
            best_k = k;
        }
    }
    std::vector<bool> chosen(n, true);
    for (std::size_t k = 0; k < best_k; ++k) chosen[order[k]] = false;

    PlanSearch out;
    out.atoms = n;
    if (n <= 20) {
        out.exhaustive = true;
        const std::size_t total = std::size_t(1) << n;
        std::vector<double> sum(total, 0.0);
        double ex_best = HUGE_VAL;
        std::size_t ex_mask = 0;
        for (std::size_t mask = 0; mask < total; ++mask) {
            if (mask) sum[mask] = sum[mask & (mask - 1)] + w[static_cast<std::size_t>(__builtin_ctzll(mask))];
            double r = rhs_of(static_cast<std::size_t>(__builtin_popcountll(mask)), sum[mask]);
            if (r < ex_best - 1e-12) {
                ex_best = r;
                ex_mask = mask;
            }
        }
        out.methods_agree = std::fabs(ex_best - best) <= 1e-9 * std::max(1.0, std::fabs(best));
        if (ex_best < best - 1e-9) {
            for (std::size_t i = 0; i < n; ++i) chosen[i] = !((ex_mask >> i) & 1);
        }
    }
    out.best = plan_evaluate(ctx, chosen);
    out.verdict = sieve_condition(ctx, out.best, n1, n2);
    if (out.verdict.passes()) out.passing = out.best;
    return out;
}

ConditionVerdict base_condition(const SieveContext& ctx, unsigned n1, unsigned n2) {
    const std::string form = "q^{m/2-2} > M W(Q)W(q^m-1)W(R)W(x^m-1)";
    if (!ctx.complete()) return unknown_verdict(Method::ExactW, form, "incomplete-factorization");
    const std::size_t w = ctx.x_factor_count();
    PowerProduct rhs;
    rhs.times(Rational(m_constant(n1, n2)))
        .times(Rational(W_count(ctx.Q().omega())))
        .times(Rational(W_count(ctx.qm1().omega())))
        .times(2, static_cast<unsigned long>(2 * w - 1));
    return decide(lhs_power(ctx.info()), rhs, Method::ExactW, form);
}

ConditionVerdict square_condition(const SieveContext& ctx, const BigInt& c) {
    const std::string form = "q^{m/2-2} > " + c.get_str() + " W(q^m-1)^2";
    if (!ctx.complete()) return unknown_verdict(Method::ExactW, form, "incomplete-factorization");
    PowerProduct rhs;
    rhs.times(Rational(c)).times(2, static_cast<unsigned long>(2 * ctx.qm1().omega()));
    return decide(lhs_power(ctx.info()), rhs, Method::ExactW, form);
}

ConditionVerdict coarse_base_condition(const SieveContext& ctx, unsigned n1, unsigned n2) {
    const std::string form = "q^{m/2-2} > M W(q^m-1)^2 W(R)W(x^m-1)";
    if (!ctx.complete()) return unknown_verdict(Method::ExactW, form, "incomplete-factorization");
    PowerProduct rhs;
    rhs.times(Rational(m_constant(n1, n2)))
        .times(2, static_cast<unsigned long>(2 * ctx.qm1().omega() + 2 * ctx.x_factor_count() - 1));
    return decide(lhs_power(ctx.info()), rhs, Method::ExactW, form);
}

ConditionVerdict coset_bound_condition(const SieveContext& ctx, unsigned n1, unsigned n2) {
    const std::string form = "q^{m/2-2} > M W(Q)W(q^m-1) 2^{2e-1}, e = (m'+gcd(m',q-1))/2";
    if (!ctx.complete()) return unknown_verdict(Method::CosetBound, form, "incomplete-factorization");
    const PairInfo& info = ctx.info();
    Rational e = xm_bound_exponent(info.q, info.m_prime(), XBoundMode::General);
    PowerProduct rhs;
    rhs.times(Rational(m_constant(n1, n2)))
        .times(Rational(W_count(ctx.Q().omega())))
        .times(Rational(W_count(ctx.qm1().omega())))
        .times(2, 2 * e - 1);
    return decide(lhs_power(info), rhs, Method::CosetBound, form);
}

Rational divisor_bound_constant(int t) {
    switch (t) {
    case 7: return parse_decimal("244.66");
    case 10: return parse_decimal("1.11e9");
    case 14: return parse_decimal("5.09811e67");
    }
    fail(Errc::InputError, "C_t constants exist for t = 7, 10, 14");
}

Real divisor_log_bound(int t, const Real& logN) { return Real(divisor_bound_constant(t)).log() + logN / Real(static_cast<long>(t)); }

Rational xm_bound_exponent(std::uint64_t q, std::uint64_t m, XBoundMode mode) {
    switch (mode) {
    case XBoundMode::General: return coset_log2_bound(q, m);
    case XBoundMode::Divides: return Rational(static_cast<unsigned long>(m));
    case XBoundMode::NotDivides: {
        Rational r(static_cast<unsigned long>(3 * m), 4ul);
        r.canonicalize();
        return r;
    }
    }
    return 0;
}

namespace {

// C_t^2 q^{2m/t} bounding W(Q)W(q^m-1) or W(q^m-1)^2
void times_w_squared_bound(PowerProduct& pp, const PairInfo& info, int t) {
    Rational e(static_cast<unsigned long>(2 * info.m), static_cast<unsigned long>(t));
    e.canonicalize();
    pp.times(divisor_bound_constant(t), 2).times(Rational(info.q_big), e);
}

} // namespace

ConditionVerdict divisor_bound_condition(const PairInfo& info, unsigned n1, unsigned n2, int t) {
    PowerProduct rhs;
    rhs.times(Rational(m_constant(n1, n2)));
    times_w_squared_bound(rhs, info, t);
    rhs.times(2, static_cast<unsigned long>(2 * info.x_factor_count() - 1));
    ConditionVerdict v = decide(lhs_power(info), rhs, Method::DivisorBound, "q^{m/2-2} > M C_t^2 q^{2m/t} W(R)W(x^m-1)");
    v.t = t;
    return v;
}

ConditionVerdict full_multiplicative_bound(const PairInfo& info, unsigned n1, unsigned n2, int t) {
    const std::string form = "q^{m/2-2} > M C_t^2 q^{2m/t} (2 + 2q(m'-1)/(q-2m'+1))";
    const std::uint64_t mp = info.m_prime();
    if (!info.route_divides) return not_applicable(Method::DivisorBound, t, form, "m' does not divide q-1");
    if (info.q <= 2 * mp - 1) return not_applicable(Method::DivisorBound, t, form, "lambda-nonpositive");
    Rational Lambda = Rational(2) + Rational(BigInt(2) * info.q_big * BigInt(static_cast<unsigned long>(mp - 1)),
                                             info.q_big - BigInt(static_cast<unsigned long>(2 * mp - 1)));
    Lambda.canonicalize();
    PowerProduct rhs;
    rhs.times(Rational(m_constant(n1, n2)));
    times_w_squared_bound(rhs, info, t);
    rhs.times(Lambda);
    ConditionVerdict v = decide(lhs_power(info), rhs, Method::DivisorBound, form);
    v.t = t;
    return v;
}

ConditionVerdict sigma_bound(const PairInfo& info, unsigned n1, unsigned n2, int t) {
    const std::string form = "q^{m/2-2} > 2M m C_t^2 q^{2m/t} 2^{2m sigma}";
    if (info.route_divides) return not_applicable(Method::SigmaBound, t, form, "m' divides q-1");
    if (info.m_prime() < 8) return not_applicable(Method::SigmaBound, t, form, "m' < 8");
    if (info.xm.u <= 2) return not_applicable(Method::SigmaBound, t, form, "u <= 2");
    Sigma sg = sigma_ratio(info.q, info.m);
    PowerProduct rhs;
    rhs.times(Rational(2 * m_constant(n1, n2))).times(Rational(static_cast<unsigned long>(info.m)));
    times_w_squared_bound(rhs, info, t);
    rhs.times(2, sg.value * 2 * info.m);
    ConditionVerdict v = decide(lhs_power(info), rhs, Method::SigmaBound, form);
    v.t = t;
    return v;
}

Real lower_bound_N(const MidField& F, unsigned m, unsigned n1, unsigned n2, const Factorization& e1,
                   const Factorization& e2, const MidFactorization& g1, const MidFactorization& g2) {
    require(e1.complete() && e2.complete(), Errc::IncompleteFactorization, "lower bound needs complete factorizations");
    const std::uint64_t q = F.q();
    BigInt s;
    BigInt qm = BigInt(static_cast<unsigned long>(q - 1));
    mpz_gcd(s.get_mpz_t(), e1.value.get_mpz_t(), qm.get_mpz_t());
    Factorization Qe1 = largest_coprime_divisor(e1, s);
    MidRing R(F);
    MidFactorization Rg1 = largest_coprime_poly_divisor(F, g1, R.sub(R.x(), R.one()));
    auto mv1 = multiplicative_functions(Qe1), mv2 = multiplicative_functions(e2);
    Rational theta = mv1.theta * mv2.theta * poly_theta(Rg1, q) * poly_theta(g2, q) /
                     Rational(BigInt(static_cast<unsigned long>(q)) * qm);
    theta.canonicalize();
    BigInt W = mv1.W * mv2.W * poly_W(Rg1) * poly_W(g2) * m_constant(n1, n2);
    const BigInt qb(static_cast<unsigned long>(q));
    // q^{m/2+2} = sqrt(q^{m+4})
    Real half = Real(ipow(qb, m + 4)).sqrt();
    return Real(theta) * (Real(ipow(qb, m)) - Real(W) * half);
}

namespace {

Rational rat(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

std::vector<ThresholdEntry> build_catalogue() {
    std::vector<ThresholdEntry> c;
    const Rational C7 = divisor_bound_constant(7), C10 = divisor_bound_constant(10), C14 = divisor_bound_constant(14);
    auto add = [&](std::string id, std::string var, std::string text, long start, long printed, bool anchor,
                   std::function<std::pair<PowerProduct, PowerProduct>(long)> f) {
        c.push_back(ThresholdEntry{std::move(id), std::move(var), std::move(text), start, printed, anchor, std::move(f)});
    };
    add("m6", "k", "(7^k)^{1/7} > 4 2^11 C14^2", 1, 1155, true, [=](long k) {
        PowerProduct l, r;
        l.times(7, rat(k, 7));
        r.times(4).times(2, 11).times(C14, 2);
        return std::pair{l, r};
    });
    add("m5", "k", "7^k > 1.026e269771", 1, 319219, true, [](long k) {
        PowerProduct l, r;
        l.times(7, rat(k));
        r.times(parse_decimal("1.026e269771"));
        return std::pair{l, r};
    });
    add("case1_m", "m", "7^{3m/10-2} > 8 m C10^2 2^{2m/3-1}", 1, 436, true, [=](long m) {
        PowerProduct l, r;
        l.times(7, rat(3 * m, 10) - 2);
        r.times(8).times(rat(m)).times(C10, 2).times(2, rat(2 * m, 3) - 1);
        return std::pair{l, r};
    });
    add("opener_q49", "m", "49^{3m/14-4} > 8 C7^2", 1, 35, true, [=](long m) {
        PowerProduct l, r;
        l.times(49, rat(3 * m, 14) - 4);
        r.times(8).times(C7, 2);
        return std::pair{l, r};
    });
    for (long j : {1L, 2L}) {
        long expected = j == 1 ? 225 : 2;
        add("m1_j" + std::to_string(j), "k", "(7^k)^{3 7^" + std::to_string(j) + "/10-2} > 8 C10^2", 1, expected, false,
            [=](long k) {
                PowerProduct l, r;
                l.times(7, rat(k) * (rat(3 * ipow(7, j).get_si(), 10) - 2));
                r.times(8).times(C10, 2);
                return std::pair{l, r};
            });
    }
    add("m1_q7", "j", "7^{3 7^j/10-2} > 8 C10^2", 1, 3, false, [=](long j) {
        PowerProduct l, r;
        l.times(7, rat(3, 10) * Rational(ipow(7, j)) - 2);
        r.times(8).times(C10, 2);
        return std::pair{l, r};
    });
    for (long j : {1L, 2L}) {
        long expected = j == 1 ? 8 : 1;
        add("m2_j" + std::to_string(j), "k", "(7^k)^{3 (2 7^" + std::to_string(j) + ")/14-2} > 24 C7^2", 1, expected, false,
            [=](long k) {
                PowerProduct l, r;
                l.times(7, rat(k) * (rat(6 * ipow(7, j).get_si(), 14) - 2));
                r.times(24).times(C7, 2);
                return std::pair{l, r};
            });
    }
    struct Line {
        const char* id;
        long q, c, printed;
    };
    for (Line ln : {Line{"mp4_q7", 7, 128, 48}, Line{"mp4_q343", 343, 128, 23}, Line{"mp5_q7", 7, 32, 45},
                    Line{"mp5_q343", 343, 32, 21}, Line{"mp5_q49", 49, 128, 29}, Line{"case2_q7", 7, 1L << 31, 88}}) {
        add(ln.id, "m", std::to_string(ln.q) + "^{3m/14-2} > " + std::to_string(ln.c) + " C7^2", 1, ln.printed, false,
            [=](long m) {
                PowerProduct l, r;
                l.times(rat(ln.q), rat(3 * m, 14) - 2);
                r.times(rat(ln.c)).times(C7, 2);
                return std::pair{l, r};
            });
    }
    struct Case {
        const char* id;
        long num, den, printed;  // 2^{(num/den) m - 1}
    };
    for (Case cs : {Case{"q49_case1", 2, 3, 55}, Case{"q49_case2", 1, 1, 152}, Case{"q49_case3", 3, 4, 66},
                    Case{"q49_case4", 13, 18, 62}}) {
        add(cs.id, "m", "49^{3m/14-2} > 8 m C7^2 2^{" + std::to_string(cs.num) + "m/" + std::to_string(cs.den) + "-1}", 1,
            cs.printed, false, [=](long m) {
                PowerProduct l, r;
                l.times(49, rat(3 * m, 14) - 2);
                r.times(8).times(rat(m)).times(C7, 2).times(2, rat(cs.num * m, cs.den) - 1);
                return std::pair{l, r};
            });
    }
    return c;
}

} // namespace

const std::vector<ThresholdEntry>& threshold_catalogue() {
    static const std::vector<ThresholdEntry> c = build_catalogue();
    return c;
}

const ThresholdEntry& threshold_entry(const std::string& id) {
    for (auto& e : threshold_catalogue())
        if (e.id == id) return e;
    fail(Errc::InputError, "unknown inequality id " + id);
}

bool threshold_holds(const ThresholdEntry& e, long n) {
    auto [l, r] = e.sides(n);
    Comparison c = compare(l, r);
    require(c.decided, Errc::PreconditionViolated, "threshold comparison undecided at " + std::to_string(n));
    return c.sign > 0;
}

long threshold_solve(const std::string& id) {
    const ThresholdEntry& e = threshold_entry(id);
    if (threshold_holds(e, e.start)) return e.start;
    long lo = e.start, step = 1, hi = e.start + 1;
    while (!threshold_holds(e, hi)) {
        lo = hi;
        step *= 2;
        hi = e.start + step;
        require(step < (1L << 40), Errc::PreconditionViolated, "threshold search diverged for " + id);
    }
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        (threshold_holds(e, mid) ? hi : lo) = mid;
    }
    require(!threshold_holds(e, hi - 1) && threshold_holds(e, hi + 1), Errc::PreconditionViolated,
            "threshold boundary not sharp for " + id);
    return hi;
}

std::vector<unsigned> case1_scan_values(std::uint64_t q, unsigned m_min, unsigned m_max) {
    auto pk = prime_power_parts(BigInt(static_cast<unsigned long>(q)));
    require(pk.has_value(), Errc::InputError, "q must be a prime power");
    const std::uint64_t p = pk->first.get_ui();
    std::vector<unsigned> out;
    for (unsigned m = m_min; m <= m_max; ++m) {
        std::uint64_t mp = p_free_part(std::uint64_t(m), p);
        if (mp < 8 || (q - 1) % mp == 0 || mp == 6 * gcd_u64(q - 1, mp)) continue;
        out.push_back(m);
    }
    return out;
}

ClassifyEntry classify_pair(std::uint32_t p, unsigned k, unsigned m, const ClassifyOptions& opt) {
    ClassifyEntry e;
    e.p = p;
    e.k = k;
    e.m = m;
    PairInfo info = pair_info(p, k, m);
    e.q = info.q_big;
    e.m_prime = info.m_prime();
    e.route_divides = info.route_divides;

    for (int t : {7, 10, 14}) {
        ConditionVerdict tries[] = {divisor_bound_condition(info, opt.n1, opt.n2, t),
                                    info.route_divides ? full_multiplicative_bound(info, opt.n1, opt.n2, t)
                                                       : sigma_bound(info, opt.n1, opt.n2, t)};
        for (auto& v : tries)
            if (v.passes()) {
                e.status = Status::ResolvedByBound;
                e.verdict = v;
                return e;
            }
    }

    SieveContext ctx(p, k, m, opt.factor);
    if (!ctx.complete()) {
        e.status = Status::Unknown;
        e.verdict = unknown_verdict(Method::ExactW, "q^{m/2-2} > M W(Q)W(q^m-1)W(R)W(x^m-1)", "incomplete-factorization");
        return e;
    }
    ConditionVerdict base = base_condition(ctx, opt.n1, opt.n2);
    if (base.passes()) {
        e.status = Status::ResolvedByCondition;
        e.verdict = base;
        return e;
    }
    PlanSearch ps = plan_search(ctx, opt.n1, opt.n2);
    e.verdict = ps.verdict;
    e.plan = plan_text(ctx, ps.best);
    if (ps.best.lambda_positive) {
        e.lambda = ps.best.lambda;
        e.Lambda = ps.best.Lambda;
    }
    e.status = ps.passing ? Status::ResolvedBySieve : Status::Unresolved;
    return e;
}

std::vector<ClassifyEntry> classify(std::uint32_t p, unsigned k_lo, unsigned k_hi, unsigned m_lo, unsigned m_hi,
                                    const ClassifyOptions& opt) {
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned k = k_lo; k <= k_hi; ++k)
        for (unsigned m = m_lo; m <= m_hi; ++m) pairs.emplace_back(k, m);
    std::vector<ClassifyEntry> out(pairs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < pairs.size();) {
            try {
                out[i] = classify_pair(p, pairs[i].first, pairs[i].second, opt);
            } catch (const Error& err) {
                ClassifyEntry& e = out[i];
                e.p = p;
                e.k = pairs[i].first;
                e.m = pairs[i].second;
                e.q = ipow(BigInt(p), e.k);
                e.status = Status::Unknown;
                e.verdict.reason = err.what();
            }
        }
    };
    const unsigned n = std::max(1u, opt.workers);
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::string format_fixed(const Rational& r, int digits) {
    if (r == 0) return "0";
    const Rational a = abs(r);
    auto p10 = [](long n) {
        Rational x(ipow(10, static_cast<unsigned long>(n < 0 ? -n : n)));
        return n < 0 ? Rational(1 / x) : x;
    };
    // 10^e <= a < 10^{e+1}
    long e = static_cast<long>(std::floor(std::log10(a.get_d())));
    while (a >= p10(e + 1)) ++e;
    while (a < p10(e)) --e;
    auto rounded = [&](long ee) {
        Rational x = a * p10(digits - 1 - ee);
        x.canonicalize();
        return BigInt((x.get_num() * 2 + x.get_den()) / (x.get_den() * 2));
    };
    BigInt n = rounded(e);
    if (n >= ipow(10, static_cast<unsigned long>(digits))) n = rounded(++e);
    const long dec = digits - 1 - e;
    std::string s = n.get_str();
    if (dec > 0) {
        if (s.size() <= static_cast<std::size_t>(dec)) s = std::string(static_cast<std::size_t>(dec) - s.size() + 1, '0') + s;
        s.insert(s.size() - static_cast<std::size_t>(dec), ".");
    } else if (dec < 0) {
        s += std::string(static_cast<std::size_t>(-dec), '0');
    }
    return (r < 0 ? "-" : "") + s;
}

} // namespace pnp
