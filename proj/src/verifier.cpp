#include "pnpair/verifier.hpp"

#include "pnpair/error.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <thread>

namespace pnp {

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

// run fn(lo, hi, slot) over [begin, end) split into `workers` contiguous chunks
template <class Fn>
void parallel_ranges(std::uint64_t begin, std::uint64_t end, unsigned workers, Fn fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || end - begin < 4096) {
        fn(begin, end, 0u);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t step = (end - begin + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = begin + w * step, hi = std::min(end, lo + step);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi, w);
    }
    for (auto& t : pool) t.join();
}

// columns of the F_q-linear map α ↦ h∘α in the power basis of the top field
std::vector<TopElem> action_columns(const FieldTower& T, const MidPoly& h) {
    std::vector<TopElem> cols;
    TopElem basis = T.one();
    for (unsigned c = 0; c < T.m(); ++c) {
        cols.push_back(module_action(T, h, basis));
        basis = T.mul(basis, T.t());
    }
    return cols;
}

bool action_nonzero(const MidField& F, const std::vector<TopElem>& cols, const TopElem& a) {
    const std::size_t m = cols.size();
    for (std::size_t r = 0; r < m; ++r) {
        std::uint32_t acc = 0;
        for (std::size_t c = 0; c < m; ++c)
            if (a.c[c] && cols[c].c[r]) acc = F.add(acc, F.mul(a.c[c], cols[c].c[r]));
        if (acc) return true;
    }
    return false;
}

Factorization prime_factorization(const BigInt& p) { return make_factorization({{p, 1}}); }

MidFactorization single_factor(const MidPoly& h) {
    MidFactorization f;
    f.unit = 1;
    f.factors.push_back({h, 1});
    return f;
}

} // namespace

FlagTable::FlagTable(const CharacterTables& C, bool atoms, unsigned workers) : C_(C), atoms_(atoms) {
    const FieldTower& T = C.tower();
    const MidField& F = T.mid();
    require(C.qm1().complete(), Errc::IncompleteFactorization, "flag table needs q^m-1 factored");
    primes_ = C.qm1().primes();
    const auto& xf = C.xm1().factors;
    require(primes_.size() <= 32 && xf.size() <= 32, Errc::TowerTooLarge, "more than 32 atoms");
    full_prime_ = static_cast<std::uint32_t>((std::uint64_t(1) << primes_.size()) - 1);
    full_poly_ = static_cast<std::uint32_t>((std::uint64_t(1) << xf.size()) - 1);

    std::vector<std::uint64_t> ls;
    for (auto& l : primes_) ls.push_back(to_u64(l));
    MidRing R(F);
    const MidPoly xm = R.xn_minus_one(T.m());
    std::vector<std::vector<TopElem>> cols;
    for (auto& [h, e] : xf) cols.push_back(action_columns(T, R.div_exact(xm, h)));

    const std::uint64_t size = C.size();
    prime_.assign(size, 0);
    poly_.assign(size, 0);
    parallel_ranges(1, size, workers, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t lg = C.dlog().log(i);
            std::uint32_t pm = 0, gm = 0;
            for (std::size_t j = 0; j < ls.size(); ++j)
                if (lg % ls[j] != 0) pm |= 1u << j;
            const TopElem a = T.element(i);
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (action_nonzero(F, cols[j], a)) gm |= 1u << j;
            if (!atoms_) {
                pm = pm == full_prime_ ? full_prime_ : 0;
                gm = gm == full_poly_ ? full_poly_ : 0;
            }
            prime_[i] = pm;
            poly_[i] = gm;
        }
    });
}

std::uint32_t FlagTable::prime_bits(const Factorization& e) const {
    std::uint32_t bits = 0;
    for (auto& pp : e.factors) {
        auto it = std::find(primes_.begin(), primes_.end(), pp.prime);
        require(it != primes_.end(), Errc::NotDividing, pp.prime.get_str() + " does not divide q^m-1");
        bits |= 1u << (it - primes_.begin());
    }
    require(atoms_ || bits == 0 || bits == full_prime_, Errc::PreconditionViolated, "flag table was built without atoms");
    return bits;
}

std::uint32_t FlagTable::poly_bits(const MidFactorization& g) const {
    MidRing R(tower().mid());
    const auto& xf = xm1().factors;
    std::uint32_t bits = 0;
    for (auto& [h, e] : g.factors) {
        MidPoly hm = R.monic(h);
        std::size_t j = 0;
        while (j < xf.size() && xf[j].first != hm) ++j;
        require(j < xf.size(), Errc::NotDividing, R.format(hm) + " does not divide x^m-1");
        bits |= 1u << j;
    }
    require(atoms_ || bits == 0 || bits == full_poly_, Errc::PreconditionViolated, "flag table was built without atoms");
    return bits;
}

bool FlagTable::spot_check(std::uint64_t seed, std::size_t samples) const {
    const FieldTower& T = tower();
    std::mt19937_64 rng(seed);
    const auto& xf = xm1().factors;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::uint64_t i = 1 + rng() % (C_.size() - 1);
        const TopElem a = T.element(i);
        std::uint32_t pm = 0, gm = 0;
        for (std::size_t j = 0; j < primes_.size(); ++j)
            if (is_e_free(T, a, prime_factorization(primes_[j]))) pm |= 1u << j;
        for (std::size_t j = 0; j < xf.size(); ++j)
            if (is_g_free(T, xm1(), a, single_factor(xf[j].first))) gm |= 1u << j;
        if (!atoms_) {
            pm = pm == full_prime_ ? full_prime_ : 0;
            gm = gm == full_poly_ ? full_poly_ : 0;
        }
        if (pm != prime_[i] || gm != poly_[i]) return false;
        if (is_primitive(i) != T.is_primitive(a)) return false;
        if (trace_class(i) != T.trace_to_mid(a) || norm_class(i) != T.norm_to_mid(a)) return false;
    }
    return true;
}

FlagTable precompute_flags(const CharacterTables& C, bool atoms, unsigned workers) {
    FlagTable flags(C, atoms, workers);
    require(flags.spot_check(C.size()), Errc::PreconditionViolated, "flag table disagrees with the freeness predicates");
    return flags;
}

DivisorTuple full_tuple(const FlagTable& flags) {
    return DivisorTuple{flags.tables().qm1(), flags.tables().qm1(), flags.xm1(), flags.xm1()};
}

DivisorTuple trivial_tuple() {
    DivisorTuple d;
    d.g1.unit = d.g2.unit = 1;
    return d;
}

std::uint64_t NfabMatrix::total() const {
    std::uint64_t s = 0;
    for (auto c : count) s += c;
    return s;
}

namespace {

struct CountPlan {
    std::uint32_t m1, m2, r1, r2;
};

CountPlan count_masks(const FlagTable& flags, const DivisorTuple& d) {
    const FieldTower& T = flags.tower();
    const MidField& F = T.mid();
    BigInt s, qm = BigInt(T.q() - 1);
    mpz_gcd(s.get_mpz_t(), d.e1.value.get_mpz_t(), qm.get_mpz_t());
    Factorization Qe1 = largest_coprime_divisor(d.e1, s);
    return CountPlan{flags.prime_bits(Qe1), flags.prime_bits(d.e2), flags.poly_bits(drop_x_minus_1(F, d.g1)),
                     flags.poly_bits(d.g2)};
}

std::vector<char> excluded_set(const FieldTower& T, const RationalFunction& f) {
    std::vector<char> ex(T.size(), 0);
    for (auto& z : pole_zero_set(T, f)) ex[T.index(z)] = 1;
    return ex;
}

TopElem horner(const FieldTower& T, const TopPoly& f, const TopElem& a) {
    TopElem acc = T.zero();
    for (std::size_t i = f.c.size(); i-- > 0;) acc = T.add(T.mul(acc, a), f.c[i]);
    return acc;
}

} // namespace

NfabMatrix count_nfab_all(const FlagTable& flags, const RationalFunction& f, const DivisorTuple& d, unsigned workers) {
    const CharacterTables& C = flags.tables();
    const FieldTower& T = C.tower();
    const std::uint32_t q = T.q();
    const CountPlan cp = count_masks(flags, d);
    const std::vector<char> ex = excluded_set(T, f);
    const std::uint64_t size = C.size(), n = C.n();
    const unsigned nw = std::max(1u, workers);
    std::vector<std::vector<std::uint64_t>> cnt(nw, std::vector<std::uint64_t>(std::size_t(q) * q, 0));
    std::vector<std::vector<std::uint64_t>> wit(nw, std::vector<std::uint64_t>(std::size_t(q) * q, kNone));
    std::vector<std::vector<std::uint64_t>> str(nw, std::vector<std::uint64_t>(std::size_t(q) * q, 0));

    parallel_ranges(1, size, nw, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        auto& c = cnt[w];
        auto& wt = wit[w];
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (ex[i]) continue;
            if ((flags.prime_mask(i) & cp.m1) != cp.m1 || (flags.poly_mask(i) & cp.r1) != cp.r1) continue;
            const TopElem a = T.element(i);
            const std::uint64_t num = T.index(horner(T, f.f1, a)), den = T.index(horner(T, f.f2, a));
            const std::uint64_t beta = C.dlog().exp(std::uint64_t(C.dlog().log(num)) + n - C.dlog().log(den));
            if ((flags.prime_mask(beta) & cp.m2) != cp.m2 || (flags.poly_mask(beta) & cp.r2) != cp.r2) continue;
            const std::size_t cell = std::size_t(C.norm(i)) * q + C.trace(i);
            if (c[cell]++ == 0) wt[cell] = i;
            if (flags.is_primitive(i) && flags.is_normal(i) && flags.is_primitive(beta) && flags.is_normal(beta))
                ++str[w][cell];
        }
    });

    NfabMatrix out;
    out.q = q;
    out.count.assign(std::size_t(q) * q, 0);
    out.witness.assign(std::size_t(q) * q, kNone);
    out.strict.assign(std::size_t(q) * q, 0);
    for (unsigned w = 0; w < nw; ++w)
        for (std::size_t cell = 0; cell < out.count.size(); ++cell) {
            out.count[cell] += cnt[w][cell];
            out.strict[cell] += str[w][cell];
            out.witness[cell] = std::min(out.witness[cell], wit[w][cell]);
        }
    return out;
}

NfabCount count_nfab(const FlagTable& flags, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                     const DivisorTuple& d, bool check_preconditions) {
    const FieldTower& T = flags.tower();
    const MidField& F = T.mid();
    require(a < F.q() && b < F.q(), Errc::InputError, "a and b must be in F_q");
    if (check_preconditions) {
        require(a != 0 && is_mid_free(F, a, factor(BigInt(F.q() - 1))), Errc::PreconditionViolated, "a must be primitive in F_q");
        require(b != 0, Errc::PreconditionViolated, "b must be nonzero");
        require(rn_membership(T, f).member, Errc::PreconditionViolated, "f must be in R_n");
    }
    NfabMatrix mat = count_nfab_all(flags, f, d);
    NfabCount out;
    out.count = mat.at(a, b);
    std::uint64_t w = mat.witness[std::size_t(a) * mat.q + b];
    if (w != kNone) out.witness = w;
    return out;
}

NfabCount count_nfab_direct(const FieldTower& T, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                            const DivisorTuple& d) {
    require(T.enumerable(), Errc::TowerTooLarge, "tower is not enumerable");
    const MidField& F = T.mid();
    BigInt s, qm = BigInt(T.q() - 1);
    mpz_gcd(s.get_mpz_t(), d.e1.value.get_mpz_t(), qm.get_mpz_t());
    const Factorization Qe1 = largest_coprime_divisor(d.e1, s);
    const MidFactorization Rg1 = drop_x_minus_1(F, d.g1);
    const MidFactorization xm1 = factor_xm_minus_1(F, T.m());
    const std::vector<char> ex = excluded_set(T, f);
    NfabCount out;
    for (std::uint64_t i = 1; i < T.size(); ++i) {
        if (ex[i]) continue;
        const TopElem x = T.element(i);
        if (T.norm_to_mid(x) != a || T.trace_to_mid(x) != b) continue;
        if (!is_e_free(T, x, Qe1) || !is_g_free(T, xm1, x, Rg1)) continue;
        auto y = eval_rational(T, f, x);
        if (!y || T.is_zero(*y)) continue;
        if (!is_e_free(T, *y, d.e2) || !is_g_free(T, xm1, *y, d.g2)) continue;
        if (out.count++ == 0) out.witness = i;
    }
    return out;
}

SieveIdentity check_sieve_identity(const FlagTable& flags, const RationalFunction& f, std::uint32_t a, std::uint32_t b,
                                   const SieveConfig& cfg) {
    const MidField& F = flags.tower().mid();
    MidRing R(F);
    auto with_prime = [](const Factorization& e, const BigInt& p) {
        return e.has_prime(p) ? e : times(e, prime_factorization(p));
    };
    auto with_factor = [&](const MidFactorization& g, const MidPoly& h) {
        MidPoly hm = R.monic(h);
        for (auto& [x, e] : g.factors)
            if (x == hm) return g;
        MidFactorization r = g;
        r.unit = 1;
        r.factors.push_back({hm, 1});
        return r;
    };
    auto count = [&](const DivisorTuple& d) {
        return static_cast<std::int64_t>(count_nfab_all(flags, f, d).at(a, b));
    };
    DivisorTuple full = cfg.base;
    for (auto& p : cfg.extra_e1) full.e1 = with_prime(full.e1, p);
    for (auto& p : cfg.extra_e2) full.e2 = with_prime(full.e2, p);
    for (auto& h : cfg.extra_g1) full.g1 = with_factor(full.g1, h);
    for (auto& h : cfg.extra_g2) full.g2 = with_factor(full.g2, h);

    SieveIdentity id;
    id.lhs = count(full);
    std::int64_t sum = 0;
    for (auto& p : cfg.extra_e1) {
        DivisorTuple d = cfg.base;
        d.e1 = with_prime(d.e1, p);
        sum += count(d);
    }
    for (auto& p : cfg.extra_e2) {
        DivisorTuple d = cfg.base;
        d.e2 = with_prime(d.e2, p);
        sum += count(d);
    }
    for (auto& h : cfg.extra_g1) {
        DivisorTuple d = cfg.base;
        d.g1 = with_factor(d.g1, h);
        sum += count(d);
    }
    for (auto& h : cfg.extra_g2) {
        DivisorTuple d = cfg.base;
        d.g2 = with_factor(d.g2, h);
        sum += count(d);
    }
    id.rhs = sum - (static_cast<std::int64_t>(cfg.leftovers()) - 1) * count(cfg.base);
    return id;
}

const char* strategy_name(SampleStrategy s) noexcept {
    switch (s) {
    case SampleStrategy::Uniform: return "uniform";
    case SampleStrategy::Adversarial: return "adversarial";
    case SampleStrategy::Exhaustive: return "exhaustive";
    }
    return "?";
}

SampleStrategy parse_strategy(const std::string& s) {
    if (s == "uniform") return SampleStrategy::Uniform;
    if (s == "adversarial") return SampleStrategy::Adversarial;
    if (s == "exhaustive") return SampleStrategy::Exhaustive;
    fail(Errc::InputError, "unknown strategy " + s);
}

namespace {

std::optional<RationalFunction> one_one(const FieldTower& T, const TopElem& a1, const TopElem& a0, const TopElem& b0) {
    if (T.is_zero(a1) || T.mul(a1, b0) == a0) return std::nullopt;
    TopPoly num, den;
    num.c = {a0, a1};
    den.c = {b0, T.one()};
    RationalFunction f = make_rational(T, num, den);
    require(rn_membership(T, f).member, Errc::PreconditionViolated, "sampled function is not in R_n");
    return f;
}

} // namespace

std::vector<RationalFunction> sample_functions(const FieldTower& T, std::size_t count, std::uint64_t seed,
                                               SampleStrategy strategy) {
    std::vector<RationalFunction> out;
    if (strategy == SampleStrategy::Exhaustive) {
        require(T.enumerable() && T.size() <= 400, Errc::TowerTooLarge, "exhaustive sampling needs q^m <= 400");
        const std::uint64_t n = T.size();
        for (std::uint64_t i1 = 1; i1 < n; ++i1)
            for (std::uint64_t j = 0; j < n; ++j)
                for (std::uint64_t i0 = 0; i0 < n; ++i0)
                    if (auto f = one_one(T, T.element(i1), T.element(i0), T.element(j))) out.push_back(std::move(*f));
        return out;
    }
    std::mt19937_64 rng(seed);
    const MidField& F = T.mid();
    auto nonzero_mid = [&] { return 1 + static_cast<std::uint32_t>(rng() % (F.q() - 1)); };
    std::size_t draw = 0;
    while (out.size() < count) {
        TopElem a1 = T.random(rng), a0 = T.random(rng), b0 = T.random(rng);
        if (strategy == SampleStrategy::Adversarial) {
            switch (draw % 3) {
            case 0:  // coefficients in F_q
                a1 = T.embed(F.random(rng));
                a0 = T.embed(F.random(rng));
                b0 = T.embed(F.random(rng));
                break;
            case 1: {  // a prescribed fixed point f(x0) = x0
                TopElem x0 = T.random(rng);
                if (T.is_zero(T.add(x0, b0))) break;
                a0 = T.sub(T.mul(x0, T.add(x0, b0)), T.mul(a1, x0));
                break;
            }
            default:  // a0 one F_q-step away from a1 b0
                a0 = T.add(T.mul(a1, b0), T.embed(nonzero_mid()));
                break;
            }
        }
        ++draw;
        if (auto f = one_one(T, a1, a0, b0)) out.push_back(std::move(*f));
    }
    return out;
}

std::vector<std::uint32_t> primitive_mid_elements(const MidField& F) {
    const Factorization s = factor(BigInt(F.q() - 1));
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 1; a < F.q(); ++a)
        if (is_mid_free(F, a, s)) out.push_back(a);
    return out;
}

bool SettleReport::counterexample() const {
    for (auto& z : zeros)
        if (z.confirmed) return true;
    return false;
}

std::string SettleReport::verdict() const { return counterexample() ? "counterexample" : "no-counterexample-found"; }

SettleReport settle(std::uint32_t p, unsigned k, unsigned m, std::size_t samples, std::uint64_t seed,
                    SampleStrategy strategy, unsigned workers) {
    FieldTower T(p, k, m);
    require(T.enumerable() && T.size() <= CharacterTables::kLimit, Errc::TowerTooLarge, "settle needs q^m <= 2^24");
    CharacterTables C(T);
    FlagTable flags = precompute_flags(C, true, workers);
    const MidField& F = T.mid();
    const auto prims = primitive_mid_elements(F);
    const DivisorTuple full = full_tuple(flags);

    SettleReport rep;
    rep.p = p;
    rep.k = k;
    rep.m = m;
    rep.seed = seed;
    rep.strategy = strategy;
    rep.min_count = kNone;
    const auto fs = sample_functions(T, samples, seed, strategy);
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        const RationalFunction& f = fs[fi];
        NfabMatrix mat = count_nfab_all(flags, f, full, workers);
        SettleFunction sf;
        sf.text = format_rational(T, f);
        sf.min_count = kNone;
        for (std::uint32_t a : prims)
            for (std::uint32_t b = 1; b < F.q(); ++b) {
                SettleCell cell{a, b, mat.at(a, b), std::nullopt};
                std::uint64_t w = mat.witness[std::size_t(a) * mat.q + b];
                if (w != kNone) cell.witness = w;
                sf.min_count = std::min(sf.min_count, cell.count);
                // a primitive norm forces a Q-free α to be primitive; a nonzero trace does the same for normality
                if (mat.strict[std::size_t(a) * mat.q + b] != cell.count) sf.strict_agrees = false;
                if (cell.count == 0) {
                    ZeroTriple z{fi, a, b, count_nfab_direct(T, f, a, b, full).count == 0};
                    rep.zeros.push_back(z);
                }
                sf.cells.push_back(cell);
            }
        rep.min_count = std::min(rep.min_count, sf.min_count);
        rep.functions.push_back(std::move(sf));
    }
    if (rep.min_count == kNone) rep.min_count = 0;
    return rep;
}

} // namespace pnp
