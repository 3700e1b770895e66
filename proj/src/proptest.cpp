#include "pnpair/proptest.hpp"

#include "pnpair/error.hpp"
#include "pnpair/sieve.hpp"

#include <cmath>
#include <sstream>

namespace pnp {

void PropertyReport::check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (failed.size() < 20) failed.push_back(what);
}

RationalFunction random_rational(const FieldTower& T, std::mt19937_64& rng, int num_deg, int den_deg) {
    auto poly = [&](int deg) {
        TopPoly p;
        for (int i = 0; i <= deg; ++i) p.c.push_back(T.random(rng));
        p.c.back() = T.one();
        return p;
    };
    for (;;) {
        try {
            return make_rational(T, poly(num_deg), poly(den_deg));
        } catch (const Error& e) {
            if (e.kind() != Errc::NotReduced) throw;
        }
    }
}

CharSumKind parse_charsum_kind(const std::string& s) {
    if (s == "weil") return CharSumKind::Weil;
    if (s == "hybrid") return CharSumKind::Hybrid;
    if (s == "chifab") return CharSumKind::ChiFab;
    fail(Errc::InputError, "unknown character-sum kind " + s);
}

const char* charsum_kind_name(CharSumKind k) noexcept {
    switch (k) {
    case CharSumKind::Weil: return "weil";
    case CharSumKind::Hybrid: return "hybrid";
    case CharSumKind::ChiFab: return "chifab";
    }
    return "?";
}

namespace {

std::string chi_text(const MultChar& c) { return std::to_string(c.order) + "/" + std::to_string(c.exponent); }

MultChar random_char(const CharacterTables& C, std::mt19937_64& rng, const std::vector<BigInt>& orders) {
    auto chis = mult_chars_of_order(C, to_u64(orders[rng() % orders.size()]));
    return chis[rng() % chis.size()];
}

AddChar random_add_char(const CharacterTables& C, std::mt19937_64& rng, bool nonzero) {
    AddChar psi;
    psi.u = nonzero ? 1 + rng() % (C.size() - 1) : rng() % C.size();
    psi.order = C.add_char_order(psi.u);
    return psi;
}

} // namespace

std::vector<CharSumRow> charsum_rows(const CharacterTables& C, CharSumKind kind, std::size_t samples,
                                     std::uint64_t seed, const RationalFunction* f) {
    const FieldTower& T = C.tower();
    const MidField& F = T.mid();
    std::mt19937_64 rng(seed);
    std::vector<CharSumRow> rows;
    std::vector<BigInt> orders;
    for (auto& d : squarefree_divisors(C.qm1()))
        if (d > 1) orders.push_back(d);

    if (kind == CharSumKind::ChiFab) {
        require(f != nullptr, Errc::InputError, "chifab rows need a function");
        BigInt sigma, qm(F.q() - 1);
        mpz_gcd(sigma.get_mpz_t(), C.qm1().value.get_mpz_t(), qm.get_mpz_t());
        const auto q_orders = squarefree_divisors(largest_coprime_divisor(C.qm1(), sigma));
        const auto all_orders = squarefree_divisors(C.qm1());
        for (std::size_t i = 0; i < samples; ++i) {
            const MultChar c1 = random_char(C, rng, q_orders), c2 = random_char(C, rng, all_orders);
            const AddChar s1 = random_add_char(C, rng, false), s2 = random_add_char(C, rng, false);
            const auto a = 1 + static_cast<std::uint32_t>(rng() % (F.q() - 1));
            const auto b = 1 + static_cast<std::uint32_t>(rng() % (F.q() - 1));
            ChiFab r = chi_fab(C, *f, a, b, c1, c2, s1, s2);
            std::ostringstream t;
            t << "f=" << format_rational(T, *f) << ";a=" << a << ";b=" << b << ";chi1=" << chi_text(c1)
              << ";chi2=" << chi_text(c2) << ";psi1=" << s1.u << ";psi2=" << s2.u;
            rows.push_back({kind, t.str(), std::abs(r.sum - r.center), r.bound, true, r.within()});
        }
        return rows;
    }

    require(!orders.empty(), Errc::InputError, "q^m-1 has no nontrivial square-free divisor");
    const std::size_t tries = samples * 50 + 100;
    for (std::size_t i = 0; i < tries && rows.size() < samples; ++i) {
        RationalFunction fi = f ? *f
                                : random_rational(T, rng, 1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 3));
        const MultChar chi = random_char(C, rng, orders);
        std::ostringstream t;
        t << "f=" << format_rational(T, fi) << ";chi=" << chi_text(chi);
        CharSum r, wide;
        if (kind == CharSumKind::Weil) {
            r = weil_sum(C, fi, chi);
        } else {
            RationalFunction g = random_rational(T, rng, static_cast<int>(rng() % 3), static_cast<int>(rng() % 2));
            const AddChar psi = random_add_char(C, rng, true);
            t << ";g=" << format_rational(T, g) << ";psi=" << psi.u;
            r = hybrid_weil_sum(C, fi, g, chi, psi);
            wide = hybrid_weil_sum(C, fi, g, chi, psi, HybridRange::PolesOnly);
        }
        if (!f && !r.hypothesis) continue;
        CharSumRow row{kind, t.str(), std::abs(r.sum), r.bound, r.hypothesis, r.within()};
        if (kind == CharSumKind::Hybrid) {
            row.poles_only_abs_sum = std::abs(wide.sum);
            row.poles_only_pass = wide.within();
        }
        rows.push_back(row);
    }
    return rows;
}

SieveConfig random_sieve_config(const FlagTable& flags, std::mt19937_64& rng) {
    SieveConfig cfg;
    cfg.base = trivial_tuple();
    for (auto& l : flags.primes()) {
        switch (rng() % 4) {
        case 0: cfg.base.e1 = times(cfg.base.e1, factor(l)); break;
        case 1: cfg.extra_e1.push_back(l); break;
        default: break;
        }
        switch (rng() % 4) {
        case 0: cfg.base.e2 = times(cfg.base.e2, factor(l)); break;
        case 1: cfg.extra_e2.push_back(l); break;
        default: break;
        }
    }
    for (auto& [h, e] : flags.xm1().factors) {
        switch (rng() % 3) {
        case 0: cfg.base.g1.factors.push_back({h, 1}); break;
        case 1: cfg.extra_g1.push_back(h); break;
        default: break;
        }
        switch (rng() % 3) {
        case 0: cfg.base.g2.factors.push_back({h, 1}); break;
        case 1: cfg.extra_g2.push_back(h); break;
        default: break;
        }
    }
    return cfg;
}

namespace {

std::string tower_name(const FieldTower& T) {
    return "(" + std::to_string(T.p()) + "," + std::to_string(T.k()) + "," + std::to_string(T.m()) + ")";
}

// every divisor of g, multiplicities included
std::vector<MidFactorization> all_divisors(const MidFactorization& g) {
    std::vector<MidFactorization> out(1);
    out[0].unit = 1;
    for (auto& [h, e] : g.factors) {
        std::vector<MidFactorization> next;
        for (auto& d : out)
            for (unsigned j = 0; j <= e; ++j) {
                MidFactorization x = d;
                if (j) x.factors.push_back({h, j});
                next.push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

bool rounds_to(double v, bool indicator) {
    return std::abs(v - std::round(v)) < 1e-6 && (std::round(v) == 1) == indicator && (std::round(v) == 0) == !indicator;
}

void indicators_suite(PropertyReport& rep) {
    for (auto [p, m] : {std::pair{3u, 4u}, std::pair{7u, 2u}}) {
        FieldTower T(p, 1, m);
        CharacterTables C(T);
        const MidField& F = T.mid();
        const std::string tn = tower_name(T);
        std::vector<Factorization> es;
        for (auto& e : divisors(C.qm1())) es.push_back(factor(e));
        const auto gs = all_divisors(C.xm1());
        for (std::uint64_t i = 0; i < C.size(); ++i) {
            const TopElem al = T.element(i);
            const std::string at = tn + " alpha=" + std::to_string(i);
            for (auto& g : gs)
                rep.check(rounds_to(kappa_g(C, i, g), is_g_free(T, C.xm1(), al, g)), at + " kappa");
            for (std::uint32_t b = 0; b < F.q(); ++b)
                rep.check(rounds_to(tau_b(C, i, b), T.trace_to_mid(al) == b), at + " tau b=" + std::to_string(b));
            if (i == 0) continue;
            for (auto& e : es)
                rep.check(rounds_to(rho_e(C, i, e), is_e_free(T, al, e)), at + " rho e=" + e.value.get_str());
            for (std::uint32_t a = 1; a < F.q(); ++a)
                rep.check(rounds_to(eta_a(C, i, a), T.norm_to_mid(al) == a), at + " eta a=" + std::to_string(a));
        }
    }
    rep.notes.push_back("rho_e and eta_a are compared on nonzero elements; tau_b and kappa_g on all elements");
}

void decomposition_suite(PropertyReport& rep) {
    // 2400 = 7^4-1, so its divisors are taken on F_{7^4}; F_{7^2} covers the divisors of 48
    for (auto [p, m] : {std::pair{3u, 4u}, std::pair{7u, 2u}, std::pair{7u, 4u}}) {
        FieldTower T(p, 1, m);
        const std::string tn = tower_name(T);
        for (auto& l : divisors(T.qm1())) {
            const Factorization fl = factor(l);
            for (std::uint64_t i = 1; i < T.size(); ++i) {
                auto r = lemma31_check(T, T.element(i), fl);
                rep.check(r.lhs == r.rhs, tn + " alpha=" + std::to_string(i) + " l=" + l.get_str());
            }
        }
    }
}

void add_rows(PropertyReport& rep, const std::vector<CharSumRow>& rows, std::size_t want, const std::string& what) {
    rep.check(rows.size() == want, what + ": " + std::to_string(rows.size()) + " admissible samples");
    for (auto& r : rows) rep.check(r.pass, what + " " + r.tuple);
}

void weil_suite(PropertyReport& rep, std::uint64_t seed) {
    {
        FieldTower T(3, 1, 4);
        CharacterTables C(T);
        add_rows(rep, charsum_rows(C, CharSumKind::Weil, 100, seed), 100, "weil (3,1,4)");
        const auto hybrid = charsum_rows(C, CharSumKind::Hybrid, 100, seed + 1);
        add_rows(rep, hybrid, 100, "hybrid (3,1,4)");
        std::size_t printed = 0, wide = 0;
        for (auto& r : hybrid) {
            printed += !r.pass;
            wide += !r.poles_only_pass;
        }
        rep.notes.push_back("hybrid sums over the printed range (g(α) != 0, ∞): " + std::to_string(printed) +
                            " of " + std::to_string(hybrid.size()) + " exceed the bound; with only the poles of g removed: " +
                            std::to_string(wide));
    }
    for (auto [p, m] : {std::pair{3u, 4u}, std::pair{7u, 2u}}) {
        FieldTower T(p, 1, m);
        CharacterTables C(T);
        const MidField& F = T.mid();
        const RationalFunction f = parse_rational(T, "(x+1)/(x+2)");
        add_rows(rep, charsum_rows(C, CharSumKind::ChiFab, 50, seed + p, &f), 50, "chi_fab " + tower_name(T));
        // trivial tuple: the deviation bound around q^m - |P|
        const MultChar one{1, 0};
        const AddChar zero{MidRing(F).one(), 0};
        for (std::uint32_t a = 1; a < F.q(); ++a)
            for (std::uint32_t b = 1; b < F.q(); ++b) {
                ChiFab r = chi_fab(C, f, a, b, one, one, zero, zero);
                rep.check(r.trivial && r.within(), "trivial chi_fab " + tower_name(T));
            }
    }
}

void counting_suite(PropertyReport& rep, std::uint64_t seed) {
    {
        FieldTower T(3, 1, 4);
        CharacterTables C(T);
        FlagTable flags = precompute_flags(C);
        const DivisorTuple full = full_tuple(flags);
        const Real bound = lower_bound_N(T.mid(), 4, 1, 1, full.e1, full.e2, full.g1, full.g2);
        std::size_t positive = 0;
        for (const char* text : {"(x+1)/(x+2)", "(t*x+1)/(x+t)", "(x+2)/(x+t^2)"}) {
            const RationalFunction f = parse_rational(T, text);
            const NfabMatrix mat = count_nfab_all(flags, f, full);
            for (std::uint32_t a = 1; a < 3; ++a)
                for (std::uint32_t b = 1; b < 3; ++b) {
                    const double n = reassembled_count(C, f, a, b, full.e1, full.e2, full.g1, full.g2);
                    const double c = static_cast<double>(mat.at(a, b));
                    rep.check(std::abs(n - c) < 1e-3, std::string("reassembly ") + text + " a=" + std::to_string(a) +
                                                          " b=" + std::to_string(b));
                    if (a == 2 && Real(0) < bound) {
                        ++positive;
                        rep.check(bound < Real(long(mat.at(a, b))), std::string("lower bound ") + text);
                    }
                }
        }
        rep.notes.push_back("lower bound on (3,1,4) is " + bound.str(6) + "; positive instances: " +
                            std::to_string(positive));
        SieveConfig cfg;
        cfg.base = trivial_tuple();
        cfg.extra_e1 = cfg.extra_e2 = flags.primes();
        for (auto& [h, e] : C.xm1().factors) {
            cfg.extra_g1.push_back(h);
            cfg.extra_g2.push_back(h);
        }
        const RationalFunction f = parse_rational(T, "(x+1)/(x+2)");
        for (std::uint32_t b = 1; b < 3; ++b)
            rep.check(check_sieve_identity(flags, f, 2, b, cfg).holds(), "sieve identity (3,1,4) full leftovers");
    }
    {
        FieldTower T(7, 1, 2);
        CharacterTables C(T);
        FlagTable flags = precompute_flags(C);
        std::mt19937_64 rng(seed);
        const auto prims = primitive_mid_elements(T.mid());
        const auto fs = sample_functions(T, 20, seed, SampleStrategy::Uniform);
        for (int run = 0; run < 20; ++run) {
            SieveConfig cfg = random_sieve_config(flags, rng);
            const std::uint32_t a = prims[rng() % prims.size()];
            const std::uint32_t b = 1 + static_cast<std::uint32_t>(rng() % 6);
            SieveIdentity id = check_sieve_identity(flags, fs[run], a, b, cfg);
            rep.check(id.holds(), "sieve identity (7,1,2) run " + std::to_string(run) + ": " + std::to_string(id.lhs) +
                                      " < " + std::to_string(id.rhs));
        }
    }
}

} // namespace

const std::vector<std::string>& property_suite_names() {
    static const std::vector<std::string> names{"indicators", "decomposition", "weil", "counting"};
    return names;
}

PropertyReport run_property_suite(const std::string& name, std::uint64_t seed) {
    PropertyReport rep;
    rep.suite = name;
    if (name == "indicators")
        indicators_suite(rep);
    else if (name == "decomposition")
        decomposition_suite(rep);
    else if (name == "weil")
        weil_suite(rep, seed);
    else if (name == "counting")
        counting_suite(rep, seed);
    else
        fail(Errc::InputError, "unknown property suite " + name);
    return rep;
}

} // namespace pnp
