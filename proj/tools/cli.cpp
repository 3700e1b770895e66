#include "cli.hpp"

#include "pnpair/error.hpp"
#include "pnpair/golden.hpp"
#include "pnpair/proptest.hpp"
#include "pnpair/sieve.hpp"
#include "pnpair/verifier.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace pnp::cli {

using Json = nlohmann::ordered_json;

namespace {

struct Range {
    unsigned lo = 0, hi = 0;
};

Range parse_range(const std::string& s) {
    Range r;
    try {
        const auto dots = s.find("..");
        if (dots == std::string::npos) {
            r.lo = r.hi = static_cast<unsigned>(std::stoul(s));
        } else {
            r.lo = static_cast<unsigned>(std::stoul(s.substr(0, dots)));
            r.hi = static_cast<unsigned>(std::stoul(s.substr(dots + 2)));
        }
    } catch (const std::exception&) {
        fail(Errc::InputError, "bad range '" + s + "', expected N or A..B");
    }
    require(r.lo >= 1 && r.lo <= r.hi, Errc::InputError, "bad range '" + s + "'");
    return r;
}

// Factor options for this run: the --cache file when given, else the process-wide cache.
class CacheScope {
public:
    explicit CacheScope(const RunConfig& cfg) {
        if (!cfg.cache_path.empty()) {
            own_.load(cfg.cache_path);
            cache_ = &own_;
            path_ = cfg.cache_path;
            digest_ = own_.digest();
        } else {
            // the shared cache grows during a process, so the digest is taken from the file itself
            cache_ = &shared_factor_cache();
            path_ = shared_factor_cache_path();
            FactorCache file;
            if (std::ifstream(path_)) file.load(path_);
            digest_ = file.digest();
        }
        opt_.budget = cfg.budget;
        opt_.cache = cache_;
    }
    const FactorOptions& options() const { return opt_; }
    const std::string& digest() const { return digest_; }
    const std::string& path() const { return path_; }

private:
    FactorCache own_;
    FactorCache* cache_ = nullptr;
    FactorOptions opt_;
    std::string path_, digest_;
};

Json config_json(const RunConfig& cfg, const CacheScope& cache) {
    Json j;
    j["command"] = cfg.command;
    j["args"] = cfg.args;
    j["seed"] = cfg.seed;
    j["budget"] = cfg.budget;
    j["cache_path"] = cache.path();
    j["precision_bits"] = cfg.precision_bits;
    j["workers"] = cfg.workers;
    return j;
}

Json envelope(const RunConfig& cfg, const CacheScope& cache, Json result) {
    Json j;
    j["tool"] = "pnpair";
    j["version"] = PNPAIR_VERSION;
    j["config"] = config_json(cfg, cache);
    j["factor_cache_digest"] = cache.digest();
    j["result"] = std::move(result);
    return j;
}

std::string rational_text(const Rational& r) { return to_string(r); }

Json verdict_json(const ConditionVerdict& v) {
    Json j;
    j["verdict"] = verdict_name(v.verdict);
    j["method"] = v.method_label();
    j["form"] = v.form;
    j["lhs_log"] = v.lhs_log.str(20);
    j["rhs_log"] = v.rhs_log.str(20);
    j["margin_log"] = (v.lhs_log - v.rhs_log).str(20);
    j["exact_tie"] = v.exact_tie;
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

Json plan_json(const SieveContext& ctx, const SievePlan& plan) {
    Json j;
    const PlanText text = plan_text(ctx, plan);
    j["d_prime"] = text.d_prime;
    j["d"] = text.d;
    j["g_prime"] = text.g_prime;
    j["g"] = text.g;
    Json left = Json::array();
    const auto& atoms = ctx.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (!plan.chosen[i]) left.push_back(atoms[i].label);
    j["leftovers"] = left;
    j["r"] = plan.r;
    j["s"] = plan.s;
    j["t"] = plan.t;
    j["u"] = plan.u;
    j["lambda_positive"] = plan.lambda_positive;
    j["lambda"] = format_fixed(plan.lambda);
    j["Lambda"] = plan.lambda_positive ? format_fixed(plan.Lambda) : std::string("undefined");
    j["lambda_exact"] = rational_text(plan.lambda);
    if (plan.lambda_positive) j["Lambda_exact"] = rational_text(plan.Lambda);
    return j;
}

std::string pair_text(const BigInt& q, unsigned m) { return "(" + q.get_str() + "," + std::to_string(m) + ")"; }

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

double round3(double x) { return std::round(x * 1000) / 1000; }

// ---- subcommands ----

struct TowerArgs {
    std::uint32_t p = 0;
    unsigned k = 1, m = 0;
};

int cmd_factor(const RunConfig& cfg, std::ostream& out, const std::string& n_text, bool json, const CacheScope& cache) {
    const BigInt n = parse_bigint(n_text);
    require(n >= 1, Errc::InputError, "factor needs a positive integer");
    const Factorization f = factor(n, cache.options());
    if (json) {
        Json r;
        r["n"] = n.get_str();
        r["line"] = f.to_line();
        r["complete"] = f.complete();
        Json fs = Json::array();
        for (auto& pp : f.factors) fs.push_back({{"prime", pp.prime.get_str()}, {"exponent", pp.exponent}, {"probable", pp.probable}});
        r["factors"] = fs;
        if (!f.complete()) r["cofactor"] = f.cofactor.get_str();
        write_json(out, envelope(cfg, cache, r));
    } else {
        out << f.to_line() << "\n";
    }
    return f.complete() ? kOk : kBudgetUnknown;
}

int cmd_tower(const RunConfig& cfg, std::ostream& out, const TowerArgs& ta, const std::string& elem, const CacheScope& cache) {
    FieldTower T(ta.p, ta.k, ta.m);
    T.compute_qm1(cache.options());
    const MidField& F = T.mid();
    MidRing R(F);
    MidField Fp(ta.p, 1);
    PolyRing<MidField> Rp(Fp);
    Json r;
    r["p"] = ta.p;
    r["k"] = ta.k;
    r["m"] = ta.m;
    r["q"] = F.q();
    r["order"] = T.order().get_str();
    r["base_modulus"] = Rp.format(MidPoly{F.modulus()}, 'u');
    r["ext_modulus"] = R.format(MidPoly{T.ext_modulus()}, 't');
    r["qm1"] = T.qm1().to_line();
    const MidFactorization xm1 = factor_xm_minus_1(F, ta.m);
    Json xf = Json::array();
    for (auto& [h, e] : xm1.factors) xf.push_back({{"factor", R.format(h)}, {"multiplicity", e}});
    r["xm1_factors"] = xf;
    const XmStructure xs = xm_structure(F.q(), ta.m);
    r["m_prime"] = xs.m_prime;
    r["route"] = (F.q() - 1) % xs.m_prime == 0 ? "m' | q-1" : "m' does not divide q-1";
    if (!elem.empty()) {
        const TopElem a = T.parse(elem);
        Json e;
        e["text"] = T.format(a);
        e["index"] = T.index_big(a).get_str();
        e["trace"] = F.format(T.trace_to_mid(a));
        e["norm"] = F.format(T.norm_to_mid(a));
        if (!T.is_zero(a)) e["primitive"] = T.is_primitive(a);
        const MidPoly ord = fq_order(T, xm1, a);
        e["fq_order"] = R.format(ord);
        e["normal"] = ord == R.xn_minus_one(ta.m);
        r["element"] = e;
    }
    write_json(out, envelope(cfg, cache, r));
    return T.qm1().complete() ? kOk : kBudgetUnknown;
}

int cmd_charsum(const RunConfig& cfg, std::ostream& out, const TowerArgs& ta, const std::string& kind_text,
                std::size_t samples, const std::string& f_text, const CacheScope& cache) {
    FieldTower T(ta.p, ta.k, ta.m);
    T.compute_qm1(cache.options());
    require(T.enumerable() && T.size() <= CharacterTables::kLimit, Errc::TowerTooLarge, "charsum needs q^m <= 2^24");
    CharacterTables C(T);
    const CharSumKind kind = parse_charsum_kind(kind_text);
    std::optional<RationalFunction> f;
    if (!f_text.empty()) f = parse_rational(T, f_text);
    if (kind == CharSumKind::ChiFab && !f) f = parse_rational(T, "(x+1)/(x+2)");
    const auto rows = charsum_rows(C, kind, samples, cfg.seed, f ? &*f : nullptr);
    out << "# pnpair " << PNPAIR_VERSION << " " << config_json(cfg, cache).dump() << "\n";
    out << "# factor_cache_digest " << cache.digest() << "\n";
    out << "kind,tuple,abs_sum,bound,hypothesis,result\n";
    char buf[64];
    for (auto& r : rows) {
        out << charsum_kind_name(r.kind) << ",\"" << r.tuple << "\",";
        std::snprintf(buf, sizeof buf, "%.12g,%.12g", r.abs_sum, r.bound);
        out << buf << "," << (r.hypothesis ? "holds" : "fails") << "," << (r.pass ? "pass" : "fail") << "\n";
    }
    return kOk;
}

int cmd_condition(const RunConfig& cfg, std::ostream& out, const TowerArgs& ta, const std::string& form, unsigned n1,
                  unsigned n2, int t, const std::string& c_text, const CacheScope& cache) {
    ConditionVerdict v;
    if (form == "divisor" || form == "multiplicative" || form == "sigma") {
        const PairInfo info = pair_info(ta.p, ta.k, ta.m);
        if (form == "divisor") v = divisor_bound_condition(info, n1, n2, t);
        else if (form == "multiplicative") v = full_multiplicative_bound(info, n1, n2, t);
        else v = sigma_bound(info, n1, n2, t);
    } else {
        SieveContext ctx(ta.p, ta.k, ta.m, cache.options());
        if (form == "base") v = base_condition(ctx, n1, n2);
        else if (form == "coarse") v = coarse_base_condition(ctx, n1, n2);
        else if (form == "square") v = square_condition(ctx, parse_bigint(c_text));
        else if (form == "coset") v = coset_bound_condition(ctx, n1, n2);
        else fail(Errc::InputError, "unknown form " + form);
    }
    Json r;
    r["pair"] = pair_text(pair_info(ta.p, ta.k, ta.m).q_big, ta.m);
    r["form_requested"] = form;
    r["condition"] = verdict_json(v);
    write_json(out, envelope(cfg, cache, r));
    return v.verdict == Verdict::Unknown ? kBudgetUnknown : kOk;
}

int cmd_plan(const RunConfig& cfg, std::ostream& out, const TowerArgs& ta, unsigned n1, unsigned n2,
             const std::vector<std::string>& divisors, const CacheScope& cache) {
    SieveContext ctx(ta.p, ta.k, ta.m, cache.options());
    Json r;
    r["pair"] = pair_text(ctx.info().q_big, ta.m);
    if (!ctx.complete()) {
        r["status"] = "unknown";
        r["qm1"] = ctx.qm1().to_line();
        write_json(out, envelope(cfg, cache, r));
        return kBudgetUnknown;
    }
    Json atoms = Json::array();
    for (auto& a : ctx.atoms()) atoms.push_back({{"label", a.label}, {"weight", rational_text(a.weight)}});
    r["atoms"] = atoms;
    if (!divisors.empty()) {
        require(divisors.size() == 4, Errc::InputError, "--divisors takes d', d, g', g");
        const MidField& F = ctx.field();
        const auto chosen = plan_from_divisors(ctx, parse_bigint(divisors[0]), parse_bigint(divisors[1]),
                                               parse_mid_poly(F, divisors[2]), parse_mid_poly(F, divisors[3]));
        const SievePlan plan = plan_evaluate(ctx, chosen);
        r["plan"] = plan_json(ctx, plan);
        r["condition"] = verdict_json(sieve_condition(ctx, plan, n1, n2));
    } else {
        const PlanSearch s = plan_search(ctx, n1, n2);
        r["search"] = {{"exhaustive", s.exhaustive}, {"methods_agree", s.methods_agree}, {"atoms", s.atoms}};
        r["passing"] = s.passing.has_value();
        r["plan"] = plan_json(ctx, s.passing ? *s.passing : s.best);
        r["condition"] = verdict_json(s.verdict);
    }
    write_json(out, envelope(cfg, cache, r));
    return kOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::uint32_t p, const std::string& k_text,
                 const std::string& m_text, unsigned n1, unsigned n2, const CacheScope& cache) {
    const Range kr = parse_range(k_text), mr = parse_range(m_text);
    ClassifyOptions opt;
    opt.n1 = n1;
    opt.n2 = n2;
    opt.factor = cache.options();
    opt.workers = cfg.workers;
    const auto entries = classify(p, kr.lo, kr.hi, mr.lo, mr.hi, opt);
    Json list = Json::array();
    std::map<std::string, std::size_t> counts;
    for (const char* s : {"resolved-by-bound", "resolved-by-condition", "resolved-by-sieve", "unresolved", "unknown"})
        counts[s] = 0;
    Json unresolved = Json::array(), unknown = Json::array();
    for (auto& e : entries) {
        Json j;
        j["q"] = e.q.get_str();
        j["k"] = e.k;
        j["m"] = e.m;
        j["m_prime"] = e.m_prime;
        j["route"] = e.route_divides ? "m' | q-1" : "m' does not divide q-1";
        j["status"] = status_name(e.status);
        j["condition"] = verdict_json(e.verdict);
        if (e.plan) j["plan"] = {{"d_prime", e.plan->d_prime}, {"d", e.plan->d}, {"g_prime", e.plan->g_prime}, {"g", e.plan->g}};
        if (e.lambda) j["lambda"] = format_fixed(*e.lambda);
        if (e.Lambda) j["Lambda"] = format_fixed(*e.Lambda);
        list.push_back(j);
        ++counts[status_name(e.status)];
        if (e.status == Status::Unresolved) unresolved.push_back(pair_text(e.q, e.m));
        if (e.status == Status::Unknown) unknown.push_back(pair_text(e.q, e.m));
    }
    Json r;
    Json c;
    for (auto& [k, v] : counts) c[k] = v;
    r["summary"] = {{"pairs", entries.size()}, {"counts", c}, {"unresolved", unresolved}, {"unknown", unknown}};
    r["pairs"] = list;
    write_json(out, envelope(cfg, cache, r));
    return unknown.empty() ? kOk : kBudgetUnknown;
}

int cmd_tables(const RunConfig& cfg, std::ostream& out, const std::string& which, const CacheScope& cache) {
    std::vector<int> tables;
    if (which == "1") tables = {1};
    else if (which == "2") tables = {2};
    else if (which == "all") tables = {1, 2};
    else fail(Errc::InputError, "--which takes 1, 2 or all");
    Json r = Json::array();
    bool all_match = true;
    for (int t : tables) {
        Json rows = Json::array();
        std::size_t matched = 0;
        for (auto& row : golden::table_rows(t)) {
            const golden::RowCheck c = golden::check_row(row);
            Json j;
            j["index"] = row.index;
            j["q"] = "7^" + std::to_string(row.k);
            j["m"] = row.m;
            j["printed"] = {{"lambda", row.lambda}, {"Lambda", row.Lambda}};
            j["computed"] = {{"lambda", format_fixed(c.plan.lambda)},
                             {"Lambda", c.plan.lambda_positive ? format_fixed(c.plan.Lambda) : std::string("undefined")}};
            j["digits"] = {{"lambda", round3(c.lambda_digits)}, {"Lambda", round3(c.Lambda_digits)}};
            j["direction"] = {{"lambda_at_least_printed", c.lambda_direction}, {"Lambda_at_most_printed", c.Lambda_direction}};
            j["relaxed"] = row.relaxed;
            j["condition"] = verdict_json(c.verdict);
            j["match"] = c.matches();
            matched += c.matches();
            all_match = all_match && c.matches();
            rows.push_back(j);
        }
        r.push_back({{"table", t}, {"rows", rows.size()}, {"matched", matched}, {"entries", rows}});
    }
    write_json(out, envelope(cfg, cache, {{"tables", r}, {"all_match", all_match}}));
    return all_match ? kOk : kGoldenMismatch;
}

int cmd_settle(const RunConfig& cfg, std::ostream& out, const TowerArgs& ta, std::size_t samples,
               const std::string& strategy, const CacheScope& cache) {
    const SettleReport rep = settle(ta.p, ta.k, ta.m, samples, cfg.seed, parse_strategy(strategy), cfg.workers);
    FieldTower T(ta.p, ta.k, ta.m);
    const MidField& F = T.mid();
    const auto fs = sample_functions(T, samples, cfg.seed, parse_strategy(strategy));
    Json funcs = Json::array();
    for (std::size_t i = 0; i < rep.functions.size(); ++i) {
        const auto& sf = rep.functions[i];
        Json j;
        j["f"] = sf.text;
        Json num = Json::array(), den = Json::array();
        for (auto& c : fs[i].f1.c) num.push_back(T.format(c));
        for (auto& c : fs[i].f2.c) den.push_back(T.format(c));
        j["numerator"] = num;
        j["denominator"] = den;
        Json cells = Json::array();
        for (auto& c : sf.cells) {
            Json cj{{"a", F.format(c.a)}, {"b", F.format(c.b)}, {"count", c.count}};
            if (c.witness) cj["witness"] = {{"index", *c.witness}, {"element", T.format(T.element(*c.witness))}};
            cells.push_back(cj);
        }
        j["cells"] = cells;
        j["min"] = sf.min_count;
        j["strict_agrees"] = sf.strict_agrees;
        funcs.push_back(j);
    }
    Json zeros = Json::array();
    for (auto& z : rep.zeros)
        zeros.push_back({{"function", rep.functions[z.function].text}, {"a", F.format(z.a)}, {"b", F.format(z.b)},
                         {"confirmed", z.confirmed}});
    Json r;
    r["pair"] = pair_text(BigInt(F.q()), ta.m);
    r["strategy"] = strategy_name(rep.strategy);
    r["samples"] = rep.functions.size();
    r["cells_per_function"] = rep.functions.empty() ? 0 : rep.functions[0].cells.size();
    r["min_count"] = rep.min_count;
    r["verdict"] = rep.verdict();
    r["zero_triples"] = zeros;
    r["functions"] = funcs;
    write_json(out, envelope(cfg, cache, r));
    return kOk;
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out, const std::string& id, const CacheScope& cache) {
    Json entries = Json::array();
    Json values;
    bool anchors_ok = true;
    for (auto& e : threshold_catalogue()) {
        if (!id.empty() && e.id != id) continue;
        const long n = threshold_solve(e.id);
        values[e.id] = n;
        const bool agrees = n == e.printed;
        if (e.anchor && !agrees) anchors_ok = false;
        entries.push_back({{"id", e.id}, {"variable", e.variable}, {"inequality", e.text}, {"start", e.start},
                           {"computed", n}, {"printed", e.printed}, {"agrees", agrees}, {"anchor", e.anchor}});
    }
    require(!entries.empty(), Errc::InputError, "unknown threshold id " + id);
    write_json(out, envelope(cfg, cache, {{"values", values}, {"anchors_agree", anchors_ok}, {"entries", entries}}));
    return anchors_ok ? kOk : kGoldenMismatch;
}

int cmd_proptest(const RunConfig& cfg, std::ostream& out, const std::string& suite, const CacheScope& cache) {
    std::vector<std::string> names;
    if (suite == "all") names = property_suite_names();
    else names = {suite};
    Json reports = Json::array();
    bool ok = true;
    for (auto& n : names) {
        const PropertyReport rep = run_property_suite(n, cfg.seed);
        ok = ok && rep.passed();
        reports.push_back({{"suite", rep.suite}, {"checks", rep.checks}, {"failures", rep.failures},
                           {"passed", rep.passed()}, {"failed", rep.failed}, {"notes", rep.notes}});
    }
    write_json(out, envelope(cfg, cache, {{"suites", reports}, {"all_passed", ok}}));
    return ok ? kOk : kGoldenMismatch;
}

void error_json(std::ostream& out, const std::string& kind, const std::string& message) {
    Json j{{"error", {{"kind", kind}, {"message", message}}}};
    out << j.dump(2) << "\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
    RunConfig cfg;
    cfg.args = args;
    CLI::App app{"pnpair: primitive normal pair computations over finite fields", "pnpair"};
    app.require_subcommand(1);
    app.add_option("--seed", cfg.seed, "random seed recorded in every report");
    app.add_option("--budget", cfg.budget, "rho iterations per cofactor");
    app.add_option("--cache", cfg.cache_path, "factor cache file (default: $PNPAIR_FACTOR_CACHE or the shipped cache)");
    app.add_option("--precision", cfg.precision_bits, "MPFR precision in bits")->check(CLI::Range(53L, 100000L));
    app.add_option("--workers", cfg.workers, "worker threads, 0 for all cores");
    std::string out_path;
    app.add_option("--out", out_path, "write the report to this file");

    TowerArgs ta;
    auto tower_opts = [&](CLI::App* sc, bool need_m = true) {
        sc->add_option("--p", ta.p, "characteristic")->required();
        sc->add_option("--k", ta.k, "q = p^k");
        auto* m = sc->add_option("--m", ta.m, "extension degree");
        if (need_m) m->required();
    };
    unsigned n1 = 1, n2 = 1;
    auto n_opts = [&](CLI::App* sc) {
        sc->add_option("--n1", n1, "numerator degree of f");
        sc->add_option("--n2", n2, "denominator degree of f");
    };

    std::string n_text;
    bool factor_json = false;
    auto* s_factor = app.add_subcommand("factor", "factor an integer, printing the cache line format");
    s_factor->add_option("n", n_text, "positive integer")->required();
    s_factor->add_flag("--json", factor_json, "print a JSON report instead of the line");

    std::string elem;
    auto* s_tower = app.add_subcommand("tower", "describe the tower F_p < F_q < F_{q^m}");
    tower_opts(s_tower);
    s_tower->add_option("--elem", elem, "element of F_{q^m} in t and u");

    std::string kind = "weil", f_text;
    std::size_t samples = 20;
    auto* s_charsum = app.add_subcommand("charsum", "sampled character sums against their bounds (CSV)");
    tower_opts(s_charsum);
    s_charsum->add_option("--kind", kind, "weil, hybrid or chifab");
    s_charsum->add_option("--samples", samples, "number of rows");
    s_charsum->add_option("--f", f_text, "fixed rational function");

    std::string form = "base", c_text = "8";
    int t = 14;
    auto* s_condition = app.add_subcommand("condition", "evaluate one sufficient condition for a pair");
    tower_opts(s_condition);
    n_opts(s_condition);
    s_condition->add_option("--form", form, "base, coarse, square, coset, divisor, multiplicative or sigma");
    s_condition->add_option("--t", t, "exponent t in {7, 10, 14} for the bound forms");
    s_condition->add_option("--c", c_text, "constant c of the square form");

    std::vector<std::string> divisors;
    auto* s_plan = app.add_subcommand("plan", "search or evaluate a sieve plan");
    tower_opts(s_plan);
    n_opts(s_plan);
    s_plan->add_option("--divisors", divisors, "d' d g' g; omitted: search")->expected(4);

    std::string k_text = "1", m_text;
    auto* s_classify = app.add_subcommand("classify", "classify pairs (q, m) over ranges of k and m");
    s_classify->add_option("--p", ta.p, "characteristic")->required();
    s_classify->add_option("--k", k_text, "k or k1..k2");
    s_classify->add_option("--m", m_text, "m or m1..m2")->required();
    n_opts(s_classify);

    std::string which = "all";
    auto* s_tables = app.add_subcommand("tables", "recompute the printed sieve tables and diff them");
    s_tables->add_option("--which", which, "1, 2 or all");

    std::string strategy = "uniform";
    std::size_t settle_samples = 50;
    auto* s_settle = app.add_subcommand("settle", "count N_{f,a,b} for sampled f on an enumerable tower");
    tower_opts(s_settle);
    s_settle->add_option("--samples", settle_samples, "number of sampled functions");
    s_settle->add_option("--strategy", strategy, "uniform, adversarial or exhaustive");

    std::string threshold_id;
    auto* s_thresholds = app.add_subcommand("thresholds", "solve the threshold catalogue");
    s_thresholds->add_option("--id", threshold_id, "solve one entry");

    std::string suite = "all";
    auto* s_proptest = app.add_subcommand("proptest", "run the property suites");
    s_proptest->add_option("--suite", suite, "indicators, decomposition, weil, counting or all");

    for (auto* sc : app.get_subcommands({})) sc->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_json(out, "InputError", e.what());
        return kInputError;
    }
    for (auto* sc : app.get_subcommands())
        if (sc->get_help_ptr() && sc->get_help_ptr()->count()) {
            out << sc->help();
            return kOk;
        }

    std::ofstream file;
    std::ostream* dest = &out;
    try {
        CLI::App* sc = app.get_subcommands().at(0);
        cfg.command = sc->get_name();
        if (cfg.workers == 0) cfg.workers = std::max(1u, std::thread::hardware_concurrency());
        Real::set_precision(cfg.precision_bits);
        if (!out_path.empty()) {
            file.open(out_path);
            require(file.good(), Errc::InputError, "cannot write " + out_path);
            dest = &file;
        }
        CacheScope cache(cfg);
        std::ostream& o = *dest;
        if (sc == s_factor) return cmd_factor(cfg, o, n_text, factor_json, cache);
        if (sc == s_tower) return cmd_tower(cfg, o, ta, elem, cache);
        if (sc == s_charsum) return cmd_charsum(cfg, o, ta, kind, samples, f_text, cache);
        if (sc == s_condition) return cmd_condition(cfg, o, ta, form, n1, n2, t, c_text, cache);
        if (sc == s_plan) return cmd_plan(cfg, o, ta, n1, n2, divisors, cache);
        if (sc == s_classify) return cmd_classify(cfg, o, ta.p, k_text, m_text, n1, n2, cache);
        if (sc == s_tables) return cmd_tables(cfg, o, which, cache);
        if (sc == s_settle) return cmd_settle(cfg, o, ta, settle_samples, strategy, cache);
        if (sc == s_thresholds) return cmd_thresholds(cfg, o, threshold_id, cache);
        if (sc == s_proptest) return cmd_proptest(cfg, o, suite, cache);
        fail(Errc::InputError, "unknown subcommand");
    } catch (const Error& e) {
        error_json(*dest, e.kind_name(), e.what());
        return e.kind() == Errc::IncompleteFactorization ? kBudgetUnknown : kInputError;
    } catch (const std::exception& e) {
        error_json(*dest, "InputError", e.what());
        return kInputError;
    }
}

} // namespace pnp::cli
