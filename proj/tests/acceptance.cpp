// Acceptance driver: `acceptance` runs every criterion, `acceptance AC3` runs one.
// Each criterion prints one "ACn PASS|FAIL" line followed by indented details.
#include "pnpair/golden.hpp"
#include "pnpair/proptest.hpp"
#include "pnpair/sieve.hpp"
#include "pnpair/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace pnp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(prec);
    s << v;
    return s.str();
}

std::string list(const std::vector<unsigned>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

std::string yes(bool b) { return b ? "yes" : "no"; }

// Shared by AC1 and AC2. Relaxed rows are held to the inequality direction only.
void check_table(Outcome& o, int table) {
    std::size_t sieve_ok = 0, digits_ok = 0, direction_ok = 0, count = 0;
    for (const auto& row : golden::table_rows(table)) {
        ++count;
        golden::RowCheck rc = golden::check_row(row);
        bool direction = rc.lambda_direction && rc.Lambda_direction;
        bool digits = row.relaxed || rc.digits_ok();
        sieve_ok += rc.verdict.passes();
        digits_ok += digits;
        direction_ok += direction;
        std::ostringstream d;
        d << "row " << row.index << " (7^" << row.k << "," << row.m << ")" << (row.relaxed ? " relaxed" : "")
          << ": sieve " << verdict_name(rc.verdict.verdict) << ", lambda " << format_fixed(rc.plan.lambda)
          << " vs " << row.lambda << " (" << fmt(rc.lambda_digits, 1) << " digits, >= " << yes(rc.lambda_direction)
          << "), Lambda " << format_fixed(rc.plan.Lambda) << " vs " << row.Lambda << " ("
          << fmt(rc.Lambda_digits, 1) << " digits, <= " << yes(rc.Lambda_direction) << ")";
        o.require(rc.verdict.passes() && digits && direction, d.str());
    }
    o.summary = std::to_string(sieve_ok) + "/" + std::to_string(count) + " rows pass the sieve, " +
                std::to_string(digits_ok) + "/" + std::to_string(count) + " agree to 10 digits, " +
                std::to_string(direction_ok) + "/" + std::to_string(count) + " hold the inequality direction";
}

Outcome ac1() {
    Outcome o;
    auto t0 = Clock::now();
    // 7^28 - 1 from scratch, without the cache
    FactorOptions fresh;
    Factorization f = factor(ipow(BigInt(7), 28) - 1, fresh);
    double factor_s = seconds_since(t0);
    o.require(f.complete(), "7^28-1 fully factored without the cache in " + fmt(factor_s) + " s");
    check_table(o, 1);
    double total = seconds_since(t0);
    o.require(total <= 60, "runtime " + fmt(total) + " s <= 60 s");
    return o;
}

Outcome ac2() {
    Outcome o;
    auto t0 = Clock::now();
    check_table(o, 2);
    double total = seconds_since(t0);
    o.require(total <= 600, "runtime " + fmt(total) + " s <= 600 s");
    return o;
}

Outcome ac3() {
    Outcome o;
    auto t0 = Clock::now();
    std::vector<unsigned> failing_k;
    for (unsigned k = 1; k <= 5; ++k) {
        ConditionVerdict v = square_condition(SieveContext(7, k, 7), 8);
        if (!v.passes()) failing_k.push_back(k);
        o.details.push_back("     (7^" + std::to_string(k) + ",7) q^{m/2-2} > 8 W^2: " + verdict_name(v.verdict));
    }
    o.require(failing_k == golden::kM1FailingK, "square condition fails exactly for k = " + list(failing_k));

    ConditionVerdict v14 = square_condition(SieveContext(7, 1, 14), 24);
    o.require(!v14.passes(), "(7,14) q^{m/2-2} > 24 W^2: " + std::string(verdict_name(v14.verdict)));

    std::vector<unsigned> failing;
    std::vector<unsigned> values = case1_scan_values(7, 1, 50);
    for (unsigned m : values)
        if (!coarse_base_condition(SieveContext(7, 1, m), 1, 1).passes()) failing.push_back(m);
    o.require(failing == golden::kCase1Failing,
              "case-1 scan over " + std::to_string(values.size()) + " values fails for m in " + list(failing));
    double total = seconds_since(t0);
    o.require(total <= 900, "runtime " + fmt(total) + " s <= 900 s");
    o.summary = "k failing " + list(failing_k) + ", (7,14) " + verdict_name(v14.verdict) + ", case-1 failing " +
                list(failing);
    return o;
}

Outcome ac4() {
    Outcome o;
    auto entries = classify(7, 1, 1, 7, 50);
    std::vector<unsigned> unresolved;
    std::map<std::string, int> tally;
    for (const auto& e : entries) {
        tally[status_name(e.status)]++;
        if (e.status == Status::Unresolved || e.status == Status::Unknown) unresolved.push_back(e.m);
    }
    std::string counts;
    for (auto& [k, n] : tally) counts += (counts.empty() ? "" : ", ") + k + " " + std::to_string(n);
    o.details.push_back("     " + std::to_string(entries.size()) + " pairs: " + counts);
    o.require(entries.size() == 44, "classified (7,m) for 7 <= m <= 50");
    o.require(unresolved == golden::kUnresolvedQ7, "unresolved or unknown m = " + list(unresolved));

    SieveContext ctx(7, 1, 7);
    PlanSearch s = plan_search(ctx, 1, 1);
    o.require(s.exhaustive, "(7,7) exhaustive enumeration ran over " + std::to_string(s.atoms) + " atoms");
    o.require(!s.passing.has_value(), "(7,7) no passing plan; best verdict " +
                                          std::string(verdict_name(s.verdict.verdict)));
    o.summary = "unresolved m = " + list(unresolved) + ", (7,7) passing plan: " + yes(s.passing.has_value());
    return o;
}

Outcome ac5() {
    Outcome o;
    auto t0 = Clock::now();
    const std::vector<std::pair<std::string, long>> expected = {
        {"m6", 1155}, {"m5", 319219}, {"case1_m", 436}, {"opener_q49", 35}};
    for (auto& [id, want] : expected) {
        long got = threshold_solve(id);
        o.require(got == want, id + " = " + std::to_string(got) + " (expected " + std::to_string(want) + ")");
        o.summary += (o.summary.empty() ? "" : ", ") + id + " " + std::to_string(got);
    }
    double total = seconds_since(t0);
    o.require(total <= 60, "runtime " + fmt(total) + " s <= 60 s");
    return o;
}

Outcome property(const std::string& suite, double limit_s) {
    Outcome o;
    auto t0 = Clock::now();
    PropertyReport r = run_property_suite(suite, 1);
    double total = seconds_since(t0);
    o.require(r.passed(), suite + ": " + std::to_string(r.checks) + " checks, " + std::to_string(r.failures) +
                              " failures");
    for (auto& f : r.failed) o.details.push_back("     failed: " + f);
    for (auto& n : r.notes) o.details.push_back("     note: " + n);
    if (limit_s > 0) o.require(total <= limit_s, "runtime " + fmt(total) + " s <= " + fmt(limit_s, 0) + " s");
    else o.details.push_back("     runtime " + fmt(total) + " s");
    o.summary = std::to_string(r.checks) + " checks, " + std::to_string(r.failures) + " failures";
    return o;
}

Outcome ac10() {
    Outcome o;
    auto t0 = Clock::now();
    SettleReport r = settle(7, 1, 7, 50, 1, SampleStrategy::Uniform,
                            std::max(1u, std::thread::hardware_concurrency()));
    double total = seconds_since(t0);
    o.require(r.functions.size() == 50, std::to_string(r.functions.size()) + " functions sampled");
    bool all_cells = std::all_of(r.functions.begin(), r.functions.end(),
                                 [](const SettleFunction& f) { return f.cells.size() == 12; });
    o.require(all_cells, "every function settled on all 12 (a,b) cells");
    bool strict = std::all_of(r.functions.begin(), r.functions.end(),
                              [](const SettleFunction& f) { return f.strict_agrees; });
    o.require(strict, "flag counts agree with the primitive-and-normal recount");
    std::uint64_t max_min = 0;
    for (auto& f : r.functions) max_min = std::max(max_min, f.min_count);
    o.details.push_back("     smallest cell count " + std::to_string(r.min_count) + ", largest per-function minimum " +
                        std::to_string(max_min));
    for (std::size_t i = 0; i < r.functions.size() && i < 5; ++i)
        o.details.push_back("     f" + std::to_string(i) + " = " + r.functions[i].text + ": min " +
                            std::to_string(r.functions[i].min_count));
    bool confirmed = true;
    for (auto& z : r.zeros) {
        confirmed = confirmed && z.confirmed;
        o.details.push_back("     *** ZERO COUNT: f = " + r.functions[z.function].text + ", a = " +
                            std::to_string(z.a) + ", b = " + std::to_string(z.b) +
                            (z.confirmed ? " (confirmed by direct recount)" : " (NOT confirmed)"));
    }
    o.require(confirmed, std::to_string(r.zeros.size()) + " zero-count triples, all double-verified");
    o.require(total <= 1800, "runtime " + fmt(total) + " s <= 1800 s");
    o.summary = "verdict " + r.verdict() + ", min count " + std::to_string(r.min_count) + ", " +
                std::to_string(r.zeros.size()) + " zero triples";
    return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
        {"AC1", ac1},
        {"AC2", ac2},
        {"AC3", ac3},
        {"AC4", ac4},
        {"AC5", ac5},
        {"AC6", [] { return property("indicators", 120); }},
        {"AC7", [] { return property("decomposition", 0); }},
        {"AC8", [] { return property("weil", 0); }},
        {"AC9", [] { return property("counting", 0); }},
        {"AC10", ac10},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted(argv + 1, argv + argc);
    bool all_pass = true;
    bool ran = false;
    for (auto& [id, fn] : criteria()) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end()) continue;
        ran = true;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        all_pass = all_pass && o.pass;
        std::cout << id << (o.pass ? " PASS " : " FAIL ") << o.summary << "\n";
        for (auto& d : o.details) std::cout << "    " << d << "\n";
        std::cout.flush();
    }
    if (!ran) {
        std::cerr << "unknown criterion; expected AC1..AC10\n";
        return 4;
    }
    return all_pass ? 0 : 1;
}
