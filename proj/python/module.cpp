#include "cli.hpp"
#include "pnpair/golden.hpp"
#include "pnpair/proptest.hpp"
#include "pnpair/sieve.hpp"
#include "pnpair/verifier.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace pnp;

namespace {

// Python ints cross as decimal strings so values beyond 64 bits survive.
BigInt to_big(const py::object& n) { return parse_bigint(py::str(n)); }
py::int_ to_py(const BigInt& n) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(n.get_str().c_str(), nullptr, 10));
}

py::dict factorization_dict(const Factorization& f) {
    py::list factors;
    for (const auto& pp : f.factors) factors.append(py::make_tuple(to_py(pp.prime), pp.exponent));
    py::dict d;
    d["n"] = to_py(f.value);
    d["factors"] = factors;
    d["cofactor"] = to_py(f.cofactor);
    d["complete"] = f.complete();
    d["line"] = f.to_line();
    return d;
}

py::dict verdict_dict(const ConditionVerdict& v) {
    py::dict d;
    d["verdict"] = verdict_name(v.verdict);
    d["method"] = v.method_label();
    d["form"] = v.form;
    d["reason"] = v.reason;
    d["lhs_log"] = v.lhs_log.to_double();
    d["rhs_log"] = v.rhs_log.to_double();
    return d;
}

py::dict classify_dict(const ClassifyEntry& e) {
    py::dict d;
    d["p"] = e.p;
    d["k"] = e.k;
    d["m"] = e.m;
    d["q"] = to_py(e.q);
    d["m_prime"] = e.m_prime;
    d["status"] = status_name(e.status);
    d["condition"] = verdict_dict(e.verdict);
    if (e.plan) {
        py::dict plan;
        plan["d_prime"] = e.plan->d_prime;
        plan["d"] = e.plan->d;
        plan["g_prime"] = e.plan->g_prime;
        plan["g"] = e.plan->g;
        d["plan"] = plan;
    } else {
        d["plan"] = py::none();
    }
    d["lambda"] = e.lambda ? py::object(py::str(format_fixed(*e.lambda))) : py::object(py::none());
    d["Lambda"] = e.Lambda ? py::object(py::str(format_fixed(*e.Lambda))) : py::object(py::none());
    return d;
}

py::dict settle_dict(const SettleReport& r) {
    py::list functions;
    for (const auto& f : r.functions) {
        py::list cells;
        for (const auto& c : f.cells) cells.append(py::make_tuple(c.a, c.b, c.count));
        py::dict fd;
        fd["text"] = f.text;
        fd["cells"] = cells;
        fd["min_count"] = f.min_count;
        fd["strict_agrees"] = f.strict_agrees;
        functions.append(fd);
    }
    py::list zeros;
    for (const auto& z : r.zeros) {
        py::dict zd;
        zd["function"] = z.function;
        zd["a"] = z.a;
        zd["b"] = z.b;
        zd["confirmed"] = z.confirmed;
        zeros.append(zd);
    }
    py::dict d;
    d["p"] = r.p;
    d["k"] = r.k;
    d["m"] = r.m;
    d["seed"] = r.seed;
    d["strategy"] = strategy_name(r.strategy);
    d["functions"] = functions;
    d["zeros"] = zeros;
    d["min_count"] = r.min_count;
    d["verdict"] = r.verdict();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Primitive normal pairs: field towers, sieve conditions and exhaustive verification";
    m.attr("__version__") = PNPAIR_VERSION;

    // kept alive for the interpreter's lifetime
    static py::handle error = py::exception<Error>(m, "PnpairError").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error(std::string(e.kind_name()) + ": " + e.what());
            exc.attr("kind") = e.kind_name();
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def(
        "factor",
        [](const py::object& n, std::uint64_t budget, bool use_cache) {
            FactorOptions opt = default_factor_options();
            opt.budget = budget;
            if (!use_cache) opt.cache = nullptr;
            return factorization_dict(factor(to_big(n), opt));
        },
        py::arg("n"), py::arg("budget") = 10'000'000, py::arg("use_cache") = true,
        "Factor a positive integer. Incomplete results keep the composite part in 'cofactor'.");

    m.def(
        "factor_qm_minus_1",
        [](const py::object& q, unsigned long mm) { return factorization_dict(factor_qm_minus_1(to_big(q), mm)); },
        py::arg("q"), py::arg("m"));

    m.def("factor_cache_digest", [] { return shared_factor_cache().digest(); });

    m.def(
        "classify_pair",
        [](std::uint32_t p, unsigned k, unsigned mm) {
            ClassifyEntry e;
            {
                py::gil_scoped_release release;
                e = classify_pair(p, k, mm);
            }
            return classify_dict(e);
        },
        py::arg("p"), py::arg("k"), py::arg("m"));

    m.def(
        "classify",
        [](std::uint32_t p, unsigned k_lo, unsigned k_hi, unsigned m_lo, unsigned m_hi, unsigned workers) {
            ClassifyOptions opt;
            opt.workers = workers;
            std::vector<ClassifyEntry> entries;
            {
                py::gil_scoped_release release;
                entries = classify(p, k_lo, k_hi, m_lo, m_hi, opt);
            }
            py::list out;
            for (const auto& e : entries) out.append(classify_dict(e));
            return out;
        },
        py::arg("p"), py::arg("k_lo"), py::arg("k_hi"), py::arg("m_lo"), py::arg("m_hi"), py::arg("workers") = 1);

    m.def(
        "square_condition",
        [](std::uint32_t p, unsigned k, unsigned mm, const py::object& c) {
            return verdict_dict(square_condition(SieveContext(p, k, mm), to_big(c)));
        },
        py::arg("p"), py::arg("k"), py::arg("m"), py::arg("c"), "q^{m/2-2} > c W(q^m-1)^2");

    m.def(
        "base_condition",
        [](std::uint32_t p, unsigned k, unsigned mm, unsigned n1, unsigned n2) {
            return verdict_dict(base_condition(SieveContext(p, k, mm), n1, n2));
        },
        py::arg("p"), py::arg("k"), py::arg("m"), py::arg("n1") = 1, py::arg("n2") = 1);

    m.def("threshold_solve", &threshold_solve, py::arg("id"));
    m.def("threshold_ids", [] {
        std::vector<std::string> ids;
        for (const auto& e : threshold_catalogue()) ids.push_back(e.id);
        return ids;
    });

    m.def(
        "check_table",
        [](int table) {
            py::list rows;
            for (const auto& row : golden::table_rows(table)) {
                golden::RowCheck rc = golden::check_row(row);
                py::dict d;
                d["index"] = row.index;
                d["k"] = row.k;
                d["m"] = row.m;
                d["relaxed"] = row.relaxed;
                d["lambda"] = format_fixed(rc.plan.lambda);
                d["Lambda"] = format_fixed(rc.plan.Lambda);
                d["printed_lambda"] = row.lambda;
                d["printed_Lambda"] = row.Lambda;
                d["lambda_digits"] = rc.lambda_digits;
                d["Lambda_digits"] = rc.Lambda_digits;
                d["sieve_passes"] = rc.verdict.passes();
                d["matches"] = rc.matches();
                rows.append(d);
            }
            return rows;
        },
        py::arg("table"));

    m.def("property_suite_names", &property_suite_names);
    m.def(
        "run_property_suite",
        [](const std::string& name, std::uint64_t seed) {
            PropertyReport r;
            {
                py::gil_scoped_release release;
                r = run_property_suite(name, seed);
            }
            py::dict d;
            d["suite"] = r.suite;
            d["checks"] = r.checks;
            d["failures"] = r.failures;
            d["failed"] = r.failed;
            d["notes"] = r.notes;
            d["passed"] = r.passed();
            return d;
        },
        py::arg("name"), py::arg("seed") = 1);

    m.def(
        "settle",
        [](std::uint32_t p, unsigned k, unsigned mm, std::size_t samples, std::uint64_t seed,
           const std::string& strategy, unsigned workers) {
            SampleStrategy s = parse_strategy(strategy);
            SettleReport r;
            {
                py::gil_scoped_release release;
                r = settle(p, k, mm, samples, seed, s, workers);
            }
            return settle_dict(r);
        },
        py::arg("p"), py::arg("k"), py::arg("m"), py::arg("samples"), py::arg("seed") = 1,
        py::arg("strategy") = "uniform", py::arg("workers") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out);
            }
            return py::make_tuple(code, out.str());
        },
        py::arg("args"), "Run one pnpair subcommand in-process; returns (exit code, output text).");
}
