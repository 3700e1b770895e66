#pragma once

#include "pnpair/sieve.hpp"

#include <string>
#include <vector>

namespace pnp::golden {

// One printed sieve-table row. q = 7^k; g' and g are given as numerator/denominator texts over F_q.
struct TableRow {
    int table;
    int index;
    unsigned k;
    unsigned m;
    const char* d_prime;
    const char* d;
    const char* g_prime_num;
    const char* g_prime_den;
    const char* g_num;
    const char* g_den;
    const char* lambda;
    const char* Lambda;
    bool relaxed;  // printed values not reproducible from the printed choices; see README
};

const std::vector<TableRow>& table_rows(int table);  // 1 or 2

// chosen mask of the printed divisors for the row's context
std::vector<bool> row_choice(const SieveContext& ctx, const TableRow& row);

// significant digits on which two positive rationals agree, from the relative error (100 when equal)
double agreeing_digits(const Rational& a, const Rational& b);

// A printed row recomputed from its printed divisors.
struct RowCheck {
    const TableRow* row = nullptr;
    SievePlan plan;
    ConditionVerdict verdict;
    double lambda_digits = 0, Lambda_digits = 0;
    bool lambda_direction = false;  // computed λ >= printed λ, exactly
    bool Lambda_direction = false;  // computed Λ <= printed Λ, exactly

    bool digits_ok() const { return lambda_digits >= 10 && Lambda_digits >= 10; }
    // relaxed rows: only the sieve condition with the computed values
    bool matches() const { return verdict.passes() && (row->relaxed || digits_ok()); }
};

RowCheck check_row(const TableRow& row);

// (7^k, 7) for k = 1..4 fail q^{m/2-2} > 8 W(q^m-1)^2, k = 5 passes
inline const std::vector<unsigned> kM1FailingK = {1, 2, 3, 4};
// m with q = 7, m <= 50 failing the coarse base condition, scanned over case1_scan_values
inline const std::vector<unsigned> kCase1Failing = {8, 9, 10, 11, 12, 15, 16, 18, 19, 20, 24, 27, 30, 32, 48};
// unresolved pairs (7, m), 7 <= m <= 50
inline const std::vector<unsigned> kUnresolvedQ7 = {7, 8, 9, 10, 12, 18};

} // namespace pnp::golden
