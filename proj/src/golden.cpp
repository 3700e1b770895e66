#include "pnpair/golden.hpp"

#include "pnpair/error.hpp"

#include <cmath>

namespace pnp::golden {

namespace {

const std::vector<TableRow> kTable1 = {
    {1, 1, 2, 7, "29", "2", "1", "1", "1", "1", "0.591458675085391", "15.5258815822509", false},
    {1, 2, 3, 7, "1", "2", "1", "1", "1", "1", "0.541731553445425", "16.7674617605709", false},
    {1, 3, 4, 7, "1", "2", "1", "1", "1", "1", "0.376967586454699", "33.8329756488017", false},
    {1, 4, 1, 14, "2", "2", "x+1", "1", "x-1", "1", "0.434526936872864", "22.7121796976956", false},
};

const std::vector<TableRow> kTable2 = {
    {2, 1, 1, 11, "1", "2", "x^11-1", "x+6", "x+6", "1", "0.664878903964168", "9.52016640953532", false},
    {2, 2, 1, 15, "1", "2", "x+3", "1", "x+5", "1", "0.0650904516114856", "263.175019977896", false},
    {2, 3, 1, 16, "2", "6", "x+1", "1", "x+6", "1", "0.0521044379491288", "424.228909204995", false},
    {2, 4, 1, 19, "1", "2", "x^19-1", "x-1", "x+6", "1", "0.644400685606226", "17.5182950970830", false},
    {2, 5, 1, 20, "2", "2", "x+1", "1", "x^2+6", "1", "0.0219001519714673", "1006.55923907116", false},
    {2, 6, 1, 24, "10", "6", "x^6-1", "x-1", "x^6+6", "1", "0.0716671887608818", "476.415148519935", false},
    {2, 7, 1, 27, "3", "2", "x+3", "1", "x+6", "1", "0.0435777658630945", "575.687051294481", false},
    {2, 8, 1, 30, "22", "66", "x^3+1", "1", "x^3+1", "1", "0.0532274038983268", "565.619447931464", false},
    {2, 9, 1, 32, "2", "6", "x+1", "1", "x+6", "1", "0.0431067705041303", "790.739207376768", true},
    {2, 10, 1, 48, "131806610", "30", "x^12-1", "x-1", "x^12+6", "1", "0.0431067705041303", "790.739207376768", true},
    {2, 11, 1, 36, "30", "30", "x^4+x^2+1", "1", "x^4+x^2+1", "1", "0.0529987428084201", "681.261395503905", false},
    {2, 12, 2, 9, "3", "6", "1", "1", "x+6", "1", "0.710605990818367", "25.9232432876368", false},
    {2, 13, 2, 10, "1", "6", "x+1", "1", "x+6", "1", "0.375641648570107", "55.2422325270126", false},
    {2, 14, 2, 15, "1", "6", "x^15-1", "x-1", "x+6", "1", "0.547377568602427", "44.0185285610515", false},
    {2, 15, 2, 16, "5", "6", "x+1", "1", "x+6", "1", "0.0831734094045884", "470.899859693000", false},
    {2, 16, 2, 18, "15", "30", "x^18-1", "x-1", "x^3+x^2+4*x+1", "1", "0.566118276336117", "40.8611371856472", false},
    {2, 17, 2, 20, "5", "2", "x+1", "1", "x+6", "1", "0.106897950411074", "357.479219703201", false},
    {2, 18, 3, 8, "2", "6", "x+1", "1", "x+6", "1", "0.288679255430203", "81.6731998138361", false},
    {2, 19, 3, 10, "2", "6", "x+1", "1", "x+6", "1", "0.693040559610923", "29.4154228587526", false},
    {2, 20, 3, 18, "2", "2", "x+1", "1", "x+6", "1", "0.393704090361428", "134.078891921755", false},
    {2, 21, 4, 9, "3", "6", "x+3", "1", "x+6", "1", "0.426127285898464", "55.9744831207086", false},
    {2, 22, 5, 8, "2", "2", "x+1", "1", "x+6", "1", "0.0159001518760136", "1511.41954436332", false},
    {2, 23, 6, 8, "5", "2", "x+1", "1", "x+6", "1", "0.0637988343818541", "534.925096977484", false},
    {2, 24, 3, 12, "10", "2", "x+1", "1", "x+6", "1", "0.120384944971172", "259.507282222236", false},
};

} // namespace

const std::vector<TableRow>& table_rows(int table) {
    if (table == 1) return kTable1;
    if (table == 2) return kTable2;
    fail(Errc::InputError, "table must be 1 or 2");
}

std::vector<bool> row_choice(const SieveContext& ctx, const TableRow& row) {
    const MidField& F = ctx.field();
    MidRing R(F);
    auto ratio = [&](const char* num, const char* den) { return R.div_exact(parse_mid_poly(F, num), parse_mid_poly(F, den)); };
    return plan_from_divisors(ctx, BigInt(row.d_prime), BigInt(row.d), ratio(row.g_prime_num, row.g_prime_den),
                              ratio(row.g_num, row.g_den));
}

double agreeing_digits(const Rational& a, const Rational& b) {
    Rational rel = abs(a - b) / abs(b);
    if (rel == 0) return 100;
    return -std::log10(rel.get_d());
}

RowCheck check_row(const TableRow& row) {
    SieveContext ctx(7, row.k, row.m);
    RowCheck c;
    c.row = &row;
    c.plan = plan_evaluate(ctx, row_choice(ctx, row));
    c.verdict = sieve_condition(ctx, c.plan, 1, 1);
    const Rational lam = parse_decimal(row.lambda), Lam = parse_decimal(row.Lambda);
    c.lambda_digits = agreeing_digits(c.plan.lambda, lam);
    c.Lambda_digits = agreeing_digits(c.plan.Lambda, Lam);
    c.lambda_direction = c.plan.lambda >= lam;
    c.Lambda_direction = c.plan.Lambda <= Lam;
    return c;
}

} // namespace pnp::golden
