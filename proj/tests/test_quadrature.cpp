#include <catch2/catch_amalgamated.hpp>
#include <bessellab/quadrature.hpp>
#include <support/oracles.hpp>

using namespace bessellab;

namespace {

void check_against(const BigReal& got, const char* oracle_str, long digits,
                   long oracle_sig = 62) {
    BigReal want = oracles::value(oracle_str, oracle_sig);
    INFO("got  " << got.to_string(digits + 5));
    INFO("want " << want.to_string(digits + 5));
    CHECK(agree_to_digits(got, want, digits));
    BigReal d = got - want;
    CHECK(mpfr_cmpabs(d.raw(), d.raw_radius()) <= 0);
}

void check_exact(const BigReal& got, const BigReal& want, long digits) {
    INFO("got  " << got.to_string(digits + 5));
    INFO("want " << want.to_string(digits + 5));
    BigReal d = got - want;
    CHECK(mpfr_cmpabs(d.raw(), d.raw_radius()) <= 0);
    CHECK(got.radius_below_pow10(digits));
}

} // namespace

TEST_CASE("closed-form moments at fifty digits") {
    Precision p(50);
    long wp = p.bits();
    check_exact(moment({1, 1, 0, 0, 0}, p), BigReal(1L, wp), 50);
    check_exact(moment({1, 2, 0, 0, 0}, p), BigReal("0.5", wp), 50);
    BigReal pi = BigReal::pi(wp);
    check_exact(moment({0, 1, 0, 0, 0}, p), mul_2exp(pi, -1), 50);
    BigReal k02 = moment({0, 2, 0, 0, 0}, p);
    check_exact(k02, mul_2exp(pow_ui(pi, 2), -2), 50);
    check_against(k02, oracles::MOM_K0_2, 50, 52);
    check_against(moment({2, 1, 1, 0, 0}, p), oracles::MOM_U2_K0_K1, 50, 52);
}

TEST_CASE("moment oracles") {
    Precision p(50);
    long wp = p.bits();
    BigReal m3 = moment({1, 3, 0, 0, 0}, p);
    check_against(m3, oracles::MOM_U_K0_3, 50, 52);
    // the trigamma closed form of the same number
    BigReal tg = trigamma(make_rational(1, 3), wp) - trigamma(make_rational(2, 3), wp);
    check_exact(m3, tg / BigReal(12L, wp), 50);
    check_against(moment({1, 4, 0, 0, 0}, p), oracles::MOM_U_K0_4, 50, 52);
    check_against(moment({3, 4, 2, 0, 0}, p), oracles::MOM_U3_K0_4_K1_2, 50, 52);
    BigReal mi = moment({1, 3, 0, 1, 0}, p);
    check_against(mi, oracles::MOM_U_I0_K0_3, 50, 52);
    check_exact(mi, mul_2exp(pow_ui(BigReal::pi(wp), 2), -4), 50);
}

TEST_CASE("deep moment at 130 digits") {
    Precision p(130);
    BigReal m = moment({1, 4, 0, 0, 0}, p);
    check_against(m, oracles::MOM_U_K0_4_DEEP, 130, 132);
    CHECK(m.radius_below_pow10(130));
}

TEST_CASE("batch evaluation matches single calls") {
    Precision p(40);
    std::vector<BesselProduct> fs = {
        {1, 5, 0, 0, 0}, {0, 3, 0, 0, 0}, {2, 2, 1, 0, 0}, {3, 3, 1, 1, 0}};
    std::vector<BigReal> batch = moment_batch(fs, p);
    REQUIRE(batch.size() == fs.size());
    for (size_t i = 0; i < fs.size(); ++i) {
        BigReal single = moment(fs[i], p);
        BigReal d = batch[i] - single;
        INFO(fs[i].to_string());
        CHECK(mpfr_cmpabs(d.raw(), d.raw_radius()) <= 0);
        CHECK(batch[i].radius_below_pow10(40));
    }
}

TEST_CASE("divergent products are rejected") {
    Precision p(20);
    // K1 ~ 1/u at the origin
    CHECK_THROWS_AS(moment({0, 0, 1, 0, 0}, p), DomainError);
    // u^-1 K0 likewise
    CHECK_THROWS_AS(moment({-1, 1, 0, 0, 0}, p), DomainError);
    // no exponential decay at infinity
    CHECK_THROWS_AS(moment({1, 0, 0, 1, 0}, p), DomainError);
    CHECK_THROWS_AS(moment({1, 1, 0, 1, 0}, p), DomainError);
    // negative Bessel powers are meaningless here
    CHECK_THROWS_AS(moment({1, -1, 0, 0, 0}, p), DomainError);
    // nested: inner factor must be integrable on its own
    CHECK_THROWS_AS(nested_moment({1, 2, 0, 0, 0}, {0, 0, 1, 0, 0}, p), DomainError);
    // nested: outer factor must decay even when the inner one does
    CHECK_THROWS_AS(nested_moment({1, 0, 0, 1, 0}, {1, 2, 0, 0, 0}, p), DomainError);
}

TEST_CASE("nested moment against an independent oracle") {
    Precision p(40);
    BesselProduct f{1, 2, 2, 0, 0};
    BesselProduct g{2, 1, 1, 0, 0};
    BigReal z = nested_moment(f, g, p);
    check_against(z, oracles::NESTED_K022_X2K0K1, 40, 54);
    CHECK(z.radius_below_pow10(40));

    // The same number drives a Wronskian-derived identity:
    //   -4 Z = (2/3) int u K0^4 - 2 int u^3 K0^4 K1^2.
    long wp = p.bits();
    BigReal lhs = mul_2exp(z, 2) * BigReal(-1L, wp);
    BigReal rhs = moment({1, 4, 0, 0, 0}, p) * (BigReal(2L, wp) / BigReal(3L, wp)) -
                  mul_2exp(moment({3, 4, 2, 0, 0}, p), 1);
    BigReal resid = lhs - rhs;
    CHECK(mpfr_cmpabs(resid.raw(), resid.raw_radius()) <= 0);
    CHECK(resid.radius_below_pow10(38));
}

TEST_CASE("shuffle and flip relations") {
    Precision p(30);
    BesselProduct f{1, 2, 0, 0, 0};
    BesselProduct g{1, 1, 1, 0, 0};
    BigReal zfg = nested_moment(f, g, p);
    BigReal zgf = nested_moment(g, f, p);
    BigReal mf = moment(f, p);
    BigReal mg = moment(g, p);
    // int u K0 K1 = pi^2 / 8
    long wp = p.bits();
    check_exact(mg, mul_2exp(pow_ui(BigReal::pi(wp), 2), -3), 30);
    // interchanging the nesting covers the square exactly once
    BigReal shuffle = zfg + zgf - mf * mg;
    CHECK(mpfr_cmpabs(shuffle.raw(), shuffle.raw_radius()) <= 0);
    CHECK(shuffle.radius_below_pow10(28));
    // the (u, inf) inner range is the complement of the (0, u) one
    BigReal up = nested_moment_upper(f, g, p);
    BigReal flip = up - (mf * mg - zfg);
    CHECK(mpfr_cmpabs(flip.raw(), flip.raw_radius()) <= 0);
    CHECK(flip.radius_below_pow10(28));
}

TEST_CASE("limit families approach their constants") {
    Precision p(25);
    long wp = p.bits();
    std::vector<LimitSweepRow> rows = limit_sweep(40, p);
    REQUIRE(rows.size() == 40);
    // n = 1 rows are exact: int u K0 = 1 and int K0 = pi/2
    check_exact(rows[0].with_u, BigReal(1L, wp), 25);
    check_exact(rows[0].without_u, mul_2exp(BigReal::pi(wp), -1), 25);
    // both families decrease strictly toward their limits
    BigReal gamma = euler_gamma(wp);
    BigReal lim_wu = exp(mul_2exp(gamma, 1) * BigReal(-1L, wp));
    BigReal lim_wo = mul_2exp(exp(gamma * BigReal(-1L, wp)), 1);
    for (size_t i = 0; i < rows.size(); ++i) {
        INFO("n = " << rows[i].n);
        if (i > 0) {
            CHECK(rows[i].with_u.cmp(rows[i - 1].with_u) < 0);
            CHECK(rows[i].without_u.cmp(rows[i - 1].without_u) < 0);
        }
        CHECK(rows[i].with_u.cmp(lim_wu) > 0);
        CHECK(rows[i].without_u.cmp(lim_wo) > 0);
    }
    // by n = 40 the gap to the limit has shrunk to the percent scale
    BigReal gap_wu = rows[39].with_u - lim_wu;
    BigReal gap_wo = rows[39].without_u - lim_wo;
    CHECK(gap_wu.cmp(BigReal("0.02", wp)) < 0);
    CHECK(gap_wo.cmp(BigReal("0.04", wp)) < 0);
}
