#include <catch2/catch_amalgamated.hpp>
#include <bessellab/bigreal.hpp>
#include <bessellab/precision.hpp>
#include <bessellab/rational.hpp>

using namespace bessellab;

TEST_CASE("exact constructions carry zero radius") {
    BigReal a(42L, 128);
    CHECK(mpfr_zero_p(a.raw_radius()));
    BigReal b(BigInt("123456789012345678901234567890"), 128);
    CHECK(mpfr_zero_p(b.raw_radius()));
    BigReal h(make_rational(1, 2), 128); // exact binary fraction
    CHECK(mpfr_zero_p(h.raw_radius()));
}

TEST_CASE("inexact constructions bump the radius") {
    BigReal t(make_rational(1, 3), 64);
    CHECK(!mpfr_zero_p(t.raw_radius()));
    CHECK(t.radius_below_pow10(17));
    BigReal s("0.1", 64);
    CHECK(!mpfr_zero_p(s.raw_radius()));
}

TEST_CASE("ball arithmetic keeps the true value inside") {
    // (1/3)*3 - 1 must be a ball around 0 wider than its centre offset
    BigReal third(make_rational(1, 3), 96);
    BigReal err = third * BigReal(3L, 96) - BigReal(1L, 96);
    CHECK(mpfr_cmpabs(err.raw(), err.raw_radius()) <= 0);

    // sqrt(2)^2 - 2 likewise
    BigReal r = pow_ui(sqrt(BigReal(2L, 200)), 2) - BigReal(2L, 200);
    CHECK(mpfr_cmpabs(r.raw(), r.raw_radius()) <= 0);

    // exp(log(7)) - 7
    BigReal e = exp(log(BigReal(7L, 200))) - BigReal(7L, 200);
    CHECK(mpfr_cmpabs(e.raw(), e.raw_radius()) <= 0);
}

TEST_CASE("same constant at two precisions stays within joint radius") {
    BigReal lo = BigReal::pi(64);
    BigReal hi = BigReal::pi(320);
    BigReal d = lo - hi;
    CHECK(mpfr_cmpabs(d.raw(), d.raw_radius()) <= 0);
    CHECK(agree_to_digits(lo, hi, 15));
    CHECK(!agree_to_digits(lo, hi + BigReal(1L, 64), 15));
}

TEST_CASE("division by a ball straddling zero loses all certainty") {
    BigReal denom(96);
    mpfr_set_ui(denom.raw(), 1, MPFR_RNDN);
    mpfr_mul_2si(denom.raw(), denom.raw(), -80, MPFR_RNDN);
    denom.add_radius_2exp(-78); // radius exceeds the centre
    BigReal q = BigReal(1L, 96) / denom;
    CHECK(!q.is_finite());
}

TEST_CASE("radius_below_pow10 thresholds") {
    BigReal x(1L, 128);
    x.set_radius_2exp(-100); // 2^-100 ~ 7.9e-31
    CHECK(x.radius_below_pow10(30));
    CHECK(!x.radius_below_pow10(31));
}

TEST_CASE("upper and lower absolute bounds") {
    BigReal x(-3L, 96);
    x.add_radius_2exp(-2); // [-3.25, -2.75]
    CHECK(x.upper_abs().cmp_si(3) > 0);
    CHECK(x.lower_abs().cmp_si(3) < 0);
    CHECK(x.lower_abs().sign() > 0);

    BigReal y(96); // 0 with radius
    y.add_radius_2exp(0);
    CHECK(y.lower_abs().is_zero());
}

TEST_CASE("to_string format and round trip") {
    BigReal x(make_rational(7, 4), 128);
    std::string s = x.to_string(10);
    CHECK(s == "1.750000000e+0");
    BigReal back(s.c_str(), 128);
    CHECK(agree_to_digits(x, back, 8));

    BigReal tiny("-4.25e-40", 128);
    std::string st = tiny.to_string(3);
    CHECK(st == "-4.25e-40");
}

TEST_CASE("mul_2exp is exact") {
    BigReal x(make_rational(1, 3), 96);
    BigReal y = mul_2exp(x, 10);
    BigReal z = y - x * BigReal(1024L, 96);
    CHECK(mpfr_cmpabs(z.raw(), z.raw_radius()) <= 0);
}

TEST_CASE("rounded_to widens radius by at most an ulp") {
    BigReal x = BigReal::pi(300);
    BigReal y = x.rounded_to(80);
    CHECK(y.prec() == 80);
    BigReal d = x - y;
    CHECK(mpfr_cmpabs(d.raw(), d.raw_radius()) <= 0);
    CHECK(y.radius_below_pow10(20));
}

TEST_CASE("nearest integer extraction") {
    BigReal x("2.4999", 96);
    CHECK(x.to_nearest_mpz() == 2);
    BigReal y("-7.5001", 96);
    CHECK(y.to_nearest_mpz() == -8);
}

TEST_CASE("precision policy converts digits to bits") {
    Precision p; // 30 target + 10 guard
    CHECK(p.bits() == 137);
    Precision q{100, 15};
    CHECK(q.bits() == 387);
    CHECK(q.with_extra_digits(10).target_digits == 110);
    CHECK_THROWS_AS((Precision{0, 10}.bits()), DomainError);
}
