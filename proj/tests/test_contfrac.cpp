#include <catch2/catch_amalgamated.hpp>
#include <bessellab/contfrac.hpp>

#include <string>

#include "support/oracles.hpp"

using namespace bessellab;

namespace {

BigRational q(long num, long den = 1) { return make_rational(num, den); }

void check_zero_ball(const BigReal& resid, long digits) {
    INFO("resid " << resid.to_string(digits + 5));
    CHECK(mpfr_cmpabs(resid.raw(), resid.raw_radius()) <= 0);
    CHECK(resid.radius_below_pow10(digits));
}

// both reduction components of I_{2k,0} over {1, int u K0^kappa}
std::pair<BigRational, BigRational> even_moment_components(long kappa, long k) {
    BasisDecomposition d = decompose(MomentIndex(kappa, 2 * k, 0));
    REQUIRE(d.coeffs.size() == 1);
    return {d.coeff_one, d.coeffs[0].second};
}

// one fraction step z(k-1) = N(k)/(D(k) + z(k)) in Moebius form
MoebiusQ descend_step(const ContFracSpec& e, long k, const MoebiusQ& zk) {
    BigRational n(e.numerator(k));
    BigRational d = make_rational(e.denominator(k), BigInt(e.den_scale));
    MoebiusQ prev;
    prev.a = BigRational(n * zk.c);
    prev.b = BigRational(n * zk.d);
    prev.c = BigRational(d * zk.c + zk.a);
    prev.d = BigRational(d * zk.d + zk.b);
    return prev;
}

} // namespace

TEST_CASE("catalog shape and provenance") {
    const auto& entries = catalog();
    REQUIRE(entries.size() == 9);
    for (const auto& e : entries) {
        CHECK(e.start_k == 0);
        CHECK(!e.numerator.is_zero());
        CHECK(e.denominator.degree() >= 2);
        CHECK((e.den_scale == 1 || e.name == "zeta3-weight4-halved"));
        CHECK(&catalog_entry(e.name) == &e);
    }
    CHECK(catalog_entry("zeta2-pslq").provenance == Provenance::pslq_conjectural);
    CHECK(catalog_entry("zeta3-pslq").provenance == Provenance::pslq_conjectural);
    CHECK(catalog_entry("zeta3-apery").provenance == Provenance::proved);
    CHECK(catalog_entry("zeta3-weight4-halved").den_scale == 2);
    CHECK_THROWS_AS(catalog_entry("nope"), DomainError);
}

TEST_CASE("catalog polynomial identities") {
    IntPoly cube = IntPoly{1, 2} * IntPoly{1, 2} * IntPoly{1, 2};  // (2k+1)^3
    IntPoly p = catalog_entry("zeta3-apery").denominator;

    // the three zeta(3) denominators differ by multiples of (2k+1)^3
    CHECK(p - IntPoly{3} * cube == catalog_entry("zeta3-weight4").denominator);
    CHECK(p - IntPoly{3} * cube == catalog_entry("zeta3-weight4-halved").denominator);
    CHECK(p - IntPoly{2} * cube == IntPoly{3} * catalog_entry("zeta3-pslq").denominator);

    // factored forms of the sextic-numerator entries
    IntPoly k4{0, 0, 0, 0, 1};
    CHECK(catalog_entry("zeta2-16k6").numerator == k4 * IntPoly{-1, 0, 16});
    CHECK(catalog_entry("zeta2-16k6").denominator == IntPoly{1, 2} * IntPoly{1, 3, 3});
    CHECK(catalog_entry("zeta2-pslq").numerator == k4 * IntPoly{-3, 0, 27});
    CHECK(catalog_entry("zeta2-pslq").denominator == IntPoly{1, 2} * IntPoly{4, 13, 13});
    CHECK(catalog_entry("zeta3-apery").denominator == IntPoly{1, 2} * IntPoly{5, 17, 17});
    CHECK(catalog_entry("zeta3-weight4").denominator == IntPoly{1, 2} * IntPoly{2, 5, 5});

    // the halved entry is the quarter of the full one: N/4 and D/2
    const ContFracSpec& halved = catalog_entry("zeta3-weight4-halved");
    CHECK(IntPoly{4} * halved.numerator == catalog_entry("zeta3-weight4").numerator);
    for (long k = 0; k <= 50; ++k) CHECK(halved.denominator(k) % 2 == 0);
}

TEST_CASE("closed-form targets match independent constants") {
    Precision p60(60);
    long bits = p60.bits();

    BigReal psi_diff = oracles::value(oracles::PSI1_THIRD) - oracles::value(oracles::PSI1_TWO_THIRDS);
    BigReal t3 = to_bigreal(q(18), bits) / psi_diff - to_bigreal(q(3), bits);
    CHECK(agree_to_digits(catalog_entry("trigamma-third").target.evaluate(p60), t3, 50));

    // zeta(3) = (8/7) int u K0^4
    BigReal zeta3 = to_bigreal(q(8, 7), bits) * oracles::value(oracles::MOM_U_K0_4_DEEP, 133);
    BigReal apery3 = to_bigreal(q(6), bits) / zeta3 - to_bigreal(q(5), bits);
    CHECK(agree_to_digits(catalog_entry("zeta3-apery").target.evaluate(p60), apery3, 50));

    BigReal zeta2 = BigReal::pi(bits) * BigReal::pi(bits) / BigReal(6, bits);
    BigReal apery2 = to_bigreal(q(5), bits) / zeta2 - to_bigreal(q(3), bits);
    CHECK(agree_to_digits(catalog_entry("zeta2-apery").target.evaluate(p60), apery2, 55));

    CHECK(catalog_entry("zeta3-apery").target.to_string() == "6/zeta(3) - 5");
    CHECK(catalog_entry("zeta3-weight4-halved").target.to_string() == "6/(7*(zeta(3))) - 1");
}

TEST_CASE("deep truncations land on the closed forms") {
    Precision p60(60);
    for (const auto& e : catalog()) {
        INFO(e.name);
        BigReal v = cf_value(e, 300, p60);
        BigReal t = e.target.evaluate(p60);
        CHECK(agree_to_digits(v, t, 30));
    }
}

TEST_CASE("truncation depth 200 reproduces the classic zeta(3) value") {
    Precision p40(40);
    const ContFracSpec& e = catalog_entry("zeta3-apery");
    BigReal v = cf_value(e, 200, p40);
    BigReal t = to_bigreal(q(6), p40.bits()) / zeta(3, p40.bits()) - to_bigreal(q(5), p40.bits());
    CHECK(agree_to_digits(v, t, 30));
}

TEST_CASE("tail estimate brackets the truncation error") {
    Precision p60(60);
    const ContFracSpec& e = catalog_entry("zeta3-weight4");
    BigReal actual = abs(cf_value(e, 30, p60) - e.target.evaluate(p60));
    BigReal est = cf_tail_estimate(e, 30, p60);
    // the chain contracts by about 1/4 per level, so the five-step gap
    // overshoots the true error by roughly 4^5 and never lands below it
    CHECK(est.cmp(actual) > 0);
    CHECK(est.cmp(to_bigreal(q(2000), p60.bits()) * actual) < 0);
    CHECK_THROWS_AS(cf_tail_estimate(e, 5, p60), DomainError);
}

TEST_CASE("finite truncations equal the dual convergent ratios") {
    Precision p50(50);
    for (const auto& e : catalog()) {
        ThreeTermRecurrence rec = dual_recurrence(e);
        CHECK(rec.A == IntPoly() - e.numerator);
        CHECK(rec.B == e.denominator);
        for (long depth : {7L, 40L}) {
            INFO(e.name << " depth " << depth);
            ConvergentTable tab = convergents(rec, e.start_k + depth + 1);
            BigReal cf = cf_value(e, depth, p50);
            BigReal diff = cf - to_bigreal(tab.ratio(static_cast<size_t>(depth) + 1), p50.bits());
            check_zero_ball(diff, 45);
        }
    }
}

TEST_CASE("historic seed runs recover the zeta values") {
    Precision p50(50);
    long bits = p50.bits();

    ThreeTermRecurrence r3 = dual_recurrence(catalog_entry("zeta3-apery"));
    r3.num_init = {q(0), q(6)};
    r3.den_init = {q(1), q(5)};
    ConvergentTable t3 = convergents(r3, 20);
    CHECK(agree_to_digits(to_bigreal(t3.ratio(20), bits), zeta(3, bits), 20));

    ThreeTermRecurrence r2 = dual_recurrence(catalog_entry("zeta2-apery"));
    r2.num_init = {q(0), q(5)};
    r2.den_init = {q(1), q(3)};
    ConvergentTable t2 = convergents(r2, 20);
    CHECK(agree_to_digits(to_bigreal(t2.ratio(20), bits), zeta(2, bits), 20));

    auto [limit, gap] = t3.limit_estimate();
    CHECK(limit == t3.ratio(20));
    CHECK(gap > 0);
}

TEST_CASE("moment-seeded weight-4 run approaches the second chain value") {
    // unit seeds at k = 2, 3 make the ratio run the truncations of z(2),
    // whose limit is a Moebius image of the weight-4 basis moment
    Precision p60(60);
    long bits = p60.bits();
    ThreeTermRecurrence rec = dual_recurrence(catalog_entry("zeta3-weight4"));
    rec.start_k = 2;
    ConvergentTable tab = convergents(rec, 62);
    BigReal x = to_bigreal(q(7, 8), bits) * zeta(3, bits);
    MoebiusQ z2{q(-3552), q(3456), q(27), q(-28)};
    CHECK(agree_to_digits(to_bigreal(tab.ratio(58), bits), z2.evaluate(x), 30));
}

TEST_CASE("characteristic roots across the catalog") {
    Precision p40(40);
    long bits = p40.bits();
    struct Expected {
        const char* name;
        long sum_num, prod_num, scale;  // root sum and product times scale
    };
    // from y^2 - (lead B / b_scale) y + (lead A) = 0
    for (const Expected& e : {Expected{"zeta2-apery", 11, -1, 1}, Expected{"zeta2-8k4", 7, -8, 1},
                              Expected{"zeta2-16k6", 6, -16, 1}, Expected{"zeta2-pslq", 26, -27, 1},
                              Expected{"trigamma-third", 10, 9, 1}, Expected{"zeta3-apery", 34, 1, 1},
                              Expected{"zeta3-pslq", 6, 1, 1},
                              Expected{"zeta3-weight4-halved", 5, 4, 1},
                              Expected{"zeta3-weight4", 10, 16, 1}}) {
        INFO(e.name);
        auto [r1, r2] = characteristic_roots(dual_recurrence(catalog_entry(e.name)), p40);
        CHECK(agree_to_digits(r1 + r2, to_bigreal(q(e.sum_num, e.scale), bits), 30));
        CHECK(agree_to_digits(r1 * r2, to_bigreal(q(e.prod_num, e.scale), bits), 30));
        CHECK(mpfr_cmpabs(r1.raw(), r2.raw()) >= 0);
    }

    // the two Apery-strength zeta(3) entries have silver-ratio powers as roots
    BigReal silver = BigReal(1, bits) + sqrt(BigReal(2, bits));
    auto [a1, a2] = characteristic_roots(dual_recurrence(catalog_entry("zeta3-apery")), p40);
    CHECK(agree_to_digits(a1, pow_ui(silver, 4), 30));
    auto [c1, c2] = characteristic_roots(dual_recurrence(catalog_entry("zeta3-pslq")), p40);
    CHECK(agree_to_digits(c1, pow_ui(silver, 2), 30));

    // integer spectra pin down the halving of the shared denominator
    auto [h1, h2] = characteristic_roots(dual_recurrence(catalog_entry("zeta3-weight4-halved")), p40);
    CHECK(agree_to_digits(h1, BigReal(4, bits), 30));
    CHECK(agree_to_digits(h2, BigReal(1, bits), 30));
}

TEST_CASE("dominant root governs the denominator run") {
    ThreeTermRecurrence rec = dual_recurrence(catalog_entry("zeta3-apery"));
    ConvergentTable tab = convergents(rec, 42);
    auto scaled_ratio = [&](size_t k) {
        BigRational r = BigRational(tab.q[k + 1] / tab.q[k]);
        long c = static_cast<long>(k + 1);
        return to_bigreal(BigRational(r / q(c * c * c)), 64).to_double();
    };
    double rich = 2 * scaled_ratio(40) - scaled_ratio(20);
    auto [lam, lam2] = characteristic_roots(rec, Precision(20));
    CHECK(std::abs(rich - lam.to_double()) < 0.05 * lam.to_double());
}

TEST_CASE("ratio map coefficients in lowest terms") {
    RatioMapCoeffs m3 = ratio_map_coeffs(3);
    CHECK(m3.a == IntPoly{0, 2, 2});
    CHECK(m3.b == IntPoly{0, 0, 3});
    CHECK(m3.c == IntPoly{3, 10, 7});
    CHECK(m3.d == IntPoly{0, 0, 6});

    RatioMapCoeffs m4 = ratio_map_coeffs(4);
    CHECK(m4.a == IntPoly{6, 15, 12, 3});
    CHECK(m4.b == IntPoly{0, -8, 3, 5});
    CHECK(m4.c == IntPoly{2, 9, 12, 5});
    CHECK(m4.d == IntPoly{0, 0, -3, 3});

    CHECK_THROWS_AS(ratio_map_coeffs(5), DomainError);
    CHECK_THROWS_AS(ratio_map_coeffs(2), DomainError);
}

TEST_CASE("symbolic map matches the exact rational step") {
    detail::RFMat m5 = detail::symbolic_forward_map(5);
    REQUIRE(m5.size() == 3);
    for (long k : {3L, 5L}) {
        MatQ num = detail::two_step_even(5, 2 * k);
        for (size_t r = 0; r < 3; ++r)
            for (size_t c = 0; c < 3; ++c) {
                INFO("k=" << k << " entry " << r << "," << c);
                if (m5[r][c].is_zero())
                    CHECK(num(r, c) == 0);
                else
                    CHECK(m5[r][c](q(k)) == num(r, c));
            }
    }

    // reduced weight-4 map, top-left entry in closed form
    detail::RFMat m4 = detail::symbolic_reduced_map4();
    RatFunc expected(PolyQ(IntPoly{8, 21, 10}), PolyQ(IntPoly{1, 2, 1}));  // (2k+1)(5k+8)/(k+1)^2
    CHECK(m4[0][0] == expected);
}

TEST_CASE("z-chain terms agree between direct assembly and fraction descent") {
    for (long kappa : {3L, 4L}) {
        const ContFracSpec& e =
            catalog_entry(kappa == 4 ? "zeta3-weight4" : "trigamma-third");
        long start = kappa == 4 ? 2 : 1;
        for (long k = start + 1; k <= start + 3; ++k) {
            INFO("kappa=" << kappa << " k=" << k);
            MoebiusQ direct = z_chain_term(kappa, k - 1);
            MoebiusQ descended = descend_step(e, k, z_chain_term(kappa, k));
            CHECK(direct.equivalent(descended));
        }
        CHECK_THROWS_AS(z_chain_term(kappa, start - 1), DomainError);
    }
}

TEST_CASE("z-chain reports rebuild the closed forms") {
    Precision p50(50);

    ZChainReport r4 = z_chain_from_moments(4, p50);
    CHECK(r4.start_k == 2);
    REQUIRE(r4.z.size() == 3);
    CHECK(r4.closed_form_matches);
    CHECK(r4.z[2].equivalent(MoebiusQ{q(-3552), q(3456), q(27), q(-28)}));
    CHECK(r4.z[0].equivalent(MoebiusQ{q(3), q(-4), q(0), q(2)}));
    CHECK(r4.target_gap.upper_abs().cmp(BigReal("1e-40", 64)) < 0);

    ZChainReport r3 = z_chain_from_moments(3, p50);
    CHECK(r3.start_k == 1);
    REQUIRE(r3.z.size() == 2);
    CHECK(r3.closed_form_matches);
    CHECK(r3.z[1].equivalent(MoebiusQ{q(23), q(-40), q(-1), q(2)}));
    CHECK(r3.z[0].equivalent(MoebiusQ{q(3), q(-6), q(0), q(2)}));
    CHECK(r3.target_gap.upper_abs().cmp(BigReal("1e-40", 64)) < 0);

    CHECK_THROWS_AS(z_chain_from_moments(5, p50), DomainError);
}

TEST_CASE("tail of the weight-4 chain follows the cubic law") {
    // z(k)/k^3 -> -2 with a 1/k correction; one Richardson step removes it
    Precision p40(40);
    auto scaled_tail = [&](long k) {
        ContFracSpec shifted = catalog_entry("zeta3-weight4");
        shifted.start_k = k;
        BigReal z = cf_value(shifted, 200, p40);
        return (z / BigReal(k * k * k, p40.bits())).to_double();
    };
    double rich = 2 * scaled_tail(128) - scaled_tail(64);
    CHECK(std::abs(rich + 2.0) < 0.02);
}

TEST_CASE("closed-form solution families") {
    CHECK(apery_closed_form(0, AperyFamily::conjectural_zeta3) == q(1));
    CHECK(apery_closed_form(1, AperyFamily::conjectural_zeta3) == q(1));
    CHECK(apery_closed_form(2, AperyFamily::conjectural_zeta3) == q(20));
    CHECK(apery_closed_form(0, AperyFamily::weight_four) == q(1));
    CHECK(apery_closed_form(1, AperyFamily::weight_four) == q(2));
    CHECK(apery_closed_form(2, AperyFamily::weight_four) == q(56));

    for (AperyFamily fam : {AperyFamily::conjectural_zeta3, AperyFamily::weight_four}) {
        ThreeTermRecurrence rec = apery_recurrence(fam);
        ConvergentTable tab = convergents(rec, 100);
        for (long k = 0; k <= 100; ++k) {
            INFO("k=" << k);
            BigRational y = apery_closed_form(k, fam);
            // the binomial sum absorbs the factorial factor without remainder
            CHECK(y.get_den() == 1);
            // and the sequence is exactly the recurrence run from its seeds
            CHECK(tab.p[static_cast<size_t>(k)] == y);
        }
    }
    CHECK_THROWS_AS(apery_closed_form(-1, AperyFamily::weight_four), DomainError);
}

TEST_CASE("higher-order recurrences from symbolic elimination") {
    MomentRecurrence r4 = higher_order_recurrence(4);
    CHECK(r4.kappa == 4);
    REQUIRE(r4.order() == 2);
    CHECK(r4.coeffs[0] == IntPoly{0, 0, 0, 0, 1});
    CHECK(r4.coeffs[1] == IntPoly{2, 5, -3, -20, -20});
    CHECK(r4.coeffs[2] == IntPoly{-16, -32, 48, 128, 64});
    // factored forms: -(4k^2-1)(5k^2+5k+2) and 16(k+1)^2(4k^2-1)
    CHECK(IntPoly() - r4.coeffs[1] == IntPoly{-1, 0, 4} * IntPoly{2, 5, 5});
    CHECK(r4.coeffs[2] == IntPoly{16} * IntPoly{1, 2, 1} * IntPoly{-1, 0, 4});
    CHECK(r4.to_string().find("x(k-1)") != std::string::npos);

    MomentRecurrence r5 = higher_order_recurrence(5);
    REQUIRE(r5.order() == 3);
    CHECK(r5.coeffs[0] == IntPoly{0, 0, 0, 0, 0, 8});
    CHECK(r5.coeffs[1] == IntPoly{-4} * IntPoly{-1, 2} * IntPoly{5, 28, 63, 70, 35});
    CHECK(r5.coeffs[2] == IntPoly{2} * IntPoly{-1, 2} * IntPoly{1, 1} * IntPoly{1, 2} *
                              IntPoly{285, 518, 259});
    CHECK(r5.coeffs[3] == IntPoly{-225} * IntPoly{-1, 2} * IntPoly{1, 1} * IntPoly{1, 2} *
                              IntPoly{2, 1} * IntPoly{3, 2});

    CHECK_THROWS_AS(higher_order_recurrence(3), DomainError);
    CHECK_THROWS_AS(higher_order_recurrence(6), DomainError);
}

TEST_CASE("transformed weight-4 moments satisfy the convergent recurrence") {
    // x(k) = I_{2k,0} times 8^k (2k)! k! solves the weight-4 three-term
    // recurrence exactly; check both reduction components over {1, X}
    const ContFracSpec& e = catalog_entry("zeta3-weight4");
    auto scale = [](long k) {
        unsigned long ku = static_cast<unsigned long>(k);
        return BigRational(BigRational(pow_int(BigInt(8), ku)) *
                           BigRational(factorial(2 * ku)) * BigRational(factorial(ku)));
    };
    std::vector<std::pair<BigRational, BigRational>> comp;
    for (long k = 0; k <= 11; ++k) comp.push_back(even_moment_components(4, k));
    for (long k = 1; k <= 10; ++k) {
        INFO("k=" << k);
        BigRational b(e.denominator(k)), n(e.numerator(k));
        auto [one2, x2] = comp[static_cast<size_t>(k + 1)];
        auto [one1, x1] = comp[static_cast<size_t>(k)];
        auto [one0, x0] = comp[static_cast<size_t>(k - 1)];
        CHECK(BigRational(scale(k + 1) * one2 - b * scale(k) * one1 - n * scale(k - 1) * one0) == 0);
        CHECK(BigRational(scale(k + 1) * x2 - b * scale(k) * x1 - n * scale(k - 1) * x0) == 0);
    }
}

TEST_CASE("quadrature verification of the moment recurrences") {
    MomentRecurrence r4 = higher_order_recurrence(4);
    Precision p60(60);
    auto rows4 = verify_moment_recurrence(r4, 1, 3, p60);
    REQUIRE(rows4.size() == 3);
    for (const auto& row : rows4) {
        INFO("k=" << row.k);
        CHECK(mpfr_cmpabs(row.residual.raw(), row.residual.raw_radius()) <= 0);
        CHECK(row.residual.upper_abs().cmp(BigReal("1e-40", 64)) < 0);
        CHECK(row.magnitude.cmp_si(0) > 0);
    }

    MomentRecurrence r5 = higher_order_recurrence(5);
    Precision p40(40);
    auto rows5 = verify_moment_recurrence(r5, 2, 2, p40);
    REQUIRE(rows5.size() == 1);
    CHECK(mpfr_cmpabs(rows5[0].residual.raw(), rows5[0].residual.raw_radius()) <= 0);
    CHECK(rows5[0].residual.upper_abs().cmp(BigReal("1e-30", 64)) < 0);

    CHECK_THROWS_AS(verify_moment_recurrence(r4, 0, 3, p40), DomainError);
    CHECK_THROWS_AS(verify_moment_recurrence(r4, 3, 2, p40), DomainError);
}

TEST_CASE("convergence exponents separate the strong fractions") {
    Precision p200(200);
    auto fit = [&](const char* name) {
        const ContFracSpec& e = catalog_entry(name);
        return convergence_exponent(dual_recurrence(e), e.target.evaluate(p200), 40, p200);
    };

    ConvergenceFit apery3 = fit("zeta3-apery");
    CHECK(apery3.slope > -2.1);
    CHECK(apery3.slope < -1.9);
    CHECK(!apery3.degenerate);
    CHECK(apery3.points >= 10);
    CHECK(apery3.fit_residual < 0.05);

    ConvergenceFit apery2 = fit("zeta2-apery");
    CHECK(apery2.slope > -2.1);
    CHECK(apery2.slope < -1.9);
    CHECK(!apery2.degenerate);

    // the conjectural zeta(3) fraction converges at full Apery strength
    ConvergenceFit conj = fit("zeta3-pslq");
    CHECK(conj.slope > -2.1);
    CHECK(conj.slope < -1.9);
    CHECK(!conj.degenerate);

    ConvergenceFit w4 = fit("zeta3-weight4");
    CHECK(w4.slope > -0.72);
    CHECK(w4.slope < -0.61);
    CHECK(w4.degenerate);

    ConvergenceFit tri = fit("trigamma-third");
    CHECK(tri.slope > -1.1);
    CHECK(tri.slope < -0.9);
    CHECK(tri.degenerate);

    ConvergenceFit k6 = fit("zeta2-16k6");
    CHECK(k6.slope > -0.72);
    CHECK(k6.slope < -0.61);
    CHECK(k6.degenerate);
}

TEST_CASE("pair reduction preserves ratios") {
    ThreeTermRecurrence rec = dual_recurrence(catalog_entry("zeta3-weight4"));
    ConvergentTable plain = convergents(rec, 12);
    ConvergentTable reduced = convergents(rec, 12, true);
    REQUIRE(plain.size() == reduced.size());
    for (size_t i = 2; i < plain.size(); ++i) {
        INFO("i=" << i);
        CHECK(plain.ratio(i) == reduced.ratio(i));
        CHECK(abs(BigRational(reduced.p[i])) <= abs(BigRational(plain.p[i])));
    }
    // a common factor 4 first appears in the third window
    CHECK(plain.p[3] == q(-2560));
    CHECK(reduced.p[3] != plain.p[3]);
}

TEST_CASE("catalog export is stable json") {
    std::string json = catalog_to_json();
    CHECK(json.front() == '{');
    CHECK(json.find("\"schema\": \"bessellab-contfrac-catalog-v1\"") != std::string::npos);

    size_t pos = 0;
    for (const auto& e : catalog()) {
        size_t next = json.find("\"name\": \"" + e.name + "\"", pos);
        CHECK(next != std::string::npos);
        pos = next;
    }

    // keys of one entry appear in sorted order
    size_t obj = json.find('{', json.find("\"entries\""));
    size_t end = json.find('}', obj);
    std::string entry = json.substr(obj, end - obj);
    size_t last = 0;
    for (const char* key : {"den_scale", "denominator", "name", "numerator", "provenance",
                            "start_k", "target"}) {
        size_t at = entry.find("\"" + std::string(key) + "\":");
        REQUIRE(at != std::string::npos);
        CHECK(at > last);
        last = at;
    }

    // the halved entry is the only one with a nontrivial scale
    size_t first_scale2 = json.find("\"den_scale\": \"2\"");
    CHECK(first_scale2 != std::string::npos);
    CHECK(json.find("\"den_scale\": \"2\"", first_scale2 + 1) == std::string::npos);
    CHECK(json.find("\"-16\"") != std::string::npos);
}

TEST_CASE("fraction argument validation") {
    const ContFracSpec& e = catalog_entry("zeta3-apery");
    Precision p30(30);
    CHECK_THROWS_AS(cf_value(e, 0, p30), DomainError);
    CHECK_THROWS_AS(convergents(dual_recurrence(e), 1), DomainError);
    CHECK_THROWS_AS(convergence_exponent(dual_recurrence(e), BigReal(1, 64), 5, p30), DomainError);

    ThreeTermRecurrence bad;
    CHECK_THROWS_AS(characteristic_roots(bad, p30), StructuralError);
    bad.B = IntPoly{0, 1};
    bad.A = IntPoly{0, 0, 0, 1};
    CHECK_THROWS_AS(characteristic_roots(bad, p30), StructuralError);
    bad.B = IntPoly{1};
    bad.A = IntPoly{4};
    CHECK_THROWS_AS(characteristic_roots(bad, p30), StructuralError);

    // a denominator with an integer zero kills the backward iteration
    ContFracSpec crafted;
    crafted.name = "crafted";
    crafted.numerator = IntPoly{1};
    crafted.denominator = IntPoly{-1, 1};
    crafted.target = ClosedForm{q(1), SpecialBase::inv_zeta2, q(0)};
    CHECK_THROWS_AS(cf_value(crafted, 1, p30), PrecisionError);

    ConvergentTable tab = convergents(dual_recurrence(e), 5);
    CHECK_THROWS_AS(tab.ratio(99), DomainError);
}
