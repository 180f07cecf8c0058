#include <catch2/catch_amalgamated.hpp>
#include <bessellab/relations.hpp>

#include <random>
#include <string>
#include <vector>

using namespace bessellab;

namespace {

// |v| + radius as a zero-radius ball, for soundness arithmetic
BigReal radius_of(const BigReal& v) {
    BigReal r(v.prec());
    mpfr_set(r.raw(), v.raw_radius(), MPFR_RNDU);
    return r;
}

std::vector<BigInt> ints(std::initializer_list<long> cs) {
    std::vector<BigInt> v;
    for (long c : cs) v.emplace_back(c);
    return v;
}

// a planted problem: n - 1 random values in [1, 2), the last one chosen so
// that sum a_i v_i = 0 exactly up to roundoff of the final division
RelationProblem planted(std::mt19937_64& rng, const std::vector<BigInt>& a, long bits) {
    size_t n = a.size();
    RelationProblem p;
    for (size_t i = 0; i + 1 < n; ++i) {
        BigInt num(0);
        for (int b = 0; b < 4; ++b)
            num = num * BigInt(1L << 20) + BigInt(static_cast<long>(rng() % (1L << 20)));
        BigRational q = make_rational(num, BigInt(1) << 80);
        q += 1;
        p.values.push_back(to_bigreal(BigRational(q), bits));
    }
    BigReal sum(bits);
    for (size_t i = 0; i + 1 < n; ++i) sum += BigReal(a[i], bits) * p.values[i];
    p.values.push_back(-sum / BigReal(a[n - 1], bits));
    p.confidence_digits = 40;
    p.max_coeff = BigInt(100000);
    return p;
}

std::vector<BigInt> canonical(std::vector<BigInt> a) {
    detail::canonicalize_relation(a);
    return a;
}

IntegerRelation require_relation(RelationOutcome out) {
    REQUIRE(std::holds_alternative<IntegerRelation>(out));
    return std::get<IntegerRelation>(std::move(out));
}

}  // namespace

TEST_CASE("relation problem validation") {
    long bits = Precision(40).bits();
    BigReal one(1L, bits);
    BigReal pi = BigReal::pi(bits);

    RelationProblem p;
    p.values = {one};
    CHECK_THROWS_AS(pslq(p), DomainError);

    p.values = {one, pi};
    p.labels = {"only one"};
    CHECK_THROWS_AS(pslq(p), DomainError);
    p.labels.clear();

    p.max_coeff = BigInt(0);
    CHECK_THROWS_AS(pslq(p), DomainError);
    p.max_coeff = BigInt(1000000);

    p.confidence_digits = 0;
    CHECK_THROWS_AS(pslq(p), DomainError);
    p.confidence_digits = 30;

    // a numerically zero entry is a degenerate relation, not an input
    RelationProblem zp;
    zp.values = {one, BigReal(bits)};
    zp.confidence_digits = 5;
    CHECK_THROWS_AS(pslq(zp), DomainError);

    // radii too wide for the requested confidence
    BigReal wide = pi;
    wide.set_radius_2exp(-40);
    RelationProblem wp;
    wp.values = {one, wide};
    wp.confidence_digits = 30;
    try {
        pslq(wp);
        FAIL("expected PrecisionError");
    } catch (const PrecisionError& e) {
        CHECK(std::string(e.what()).find("requires 40 certified digits") != std::string::npos);
        CHECK(e.achieved_log10_radius() > -13.0);
        CHECK(e.achieved_log10_radius() < -11.0);
    }
}

TEST_CASE("golden ratio satisfies the quadratic relation") {
    long bits = Precision(60).bits();
    BigReal phi = (BigReal(1L, bits) + sqrt(BigReal(5L, bits))) / BigReal(2L, bits);
    RelationProblem p;
    p.values = {BigReal(1L, bits), phi, phi * phi};
    p.confidence_digits = 40;
    const IntegerRelation& r = require_relation(pslq(p));
    CHECK(r.coefficients == ints({1, 1, -1}));
    CHECK(r.residual.cmp(BigReal("1e-40", bits)) < 0);
}

TEST_CASE("planted relations are recovered canonically") {
    long bits = Precision(60).bits();
    std::mt19937_64 rng(20250822);
    BigReal eps("1e-40", bits);
    for (size_t n = 3; n <= 6; ++n) {
        std::vector<BigInt> a(n);
        for (auto& c : a) {
            long v = static_cast<long>(rng() % 20001) - 10000;
            c = BigInt(v == 0 ? 7 : v);
        }
        // exercise the gcd reduction and a zero coefficient once each
        if (n == 4)
            for (auto& c : a) c *= 3;
        if (n == 5) a[2] = 0;
        CAPTURE(n);
        RelationProblem p = planted(rng, a, bits);
        const IntegerRelation& r = require_relation(pslq(p));
        CHECK(r.coefficients == canonical(a));

        // soundness: the certified residual is within radii plus threshold
        BigReal allowed = eps;
        for (size_t i = 0; i < n; ++i)
            allowed += BigReal(BigInt(abs(r.coefficients[i])), bits) * radius_of(p.values[i]);
        CHECK(r.residual.cmp(allowed) <= 0);
    }
}

TEST_CASE("common rational factors leave the vector unchanged") {
    long bits = Precision(60).bits();
    std::mt19937_64 rng(7);
    std::vector<BigInt> a = ints({481, -1205, 9, 3317});
    RelationProblem p = planted(rng, a, bits);
    const IntegerRelation& plainrun = require_relation(pslq(p));

    BigReal factor = to_bigreal(make_rational(355, 113), bits);
    RelationProblem scaled = p;
    for (BigReal& v : scaled.values) v = v * factor;
    const IntegerRelation& scaledrun = require_relation(pslq(scaled));
    CHECK(scaledrun.coefficients == plainrun.coefficients);
    CHECK(plainrun.coefficients == canonical(a));
}

TEST_CASE("no small relation ties one to pi") {
    long bits = Precision(50).bits();
    RelationProblem p;
    p.values = {BigReal(1L, bits), BigReal::pi(bits)};
    p.confidence_digits = 40;
    p.max_coeff = BigInt(1000000);
    RelationOutcome out = pslq(p);
    REQUIRE(std::holds_alternative<NoRelation>(out));
    CHECK(std::get<NoRelation>(out).norm_bound.cmp_si(1000000) >= 0);
}

TEST_CASE("weight-8 moments rediscover zeta(5) at 120 digits") {
    Precision prec(120);
    auto ms = moment_batch({{1, 8, 0, 0, 0}, {3, 8, 0, 0, 0}}, prec);
    RelationProblem p;
    p.values = {zeta(5, prec.bits()), ms[0], ms[1]};
    p.labels = {"zeta(5)", "int u^1 K0^8", "int u^3 K0^8"};
    p.confidence_digits = 100;
    const IntegerRelation& r = require_relation(pslq(p));
    CHECK(r.coefficients == relation_identity("zeta5-weight8").published);
    CHECK(r.residual.cmp(BigReal("1e-100", prec.bits())) < 0);
}

TEST_CASE("closed-form identities hold at confidence 40 and 80") {
    // The identities whose values avoid nested quadrature; the full catalog
    // runs in the companion binary.
    for (long target : {50L, 90L}) {
        Precision prec(target);
        long bits = prec.bits();
        long conf = target - 10;
        CAPTURE(target);

        auto ms = moment_batch(
            {{1, 8, 0, 0, 0}, {3, 8, 0, 0, 0}, {1, 4, 0, 0, 0}, {3, 4, 0, 0, 0}}, prec);

        RelationProblem w8;
        w8.values = {zeta(5, bits), ms[0], ms[1]};
        w8.confidence_digits = conf;
        CHECK(require_relation(pslq(w8)).coefficients ==
              relation_identity("zeta5-weight8").published);

        RelationProblem w4;
        w4.values = {BigReal(1L, bits), ms[2], ms[3]};
        w4.confidence_digits = conf;
        CHECK(require_relation(pslq(w4)).coefficients ==
              relation_identity("weight4-sum-rule").published);

        BigReal pi = BigReal::pi(bits);
        RelationProblem ch;
        ch.values = {cf_value(catalog_entry("zeta2-pslq"), target + 40, prec), BigReal(1L, bits),
                     BigReal(6L, bits) / (pi * pi)};
        ch.confidence_digits = conf;
        CHECK(require_relation(pslq(ch)).coefficients ==
              relation_identity("chain-zeta2").published);
    }
}

TEST_CASE("identity catalog shape") {
    const auto& cat = relation_catalog();
    REQUIRE(cat.size() == 8);
    for (const auto& id : cat) {
        CAPTURE(id.name);
        CHECK(id.values.size() == id.published.size());
        CHECK(id.values.size() >= 3);
        CHECK(id.published == canonical(id.published));
        CHECK(&relation_identity(id.name) == &id);
        for (const auto& v : id.values) CHECK(!v.label.empty());
    }
    CHECK(relation_identity("weight4-sum-rule").provenance == Provenance::proved);
    CHECK(relation_identity("zeta5-weight8").provenance == Provenance::pslq_conjectural);
    CHECK(relation_identity("nested-17").provenance == Provenance::pslq_conjectural);
    CHECK_THROWS_AS(relation_identity("nope"), DomainError);

    // every nested entry symmetrises distinct odd indices
    for (const char* name : {"nested-13", "nested-15", "nested-17", "nested-35"}) {
        const auto& id = relation_identity(name);
        const IdentityValue& v = id.values[0];
        CHECK(v.kind == IdentityValue::Kind::nested_pair_sum);
        CHECK(v.nested_n % 2 == 1);
        CHECK(v.nested_m % 2 == 1);
        CHECK(v.nested_n != v.nested_m);
    }
}

TEST_CASE("report export is stable json") {
    RelationReport rep;
    rep.target_digits = 50;
    rep.confidence_digits = 40;
    IdentityCheck c;
    c.name = "zeta5-weight8";
    c.provenance = Provenance::pslq_conjectural;
    c.labels = {"zeta(5)", "int u^1 K0^8", "int u^3 K0^8"};
    c.published = ints({77, -1, 72});
    c.recovered = ints({77, -1, 72});
    c.residual = BigReal("2.5e-61", 64);
    c.digits_used = 50;
    rep.checks.push_back(c);
    std::string json = report_to_json(rep);
    CHECK(json ==
          "{\n"
          "  \"confidence_digits\": 40,\n"
          "  \"identities\": [\n"
          "    {\n"
          "      \"digits_used\": 50,\n"
          "      \"labels\": [\"zeta(5)\", \"int u^1 K0^8\", \"int u^3 K0^8\"],\n"
          "      \"name\": \"zeta5-weight8\",\n"
          "      \"provenance\": \"pslq_conjectural\",\n"
          "      \"published_vector\": [\"77\", \"-1\", \"72\"],\n"
          "      \"recovered_vector\": [\"77\", \"-1\", \"72\"],\n"
          "      \"residual_decimal_string\": \"2.50e-61\"\n"
          "    }\n"
          "  ],\n"
          "  \"schema\": \"bessellab-relation-report-v1\",\n"
          "  \"target_digits\": 50\n"
          "}\n");
    CHECK(report_to_json(rep) == json);
}
