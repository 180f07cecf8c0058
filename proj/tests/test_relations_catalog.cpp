#include <catch2/catch_amalgamated.hpp>
#include <bessellab/relations.hpp>

#include <string>

using namespace bessellab;

// The full blind rediscovery is quadrature-bound: the nested entries walk
// four inner cumulative maps and rho2-alpha6 three more, so one pass runs
// for minutes rather than seconds.  It lives in its own binary to keep the
// engine tests quick; here the whole catalog is verified at two confidences
// and the recovered vectors are required to agree exactly between them.

TEST_CASE("catalog rediscovery is identical at confidence 40 and 80") {
    RelationReport low = verify_catalog_identities(Precision(50));
    REQUIRE(low.confidence_digits == 40);
    REQUIRE(low.checks.size() == relation_catalog().size());
    for (const IdentityCheck& c : low.checks) {
        CAPTURE(c.name);
        CHECK(c.recovered == c.published);
        CHECK(c.digits_used == 50);
        CHECK(c.residual.cmp(BigReal("1e-40", 128)) < 0);
    }

    std::string json = report_to_json(low);
    CHECK(json.find("\"schema\": \"bessellab-relation-report-v1\"") != std::string::npos);
    CHECK(json.find("\"name\": \"nested-35\"") != std::string::npos);
    CHECK(json.find("\"published_vector\": [\"77\", \"-1\", \"72\"]") != std::string::npos);

    RelationReport high = verify_catalog_identities(Precision(90));
    REQUIRE(high.confidence_digits == 80);
    REQUIRE(high.checks.size() == low.checks.size());
    for (size_t i = 0; i < high.checks.size(); ++i) {
        CAPTURE(high.checks[i].name);
        CHECK(high.checks[i].name == low.checks[i].name);
        CHECK(high.checks[i].recovered == low.checks[i].recovered);
        CHECK(high.checks[i].residual.cmp(BigReal("1e-80", 128)) < 0);
    }
}
