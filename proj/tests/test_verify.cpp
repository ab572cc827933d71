#include <doctest.h>

#include "pssmfa/verify.hpp"

using namespace pssmfa;

namespace {

VerifyConfig reduced() {
    VerifyConfig cfg;
    cfg.max_dense = 20'000;  // keeps every dense expansion under 20k amplitudes
    cfg.max_rho2_dim = 64;   // two-party work capped at d = 8
    return cfg;
}

} // namespace

TEST_CASE("fault names round-trip") {
    CHECK(fault_from_string("none") == FaultInjection::none);
    CHECK(fault_from_string("flip-b3-sign") == FaultInjection::flip_b3_sign);
    CHECK(fault_to_string(FaultInjection::flip_b3_sign) == "flip-b3-sign");
    CHECK_THROWS_AS(fault_from_string("drop-row"), std::invalid_argument);
}

TEST_CASE("all nine criteria pass on a reduced budget") {
    const VerifyReport report = run_verification(reduced());
    REQUIRE(report.criteria.size() == 9);
    for (std::size_t i = 0; i < report.criteria.size(); ++i) {
        const CriterionResult& c = report.criteria[i];
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.id == static_cast<int>(i) + 1);
        CHECK(c.passed);
        CHECK(c.cases > 0);
        CHECK_FALSE(c.name.empty());
    }
    CHECK(report.all_passed());

    // numeric criteria stay far inside their windows
    CHECK(report.criteria[0].max_deviation < 1e-8);
    CHECK(report.criteria[1].max_deviation < 1e-8);
    CHECK(report.criteria[2].max_deviation < 0.01);
    CHECK(report.criteria[3].max_deviation < 1e-10);

    const nlohmann::json j = report.json();
    CHECK(j.at("all_passed") == true);
    CHECK(j.at("criteria").size() == 9);
    CHECK(j.at("criteria")[4].at("id") == 5);
    CHECK(j.at("criteria")[4].at("passed") == true);
    CHECK(j.at("config").at("fault") == "none");
    CHECK(j.at("config").at("max_dense") == 20'000);
}

TEST_CASE("injected fault breaks exactly the structure criterion") {
    VerifyConfig cfg = reduced();
    cfg.max_dense = 7'000;  // still room for every fixed dense case
    cfg.max_rho2_dim = 16;
    cfg.fault = FaultInjection::flip_b3_sign;
    const VerifyReport report = run_verification(cfg);
    REQUIRE(report.criteria.size() == 9);
    CHECK_FALSE(report.all_passed());
    for (const CriterionResult& c : report.criteria) {
        CAPTURE(c.id);
        CAPTURE(c.detail);
        if (c.id == 4)
            CHECK_FALSE(c.passed);
        else
            CHECK(c.passed);
    }
    const nlohmann::json j = report.json();
    CHECK(j.at("all_passed") == false);
    CHECK(j.at("config").at("fault") == "flip-b3-sign");
    const std::string detail = report.criteria[8].detail;
    CHECK(detail.find("fault injection active") != std::string::npos);
}
