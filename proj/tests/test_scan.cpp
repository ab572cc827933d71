#include <doctest.h>

#include "pssmfa/scan.hpp"

#include <algorithm>
#include <set>

using namespace pssmfa;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = text.find('\n', pos);
        out.push_back(text.substr(pos, end - pos));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return out;
}

} // namespace

TEST_CASE("method names round-trip") {
    for (const char* name : {"oracle", "params", "closed", "all"})
        CHECK(method_to_string(method_from_string(name)) == name);
    CHECK_THROWS_AS(method_from_string("dense"), std::invalid_argument);
}

TEST_CASE("rectangle grid expansion drops non-divisors and k > d") {
    ScanSpec spec;
    spec.n = {4};
    spec.k = {1, 2, 3, 4};
    spec.d = {2, 3};
    spec.method = Method::closed;
    const ScanResult res = run_scan(spec);
    // surviving cases: k=1 x d=2,3; k=2 x d=2,3; k=4 dropped (k > d); k=3 dropped
    REQUIRE(res.rows.size() == 4);
    std::set<std::string> seen;
    for (const ScanRow& r : res.rows) {
        CHECK(r.method == "closed");
        seen.insert(r.k_or_diagram + "@" + std::to_string(r.d));
    }
    CHECK(seen == std::set<std::string>{"1@2", "1@3", "2@2", "2@3"});
}

TEST_CASE("closed rows carry the exact expression") {
    ScanSpec spec;
    spec.n = {4};
    spec.k = {2};
    spec.d = {3};
    spec.method = Method::closed;
    const ScanResult res = run_scan(spec);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].F == doctest::Approx(50.0 / 81).epsilon(1e-14));
    CHECK(res.rows[0].exact_expr == "50/81");
    CHECK(res.rows[0].clipped_mass == 0);
    CHECK(res.rows[0].runtime_ms == 0);
}

TEST_CASE("diagram source takes priority over the rectangle grid") {
    ScanSpec spec;
    spec.n = {9};  // would be used only by the grid; must be ignored
    spec.k = {9};
    spec.d = {2, 3};
    spec.diagrams = {parse_diagram("2,1"), parse_diagram("1,1,1")};
    spec.method = Method::params;
    const ScanResult res = run_scan(spec);
    // 2,1 fits d=2 and d=3; 1,1,1 only d=3
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[0].k_or_diagram == "2,1");
    CHECK(res.rows[0].n == 3);
    CHECK(res.rows[2].k_or_diagram == "1,1,1");
    CHECK(res.rows[2].d == 3);
}

TEST_CASE("state source takes priority over everything") {
    ScanSpec spec;
    spec.n = {2};
    spec.k = {1};
    spec.d = {2};
    spec.diagrams = {parse_diagram("2")};
    spec.state = PSSState::single(parse_diagram("2,2"), 3);
    const ScanResult res = run_scan(spec);  // method all
    REQUIRE(res.rows.size() == 3);
    for (const ScanRow& r : res.rows) {
        CHECK(r.k_or_diagram == "state");
        CHECK(r.n == 4);
        CHECK(r.d == 3);
    }
    CHECK(res.rows[0].method == "oracle");
    CHECK(res.rows[1].method == "params");
    CHECK(res.rows[2].method == "closed");
    CHECK(res.rows[2].skipped());
    CHECK(res.rows[2].skip_reason == "closed forms cover single rectangles only");
    CHECK_FALSE(res.rows[0].skipped());
    CHECK(res.rows[0].F == doctest::Approx(res.rows[1].F).epsilon(1e-10));
}

TEST_CASE("skip reasons for uncovered closed forms and blown budgets") {
    ScanSpec spec;
    spec.diagrams = {parse_diagram("2,1")};
    spec.d = {3};
    const ScanResult res = run_scan(spec);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[2].method == "closed");
    CHECK(res.rows[2].skip_reason == "closed forms cover rectangles only");

    ScanSpec tight;
    tight.n = {6};
    tight.k = {6};
    tight.d = {6};
    tight.budget = OracleBudget{100};  // 6^6 amplitudes will not fit
    const ScanResult res2 = run_scan(tight);
    REQUIRE(res2.rows.size() == 3);
    CHECK(res2.rows[0].skip_reason == "dense expansion over budget");
    CHECK_FALSE(res2.rows[1].skipped());  // params route has no dense step
    CHECK_FALSE(res2.rows[2].skipped());

    ScanSpec corner;
    corner.n = {3};
    corner.k = {3};
    corner.d = {4};
    corner.method = Method::closed;
    const ScanResult res3 = run_scan(corner);
    REQUIRE(res3.rows.size() == 1);
    CHECK(res3.rows[0].skip_reason == "no closed form at k = n < d");
}

TEST_CASE("empty case list is rejected") {
    ScanSpec spec;
    spec.n = {5};
    spec.k = {3};  // 3 does not divide 5
    spec.d = {4};
    CHECK_THROWS_AS(run_scan(spec), std::invalid_argument);
    CHECK_THROWS_AS(run_scan(ScanSpec{}), std::invalid_argument);
}

TEST_CASE("csv has the pinned header, quotes diagram labels and drops skips") {
    ScanSpec spec;
    spec.diagrams = {parse_diagram("3,1")};
    spec.d = {3};
    const ScanResult res = run_scan(spec);
    const auto ls = lines(res.csv());
    REQUIRE(ls.size() >= 3);
    CHECK(ls[0] == "n,d,k_or_diagram,method,F,exact_expr,clipped_mass,runtime_ms");
    CHECK(ls[1].rfind("4,3,\"3,1\",oracle,", 0) == 0);
    CHECK(ls[2].rfind("4,3,\"3,1\",params,", 0) == 0);
    CHECK(ls.size() == 3);  // the skipped closed row is CSV-invisible

    const nlohmann::json j = res.json();
    REQUIRE(j.at("rows").size() == 3);
    CHECK(j.at("rows")[2].at("skip_reason") == "closed forms cover rectangles only");
    CHECK_FALSE(j.at("rows")[0].contains("skip_reason"));
    CHECK(j.at("rows")[0].at("F").get<double>() ==
          doctest::Approx(res.rows[0].F).epsilon(1e-15));
}

TEST_CASE("output is byte-identical across thread counts") {
    ScanSpec spec;
    spec.n = {2, 3, 4, 6};
    spec.k = {1, 2, 3, 6};
    spec.d = {2, 3, 4};
    spec.budget = OracleBudget{2000};  // 4^6 = 4096 amplitudes must skip
    std::string reference;
    for (int threads : {1, 4, 8}) {
        spec.threads = threads;
        const ScanResult res = run_scan(spec);
        if (threads == 1)
            reference = res.csv() + res.json().dump();
        else
            CHECK(res.csv() + res.json().dump() == reference);
    }
    CHECK(reference.find("dense expansion over budget") != std::string::npos);
}

TEST_CASE("timing flag populates runtime without breaking the schema") {
    ScanSpec spec;
    spec.n = {4};
    spec.k = {2};
    spec.d = {3};
    spec.timing = true;
    const ScanResult res = run_scan(spec);
    for (const ScanRow& r : res.rows) {
        CHECK(r.runtime_ms >= 0);
        CHECK_FALSE(r.skipped());
    }
    const auto ls = lines(res.csv());
    CHECK(ls.size() == 4);
}
