// Acceptance gate: runs the full verification suite at its default budgets
// and prints one pass/fail line per criterion.  Exits nonzero if any fails.
#include "pssmfa/verify.hpp"

#include <cstdio>

int main() {
    const pssmfa::VerifyReport report = pssmfa::run_verification();
    int failed = 0;
    for (const pssmfa::CriterionResult& c : report.criteria) {
        if (!c.passed) ++failed;
        std::printf("%s  criterion %d: %s  [%ld cases, max deviation %.3g, tolerance %.3g]%s%s\n",
                    c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.cases,
                    c.max_deviation, c.tolerance, c.detail.empty() ? "" : "  -- ",
                    c.detail.c_str());
    }
    if (failed == 0) {
        std::printf("all %zu criteria passed\n", report.criteria.size());
        return 0;
    }
    std::printf("%d of %zu criteria failed\n", failed, report.criteria.size());
    return 1;
}
