// Self-contained verification suite: nine numbered checks covering the
// closed forms, the counting machinery, reduction structure, spectra,
// bound sweeps and output determinism, each with a budget so the whole
// run stays laptop-sized.
#pragma once

#include "pssmfa/bounds.hpp"
#include "pssmfa/scan.hpp"

#include <string>

namespace pssmfa {

/// Deliberate corruption for testing that the suite actually detects
/// broken builds; flip_b3_sign negates one extracted constant.
enum class FaultInjection { none, flip_b3_sign };

FaultInjection fault_from_string(const std::string& s);
std::string fault_to_string(FaultInjection f);

struct VerifyConfig {
    std::size_t max_dense = 1'000'000;  // amplitude cap for oracle expansions
    int max_rho2_dim = 676;             // dense two-party work capped at d = 26
    double slack = 0.02;                // finite-d slack on the asymptotic 1/2
    int threads = 1;
    FaultInjection fault = FaultInjection::none;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    long cases = 0;
    double max_deviation = 0;
    double tolerance = 0;
    std::string detail;  // worst case label and any informational notes
};

struct VerifyReport {
    VerifyConfig config;
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
    nlohmann::json json() const;
};

VerifyReport run_verification(const VerifyConfig& cfg = {});

} // namespace pssmfa
