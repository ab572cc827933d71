// Batch fidelity evaluation over rectangles, explicit diagrams or one
// superposition, with deterministic CSV/JSON output: identical inputs give
// byte-identical files at any thread count.
#pragma once

#include "pssmfa/fidelity.hpp"

#include <optional>
#include <string>

namespace pssmfa {

enum class Method { oracle, params, closed, all };

Method method_from_string(const std::string& s);
std::string method_to_string(Method m);

/// Case grid for run_scan.  Exactly one of the three sources is used, in
/// this priority: state, diagrams x d, n x k x d rectangles (combinations
/// with k not dividing n or k > d are dropped during expansion).
struct ScanSpec {
    std::vector<int> n;
    std::vector<int> k;
    std::vector<int> d;
    std::vector<YoungDiagram> diagrams;
    std::optional<PSSState> state;
    Method method = Method::all;
    int threads = 1;
    OracleBudget budget{1'000'000};
    /// Real wall times in runtime_ms when set; 0 otherwise so that output
    /// stays byte-deterministic.
    bool timing = false;
};

struct ScanRow {
    int n = 0;
    int d = 0;
    std::string k_or_diagram;
    std::string method;
    double F = 0;
    std::string exact_expr;  // closed form only
    double clipped_mass = 0;
    long runtime_ms = 0;
    /// Set when the method does not apply to the case; such rows appear in
    /// the JSON report but are left out of the CSV (its schema is pinned).
    std::string skip_reason;

    bool skipped() const { return !skip_reason.empty(); }
};

struct ScanResult {
    std::vector<ScanRow> rows;  // case-major order, stable across threads

    std::string csv() const;
    nlohmann::json json() const;
};

ScanResult run_scan(const ScanSpec& spec);

} // namespace pssmfa
