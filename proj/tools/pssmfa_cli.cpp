// Command-line driver: diagram enumeration, fidelity tables, parameter
// scans and the verification suite.
//
// Exit codes: 0 success, 2 usage error, 3 resource budget exceeded,
// 4 verification failure.
#include <CLI11.hpp>

#include "pssmfa/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pssmfa;

namespace {

int env_threads() {
    const char* v = std::getenv("PSSMFA_THREADS");
    if (!v) return 1;
    const int t = std::atoi(v);
    return t > 0 ? t : 1;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot write to '" + out_path + "'");
    f << text;
    if (!f.good()) throw std::invalid_argument("write to '" + out_path + "' failed");
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read '" + path + "'");
    nlohmann::json j;
    f >> j;
    return j;
}

std::string format_runs(const YoungDiagram& y) {
    std::string out;
    for (const Run& r : runs(y).runs) {
        if (!out.empty()) out += ' ';
        out += std::to_string(r.length) + "x" + std::to_string(r.count);
    }
    return out;
}

int cmd_enumerate(int n, int d, const std::string& format, const std::string& out_path) {
    const std::vector<YoungDiagram> diagrams = enumerate_diagrams(n, d);
    std::ostringstream text;
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const YoungDiagram& y : diagrams) {
            nlohmann::json run_list = nlohmann::json::array();
            for (const Run& r : runs(y).runs)
                run_list.push_back({{"length", r.length}, {"count", r.count}});
            rows.push_back({{"diagram", format_diagram(y)},
                            {"k", y.row_count()},
                            {"clusters", runs(y).cluster_count()},
                            {"runs", std::move(run_list)},
                            {"orbit_size", normalization_constant(y, d).str()},
                            {"isolated", has_isolated_particles(y)}});
        }
        text << nlohmann::json{{"n", n}, {"d", d}, {"diagrams", std::move(rows)}}.dump(2)
             << '\n';
    } else {
        std::size_t width = 7;
        for (const YoungDiagram& y : diagrams)
            width = std::max(width, format_diagram(y).size());
        text << "diagrams with " << n << " blocks on " << d << " sites: "
             << diagrams.size() << '\n';
        char head[160];
        std::snprintf(head, sizeof head, "%-*s  %2s  %2s  %-12s  %-14s  %s\n",
                      (int)width, "diagram", "k", "p", "runs", "orbit_size", "isolated");
        text << head;
        for (const YoungDiagram& y : diagrams) {
            char line[160];
            std::snprintf(line, sizeof line, "%-*s  %2d  %2d  %-12s  %-14s  %s\n",
                          (int)width, format_diagram(y).c_str(), y.row_count(),
                          runs(y).cluster_count(), format_runs(y).c_str(),
                          normalization_constant(y, d).str().c_str(),
                          has_isolated_particles(y) ? "yes" : "no");
            text << line;
        }
    }
    write_output(text.str(), out_path);
    return 0;
}

struct FidelityArgs {
    int n = 0, k = 0, d = 0;
    std::string diagram, state_path, method = "all", format = "table", out_path;
    double max_dense = 1'000'000;
};

int cmd_fidelity(const FidelityArgs& a) {
    ScanSpec spec;
    spec.method = method_from_string(a.method);
    spec.budget = OracleBudget{static_cast<std::size_t>(a.max_dense)};
    std::string case_label;
    if (!a.state_path.empty()) {
        spec.state = state_from_json(load_json_file(a.state_path));
        if (a.d > 0 && a.d != spec.state->d())
            throw std::invalid_argument("--d disagrees with the state file");
        case_label = "state from " + a.state_path + " (n=" +
                     std::to_string(spec.state->n()) + ", d=" +
                     std::to_string(spec.state->d()) + ")";
    } else if (!a.diagram.empty()) {
        const YoungDiagram y = parse_diagram(a.diagram);
        if (a.n > 0 && a.n != y.blocks())
            throw std::invalid_argument("--n disagrees with --diagram");
        if (a.d <= 0) throw std::invalid_argument("--diagram needs --d");
        spec.diagrams = {y};
        spec.d = {a.d};
        case_label = "diagram " + format_diagram(y) + " at d=" + std::to_string(a.d) +
                     " (n=" + std::to_string(y.blocks()) + ")";
    } else {
        if (a.n <= 0 || a.k <= 0 || a.d <= 0)
            throw std::invalid_argument(
                "give --state, --diagram --d, or a rectangle via --n --k --d");
        spec.n = {a.n};
        spec.k = {a.k};
        spec.d = {a.d};
        case_label = "rectangle n=" + std::to_string(a.n) + " k=" + std::to_string(a.k) +
                     " d=" + std::to_string(a.d);
    }
    const ScanResult res = run_scan(spec);

    // symmetry deviations of the dense expansion, when the oracle ran
    bool have_symmetry = false;
    double party_dev = 0, site_dev = 0;
    for (const ScanRow& r : res.rows)
        if (r.method == "oracle" && !r.skipped()) {
            const PSSState psi =
                spec.state ? *spec.state
                           : (spec.diagrams.empty()
                                  ? PSSState::single(
                                        YoungDiagram(std::vector<int>(
                                            static_cast<std::size_t>(a.k), a.n / a.k)),
                                        a.d)
                                  : PSSState::single(spec.diagrams[0], a.d));
            const DenseState dense = expand_state(psi, spec.budget);
            party_dev = check_party_symmetry(dense);
            site_dev = check_site_symmetry(dense);
            have_symmetry = true;
        }

    double max_diff = 0;
    int computed = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        if (res.rows[i].skipped()) continue;
        ++computed;
        for (std::size_t j = i + 1; j < res.rows.size(); ++j)
            if (!res.rows[j].skipped())
                max_diff = std::max(max_diff, std::abs(res.rows[i].F - res.rows[j].F));
    }

    std::ostringstream text;
    if (a.format == "json") {
        nlohmann::json j = res.json();
        j["case"] = case_label;
        if (computed > 1) j["max_pairwise_diff"] = max_diff;
        if (have_symmetry) {
            j["party_symmetry_deviation"] = party_dev;
            j["site_symmetry_deviation"] = site_dev;
        }
        text << j.dump(2) << '\n';
    } else {
        text << "case: " << case_label << '\n';
        for (const ScanRow& r : res.rows) {
            char line[256];
            if (r.skipped())
                std::snprintf(line, sizeof line, "%-7s skipped: %s\n", r.method.c_str(),
                              r.skip_reason.c_str());
            else
                std::snprintf(line, sizeof line, "%-7s F = %.17g%s%s   clipped %.3g\n",
                              r.method.c_str(), r.F, r.exact_expr.empty() ? "" : " = ",
                              r.exact_expr.c_str(), r.clipped_mass);
            text << line;
        }
        if (computed > 1) {
            char line[128];
            std::snprintf(line, sizeof line, "max pairwise |diff| = %.3g\n", max_diff);
            text << line;
        }
        if (have_symmetry) {
            char line[160];
            std::snprintf(line, sizeof line,
                          "party-symmetry deviation %.3g, site-symmetry deviation %.3g\n",
                          party_dev, site_dev);
            text << line;
        }
    }
    write_output(text.str(), a.out_path);

    if (computed == 0) {
        for (const ScanRow& r : res.rows)
            if (r.skip_reason == "dense expansion over budget") {
                std::cerr << "no method ran: " << r.skip_reason << '\n';
                return 3;
            }
        std::cerr << "no method applies to this case\n";
        return 2;
    }
    return 0;
}

struct ScanArgs {
    std::vector<int> n, k, d;
    std::vector<std::string> diagrams;
    std::string state_path, method = "all", format = "csv", out_path, config_path;
    int threads = env_threads();
    double max_dense = 1'000'000;
    bool timing = false;
};

// config file mirrors the flags; explicitly passed flags win
void apply_scan_config(ScanArgs& a, const CLI::App* cmd) {
    const nlohmann::json cfg = load_json_file(a.config_path);
    const auto given = [cmd](const char* flag) { return cmd->count(flag) > 0; };
    if (cfg.contains("n") && !given("--n")) a.n = cfg.at("n").get<std::vector<int>>();
    if (cfg.contains("k") && !given("--k")) a.k = cfg.at("k").get<std::vector<int>>();
    if (cfg.contains("d") && !given("--d")) a.d = cfg.at("d").get<std::vector<int>>();
    if (cfg.contains("diagram") && !given("--diagram"))
        a.diagrams = cfg.at("diagram").get<std::vector<std::string>>();
    if (cfg.contains("state") && !given("--state"))
        a.state_path = cfg.at("state").get<std::string>();
    if (cfg.contains("method") && !given("--method"))
        a.method = cfg.at("method").get<std::string>();
    if (cfg.contains("format") && !given("--format"))
        a.format = cfg.at("format").get<std::string>();
    if (cfg.contains("out") && !given("--out"))
        a.out_path = cfg.at("out").get<std::string>();
    if (cfg.contains("threads") && !given("--threads"))
        a.threads = cfg.at("threads").get<int>();
    if (cfg.contains("max_dense") && !given("--max-dense"))
        a.max_dense = cfg.at("max_dense").get<double>();
    if (cfg.contains("timing") && !given("--timing"))
        a.timing = cfg.at("timing").get<bool>();
}

int cmd_scan(const ScanArgs& a) {
    ScanSpec spec;
    spec.n = a.n;
    spec.k = a.k;
    spec.d = a.d;
    for (const std::string& s : a.diagrams) spec.diagrams.push_back(parse_diagram(s));
    if (!a.state_path.empty())
        spec.state = state_from_json(load_json_file(a.state_path));
    spec.method = method_from_string(a.method);
    spec.threads = a.threads;
    spec.budget = OracleBudget{static_cast<std::size_t>(a.max_dense)};
    spec.timing = a.timing;
    const ScanResult res = run_scan(spec);
    write_output(a.format == "json" ? res.json().dump(2) + "\n" : res.csv(), a.out_path);
    return 0;
}

struct VerifyArgs {
    double max_dense = 1'000'000;
    int max_rho2_dim = 676;
    double slack = 0.02;
    int threads = env_threads();
    std::string json_path, fault = "none", config_path;
};

void apply_verify_config(VerifyArgs& a, const CLI::App* cmd) {
    const nlohmann::json cfg = load_json_file(a.config_path);
    const auto given = [cmd](const char* flag) { return cmd->count(flag) > 0; };
    if (cfg.contains("max_dense") && !given("--max-dense"))
        a.max_dense = cfg.at("max_dense").get<double>();
    if (cfg.contains("max_rho2_dim") && !given("--max-rho2-dim"))
        a.max_rho2_dim = cfg.at("max_rho2_dim").get<int>();
    if (cfg.contains("slack") && !given("--slack"))
        a.slack = cfg.at("slack").get<double>();
    if (cfg.contains("threads") && !given("--threads"))
        a.threads = cfg.at("threads").get<int>();
}

int cmd_verify(const VerifyArgs& a) {
    VerifyConfig cfg;
    cfg.max_dense = static_cast<std::size_t>(a.max_dense);
    cfg.max_rho2_dim = a.max_rho2_dim;
    cfg.slack = a.slack;
    cfg.threads = a.threads;
    cfg.fault = fault_from_string(a.fault);
    const VerifyReport report = run_verification(cfg);
    for (const CriterionResult& c : report.criteria)
        std::printf("%s  criterion %d: %s  [%ld cases, max deviation %.3g, tolerance %.3g]%s%s\n",
                    c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.cases,
                    c.max_deviation, c.tolerance, c.detail.empty() ? "" : "  -- ",
                    c.detail.c_str());
    if (!a.json_path.empty()) write_output(report.json().dump(2) + "\n", a.json_path);
    if (report.all_passed()) {
        std::printf("all %zu criteria passed\n", report.criteria.size());
        return 0;
    }
    std::printf("verification failed\n");
    return 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"party-site-symmetric bosonic states: reduced density matrices "
                 "and mean-field fidelity"};
    app.require_subcommand(1);

    int en_n = 0, en_d = 0;
    std::string en_format = "table", en_out;
    CLI::App* enumerate = app.add_subcommand("enumerate", "list diagrams with n blocks on d sites");
    enumerate->add_option("--n", en_n, "number of blocks")->required()->check(CLI::PositiveNumber);
    enumerate->add_option("--d", en_d, "number of sites")->required()->check(CLI::PositiveNumber);
    enumerate->add_option("--format", en_format)->check(CLI::IsMember({"table", "json"}));
    enumerate->add_option("--out", en_out, "write to file instead of stdout");

    FidelityArgs fa;
    CLI::App* fid = app.add_subcommand("fidelity",
                                       "mean-field fidelity of one case, all methods side by side");
    fid->add_option("--n", fa.n, "blocks (rectangle case)");
    fid->add_option("--k", fa.k, "rows (rectangle case)");
    fid->add_option("--d", fa.d, "sites");
    fid->add_option("--diagram", fa.diagram, "explicit diagram, e.g. 3,1");
    fid->add_option("--state", fa.state_path, "superposition from a JSON file");
    fid->add_option("--method", fa.method)->check(CLI::IsMember({"oracle", "params", "closed", "all"}));
    fid->add_option("--max-dense", fa.max_dense, "amplitude budget for the dense oracle");
    fid->add_option("--format", fa.format)->check(CLI::IsMember({"table", "json"}));
    fid->add_option("--out", fa.out_path, "write to file instead of stdout");

    ScanArgs sa;
    CLI::App* scan = app.add_subcommand("scan", "batch fidelity sweep to CSV or JSON");
    scan->add_option("--n", sa.n, "block counts")->delimiter(',');
    scan->add_option("--k", sa.k, "row counts")->delimiter(',');
    scan->add_option("--d", sa.d, "site counts")->delimiter(',');
    scan->add_option("--diagram", sa.diagrams, "explicit diagrams (overrides --n/--k)");
    scan->add_option("--state", sa.state_path, "superposition JSON file (overrides everything)");
    scan->add_option("--method", sa.method)->check(CLI::IsMember({"oracle", "params", "closed", "all"}));
    scan->add_option("--threads", sa.threads, "worker threads (default PSSMFA_THREADS or 1)");
    scan->add_option("--max-dense", sa.max_dense, "amplitude budget for the dense oracle");
    scan->add_flag("--timing", sa.timing, "record wall times (breaks byte determinism)");
    scan->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--out", sa.out_path, "write to file instead of stdout");
    scan->add_option("--config", sa.config_path, "JSON file mirroring these flags; flags win");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
    verify->add_option("--max-dense", va.max_dense, "amplitude budget for dense oracles");
    verify->add_option("--max-rho2-dim", va.max_rho2_dim, "dense two-party matrix cap");
    verify->add_option("--slack", va.slack, "finite-d slack on the asymptotic bound");
    verify->add_option("--threads", va.threads, "worker threads for the scan criterion");
    verify->add_option("--json", va.json_path, "write the JSON report here");
    verify->add_option("--config", va.config_path, "JSON file mirroring these flags; flags win");
    verify->add_option("--inject-fault", va.fault)->group("");  // test fixture, hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (enumerate->parsed()) return cmd_enumerate(en_n, en_d, en_format, en_out);
        if (fid->parsed()) return cmd_fidelity(fa);
        if (scan->parsed()) {
            if (!sa.config_path.empty()) apply_scan_config(sa, scan);
            return cmd_scan(sa);
        }
        if (!va.config_path.empty()) apply_verify_config(va, verify);
        return cmd_verify(va);
    } catch (const ResourceError& e) {
        std::cerr << "resource budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
