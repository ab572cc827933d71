#include <doctest.h>

#include "pssmfa/pss.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

RunResult run_shell(const std::string& cmd_line) {
    const std::string cmd = cmd_line + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        res.output.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

RunResult run_cli(const std::string& args) {
    return run_shell(std::string(PSSMFA_CLI_PATH) + " " + args);
}

double parse_f(const std::string& output, const std::string& method) {
    const std::size_t at = output.find(method + "  F = ");
    REQUIRE(at != std::string::npos);
    return std::atof(output.c_str() + at + method.size() + 6);
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("cli: enumerate lists diagrams with orbit sizes") {
    const RunResult r = run_cli("enumerate --n 4 --d 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("diagrams with 4 blocks on 2 sites: 3") != std::string::npos);

    const RunResult r2 = run_cli("enumerate --n 3 --d 3");
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("2,1") != std::string::npos);
    CHECK(r2.output.find("18") != std::string::npos);

    const RunResult j = run_cli("enumerate --n 3 --d 3 --format json");
    CHECK(j.exit_code == 0);
    const nlohmann::json parsed = nlohmann::json::parse(j.output);
    REQUIRE(parsed.at("diagrams").size() == 3);
    CHECK(parsed.at("diagrams")[1].at("diagram") == "2,1");
    CHECK(parsed.at("diagrams")[1].at("orbit_size") == "18");
    CHECK(parsed.at("diagrams")[2].at("isolated") == true);
}

TEST_CASE("cli: usage errors exit with code 2") {
    CHECK(run_cli("enumerate --n 0 --d 3").exit_code == 2);
    CHECK(run_cli("enumerate --d 3").exit_code == 2);
    CHECK(run_cli("fidelity --diagram 2,1").exit_code == 2);          // missing --d
    CHECK(run_cli("fidelity --diagram 2,1 --n 5 --d 3").exit_code == 2);
    CHECK(run_cli("scan --n 4 --k 2 --d 3 --method dense").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("scan").exit_code == 2);  // empty case list
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: fidelity table shows all methods side by side") {
    const RunResult r = run_cli("fidelity --diagram 1,1 --d 2");
    CHECK(r.exit_code == 0);
    CHECK(parse_f(r.output, "oracle") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(parse_f(r.output, "params") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(parse_f(r.output, "closed") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.output.find("1/4") != std::string::npos);
    CHECK(r.output.find("max pairwise |diff|") != std::string::npos);
    CHECK(r.output.find("party-symmetry deviation") != std::string::npos);

    const RunResult big = run_cli("fidelity --diagram 2,2,2 --n 6 --d 30 --method params");
    CHECK(big.exit_code == 0);
    CHECK(parse_f(big.output, "params") <= 0.52);
}

TEST_CASE("cli: fidelity skip handling and exit codes") {
    // non-rectangle, closed only: nothing runs, usage-class failure
    const RunResult none = run_cli("fidelity --diagram 2,1 --d 3 --method closed");
    CHECK(none.exit_code == 2);
    CHECK(none.output.find("closed forms cover rectangles only") != std::string::npos);

    // oracle blocked by the amplitude budget only
    const RunResult blocked =
        run_cli("fidelity --n 8 --k 2 --d 12 --method oracle --max-dense 1000");
    CHECK(blocked.exit_code == 3);
    CHECK(blocked.output.find("dense expansion over budget") != std::string::npos);

    // mixed: oracle skips, params still answers, so overall success
    const RunResult mixed = run_cli("fidelity --n 8 --k 2 --d 12 --max-dense 1000");
    CHECK(mixed.exit_code == 0);
    CHECK(mixed.output.find("skipped: dense expansion over budget") != std::string::npos);
    CHECK(parse_f(mixed.output, "params") > 0);
}

TEST_CASE("cli: fidelity reads a state file and reports symmetry deviations") {
    const auto path = temp_file("pssmfa_cli_state.json");
    {
        const auto diagrams = pssmfa::enumerate_diagrams(4, 3);
        std::vector<pssmfa::Complex> coeff(diagrams.size());
        coeff[0] = {0.6, 0.0};
        coeff[1] = {0.0, 0.8};
        const pssmfa::PSSState psi = pssmfa::PSSState::make_normalized(4, 3, coeff);
        std::ofstream f(path);
        f << pssmfa::state_to_json(psi).dump();
    }
    const RunResult r = run_cli("fidelity --state " + path.string() + " --method oracle");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("party-symmetry deviation") != std::string::npos);
    CHECK(r.output.find("site-symmetry deviation") != std::string::npos);
    const double f_oracle = parse_f(r.output, "oracle");
    CHECK(f_oracle > 0);
    CHECK(f_oracle < 1);

    const RunResult j =
        run_cli("fidelity --state " + path.string() + " --format json");
    CHECK(j.exit_code == 0);
    const nlohmann::json parsed = nlohmann::json::parse(j.output);
    CHECK(parsed.at("rows").size() == 3);
    CHECK(parsed.at("party_symmetry_deviation").get<double>() < 1e-12);
    CHECK(parsed.at("rows")[2].at("skip_reason") ==
          "closed forms cover single rectangles only");
    std::filesystem::remove(path);
}

TEST_CASE("cli: scan writes deterministic csv and honors --out") {
    const std::string args = "scan --n 2,4,6 --k 1,2 --d 3,5 --max-dense 5000";
    const RunResult one = run_cli(args + " --threads 1");
    CHECK(one.exit_code == 0);
    CHECK(one.output.rfind("n,d,k_or_diagram,method,F,exact_expr,clipped_mass,runtime_ms\n",
                           0) == 0);
    const RunResult four = run_cli(args + " --threads 4");
    CHECK(four.output == one.output);
    const RunResult env =
        run_shell("PSSMFA_THREADS=4 " + std::string(PSSMFA_CLI_PATH) + " " + args);
    CHECK(env.exit_code == 0);
    CHECK(env.output == one.output);

    const auto out = temp_file("pssmfa_cli_scan.csv");
    const RunResult to_file = run_cli(args + " --out " + out.string());
    CHECK(to_file.exit_code == 0);
    std::ifstream f(out);
    std::stringstream written;
    written << f.rdbuf();
    CHECK(written.str() == one.output);
    std::filesystem::remove(out);

    CHECK(run_cli("scan --n 4 --k 2 --d 3 --out /nonexistent-dir/x.csv").exit_code == 2);
}

TEST_CASE("cli: scan config file mirrors flags and flags win") {
    const auto cfg = temp_file("pssmfa_cli_cfg.json");
    {
        std::ofstream f(cfg);
        f << R"({"n":[4],"k":[2],"d":[3],"method":"closed","format":"json"})";
    }
    const RunResult from_cfg = run_cli("scan --config " + cfg.string());
    CHECK(from_cfg.exit_code == 0);
    const nlohmann::json parsed = nlohmann::json::parse(from_cfg.output);
    REQUIRE(parsed.at("rows").size() == 1);
    CHECK(parsed.at("rows")[0].at("exact_expr") == "50/81");

    // the flag overrides the file's method
    const RunResult overridden =
        run_cli("scan --config " + cfg.string() + " --method params");
    const nlohmann::json parsed2 = nlohmann::json::parse(overridden.output);
    REQUIRE(parsed2.at("rows").size() == 1);
    CHECK(parsed2.at("rows")[0].at("method") == "params");
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: verify passes on a reduced budget and fails under the fault fixture") {
    const auto report = temp_file("pssmfa_cli_verify.json");
    const RunResult ok = run_cli("verify --max-dense 20000 --max-rho2-dim 64 --json " +
                                 report.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("PASS  criterion 1") != std::string::npos);
    CHECK(ok.output.find("all 9 criteria passed") != std::string::npos);
    CHECK(ok.output.find("FAIL") == std::string::npos);
    std::ifstream f(report);
    const nlohmann::json parsed = nlohmann::json::parse(f);
    CHECK(parsed.at("all_passed") == true);
    CHECK(parsed.at("criteria").size() == 9);
    std::filesystem::remove(report);

    const RunResult bad = run_cli(
        "verify --max-dense 7000 --max-rho2-dim 16 --inject-fault flip-b3-sign");
    CHECK(bad.exit_code == 4);
    CHECK(bad.output.find("FAIL  criterion 4") != std::string::npos);
    CHECK(bad.output.find("verification failed") != std::string::npos);
}
