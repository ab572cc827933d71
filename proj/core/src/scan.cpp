#include "pssmfa/scan.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace pssmfa {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const std::string& s) {
    if (s.find(',') == std::string::npos) return s;
    return "\"" + s + "\"";
}

std::optional<int> rectangle_rows(const YoungDiagram& y) {
    const auto& rows = y.rows();
    for (int r : rows)
        if (r != rows.front()) return std::nullopt;
    return static_cast<int>(rows.size());
}

// the oracle expands d^n amplitudes and then holds a d^2 x d^2 pair matrix,
// so both must fit the amplitude budget
bool within_dense_budget(int n, int d, const OracleBudget& budget) {
    BigInt dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= d;
        if (dim > budget.max_amplitudes) return false;
    }
    const BigInt pair_dim = BigInt(d) * d * d * d;
    return pair_dim <= budget.max_amplitudes;
}

struct Task {
    int n = 0;
    int d = 0;
    std::optional<int> k;                  // rectangle cases
    std::optional<YoungDiagram> diagram;   // explicit diagram cases
    bool is_state = false;
    std::string label;
    Method method = Method::oracle;
};

void compute_row(const Task& t, const ScanSpec& spec, ScanRow& row) {
    row.n = t.n;
    row.d = t.d;
    row.k_or_diagram = t.label;
    row.method = method_to_string(t.method);

    const auto start = std::chrono::steady_clock::now();
    double clipped = 0;
    switch (t.method) {
        case Method::oracle: {
            if (!within_dense_budget(t.n, t.d, spec.budget)) {
                row.skip_reason = "dense expansion over budget";
                return;
            }
            const PSSState psi = t.is_state
                                     ? *spec.state
                                     : PSSState::single(t.diagram ? *t.diagram
                                                                  : YoungDiagram(std::vector<int>(
                                                                        static_cast<std::size_t>(*t.k),
                                                                        t.n / *t.k)),
                                                        t.d);
            row.F = mfa_fidelity_oracle(psi, spec.budget, &clipped);
            break;
        }
        case Method::params: {
            StateRho sr;
            if (t.is_state) {
                sr = state_rho_params(*spec.state);
            } else if (t.diagram) {
                const ExactRhoParams p = diagram_rho_params(*t.diagram, t.d);
                sr = {p.rho1(), p.rho2()};
            } else {
                const ExactRhoParams p = rectangular_rho_params(t.n, *t.k, t.d);
                sr = {p.rho1(), p.rho2()};
            }
            row.F = mfa_fidelity_params(sr.rho1, sr.rho2, &clipped);
            break;
        }
        case Method::closed: {
            std::optional<int> k = t.k;
            if (t.is_state) {
                row.skip_reason = "closed forms cover single rectangles only";
                return;
            }
            if (t.diagram) k = rectangle_rows(*t.diagram);
            if (!k) {
                row.skip_reason = "closed forms cover rectangles only";
                return;
            }
            if (*k == t.n && t.d != t.n) {
                row.skip_reason = "no closed form at k = n < d";
                return;
            }
            const ExactFidelity f = closed_form_rect_fidelity(t.n, *k, t.d);
            row.F = f.value();
            row.exact_expr = f.str();
            break;
        }
        case Method::all:
            throw std::logic_error("unexpanded method selector");
    }
    row.clipped_mass = clipped;
    if (spec.timing) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        row.runtime_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    }
}

} // namespace

Method method_from_string(const std::string& s) {
    if (s == "oracle") return Method::oracle;
    if (s == "params") return Method::params;
    if (s == "closed") return Method::closed;
    if (s == "all") return Method::all;
    throw std::invalid_argument("unknown method '" + s + "'");
}

std::string method_to_string(Method m) {
    switch (m) {
        case Method::oracle: return "oracle";
        case Method::params: return "params";
        case Method::closed: return "closed";
        case Method::all: return "all";
    }
    throw std::logic_error("bad method value");
}

ScanResult run_scan(const ScanSpec& spec) {
    std::vector<Method> methods;
    if (spec.method == Method::all)
        methods = {Method::oracle, Method::params, Method::closed};
    else
        methods = {spec.method};

    std::vector<Task> tasks;
    const auto push_case = [&tasks, &methods](Task base) {
        for (Method m : methods) {
            base.method = m;
            tasks.push_back(base);
        }
    };
    if (spec.state) {
        Task t;
        t.n = spec.state->n();
        t.d = spec.state->d();
        t.is_state = true;
        t.label = "state";
        push_case(t);
    } else if (!spec.diagrams.empty()) {
        for (const YoungDiagram& y : spec.diagrams)
            for (int d : spec.d) {
                if (static_cast<int>(y.rows().size()) > d) continue;
                Task t;
                t.n = y.blocks();
                t.d = d;
                t.diagram = y;
                t.label = format_diagram(y);
                push_case(t);
            }
    } else {
        for (int n : spec.n)
            for (int k : spec.k) {
                if (k < 1 || n % k != 0) continue;
                for (int d : spec.d) {
                    if (k > d) continue;
                    Task t;
                    t.n = n;
                    t.d = d;
                    t.k = k;
                    t.label = std::to_string(k);
                    push_case(t);
                }
            }
    }
    if (tasks.empty()) throw std::invalid_argument("scan needs at least one case");

    ScanResult result;
    result.rows.resize(tasks.size());
    const int threads = std::max(1, spec.threads);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_guard;
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                compute_row(tasks[i], spec, result.rows[i]);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_guard);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::string ScanResult::csv() const {
    std::string out = "n,d,k_or_diagram,method,F,exact_expr,clipped_mass,runtime_ms\n";
    for (const ScanRow& r : rows) {
        if (r.skipped()) continue;
        out += std::to_string(r.n) + ',' + std::to_string(r.d) + ',' +
               csv_cell(r.k_or_diagram) + ',' + r.method + ',' + format_double(r.F) +
               ',' + r.exact_expr + ',' + format_double(r.clipped_mass) + ',' +
               std::to_string(r.runtime_ms) + '\n';
    }
    return out;
}

nlohmann::json ScanResult::json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const ScanRow& r : rows) {
        nlohmann::json row = {{"n", r.n},
                              {"d", r.d},
                              {"k_or_diagram", r.k_or_diagram},
                              {"method", r.method}};
        if (r.skipped()) {
            row["skip_reason"] = r.skip_reason;
        } else {
            row["F"] = r.F;
            row["exact_expr"] = r.exact_expr;
            row["clipped_mass"] = r.clipped_mass;
            row["runtime_ms"] = r.runtime_ms;
        }
        rows_json.push_back(std::move(row));
    }
    return nlohmann::json{{"rows", std::move(rows_json)}};
}

} // namespace pssmfa
