#include "pssmfa/pss.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pssmfa {

namespace {

std::size_t checked_dim(int n, int d, const OracleBudget& budget, const char* what) {
    BigInt dim = boost::multiprecision::pow(BigInt(d), n);
    if (dim > budget.max_amplitudes)
        throw ResourceError(std::string(what) + " needs " + dim.str() +
                            " amplitudes, over the budget of " +
                            std::to_string(budget.max_amplitudes));
    return dim.convert_to<std::size_t>();
}

// All ways to pick run counts of distinct sites per cluster; calls f with
// the finished occupancy vector.
void for_each_occupancy(const std::vector<Run>& clusters, int d,
                        const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> occ(d, 0);
    std::vector<int> free_sites(d);
    std::iota(free_sites.begin(), free_sites.end(), 0);

    auto rec = [&](auto&& self, std::size_t q) -> void {
        if (q == clusters.size()) {
            f(occ);
            return;
        }
        const int need = clusters[q].count;
        std::vector<int> pick(need);
        auto choose = [&](auto&& chooser, int start, int got) -> void {
            if (got == need) {
                for (int s : pick) occ[s] = clusters[q].length;
                std::vector<int> saved;
                saved.reserve(free_sites.size() - need);
                for (int s : free_sites)
                    if (occ[s] == 0) saved.push_back(s);
                std::swap(saved, free_sites);
                self(self, q + 1);
                std::swap(saved, free_sites);
                for (int s : pick) occ[s] = 0;
                return;
            }
            for (int i = start; i <= (int)free_sites.size() - (need - got); ++i) {
                pick[got] = free_sites[i];
                chooser(chooser, i + 1, got + 1);
            }
        };
        choose(choose, 0, 0);
    };
    rec(rec, 0);
}

} // namespace

double DenseState::norm() const {
    double s = 0;
    for (const Complex& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

PSSState::PSSState(int n, int d, std::vector<Complex> coeff) {
    n_ = n;
    d_ = d;
    diagrams_ = enumerate_diagrams(n, d);
    if (coeff.size() != diagrams_.size())
        throw std::invalid_argument("expected " + std::to_string(diagrams_.size()) +
                                    " coefficients for n=" + std::to_string(n) +
                                    ", d=" + std::to_string(d) + ", got " +
                                    std::to_string(coeff.size()));
    double s = 0;
    for (const Complex& c : coeff) s += std::norm(c);
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("coefficients have squared norm " +
                                    std::to_string(s) + ", expected 1");
    coeff_ = std::move(coeff);
}

PSSState PSSState::make_normalized(int n, int d, std::vector<Complex> coeff,
                                   double* factor) {
    PSSState out;
    out.n_ = n;
    out.d_ = d;
    out.diagrams_ = enumerate_diagrams(n, d);
    if (coeff.size() != out.diagrams_.size())
        throw std::invalid_argument("expected " + std::to_string(out.diagrams_.size()) +
                                    " coefficients, got " + std::to_string(coeff.size()));
    double s = 0;
    for (const Complex& c : coeff) s += std::norm(c);
    if (s <= 0)
        throw std::invalid_argument("cannot normalize an all-zero coefficient vector");
    const double scale = 1.0 / std::sqrt(s);
    for (Complex& c : coeff) c *= scale;
    if (factor) *factor = scale;
    out.coeff_ = std::move(coeff);
    return out;
}

PSSState PSSState::single(const YoungDiagram& y, int d) {
    auto all = enumerate_diagrams(y.blocks(), d);
    std::vector<Complex> coeff(all.size(), Complex(0, 0));
    auto it = std::find(all.begin(), all.end(), y);
    if (it == all.end())
        throw std::domain_error("diagram " + format_diagram(y) + " is not valid for d=" +
                                std::to_string(d));
    coeff[it - all.begin()] = Complex(1, 0);
    PSSState out;
    out.n_ = y.blocks();
    out.d_ = d;
    out.diagrams_ = std::move(all);
    out.coeff_ = std::move(coeff);
    return out;
}

DenseState expand_basis_element(const YoungDiagram& y, int d, const OracleBudget& budget) {
    const int n = y.blocks();
    if (y.row_count() > d)
        throw std::domain_error("diagram has more rows than sites");
    DenseState out;
    out.n = n;
    out.d = d;
    out.amp.assign(checked_dim(n, d, budget, "dense expansion"), Complex(0, 0));

    const double a = 1.0 / std::sqrt(to_double(normalization_constant(y, d)));
    for_each_occupancy(runs(y).runs, d, [&](const std::vector<int>& occ) {
        std::vector<int> str;
        str.reserve(n);
        for (int site = 0; site < d; ++site)
            str.insert(str.end(), occ[site], site);
        do {
            std::size_t idx = 0;
            for (int s : str) idx = idx * d + s;
            out.amp[idx] = Complex(a, 0);
        } while (std::next_permutation(str.begin(), str.end()));
    });
    return out;
}

DenseState expand_state(const PSSState& psi, const OracleBudget& budget) {
    DenseState out;
    out.n = psi.n();
    out.d = psi.d();
    out.amp.assign(checked_dim(psi.n(), psi.d(), budget, "dense expansion"),
                   Complex(0, 0));
    for (std::size_t i = 0; i < psi.diagrams().size(); ++i) {
        const Complex c = psi.coefficients()[i];
        if (c == Complex(0, 0)) continue;
        DenseState basis = expand_basis_element(psi.diagrams()[i], psi.d(), budget);
        for (std::size_t j = 0; j < out.amp.size(); ++j) out.amp[j] += c * basis.amp[j];
    }
    return out;
}

DenseState uniform_product_state(int n, int d, const OracleBudget& budget) {
    DenseState out;
    out.n = n;
    out.d = d;
    const std::size_t dim = checked_dim(n, d, budget, "product-state expansion");
    out.amp.assign(dim, Complex(std::pow((double)d, -0.5 * n), 0));
    return out;
}

double check_party_symmetry(const DenseState& s) {
    const int n = s.n, d = s.d;
    double worst = 0;
    std::size_t stride = 1;  // d^(n-2-pos) while walking adjacent pairs
    for (int pos = n - 2; pos >= 0; --pos) {
        // swap parties pos and pos+1: indices differ by digit exchange
        for (std::size_t idx = 0; idx < s.amp.size(); ++idx) {
            const int hi = (int)(idx / (stride * d)) % d;
            const int lo = (int)(idx / stride) % d;
            if (hi >= lo) continue;  // each unordered pair once
            const std::size_t swapped = idx + (std::size_t)(lo - hi) * stride * (d - 1);
            worst = std::max(worst, std::abs(s.amp[idx] - s.amp[swapped]));
        }
        stride *= d;
    }
    return worst;
}

double check_site_symmetry(const DenseState& s) {
    const int n = s.n, d = s.d;
    double worst = 0;
    for (int t = 0; t + 1 < d; ++t) {
        // relabel sites t <-> t+1 in every party slot
        for (std::size_t idx = 0; idx < s.amp.size(); ++idx) {
            std::size_t rest = idx, mapped = 0, place = 1;
            for (int j = n - 1; j >= 0; --j) {
                int digit = (int)(rest % d);
                rest /= d;
                if (digit == t)
                    digit = t + 1;
                else if (digit == t + 1)
                    digit = t;
                mapped += (std::size_t)digit * place;
                place *= d;
            }
            worst = std::max(worst, std::abs(s.amp[idx] - s.amp[mapped]));
        }
    }
    return worst;
}

nlohmann::json state_to_json(const PSSState& psi) {
    nlohmann::json amps = nlohmann::json::array();
    for (std::size_t i = 0; i < psi.diagrams().size(); ++i) {
        const Complex c = psi.coefficients()[i];
        if (c == Complex(0, 0)) continue;
        amps.push_back({{"diagram", format_diagram(psi.diagrams()[i])},
                        {"re", c.real()},
                        {"im", c.imag()}});
    }
    return {{"n", psi.n()}, {"d", psi.d()}, {"amplitudes", std::move(amps)}};
}

PSSState state_from_json(const nlohmann::json& j, double* factor) {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    auto all = enumerate_diagrams(n, d);
    std::vector<Complex> coeff(all.size(), Complex(0, 0));
    std::vector<bool> seen(all.size(), false);
    for (const auto& entry : j.at("amplitudes")) {
        YoungDiagram y = parse_diagram(entry.at("diagram").get<std::string>());
        auto it = std::find(all.begin(), all.end(), y);
        if (it == all.end())
            throw std::invalid_argument("diagram " + format_diagram(y) +
                                        " does not have " + std::to_string(n) +
                                        " blocks in at most " + std::to_string(d) +
                                        " rows");
        const std::size_t i = it - all.begin();
        if (seen[i])
            throw std::invalid_argument("diagram " + format_diagram(y) +
                                        " listed twice");
        seen[i] = true;
        coeff[i] = Complex(entry.value("re", 0.0), entry.value("im", 0.0));
    }
    return PSSState::make_normalized(n, d, std::move(coeff), factor);
}

} // namespace pssmfa
