#include "pssmfa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pssmfa {

namespace {

int overlap_size(int i, int j, int k, int l) {
    return (i == k || i == l ? 1 : 0) + (j == k || j == l ? 1 : 0);
}

double nearest_gap(const std::vector<double>& spectrum, double target) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : spectrum) best = std::min(best, std::abs(v - target));
    return best;
}

} // namespace

HermitianMatrix rho_pair_minor(const Rho2Params& p) {
    const int d = p.d;
    if (d < 2) throw std::invalid_argument("need at least two sites");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(d) * (d - 1));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) pairs.emplace_back(i, j);
    const Eigen::Index dim = static_cast<Eigen::Index>(pairs.size());
    HermitianMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const auto [i, j] = pairs[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto [k, l] = pairs[static_cast<std::size_t>(c)];
            switch (overlap_size(i, j, k, l)) {
                case 2: m(r, c) = p.C_pair; break;
                case 1: m(r, c) = p.B3; break;
                default: m(r, c) = p.B1; break;
            }
        }
    }
    return m;
}

MinorSpectrumReport minor_eigenvalues(const Rho2Params& p) {
    const int d = p.d;
    MinorSpectrumReport rep;
    rep.lambda1 = 2 * p.C_pair + 4 * (d - 2) * p.B3 + (d - 2.0) * (d - 3.0) * p.B1;
    const Eigen::VectorXd ev = hermitian_eigen(rho_pair_minor(p));
    rep.spectrum.assign(ev.data(), ev.data() + ev.size());
    std::sort(rep.spectrum.begin(), rep.spectrum.end(), std::greater<>());
    rep.positivity_margin = rep.spectrum.back();
    rep.lambda1_residual = nearest_gap(rep.spectrum, rep.lambda1);
    if (d >= 4) {
        rep.lambda2 = 2 * p.C_pair + 2 * (d - 4) * p.B3 - 2 * (d - 3.0) * p.B1;
        rep.lambda2_residual = nearest_gap(rep.spectrum, *rep.lambda2);
    }
    return rep;
}

BConstraintReport b_constraint_report(const Rho2Params& p) {
    BConstraintReport rep;
    rep.d = p.d;
    const double cc = p.C_same * p.C_pair;
    const double pp = p.C_pair * p.C_pair;
    const auto add = [&rep](std::string name, double mag2, double rhs) {
        // tiny slack: both sides come from floating-point extraction
        const bool ok = mag2 <= rhs + 1e-12 * (1 + std::abs(rhs));
        rep.minors.push_back({std::move(name), mag2, rhs, ok});
    };
    add("B1", p.B1 * p.B1, pp);
    add("B2", std::norm(p.B2), cc);
    add("B3", p.B3 * p.B3, pp);
    add("B4", p.B4 * p.B4, p.C_same * p.C_same);
    add("B5", std::norm(p.B5), cc);
    rep.all_satisfied = std::all_of(rep.minors.begin(), rep.minors.end(),
                                    [](const auto& m) { return m.satisfied; });

    const double dd = p.d;
    const auto scale = [&rep, dd](std::string name, double alpha, double mag) {
        rep.scales.push_back({std::move(name), alpha, mag * std::pow(dd, alpha)});
    };
    scale("B1", 2.0, std::abs(p.B1));
    scale("B2", 1.5, std::abs(p.B2));
    scale("B3", 2.0, std::abs(p.B3));
    scale("B3", 2.5, std::abs(p.B3));  // the tighter decay implied by flat rho1
    scale("B4", 1.0, std::abs(p.B4));
    scale("B5", 1.5, std::abs(p.B5));
    return rep;
}

double sqrtM_diag_bound(const Rho1Params& p1, const Rho2Params& p2, double c, int d_min) {
    if (p1.d != p2.d) throw std::invalid_argument("parameter dimensions disagree");
    const int d = p1.d;
    if (d < d_min)
        throw std::domain_error("bound hypothesis needs d >= " + std::to_string(d_min));
    if (std::abs(p1.A) * d * d > c)
        throw std::domain_error("bound hypothesis needs |A| <= c/d^2");
    if (p2.C_same < 0 || p2.C_pair < 0)
        throw std::domain_error("diagonal entries of a state cannot be negative");
    const double root = std::sqrt(p2.C_same) + d * std::sqrt(p2.C_pair / 2);
    return root * root;
}

BoundReport half_bound_check(const PSSState& psi, int d_min) {
    BoundReport rep;
    rep.n = psi.n();
    rep.d = psi.d();
    const ADecomposition a = A_superposition(psi);
    rep.A_total = a.total;
    rep.A_single_sum = a.single_sum();
    rep.A_cross_sum = a.cross_sum();

    const auto& diagrams = psi.diagrams();
    const auto& coeff = psi.coefficients();
    rep.no_isolated_support = true;
    int max_rows = 0;
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        if (coeff[i] == Complex(0, 0)) continue;
        if (has_isolated_particles(diagrams[i])) rep.no_isolated_support = false;
        max_rows = std::max(max_rows, static_cast<int>(diagrams[i].rows().size()));
    }
    rep.d_large = rep.d >= d_min;
    rep.d_beats_n = rep.d >= 10.0 * rep.n * std::sqrt(static_cast<double>(rep.n));
    rep.a_scale = std::abs(rep.A_total) * rep.d * rep.d;
    rep.a_scale_cap = 2.0 * max_rows;
    rep.a_within_cap = rep.a_scale <= rep.a_scale_cap + 1e-9;

    const StateRho sr = state_rho_params(psi);
    rep.measured_F = mfa_fidelity_params(sr.rho1, sr.rho2);
    rep.asserted = rep.no_isolated_support && rep.d_large && rep.a_within_cap;
    return rep;
}

int compatibility_count_bound(int n) {
    if (n < 2) throw std::invalid_argument("need at least two blocks");
    const std::vector<YoungDiagram> all = enumerate_diagrams(n, n);
    int best = 0;
    for (const YoungDiagram& y : all) {
        int count = 0;
        for (const YoungDiagram& z : all)
            if (!(y == z) && compatibility(y, z)) ++count;
        best = std::max(best, count);
    }
    return best;
}

} // namespace pssmfa
