#include <doctest.h>

#include "pssmfa/bounds.hpp"

#include <cmath>
#include <random>

using namespace pssmfa;

namespace {

std::vector<YoungDiagram> no_isolated_diagrams(int n, int d) {
    std::vector<YoungDiagram> out;
    for (const YoungDiagram& y : enumerate_diagrams(n, d))
        if (!has_isolated_particles(y)) out.push_back(y);
    return out;
}

} // namespace

TEST_CASE("pair minor placement") {
    Rho2Params p;
    p.d = 2;
    p.C_pair = 0.25;
    const HermitianMatrix m2 = rho_pair_minor(p);
    REQUIRE(m2.rows() == 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(m2(r, c) == Complex(0.25, 0));

    p.d = 3;
    p.C_pair = 0.1;
    const HermitianMatrix m3 = rho_pair_minor(p);
    REQUIRE(m3.rows() == 6);
    // ordered pairs (0,1),(0,2),(1,0),(1,2),(2,0),(2,1); with B1 = B3 = 0
    // only equal label sets survive
    CHECK(m3(0, 0) == Complex(0.1, 0));
    CHECK(m3(0, 2) == Complex(0.1, 0));  // (0,1) vs (1,0)
    CHECK(m3(0, 1) == Complex(0, 0));    // (0,1) vs (0,2) share one label
    CHECK(m3(1, 2) == Complex(0, 0));
    CHECK(m3.cwiseAbs().sum() == doctest::Approx(12 * 0.1));
}

TEST_CASE("pair minor equals the dense submatrix") {
    std::mt19937 rng(90125u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 4, d = 4;
    const auto diagrams = enumerate_diagrams(n, d);
    std::vector<Complex> coeff(diagrams.size());
    for (auto& c : coeff) c = Complex(gauss(rng), gauss(rng));
    const StateRho sr = state_rho_params(PSSState::make_normalized(n, d, coeff));

    const HermitianMatrix dense = rho2_dense_from_params(sr.rho2);
    const HermitianMatrix minor = rho_pair_minor(sr.rho2);
    std::vector<int> flat;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) flat.push_back(i * d + j);
    REQUIRE(minor.rows() == static_cast<Eigen::Index>(flat.size()));
    for (std::size_t r = 0; r < flat.size(); ++r)
        for (std::size_t c = 0; c < flat.size(); ++c)
            CHECK(std::abs(minor(r, c) - dense(flat[r], flat[c])) < 1e-15);
}

TEST_CASE("pair minor of a genuine state is positive semidefinite") {
    const ExactRhoParams p = diagram_rho_params(YoungDiagram({1, 1, 1}), 4);
    const Eigen::VectorXd ev = hermitian_eigen(rho_pair_minor(p.rho2()));
    CHECK(ev.minCoeff() >= -1e-12);
}

TEST_CASE("analytic minor eigenvalues sit in the numeric spectrum") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k <= n; ++k) {
            if (n % k != 0) continue;
            for (int d = std::max(4, k); d <= 8; ++d) {
                const ExactRhoParams p = rectangular_rho_params(n, k, d);
                const MinorSpectrumReport rep = minor_eigenvalues(p.rho2());
                REQUIRE(rep.spectrum.size() == static_cast<std::size_t>(d) * (d - 1));
                CHECK_MESSAGE(rep.lambda1_residual <= 1e-10, "n=", n, " k=", k, " d=", d);
                REQUIRE(rep.lambda2.has_value());
                CHECK_MESSAGE(rep.lambda2_residual <= 1e-10, "n=", n, " k=", k, " d=", d);
                CHECK(rep.positivity_margin >= -1e-12);
                CHECK(std::is_sorted(rep.spectrum.begin(), rep.spectrum.end(),
                                     std::greater<>()));
            }
        }
}

TEST_CASE("second eigenvalue is omitted below four sites") {
    const ExactRhoParams p3 = diagram_rho_params(YoungDiagram({2, 1}), 3);
    const MinorSpectrumReport rep3 = minor_eigenvalues(p3.rho2());
    CHECK(!rep3.lambda2.has_value());
    CHECK(rep3.lambda1_residual <= 1e-10);

    const ExactRhoParams p2 = diagram_rho_params(YoungDiagram({1, 1}), 2);
    const MinorSpectrumReport rep2 = minor_eigenvalues(p2.rho2());
    CHECK(!rep2.lambda2.has_value());
    REQUIRE(rep2.spectrum.size() == 2);
    CHECK(rep2.lambda1 == doctest::Approx(2 * p2.rho2().C_pair));
    CHECK(rep2.spectrum[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("both analytic eigenvalues collapse to 2 C_pair without B terms") {
    Rho2Params p;
    p.d = 4;
    p.C_pair = 1.0 / 12;
    const MinorSpectrumReport rep = minor_eigenvalues(p);
    CHECK(rep.lambda1 == doctest::Approx(2.0 / 12));
    REQUIRE(rep.lambda2.has_value());
    CHECK(*rep.lambda2 == doctest::Approx(2.0 / 12));
}

TEST_CASE("analytic minor eigenvalues on sampled positive parameter sets") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int d = 6;
    int accepted = 0, attempts = 0;
    while (accepted < 100 && attempts < 20000) {
        ++attempts;
        Rho2Params p;
        p.d = d;
        p.C_same = (0.5 + 0.5 * std::abs(u(rng))) / (d * d);
        p.C_pair = (1 - d * p.C_same) / (d * (d - 1.0));
        p.B1 = 0.4 * p.C_pair * u(rng);
        p.B3 = 0.4 * p.C_pair * u(rng);
        p.B4 = 0.4 * p.C_same * u(rng);
        const double s = std::sqrt(p.C_same * p.C_pair);
        p.B2 = 0.3 * s * Complex(u(rng), u(rng));
        p.B5 = 0.3 * s * Complex(u(rng), u(rng));
        const std::vector<double> full = rho2_spectrum_params(p);
        if (full.back() < 0) continue;  // keep genuine states only
        ++accepted;
        const MinorSpectrumReport rep = minor_eigenvalues(p);
        CHECK(rep.lambda1_residual <= 1e-10);
        REQUIRE(rep.lambda2.has_value());
        CHECK(rep.lambda2_residual <= 1e-10);
        CHECK(rep.positivity_margin >= -1e-12);
    }
    CHECK(accepted == 100);
}

TEST_CASE("positivity diagnostics for the off-diagonal constants") {
    const ExactRhoParams rect = rectangular_rho_params(6, 2, 5);
    const BConstraintReport rep = b_constraint_report(rect.rho2());
    CHECK(rep.all_satisfied);
    REQUIRE(rep.minors.size() == 5);
    for (const auto& m : rep.minors) CHECK_MESSAGE(m.satisfied, m.name);
    CHECK(rect.rho2().B2 == Complex(0, 0));
    CHECK(rect.rho2().B5 == Complex(0, 0));
    REQUIRE(rep.scales.size() == 6);  // B3 carries both decay exponents
    CHECK(rep.scales[2].name == "B3");
    CHECK(rep.scales[3].name == "B3");
    CHECK(rep.scales[2].alpha == doctest::Approx(2.0));
    CHECK(rep.scales[3].alpha == doctest::Approx(2.5));

    const ExactRhoParams two = diagram_rho_params(YoungDiagram({1, 1}), 4);
    CHECK(b_constraint_report(two.rho2()).all_satisfied);

    Rho2Params broken = rect.rho2();
    broken.B1 = 2 * broken.C_pair;  // beyond any positive 2x2 minor
    const BConstraintReport bad = b_constraint_report(broken);
    CHECK(!bad.all_satisfied);
    CHECK(bad.minors[0].name == "B1");
    CHECK(!bad.minors[0].satisfied);
    CHECK(bad.minors[2].satisfied);  // B3 untouched
}

TEST_CASE("diagonal square-root bound evaluates the two corner cases") {
    {
        // all weight on the same-site diagonal: bound is exactly 1/d
        const int d = 10;
        Rho2Params p2;
        p2.d = d;
        p2.C_same = 1.0 / d;
        CHECK(sqrtM_diag_bound(Rho1Params{d, 0.0}, p2) == doctest::Approx(1.0 / d));
    }
    {
        // all weight on distinct-site pairs: bound approaches 1/2 from above
        const int d = 1000;
        Rho2Params p2;
        p2.d = d;
        p2.C_pair = 1.0 / (static_cast<double>(d) * (d - 1));
        const double bound = sqrtM_diag_bound(Rho1Params{d, 0.0}, p2);
        CHECK(bound == doctest::Approx(d / (2.0 * (d - 1))).epsilon(1e-12));
        CHECK(bound > 0.5);
        CHECK(bound - 0.5 < 1e-3);
    }
}

TEST_CASE("diagonal square-root bound dominates the measured fidelity") {
    for (int n = 2; n <= 6; ++n)
        for (const YoungDiagram& y : no_isolated_diagrams(n, n))
            for (int d : {20, 30, 50}) {
                const ExactRhoParams p = diagram_rho_params(y, d);
                const double c = 2.0 * static_cast<double>(y.rows().size());
                const double bound = sqrtM_diag_bound(p.rho1(), p.rho2(), c);
                const double f = mfa_fidelity_params(p.rho1(), p.rho2());
                CHECK_MESSAGE(bound >= f - 1e-12, format_diagram(y), " d=", d,
                              " bound=", bound, " F=", f);
            }
}

TEST_CASE("diagonal square-root bound rejects out-of-hypothesis inputs") {
    Rho2Params p2;
    p2.d = 10;
    p2.C_same = 1.0 / 10;
    CHECK_THROWS_AS(sqrtM_diag_bound(Rho1Params{10, 0.1}, p2), std::domain_error);
    Rho2Params small = p2;
    small.d = 5;
    CHECK_THROWS_AS(sqrtM_diag_bound(Rho1Params{5, 0.0}, small), std::domain_error);
    CHECK(sqrtM_diag_bound(Rho1Params{5, 0.0}, small, 2.0, 2) ==
          doctest::Approx(small.C_same));  // low d allowed once d_min is lowered
    Rho2Params negative = p2;
    negative.C_pair = -1e-3;
    CHECK_THROWS_AS(sqrtM_diag_bound(Rho1Params{10, 0.0}, negative), std::domain_error);
    CHECK_THROWS_AS(sqrtM_diag_bound(Rho1Params{10, 0.0}, small), std::invalid_argument);
}

TEST_CASE("half cap report for a flat rectangle") {
    const BoundReport rep = half_bound_check(PSSState::single(YoungDiagram({2, 2}), 20));
    CHECK(rep.n == 4);
    CHECK(rep.d == 20);
    CHECK(std::abs(rep.A_total) < 1e-15);
    CHECK(rep.no_isolated_support);
    CHECK(rep.d_large);
    CHECK(!rep.d_beats_n);  // 20 < 10 * 4 * 2
    CHECK(rep.a_within_cap);
    CHECK(rep.asserted);
    CHECK(rep.measured_F <= 0.52);
    CHECK(std::abs(rep.A_total - rep.A_single_sum - rep.A_cross_sum) < 1e-12);
}

TEST_CASE("half cap report declines states with singly occupied sites") {
    const BoundReport rep = half_bound_check(PSSState::single(YoungDiagram({1, 1}), 10));
    CHECK(!rep.no_isolated_support);
    CHECK(!rep.asserted);
    CHECK(rep.measured_F > 0);  // still reported
}

namespace {

PSSState equal_mix(int n, int d, const YoungDiagram& a, const YoungDiagram& b) {
    const auto diagrams = enumerate_diagrams(n, d);
    std::vector<Complex> coeff(diagrams.size());
    for (std::size_t i = 0; i < diagrams.size(); ++i)
        if (diagrams[i] == a || diagrams[i] == b) coeff[i] = 1;
    return PSSState::make_normalized(n, d, coeff);
}

} // namespace

TEST_CASE("half cap report on two-diagram mixtures") {
    // children {[2,2,1]} and {[3,2]} are disjoint: no cross contribution
    {
        const BoundReport rep = half_bound_check(
            equal_mix(6, 30, YoungDiagram({2, 2, 2}), YoungDiagram({3, 3})));
        CHECK(rep.A_cross_sum == 0);
        CHECK(std::abs(rep.A_total - rep.A_single_sum) < 1e-15);
        CHECK(rep.no_isolated_support);
        CHECK(rep.measured_F <= 0.52);
    }
    // [4,2] and [3,3] share the child [3,2]: cross term present and the
    // total still matches the dense oracle
    {
        const PSSState psi = equal_mix(6, 4, YoungDiagram({4, 2}), YoungDiagram({3, 3}));
        const BoundReport rep = half_bound_check(psi);
        CHECK(rep.A_cross_sum != 0);
        const HermitianMatrix r1 = partial_trace(expand_state(psi), 1);
        const Rho1Params oracle = rho1_params_from_dense(r1);
        CHECK(std::abs(rep.A_total - oracle.A) < 1e-10);

        const BoundReport wide = half_bound_check(
            equal_mix(6, 50, YoungDiagram({4, 2}), YoungDiagram({3, 3})));
        CHECK(wide.a_within_cap);
        CHECK(wide.measured_F <= 0.52);
    }
}

TEST_CASE("largest compatible-partner count per block number") {
    CHECK(compatibility_count_bound(2) == 1);
    CHECK(compatibility_count_bound(3) == 2);
    CHECK(compatibility_count_bound(4) == 3);
    for (int n = 2; n <= 12; ++n) {
        const int bound = compatibility_count_bound(n);
        CHECK(bound >= 1);
        MESSAGE("n=", n, " max partners=", bound, " sqrt(n/2)=", std::sqrt(n / 2.0));
    }
    CHECK_THROWS_AS(compatibility_count_bound(1), std::invalid_argument);
}
