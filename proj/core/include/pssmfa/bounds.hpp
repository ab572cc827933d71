// Positivity constraints on the pair-reduction constants, the eigenvalues
// of its off-diagonal minor, and the d^-2 machinery that caps the
// mean-field fidelity of states without singly occupied sites.
#pragma once

#include "pssmfa/fidelity.hpp"

#include <optional>
#include <string>

namespace pssmfa {

/// Principal submatrix of the two-party reduction on the ordered pairs
/// |ij>, i != j.  Entries depend only on the label sets: equal sets give
/// C_pair, one shared label gives B3, disjoint sets give B1.
HermitianMatrix rho_pair_minor(const Rho2Params& p);

struct MinorSpectrumReport {
    double lambda1 = 0;
    /// Its eigenvector needs a third and fourth site; omitted for d < 4.
    std::optional<double> lambda2;
    double lambda1_residual = 0;  // gap to the nearest numeric eigenvalue
    double lambda2_residual = 0;
    std::vector<double> spectrum;  // numeric, descending, length d(d-1)
    double positivity_margin = 0;  // smallest numeric eigenvalue
};

/// lambda1 = 2 C_pair + 4(d-2) B3 + (d-2)(d-3) B1 and
/// lambda2 = 2 C_pair + 2(d-4) B3 - 2(d-3) B1, checked against the dense
/// spectrum of rho_pair_minor.
MinorSpectrumReport minor_eigenvalues(const Rho2Params& p);

/// Positivity diagnostics for the off-diagonal constants.
struct BConstraintReport {
    /// |B|^2 <= product of the two diagonal entries sharing its 2x2 minor.
    struct Minor {
        std::string name;
        double lhs = 0;  // |B|^2
        double rhs = 0;  // product of diagonals
        bool satisfied = false;
    };
    /// |B| d^alpha: stays O(1) as d grows when the decay exponent is right.
    struct Scale {
        std::string name;
        double alpha = 0;
        double value = 0;
    };
    int d = 0;
    std::vector<Minor> minors;
    std::vector<Scale> scales;
    bool all_satisfied = false;
};

BConstraintReport b_constraint_report(const Rho2Params& p);

/// Upper bound (sqrt(C_same) + d sqrt(C_pair/2))^2 on the fidelity, valid
/// under the flat-one-party hypothesis |A| <= c/d^2 with d >= d_min.
/// Throws domain_error when the hypothesis fails.
double sqrtM_diag_bound(const Rho1Params& p1, const Rho2Params& p2, double c = 2.0,
                        int d_min = 10);

/// Everything needed to discuss the 1/2 cap for one state in one place.
struct BoundReport {
    int n = 0;
    int d = 0;
    double A_total = 0;
    double A_single_sum = 0;
    double A_cross_sum = 0;
    bool no_isolated_support = false;  // every weighted diagram lacks 1-rows
    bool d_large = false;              // d >= d_min
    bool d_beats_n = false;            // d >= 10 n sqrt(n)
    double a_scale = 0;                // |A| d^2
    double a_scale_cap = 0;            // 2 max(rows) over the support
    bool a_within_cap = false;
    double measured_F = 0;             // block-route fidelity
    double asserted_bound = 0.5;
    bool asserted = false;  // all gates passed, the 1/2 cap is claimed
};

BoundReport half_bound_check(const PSSState& psi, int d_min = 10);

/// Largest number of compatible partners any diagram of n blocks has.
int compatibility_count_bound(int n);

} // namespace pssmfa
