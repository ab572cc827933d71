// Reduced density matrices of PSS states.  Two routes are provided and
// cross-checked everywhere: a dense partial-trace oracle, and exact
// combinatorial counting of the string overlaps that populate each of the
// finitely many independent matrix entries.
#pragma once

#include "pssmfa/pss.hpp"

#include <Eigen/Dense>

namespace pssmfa {

using HermitianMatrix = Eigen::MatrixXcd;

/// One-party reduction: diagonal 1/d, every off-diagonal the same real A.
struct Rho1Params {
    int d = 0;
    double A = 0;
};

/// Two-party reduction: the seven constants forced by party exchange, joint
/// site relabeling and hermiticity.  Labels i,j,k,l below are distinct.
struct Rho2Params {
    int d = 0;
    double C_same = 0;  // {ii,ii}
    double C_pair = 0;  // {ij,ij} = {ij,ji}
    double B1 = 0;      // {ij,kl}
    double B3 = 0;      // {ij,il} and every other single-overlap pattern
    double B4 = 0;      // {ii,kk}
    Complex B2;         // {ii,kl}; conjugated under transposition
    Complex B5;         // {ii,il}; conjugated under transposition
};

/// Exact rational parameters of a single-diagram state.  All entries are
/// real here because the dense state has non-negative real amplitudes.
struct ExactRhoParams {
    int n = 0;
    int d = 0;
    Rational A, C_same, C_pair, B1, B2, B3, B4, B5;

    Rho1Params rho1() const;
    Rho2Params rho2() const;
};

struct StateRho {
    Rho1Params rho1;
    Rho2Params rho2;
};

/// Trace out the last n-keep parties.  Output is d^keep square.
HermitianMatrix partial_trace(const DenseState& s, int keep,
                              const OracleBudget& budget = {});

/// Extract A, verifying every diagonal is 1/d and every off-diagonal agrees
/// with the common value (within tol).  Throws naming the offending entry
/// otherwise; the worst deviation is written to *max_dev when given.
Rho1Params rho1_params_from_dense(const HermitianMatrix& rho1, double tol = 1e-10,
                                  double* max_dev = nullptr);

/// Same for the seven two-party constants.
Rho2Params rho2_params_from_dense(const HermitianMatrix& rho2, double tol = 1e-10,
                                  double* max_dev = nullptr);

HermitianMatrix rho1_dense_from_params(const Rho1Params& p);
HermitianMatrix rho2_dense_from_params(const Rho2Params& p);

/// Number of strings w of length n-t (t = prefix length, 1 or 2) such that
/// (prefix_row, w) has occupancy shape y and (prefix_col, w) has shape z.
/// Prefix entries are site labels 0..d-1.  Computed by summing over the
/// occupancy patterns of the pinned sites; cost is independent of d^n.
BigInt overlap_count(const YoungDiagram& y, const YoungDiagram& z, int d,
                     const std::vector<int>& prefix_row,
                     const std::vector<int>& prefix_col);

/// Brute-force reference for overlap_count, iterating all d^(n-t) strings.
BigInt exhaustive_overlap_count(const YoungDiagram& y, const YoungDiagram& z, int d,
                                const std::vector<int>& prefix_row,
                                const std::vector<int>& prefix_col,
                                const OracleBudget& budget = {});

/// Count of strings w with (i,w) and (j,w) both of shape y, for fixed
/// distinct i,j: run-structure closed form (one block of y is removed and
/// re-added in two different places).
BigInt count_overlap_strings_1(const YoungDiagram& y, int d);

/// Variant with the cross-cluster term doubled.  Disagrees with the
/// exhaustive count (e.g. y=[2,1], d=3: 5 vs 3); kept for diagnostics only.
BigInt count_overlap_strings_1_doubled(const YoungDiagram& y, int d);

/// Closed form for the one-party cross count of two compatible diagrams,
/// from the block-move witness; zero when incompatible.
BigInt cross_overlap_count_closed(const YoungDiagram& y, const YoungDiagram& z,
                                  int d);

/// Off-diagonal of the one-party reduction of a basis state, exactly.
Rational A_single_diagram(const YoungDiagram& y, int d);

/// A of a superposition, itemized: per-diagram terms |a_y|^2 N_y / A_y and
/// one cross term per unordered compatible pair.
struct ADecomposition {
    double total = 0;
    std::vector<double> single;  // aligned with psi.diagrams()
    struct Cross {
        std::size_t first = 0, second = 0;  // diagram indices, first < second
        double value = 0;
    };
    std::vector<Cross> cross;

    double single_sum() const;
    double cross_sum() const;
};
ADecomposition A_superposition(const PSSState& psi);

/// The k-row, n/k-column rectangle, evaluated from its dedicated closed
/// forms (exact rationals).  Requires n >= 2, k | n, k <= d.
ExactRhoParams rectangular_rho_params(int n, int k, int d);

/// Any single diagram, via overlap_count on each entry class.
ExactRhoParams diagram_rho_params(const YoungDiagram& y, int d);

/// Both reductions of an arbitrary superposition, combining exact counts
/// for every ordered diagram pair with the complex amplitudes.
StateRho state_rho_params(const PSSState& psi);

/// The closed-form string counts behind rectangular_rho_params, exposed for
/// reconciliation against exhaustive_overlap_count.
struct RectangularCounts {
    BigInt n_row;   // one-party off-diagonal
    BigInt n_same;  // {ii,ii}
    BigInt n_pair;  // {ij,ij}
    BigInt n_b1, n_b2, n_b3, n_b4, n_b5;
};
RectangularCounts rectangular_overlap_counts(int n, int k, int d);

/// {"n":..,"d":..,"A":{"num":"..","den":".."},..}
nlohmann::json params_to_json(const ExactRhoParams& p);

} // namespace pssmfa
