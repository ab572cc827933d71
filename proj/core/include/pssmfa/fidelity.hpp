// Uhlmann fidelity between the two-party reduction and the tensor square of
// the one-party reduction, with three independent routes: dense matrices,
// an O(1)-in-d block decomposition, and closed forms for rectangles.
#pragma once

#include "pssmfa/rdm.hpp"

#include <optional>
#include <string>

namespace pssmfa {

/// Eigenvalues in ascending order.
Eigen::VectorXd hermitian_eigen(const HermitianMatrix& h);

/// PSD square root.  Eigenvalues in [-1e-10, 0) are clipped to zero and
/// their total magnitude reported through clipped_mass; anything more
/// negative raises domain_error.
HermitianMatrix matrix_sqrt_psd(const HermitianMatrix& h, double* clipped_mass = nullptr);

HermitianMatrix kronecker(const HermitianMatrix& a, const HermitianMatrix& b);

/// F(a,b) = (tr sqrt(sqrt(a) b sqrt(a)))^2, same clipping policy.
double fidelity(const HermitianMatrix& a, const HermitianMatrix& b,
                double* clipped_mass = nullptr);

/// F(rho2, rho1 (x) rho1) by full expansion of the state: the oracle route.
double mfa_fidelity_oracle(const PSSState& psi, const OracleBudget& budget = {},
                           double* clipped_mass = nullptr);

/// Same fidelity from the seven constants, building both d^2 x d^2 matrices.
double mfa_fidelity_dense(const Rho1Params& p1, const Rho2Params& p2,
                          double* clipped_mass = nullptr);

/// Block route: the site-relabeling symmetry splits the symmetric pair
/// space into one 2x2 block, d-1 copies of a second 2x2 block and a
/// repeated scalar, so the cost does not grow with d.
double mfa_fidelity_params(const Rho1Params& p1, const Rho2Params& p2,
                           double* clipped_mass = nullptr);

/// All d^2 eigenvalues of M = R rho2 R with R = sqrt(rho1 (x) rho1),
/// assembled from the blocks, sorted descending.
std::vector<double> m_matrix_spectrum(const Rho1Params& p1, const Rho2Params& p2);

/// All d^2 eigenvalues of the two-party reduction itself, sorted descending.
std::vector<double> rho2_spectrum_params(const Rho2Params& p);

/// Closed-form spectrum of M for rectangles with k < n/2, sorted descending.
std::vector<double> closed_form_m_spectrum(int n, int k, int d);

/// Value of the form (a sqrt(r1) + b sqrt(r2))^2 / c with integer entries.
struct ExactFidelity {
    BigInt a, r1, b, r2, c;

    double value() const;
    /// True when the square expands to a rational (a term drops out or
    /// r1*r2 is a perfect square).
    bool is_rational() const;
    Rational rational() const;
    /// "50/81" when rational, else e.g. "(sqrt(120) + sqrt(40))^2 / 500".
    std::string str() const;
};

/// Closed-form fidelity for the k-row rectangle.  Covers k < n/2, k = n/2
/// and k = n = d; the k = n < d corner has no closed form and throws.
ExactFidelity closed_form_rect_fidelity(int n, int k, int d);

/// Alternate form of the k < n/2 branch with (d-1)^2 in place of d(d-1).
/// Disagrees with the dense oracle at finite d; kept for reporting only.
ExactFidelity closed_form_rect_fidelity_variant(int n, int k, int d);

/// Large-d limit of the rectangle fidelity at fixed n, k.
double asymptotic_rect_fidelity(int n, int k);

} // namespace pssmfa
