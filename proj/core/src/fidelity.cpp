#include "pssmfa/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pssmfa {

namespace {

constexpr double kClipFloor = -1e-10;
constexpr double kZeroSnap = 1e-12;  // relative to the spectral radius

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Negative eigenvalues inside the clip window are zeroed and accounted;
// anything below the window means the input was not a state.  Positive
// values under snap are zeroed silently: they are eigensolver noise on an
// exact zero, and taking their square root would cost half the digits.
double clip_eigenvalue(double v, double* clipped, double snap = 0) {
    if (v >= snap) return v;
    if (v >= 0) return 0;
    if (v < kClipFloor)
        throw std::domain_error("matrix is not positive semidefinite: eigenvalue " + fmt(v));
    if (clipped) *clipped += -v;
    return 0;
}

// Two-party reduction restricted to the three relabeling-invariant sectors
// of the symmetric pair space: a 2x2 block on {uniform-diagonal,
// uniform-offdiagonal}, a 2x2 block repeated d-1 times, and a scalar
// repeated d(d-3)/2 times.  At d = 2 the repeated block is 1x1 (top-left).
struct PairBlocks {
    Eigen::Matrix2cd triv;
    Eigen::Matrix2cd stand;
    double w = 0;
};

PairBlocks rho2_blocks(const Rho2Params& p) {
    const int d = p.d;
    if (d < 2) throw std::invalid_argument("need at least two sites");
    const double lam1 = 2 * p.C_pair + 4 * (d - 2) * p.B3 + (d - 2.0) * (d - 3.0) * p.B1;
    const double lam2 = 2 * p.C_pair + 2 * (d - 4) * p.B3 - 2 * (d - 3.0) * p.B1;
    const Complex off_t = std::sqrt(d - 1.0) * (2.0 * p.B5 + (d - 2.0) * p.B2);
    const Complex off_s = std::sqrt(2.0 * (d - 2)) * (p.B5 - p.B2);
    PairBlocks b;
    b.triv << Complex(p.C_same + (d - 1) * p.B4, 0), off_t, std::conj(off_t), Complex(lam1, 0);
    b.stand << Complex(p.C_same - p.B4, 0), off_s, std::conj(off_s), Complex(lam2, 0);
    b.w = 2 * p.C_pair - 4 * p.B3 + 2 * p.B1;
    return b;
}

// sqrt(rho1 (x) rho1) on the same sectors.  rho1 has eigenvalue
// lu = 1/d + (d-1)A on the uniform vector and lc = 1/d - A elsewhere.
struct RBlocks {
    Eigen::Matrix2d triv;
    Eigen::Matrix2d stand;
    double w = 0;
};

RBlocks r_blocks(const Rho1Params& p) {
    const int d = p.d;
    if (d < 2) throw std::invalid_argument("need at least two sites");
    const double lu = 1.0 / d + (d - 1) * p.A;
    const double lc = 1.0 / d - p.A;
    if (lu < kClipFloor || lc < kClipFloor)
        throw std::domain_error("one-party parameters are not a state: eigenvalue " +
                                fmt(std::min(lu, lc)));
    const double su = std::sqrt(std::max(lu, 0.0));
    const double sc = std::sqrt(std::max(lc, 0.0));
    const double g = (su - sc) / d;
    RBlocks r;
    const double off_t = (lu - lc) * std::sqrt(d - 1.0) / d;
    r.triv << lc + (lu - lc) / d, off_t, off_t, lc + (lu - lc) * (d - 1.0) / d;
    const double off_s = sc * g * std::sqrt(2.0 * (d - 2));
    r.stand << sc * sc + 2 * sc * g, off_s, off_s, su * sc - 2 * sc * g;
    r.w = lc;
    return r;
}

Eigen::Vector2d block_eigen(const Eigen::Matrix2cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

struct MSectors {
    int d = 0;
    Eigen::Vector2d triv;   // multiplicity 1 each
    Eigen::Vector2d stand;  // multiplicity d-1 each; only [0] meaningful at d = 2
    bool stand_pair = true;
    double w = 0;  // multiplicity d(d-3)/2
};

MSectors m_sectors(const Rho1Params& p1, const Rho2Params& p2) {
    if (p1.d != p2.d) throw std::invalid_argument("parameter dimensions disagree");
    const PairBlocks rho = rho2_blocks(p2);
    const RBlocks r = r_blocks(p1);
    MSectors out;
    out.d = p1.d;
    const Eigen::Matrix2cd rt = r.triv.cast<Complex>();
    out.triv = block_eigen(rt * rho.triv * rt);
    if (p1.d == 2) {
        out.stand_pair = false;
        const double rdd = r.stand(0, 0);
        out.stand << rdd * rho.stand(0, 0).real() * rdd, 0;
    } else {
        const Eigen::Matrix2cd rs = r.stand.cast<Complex>();
        out.stand = block_eigen(rs * rho.stand * rs);
    }
    out.w = r.w * rho.w * r.w;
    return out;
}

void validate_rectangle(int n, int k, int d) {
    if (n < 2) throw std::invalid_argument("fidelity of a reduction pair needs n >= 2");
    if (d < 2) throw std::invalid_argument("need at least two sites");
    if (k < 1 || n % k != 0) throw std::invalid_argument("row count must divide n");
    if (k > d) throw std::domain_error("diagram has more rows than sites");
}

bool perfect_square(const BigInt& v, BigInt* root = nullptr) {
    if (v < 0) return false;
    const BigInt r = boost::multiprecision::sqrt(v);
    if (r * r != v) return false;
    if (root) *root = r;
    return true;
}

std::string radical_term(const BigInt& coef, const BigInt& rad) {
    const std::string lead = coef == 1 ? std::string() : coef.str() + "*";
    return lead + "sqrt(" + rad.str() + ")";
}

} // namespace

Eigen::VectorXd hermitian_eigen(const HermitianMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigenvalues need a square matrix");
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    return es.eigenvalues();
}

HermitianMatrix matrix_sqrt_psd(const HermitianMatrix& h, double* clipped_mass) {
    if (h.rows() != h.cols()) throw std::invalid_argument("matrix square root needs a square matrix");
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    double clipped = 0;
    Eigen::VectorXd ev = es.eigenvalues();
    const double snap = ev.size() ? kZeroSnap * ev.cwiseAbs().maxCoeff() : 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = clip_eigenvalue(ev[i], &clipped, snap);
    if (clipped_mass) *clipped_mass = clipped;
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

HermitianMatrix kronecker(const HermitianMatrix& a, const HermitianMatrix& b) {
    HermitianMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double fidelity(const HermitianMatrix& a, const HermitianMatrix& b, double* clipped_mass) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("fidelity needs two square matrices of the same size");
    double clipped = 0;
    const HermitianMatrix sa = matrix_sqrt_psd(a, &clipped);
    HermitianMatrix m = sa * b * sa;
    m = ((m + m.adjoint()) / 2).eval();
    const Eigen::VectorXd ev = hermitian_eigen(m);
    const double snap = ev.size() ? kZeroSnap * ev.cwiseAbs().maxCoeff() : 0;
    double tr = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        tr += std::sqrt(clip_eigenvalue(ev[i], &clipped, snap));
    if (clipped_mass) *clipped_mass = clipped;
    return tr * tr;
}

double mfa_fidelity_oracle(const PSSState& psi, const OracleBudget& budget,
                           double* clipped_mass) {
    const DenseState s = expand_state(psi, budget);
    const HermitianMatrix r1 = partial_trace(s, 1, budget);
    const HermitianMatrix r2 = partial_trace(s, 2, budget);
    return fidelity(r2, kronecker(r1, r1), clipped_mass);
}

double mfa_fidelity_dense(const Rho1Params& p1, const Rho2Params& p2, double* clipped_mass) {
    if (p1.d != p2.d) throw std::invalid_argument("parameter dimensions disagree");
    const HermitianMatrix r1 = rho1_dense_from_params(p1);
    return fidelity(rho2_dense_from_params(p2), kronecker(r1, r1), clipped_mass);
}

double mfa_fidelity_params(const Rho1Params& p1, const Rho2Params& p2, double* clipped_mass) {
    const MSectors m = m_sectors(p1, p2);
    const int d = m.d;
    std::vector<std::pair<double, long>> spectrum = {{m.triv[0], 1}, {m.triv[1], 1}};
    if (m.stand_pair) {
        spectrum.emplace_back(m.stand[0], d - 1);
        spectrum.emplace_back(m.stand[1], d - 1);
    } else {
        spectrum.emplace_back(m.stand[0], 1);
    }
    const long wmult = static_cast<long>(d) * (d - 3) / 2;
    if (wmult > 0) spectrum.emplace_back(m.w, wmult);
    double vmax = 0;
    for (const auto& [v, mult] : spectrum) vmax = std::max(vmax, std::abs(v));
    const double snap = kZeroSnap * vmax;
    double clipped = 0, tr = 0;
    for (const auto& [v, mult] : spectrum) {
        double local = 0;
        tr += mult * std::sqrt(clip_eigenvalue(v, &local, snap));
        clipped += mult * local;
    }
    if (clipped_mass) *clipped_mass = clipped;
    return tr * tr;
}

std::vector<double> m_matrix_spectrum(const Rho1Params& p1, const Rho2Params& p2) {
    const MSectors m = m_sectors(p1, p2);
    const int d = m.d;
    std::vector<double> ev;
    ev.reserve(static_cast<std::size_t>(d) * d);
    ev.push_back(m.triv[0]);
    ev.push_back(m.triv[1]);
    for (int i = 0; i < d - 1; ++i) {
        ev.push_back(m.stand[0]);
        if (m.stand_pair) ev.push_back(m.stand[1]);
    }
    for (long i = 0; i < static_cast<long>(d) * (d - 3) / 2; ++i) ev.push_back(m.w);
    for (long i = 0; i < static_cast<long>(d) * (d - 1) / 2; ++i) ev.push_back(0);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

std::vector<double> rho2_spectrum_params(const Rho2Params& p) {
    const PairBlocks b = rho2_blocks(p);
    const int d = p.d;
    std::vector<double> ev;
    ev.reserve(static_cast<std::size_t>(d) * d);
    const Eigen::Vector2d triv = block_eigen(b.triv);
    ev.push_back(triv[0]);
    ev.push_back(triv[1]);
    if (d == 2) {
        ev.push_back(b.stand(0, 0).real());
    } else {
        const Eigen::Vector2d stand = block_eigen(b.stand);
        for (int i = 0; i < d - 1; ++i) {
            ev.push_back(stand[0]);
            ev.push_back(stand[1]);
        }
    }
    for (long i = 0; i < static_cast<long>(d) * (d - 3) / 2; ++i) ev.push_back(b.w);
    for (long i = 0; i < static_cast<long>(d) * (d - 1) / 2; ++i) ev.push_back(0);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

std::vector<double> closed_form_m_spectrum(int n, int k, int d) {
    validate_rectangle(n, k, d);
    if (2 * k >= n)
        throw std::domain_error("closed-form spectrum covers only k < n/2 rectangles");
    const double d3 = std::pow(static_cast<double>(d), 3);
    const double pair_ev = 2.0 * n * (k - 1) / (d3 * (d - 1) * k * (n - 1));
    const double diag_ev = (n - k) / (d3 * k * (n - 1));
    std::vector<double> ev;
    ev.reserve(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) ev.push_back(diag_ev);
    for (long i = 0; i < static_cast<long>(d) * (d - 1) / 2; ++i) ev.push_back(pair_ev);
    for (long i = 0; i < static_cast<long>(d) * (d - 1) / 2; ++i) ev.push_back(0);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

double ExactFidelity::value() const {
    const double t = to_double(a) * std::sqrt(to_double(r1)) +
                     to_double(b) * std::sqrt(to_double(r2));
    return t * t / to_double(c);
}

bool ExactFidelity::is_rational() const {
    if (a == 0 || r1 == 0 || b == 0 || r2 == 0) return true;
    return perfect_square(r1 * r2);
}

Rational ExactFidelity::rational() const {
    if (!is_rational()) throw std::logic_error("value is irrational");
    BigInt cross = 0;
    if (a != 0 && b != 0 && r1 != 0 && r2 != 0) {
        BigInt root;
        perfect_square(r1 * r2, &root);
        cross = 2 * a * b * root;
    }
    return Rational(a * a * r1 + b * b * r2 + cross, c);
}

std::string ExactFidelity::str() const {
    if (is_rational()) return to_string(rational());
    return "(" + radical_term(a, r1) + " + " + radical_term(b, r2) + ")^2 / " + c.str();
}

ExactFidelity closed_form_rect_fidelity(int n, int k, int d) {
    validate_rectangle(n, k, d);
    if (k == n) {
        if (d != n) throw std::domain_error("no closed form covers the k = n < d corner");
        return {1, d - 1, 0, 0, 2 * BigInt(d)};
    }
    if (2 * k == n)
        return {1, BigInt(2) + 2 * BigInt(d) - n, d + 1, BigInt(d - 1) * (n - 2),
                2 * boost::multiprecision::pow(BigInt(d), 3) * (n - 1)};
    return {1, BigInt(d) * (d - 1) * n * (k - 1), 1, 2 * BigInt(d) * (n - k),
            2 * BigInt(d) * d * k * (n - 1)};
}

ExactFidelity closed_form_rect_fidelity_variant(int n, int k, int d) {
    validate_rectangle(n, k, d);
    if (2 * k < n)
        return {1, BigInt(d - 1) * (d - 1) * n * (k - 1), 1, 2 * BigInt(d) * (n - k),
                2 * BigInt(d) * d * k * (n - 1)};
    return closed_form_rect_fidelity(n, k, d);
}

double asymptotic_rect_fidelity(int n, int k) {
    if (n < 2) throw std::invalid_argument("fidelity of a reduction pair needs n >= 2");
    if (k < 1 || n % k != 0) throw std::invalid_argument("row count must divide n");
    if (k == n) return 1.0;
    if (2 * k == n) return (n - 2) / (2.0 * (n - 1));
    return static_cast<double>(n) * (k - 1) / (2.0 * k * (n - 1));
}

} // namespace pssmfa
