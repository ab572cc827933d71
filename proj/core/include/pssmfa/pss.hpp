// States symmetric under both particle relabeling and simultaneous site
// relabeling, stored as amplitudes over Young diagrams, plus the dense
// computational-basis expansion used as a brute-force oracle.
#pragma once

#include "pssmfa/young.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pssmfa {

/// Cap on dense vectors the oracle paths are allowed to materialize.
struct OracleBudget {
    std::size_t max_amplitudes = 10'000'000;
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Amplitudes over all d^n site strings; index i1*d^(n-1)+...+in with the
/// first party most significant, sites numbered 0..d-1.
struct DenseState {
    int n = 0;
    int d = 0;
    std::vector<Complex> amp;

    std::size_t dim() const { return amp.size(); }
    double norm() const;
};

/// Normalized amplitude vector over the diagram basis, ordered exactly as
/// enumerate_diagrams(n, d).
class PSSState {
public:
    /// Requires one coefficient per diagram and unit norm (within 1e-9).
    PSSState(int n, int d, std::vector<Complex> coeff);

    /// Rescales arbitrary coefficients to unit norm; the multiplier used is
    /// written to *factor when given.  Throws on an all-zero vector.
    static PSSState make_normalized(int n, int d, std::vector<Complex> coeff,
                                    double* factor = nullptr);

    /// The basis state of a single diagram.
    static PSSState single(const YoungDiagram& y, int d);

    int n() const { return n_; }
    int d() const { return d_; }
    const std::vector<Complex>& coefficients() const { return coeff_; }
    const std::vector<YoungDiagram>& diagrams() const { return diagrams_; }

private:
    PSSState() = default;
    int n_ = 0;
    int d_ = 0;
    std::vector<Complex> coeff_;
    std::vector<YoungDiagram> diagrams_;
};

/// Equal superposition over every string of shape y, amplitude A_y^(-1/2).
/// Work scales with the orbit size, not d^n; only the output vector is d^n.
DenseState expand_basis_element(const YoungDiagram& y, int d,
                                const OracleBudget& budget = {});

DenseState expand_state(const PSSState& psi, const OracleBudget& budget = {});

/// (sum_i |i> / sqrt(d))^n: every amplitude d^(-n/2).
DenseState uniform_product_state(int n, int d, const OracleBudget& budget = {});

/// Max |amp(s) - amp(swap s)| over adjacent party transpositions.  Adjacent
/// transpositions generate the full permutation group, so zero deviation
/// here implies invariance under every relabeling.
double check_party_symmetry(const DenseState& s);

/// Same, over adjacent site-label transpositions applied to every party.
double check_site_symmetry(const DenseState& s);

/// {"n":..,"d":..,"amplitudes":[{"diagram":"2,1","re":..,"im":..},..]}
nlohmann::json state_to_json(const PSSState& psi);

/// Parses and normalizes; the scale factor applied is written to *factor.
/// Rejects unknown/duplicate diagrams and shape mismatches.
PSSState state_from_json(const nlohmann::json& j, double* factor = nullptr);

} // namespace pssmfa
