#include "pssmfa/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace pssmfa {

namespace {

BigInt as_integer(const Rational& r) {
    if (boost::multiprecision::denominator(r) != 1)
        throw std::logic_error("string count came out non-integral: " + to_string(r));
    return boost::multiprecision::numerator(r);
}

BigInt ipow(const BigInt& b, int e) {
    return boost::multiprecision::pow(b, static_cast<unsigned>(e));
}

// Product over clusters of l_q! (M_q!)^{l_q}; the stabilizer size of one
// orbit representative inside S_d x S_n splits off this factor.
BigInt cluster_symmetry_factor(const YoungDiagram& y) {
    BigInt pi = 1;
    for (const Run& r : runs(y).runs)
        pi *= factorial(r.count) * ipow(factorial(r.length), r.count);
    return pi;
}

int square_side(const HermitianMatrix& h, const char* what) {
    if (h.rows() != h.cols())
        throw std::invalid_argument(std::string(what) + " must be square");
    return static_cast<int>(h.rows());
}

std::string entry_name(int r, int c) {
    return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

// Entry classes of the two-party reduction, keyed by the coincidence
// pattern of the four site labels.
enum PairClass { kSame, kPair, kB1, kB2, kB3, kB4, kB5, kClassCount };

struct Classified {
    PairClass cls;
    bool conjugated;  // true when the entry is the transpose orientation
};

Classified classify_pair_entry(int r1, int r2, int c1, int c2) {
    const bool row_diag = (r1 == r2), col_diag = (c1 == c2);
    if (row_diag && col_diag) return {r1 == c1 ? kSame : kB4, false};
    if (row_diag) return {(r1 == c1 || r1 == c2) ? kB5 : kB2, false};
    if (col_diag) return {(c1 == r1 || c1 == r2) ? kB5 : kB2, true};
    const int shared = ((r1 == c1 || r1 == c2) ? 1 : 0) + ((r2 == c1 || r2 == c2) ? 1 : 0);
    if (shared == 2) return {kPair, false};
    if (shared == 1) return {kB3, false};
    return {kB1, false};
}

std::vector<int> occupancy_of(const std::vector<int>& labels, int d) {
    std::vector<int> occ(d, 0);
    for (int s : labels) occ[s]++;
    return occ;
}

bool occupancy_has_shape(const std::vector<int>& occ, const YoungDiagram& y) {
    std::vector<int> parts;
    for (int v : occ)
        if (v > 0) parts.push_back(v);
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return parts == y.rows();
}

void validate_prefixes(const YoungDiagram& y, const YoungDiagram& z, int d,
                       const std::vector<int>& pr, const std::vector<int>& pc) {
    if (z.blocks() != y.blocks())
        throw std::invalid_argument("diagrams must carry the same number of blocks");
    if (pr.size() != pc.size() || pr.empty() || pr.size() > 2)
        throw std::invalid_argument("row and column prefixes must share a length of 1 or 2");
    if (static_cast<int>(pr.size()) > y.blocks())
        throw std::invalid_argument("prefix longer than the party count");
    for (int s : pr)
        if (s < 0 || s >= d) throw std::invalid_argument("row prefix site out of range");
    for (int s : pc)
        if (s < 0 || s >= d) throw std::invalid_argument("column prefix site out of range");
}

double count_ratio(const BigInt& count, const BigInt& norm_a, const BigInt& norm_b) {
    if (count == 0) return 0.0;
    return std::sqrt(to_double(Rational(count * count, norm_a * norm_b)));
}

} // namespace

Rho1Params ExactRhoParams::rho1() const { return {d, to_double(A)}; }

Rho2Params ExactRhoParams::rho2() const {
    Rho2Params p;
    p.d = d;
    p.C_same = to_double(C_same);
    p.C_pair = to_double(C_pair);
    p.B1 = to_double(B1);
    p.B3 = to_double(B3);
    p.B4 = to_double(B4);
    p.B2 = Complex(to_double(B2), 0.0);
    p.B5 = Complex(to_double(B5), 0.0);
    return p;
}

HermitianMatrix partial_trace(const DenseState& s, int keep, const OracleBudget& budget) {
    if (keep < 0 || keep > s.n)
        throw std::invalid_argument("kept party count must lie in [0, n]");
    const BigInt kept_dim = ipow(BigInt(s.d), keep);
    const BigInt entries = kept_dim * kept_dim;
    if (entries > budget.max_amplitudes)
        throw ResourceError("partial trace needs " + entries.str() +
                            " amplitudes, over the budget of " +
                            std::to_string(budget.max_amplitudes));
    const std::size_t dim1 = kept_dim.convert_to<std::size_t>();
    const std::size_t dim2 = s.dim() / dim1;
    HermitianMatrix rho = HermitianMatrix::Zero(dim1, dim1);
    for (std::size_t a = 0; a < dim1; ++a) {
        for (std::size_t ap = 0; ap <= a; ++ap) {
            Complex acc = 0;
            for (std::size_t b = 0; b < dim2; ++b)
                acc += s.amp[a * dim2 + b] * std::conj(s.amp[ap * dim2 + b]);
            rho(a, ap) = acc;
            rho(ap, a) = std::conj(acc);
        }
    }
    return rho;
}

Rho1Params rho1_params_from_dense(const HermitianMatrix& rho1, double tol, double* max_dev) {
    const int d = square_side(rho1, "one-party reduction");
    double off_sum = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) off_sum += rho1(i, j).real();
    const double A = d > 1 ? off_sum / (static_cast<double>(d) * (d - 1)) : 0.0;

    double worst = 0;
    int wi = 0, wj = 0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const Complex expected = (i == j) ? Complex(1.0 / d, 0) : Complex(A, 0);
            const double dev = std::abs(rho1(i, j) - expected);
            if (dev > worst) worst = dev, wi = i, wj = j;
        }
    }
    if (max_dev) *max_dev = worst;
    if (worst > tol)
        throw std::runtime_error("one-party reduction breaks the uniform pattern at entry " +
                                 entry_name(wi, wj) + " by " + std::to_string(worst));
    return {d, A};
}

Rho2Params rho2_params_from_dense(const HermitianMatrix& rho2, double tol, double* max_dev) {
    const int dim = square_side(rho2, "two-party reduction");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (d < 1 || d * d != dim)
        throw std::invalid_argument("two-party reduction must be d^2 x d^2");

    Complex sum[kClassCount] = {};
    long count[kClassCount] = {};
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const Classified e = classify_pair_entry(r / d, r % d, c / d, c % d);
            sum[e.cls] += e.conjugated ? std::conj(rho2(r, c)) : rho2(r, c);
            count[e.cls]++;
        }
    }
    Complex value[kClassCount] = {};
    for (int cls = 0; cls < kClassCount; ++cls)
        if (count[cls] > 0) value[cls] = sum[cls] / static_cast<double>(count[cls]);
    // party exchange plus relabeling force all classes except B2/B5 real
    for (PairClass cls : {kSame, kPair, kB1, kB3, kB4}) value[cls] = Complex(value[cls].real(), 0);

    double worst = 0;
    int wr = 0, wc = 0;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const Classified e = classify_pair_entry(r / d, r % d, c / d, c % d);
            const Complex expected = e.conjugated ? std::conj(value[e.cls]) : value[e.cls];
            const double dev = std::abs(rho2(r, c) - expected);
            if (dev > worst) worst = dev, wr = r, wc = c;
        }
    }
    if (max_dev) *max_dev = worst;
    if (worst > tol)
        throw std::runtime_error("two-party reduction breaks the class pattern at entry " +
                                 entry_name(wr, wc) + " by " + std::to_string(worst));

    Rho2Params p;
    p.d = d;
    p.C_same = value[kSame].real();
    p.C_pair = value[kPair].real();
    p.B1 = value[kB1].real();
    p.B3 = value[kB3].real();
    p.B4 = value[kB4].real();
    p.B2 = value[kB2];
    p.B5 = value[kB5];
    return p;
}

HermitianMatrix rho1_dense_from_params(const Rho1Params& p) {
    HermitianMatrix h = HermitianMatrix::Constant(p.d, p.d, Complex(p.A, 0));
    for (int i = 0; i < p.d; ++i) h(i, i) = Complex(1.0 / p.d, 0);
    return h;
}

HermitianMatrix rho2_dense_from_params(const Rho2Params& p) {
    const int d = p.d, dim = d * d;
    Complex value[kClassCount];
    value[kSame] = Complex(p.C_same, 0);
    value[kPair] = Complex(p.C_pair, 0);
    value[kB1] = Complex(p.B1, 0);
    value[kB3] = Complex(p.B3, 0);
    value[kB4] = Complex(p.B4, 0);
    value[kB2] = p.B2;
    value[kB5] = p.B5;
    HermitianMatrix h(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const Classified e = classify_pair_entry(r / d, r % d, c / d, c % d);
            h(r, c) = e.conjugated ? std::conj(value[e.cls]) : value[e.cls];
        }
    }
    return h;
}

BigInt overlap_count(const YoungDiagram& y, const YoungDiagram& z, int d,
                     const std::vector<int>& prefix_row, const std::vector<int>& prefix_col) {
    validate_prefixes(y, z, d, prefix_row, prefix_col);
    const int n = y.blocks();
    const int t = static_cast<int>(prefix_row.size());

    std::vector<int> pinned = prefix_row;
    pinned.insert(pinned.end(), prefix_col.begin(), prefix_col.end());
    std::sort(pinned.begin(), pinned.end());
    pinned.erase(std::unique(pinned.begin(), pinned.end()), pinned.end());
    const int npin = static_cast<int>(pinned.size());

    std::vector<int> row_occ(npin, 0), col_occ(npin, 0);
    for (int s : prefix_row)
        row_occ[std::lower_bound(pinned.begin(), pinned.end(), s) - pinned.begin()]++;
    for (int s : prefix_col)
        col_occ[std::lower_bound(pinned.begin(), pinned.end(), s) - pinned.begin()]++;

    const std::vector<Run> clusters = runs(y).runs;
    const int p = static_cast<int>(clusters.size());
    const BigInt suffix_arrangements = factorial(n - t);

    // Each pinned site either sits on one of y's row lengths or is empty;
    // everything else about the two occupancies is cluster bookkeeping.
    BigInt total = 0;
    std::vector<int> choice(npin, -1);  // -1 empty, else cluster index
    while (true) {
        std::vector<int> used(p, 0);
        bool feasible = true;
        for (int c : choice)
            if (c >= 0 && ++used[c] > clusters[c].count) feasible = false;
        if (feasible) {
            int needed = 0;
            for (int q = 0; q < p; ++q) needed += clusters[q].count - used[q];
            if (d - npin < needed) feasible = false;

            std::vector<int> m(npin, 0);
            for (int i = 0; i < npin && feasible; ++i) {
                m[i] = choice[i] < 0 ? 0 : clusters[choice[i]].length;
                if (m[i] < row_occ[i]) feasible = false;
            }
            if (feasible) {
                std::vector<int> col_parts;
                for (int q = 0; q < p; ++q)
                    col_parts.insert(col_parts.end(), clusters[q].count - used[q],
                                     clusters[q].length);
                for (int i = 0; i < npin; ++i) {
                    const int v = m[i] - row_occ[i] + col_occ[i];
                    if (v > 0) col_parts.push_back(v);
                }
                std::sort(col_parts.begin(), col_parts.end(), std::greater<>());
                if (col_parts == z.rows()) {
                    BigInt assignments = factorial(d - npin);
                    assignments /= factorial(d - npin - needed);
                    BigInt strings = suffix_arrangements;
                    Rational denom = 1;
                    for (int q = 0; q < p; ++q) {
                        const int free_rows = clusters[q].count - used[q];
                        assignments /= factorial(free_rows);
                        denom *= ipow(factorial(clusters[q].length), free_rows);
                    }
                    for (int i = 0; i < npin; ++i) denom *= factorial(m[i] - row_occ[i]);
                    total += assignments * as_integer(Rational(strings) / denom);
                }
            }
        }
        int pos = 0;
        while (pos < npin && choice[pos] == p - 1) choice[pos++] = -1;
        if (pos == npin) break;
        choice[pos]++;
    }
    return total;
}

BigInt exhaustive_overlap_count(const YoungDiagram& y, const YoungDiagram& z, int d,
                                const std::vector<int>& prefix_row,
                                const std::vector<int>& prefix_col,
                                const OracleBudget& budget) {
    validate_prefixes(y, z, d, prefix_row, prefix_col);
    const int n = y.blocks();
    const int t = static_cast<int>(prefix_row.size());
    const BigInt strings = ipow(BigInt(d), n - t);
    if (strings > budget.max_amplitudes)
        throw ResourceError("exhaustive overlap scan needs " + strings.str() +
                            " amplitudes, over the budget of " +
                            std::to_string(budget.max_amplitudes));

    const std::vector<int> row_base = occupancy_of(prefix_row, d);
    const std::vector<int> col_base = occupancy_of(prefix_col, d);
    BigInt total = 0;
    std::vector<int> w(n - t, 0);
    while (true) {
        std::vector<int> row_occ = row_base, col_occ = col_base;
        for (int s : w) row_occ[s]++, col_occ[s]++;
        if (occupancy_has_shape(row_occ, y) && occupancy_has_shape(col_occ, z)) total += 1;
        int pos = 0;
        while (pos < n - t && w[pos] == d - 1) w[pos++] = 0;
        if (pos == n - t) break;
        w[pos]++;
    }
    return total;
}

namespace {

// Shared skeleton of the run-structure closed forms: prefactor times a
// structure sum, where moving one block between adjacent-length runs (or
// into or out of an empty site) keeps the shape.
BigInt run_structure_count(const YoungDiagram& y, int d, int cross_weight) {
    if (d < 2) throw std::invalid_argument("need at least two sites");
    const int n = y.blocks();
    const int k = y.row_count();
    if (k > d) throw std::domain_error("diagram has more rows than sites");
    const std::vector<Run> clusters = runs(y).runs;
    BigInt structure = 0;
    if (clusters.front().length == 1) structure += BigInt(clusters.front().count) * (d - k);
    for (std::size_t q = 1; q < clusters.size(); ++q)
        if (clusters[q].length - clusters[q - 1].length == 1)
            structure += BigInt(cross_weight) * clusters[q].count * clusters[q - 1].count *
                         clusters[q].length;
    const Rational pref(factorial(d - 2) * factorial(n - 1),
                        factorial(d - k) * cluster_symmetry_factor(y));
    return as_integer(pref * structure);
}

} // namespace

BigInt count_overlap_strings_1(const YoungDiagram& y, int d) {
    return run_structure_count(y, d, 1);
}

BigInt count_overlap_strings_1_doubled(const YoungDiagram& y, int d) {
    return run_structure_count(y, d, 2);
}

BigInt cross_overlap_count_closed(const YoungDiagram& y, const YoungDiagram& z, int d) {
    const auto witness = compatibility(y, z);
    if (!witness) return 0;
    const int k = y.row_count();
    if (k > d || z.row_count() > d) return 0;
    const int n = y.blocks();
    const int from = witness->move_y.from, to = witness->move_y.to;
    const DiagramRuns dr = runs(y);
    const int l_from = dr.runs[dr.cluster_of(from)].count;
    BigInt choices;
    if (to == 0)
        choices = BigInt(l_from) * from * (d - k);
    else if (to == from)
        choices = BigInt(l_from) * (l_from - 1) * from;
    else
        choices = BigInt(l_from) * dr.runs[dr.cluster_of(to)].count * from;
    const Rational pref(factorial(d - 2) * factorial(n - 1),
                        factorial(d - k) * cluster_symmetry_factor(y));
    return as_integer(pref * choices);
}

Rational A_single_diagram(const YoungDiagram& y, int d) {
    return Rational(count_overlap_strings_1(y, d), normalization_constant(y, d));
}

double ADecomposition::single_sum() const {
    double s = 0;
    for (double v : single) s += v;
    return s;
}

double ADecomposition::cross_sum() const {
    double s = 0;
    for (const Cross& c : cross) s += c.value;
    return s;
}

ADecomposition A_superposition(const PSSState& psi) {
    if (psi.d() < 2) throw std::invalid_argument("need at least two sites");
    const auto& ys = psi.diagrams();
    const auto& as = psi.coefficients();
    std::vector<BigInt> norms;
    norms.reserve(ys.size());
    for (const auto& y : ys) norms.push_back(normalization_constant(y, psi.d()));

    ADecomposition out;
    for (std::size_t i = 0; i < ys.size(); ++i)
        out.single.push_back(std::norm(as[i]) *
                             to_double(Rational(count_overlap_strings_1(ys[i], psi.d()), norms[i])));
    for (std::size_t i = 0; i < ys.size(); ++i) {
        for (std::size_t j = i + 1; j < ys.size(); ++j) {
            const Complex weight = as[i] * std::conj(as[j]);
            if (weight == Complex(0, 0)) continue;
            const BigInt cnt = overlap_count(ys[i], ys[j], psi.d(), {0}, {1});
            if (cnt == 0) continue;
            out.cross.push_back({i, j, 2.0 * weight.real() * count_ratio(cnt, norms[i], norms[j])});
        }
    }
    out.total = out.single_sum() + out.cross_sum();
    return out;
}

ExactRhoParams rectangular_rho_params(int n, int k, int d) {
    if (n < 2) throw std::invalid_argument("two-party reduction needs n >= 2");
    if (d < 2) throw std::invalid_argument("need at least two sites");
    if (k < 1 || n % k != 0) throw std::invalid_argument("row count must divide n");
    if (k > d) throw std::domain_error("diagram has more rows than sites");

    ExactRhoParams p;
    p.n = n;
    p.d = d;
    const BigInt dd = BigInt(d) * (d - 1);
    p.A = (k == n) ? Rational(d - n, dd) : Rational(0);
    p.C_same = Rational(n - k, BigInt(d) * k * (n - 1));
    p.C_pair = Rational(BigInt(n) * (k - 1), dd * k * (n - 1));
    p.B4 = (2 * k == n) ? Rational(d - k, dd * (n - 1)) : Rational(0);
    p.B3 = (k == n && d >= 3) ? Rational(d - n, dd * (d - 2)) : Rational(0);
    p.B1 = (k == n && d >= 4) ? Rational(BigInt(d - n) * (d - n - 1), dd * (d - 2) * (d - 3))
                              : Rational(0);
    p.B2 = 0;
    p.B5 = 0;
    return p;
}

RectangularCounts rectangular_overlap_counts(int n, int k, int d) {
    if (n < 2) throw std::invalid_argument("two-party reduction needs n >= 2");
    if (d < 2) throw std::invalid_argument("need at least two sites");
    if (k < 1 || n % k != 0) throw std::invalid_argument("row count must divide n");
    if (k > d) throw std::domain_error("diagram has more rows than sites");
    const int m = n / k;

    RectangularCounts c;
    c.n_row = (k == n) ? falling_factorial(d - 2, n - 1) : BigInt(0);
    c.n_same = (k == n) ? BigInt(0)
                        : as_integer(Rational(binomial(d - 1, k - 1) * factorial(n - 2),
                                              factorial(m - 2) * ipow(factorial(m), k - 1)));
    c.n_pair = (k < 2) ? BigInt(0)
                       : as_integer(Rational(binomial(d - 2, k - 2) * factorial(n - 2),
                                             ipow(factorial(m - 1), 2) * ipow(factorial(m), k - 2)));
    c.n_b4 = (2 * k == n) ? as_integer(Rational(binomial(d - 2, k - 1) * factorial(n - 2),
                                                ipow(BigInt(2), k - 1)))
                          : BigInt(0);
    c.n_b3 = (k == n && d >= 3) ? falling_factorial(d - 3, n - 2) : BigInt(0);
    c.n_b1 = (k == n && d >= 4) ? falling_factorial(d - 4, n - 2) : BigInt(0);
    c.n_b2 = 0;
    c.n_b5 = 0;
    return c;
}

ExactRhoParams diagram_rho_params(const YoungDiagram& y, int d) {
    const int n = y.blocks();
    if (n < 2) throw std::invalid_argument("two-party reduction needs n >= 2");
    if (d < 2) throw std::invalid_argument("need at least two sites");
    const BigInt norm = normalization_constant(y, d);

    ExactRhoParams p;
    p.n = n;
    p.d = d;
    p.A = Rational(overlap_count(y, y, d, {0}, {1}), norm);
    p.C_same = Rational(overlap_count(y, y, d, {0, 0}, {0, 0}), norm);
    p.C_pair = Rational(overlap_count(y, y, d, {0, 1}, {0, 1}), norm);
    p.B4 = Rational(overlap_count(y, y, d, {0, 0}, {1, 1}), norm);
    p.B5 = Rational(overlap_count(y, y, d, {0, 0}, {0, 1}), norm);
    p.B2 = d >= 3 ? Rational(overlap_count(y, y, d, {0, 0}, {1, 2}), norm) : Rational(0);
    p.B3 = d >= 3 ? Rational(overlap_count(y, y, d, {0, 1}, {0, 2}), norm) : Rational(0);
    p.B1 = d >= 4 ? Rational(overlap_count(y, y, d, {0, 1}, {2, 3}), norm) : Rational(0);
    return p;
}

StateRho state_rho_params(const PSSState& psi) {
    const int d = psi.d(), n = psi.n();
    if (n < 2) throw std::invalid_argument("two-party reduction needs n >= 2");
    if (d < 2) throw std::invalid_argument("need at least two sites");
    const auto& ys = psi.diagrams();
    const auto& as = psi.coefficients();
    std::vector<BigInt> norms;
    norms.reserve(ys.size());
    for (const auto& y : ys) norms.push_back(normalization_constant(y, d));

    Complex acc[kClassCount + 1] = {};  // classes plus the one-party A last
    for (std::size_t i = 0; i < ys.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const Complex weight = as[i] * std::conj(as[j]);
            if (weight == Complex(0, 0)) continue;
            const auto term = [&](const std::vector<int>& pr, const std::vector<int>& pc) {
                return count_ratio(overlap_count(ys[i], ys[j], d, pr, pc), norms[i], norms[j]);
            };
            acc[kClassCount] += weight * term({0}, {1});
            acc[kSame] += weight * term({0, 0}, {0, 0});
            acc[kPair] += weight * term({0, 1}, {0, 1});
            acc[kB4] += weight * term({0, 0}, {1, 1});
            acc[kB5] += weight * term({0, 0}, {0, 1});
            if (d >= 3) {
                acc[kB2] += weight * term({0, 0}, {1, 2});
                acc[kB3] += weight * term({0, 1}, {0, 2});
            }
            if (d >= 4) acc[kB1] += weight * term({0, 1}, {2, 3});
        }
    }

    StateRho out;
    out.rho1 = {d, acc[kClassCount].real()};
    out.rho2.d = d;
    out.rho2.C_same = acc[kSame].real();
    out.rho2.C_pair = acc[kPair].real();
    out.rho2.B1 = acc[kB1].real();
    out.rho2.B3 = acc[kB3].real();
    out.rho2.B4 = acc[kB4].real();
    out.rho2.B2 = acc[kB2];
    out.rho2.B5 = acc[kB5];
    return out;
}

namespace {

nlohmann::json rational_json(const Rational& r) {
    return {{"num", boost::multiprecision::numerator(r).str()},
            {"den", boost::multiprecision::denominator(r).str()}};
}

} // namespace

nlohmann::json params_to_json(const ExactRhoParams& p) {
    return {{"n", p.n},           {"d", p.d},
            {"A", rational_json(p.A)},
            {"C_same", rational_json(p.C_same)},
            {"C_pair", rational_json(p.C_pair)},
            {"B1", rational_json(p.B1)},
            {"B2", rational_json(p.B2)},
            {"B3", rational_json(p.B3)},
            {"B4", rational_json(p.B4)},
            {"B5", rational_json(p.B5)}};
}

} // namespace pssmfa
