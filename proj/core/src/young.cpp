#include "pssmfa/young.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <stdexcept>

namespace pssmfa {

BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt falling_factorial(int n, int k) {
    if (k < 0) throw std::invalid_argument("falling factorial of negative length");
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        if (n - i <= 0) return 0;
        r *= n - i;
    }
    return r;
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }
double to_double(const Rational& v) { return v.convert_to<double>(); }

std::string to_string(const Rational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

YoungDiagram::YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("diagram needs at least one row");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i] <= 0)
            throw std::invalid_argument("row " + std::to_string(i + 1) +
                                        ": length must be positive");
        if (i > 0 && rows_[i] > rows_[i - 1])
            throw std::invalid_argument("row " + std::to_string(i + 1) + ": length " +
                                        std::to_string(rows_[i]) + " exceeds row " +
                                        std::to_string(i) + " length " +
                                        std::to_string(rows_[i - 1]));
        blocks_ += rows_[i];
    }
}

int DiagramRuns::cluster_of(int length) const {
    for (std::size_t q = 0; q < runs.size(); ++q)
        if (runs[q].length == length) return (int)q;
    return -1;
}

std::vector<YoungDiagram> enumerate_diagrams(int n, int d) {
    if (n <= 0) throw std::invalid_argument("block count must be positive");
    if (d <= 0) throw std::invalid_argument("site count must be positive");
    std::vector<YoungDiagram> out;
    std::vector<int> rows;
    auto rec = [&](auto&& self, int remaining, int max_len, int rows_left) -> void {
        if (remaining == 0) {
            out.emplace_back(rows);
            return;
        }
        for (int len = std::min(remaining, max_len); len >= 1; --len) {
            if ((long long)len * rows_left < remaining) break;  // cannot finish
            rows.push_back(len);
            self(self, remaining - len, len, rows_left - 1);
            rows.pop_back();
        }
    };
    rec(rec, n, n, d);
    return out;
}

DiagramRuns runs(const YoungDiagram& y) {
    DiagramRuns r;
    const auto& rows = y.rows();
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (!r.runs.empty() && r.runs.back().length == *it)
            ++r.runs.back().count;
        else
            r.runs.push_back({*it, 1});
    }
    return r;
}

BigInt normalization_constant(const YoungDiagram& y, int d) {
    const int k = y.row_count();
    if (k > d)
        throw std::domain_error("diagram has " + std::to_string(k) + " rows but only " +
                                std::to_string(d) + " sites are available");
    BigInt denom = 1;
    for (const Run& run : runs(y).runs) {
        denom *= factorial(run.count);
        BigInt mf = factorial(run.length);
        for (int i = 0; i < run.count; ++i) denom *= mf;
    }
    return factorial(d) / factorial(d - k) * factorial(y.blocks()) / denom;
}

BigInt rectangular_constant(int n, int k, int d) {
    if (n <= 0 || k <= 0) throw std::invalid_argument("block and row counts must be positive");
    if (n % k != 0)
        throw std::domain_error("rectangular diagram requires divisibility: " +
                                std::to_string(k) + " does not divide " + std::to_string(n));
    if (k > d)
        throw std::domain_error("diagram has " + std::to_string(k) + " rows but only " +
                                std::to_string(d) + " sites are available");
    const int m = n / k;
    BigInt r = binomial(d, k) * factorial(n);
    BigInt mf = factorial(m);
    for (int i = 0; i < k; ++i) r /= mf;
    return r;
}

std::vector<YoungDiagram> remove_block_children(const YoungDiagram& y) {
    if (y.blocks() == 1)
        throw std::domain_error("single-block diagram has no children");
    std::vector<YoungDiagram> out;
    const auto& rows = y.rows();
    for (const Run& run : runs(y).runs) {
        std::vector<int> child = rows;
        // shrink the bottom-most row of this cluster; order stays valid
        for (auto it = child.rbegin(); it != child.rend(); ++it) {
            if (*it == run.length) {
                --*it;
                break;
            }
        }
        if (child.back() == 0) child.pop_back();
        out.emplace_back(std::move(child));
    }
    return out;
}

namespace {

// Row multiset of y after taking a block off a row of length `from` and
// putting it on a row of length `to` (0 = new row), sorted decreasing.
std::vector<int> moved_rows(const YoungDiagram& y, int from, int to) {
    std::vector<int> rows = y.rows();
    auto src = std::find(rows.begin(), rows.end(), from);
    --*src;
    if (to == 0) {
        rows.push_back(1);
    } else {
        // any other row of length `to`; the shrunk one no longer matches
        ++*std::find(rows.begin(), rows.end(), to);
    }
    std::erase(rows, 0);
    std::sort(rows.begin(), rows.end(), std::greater<>());
    return rows;
}

YoungDiagram remove_one_block(const YoungDiagram& y, int row_length) {
    std::vector<int> rows = y.rows();
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (*it == row_length) {
            --*it;
            break;
        }
    }
    std::erase(rows, 0);
    return YoungDiagram(rows);
}

} // namespace

std::optional<Compat> compatibility(const YoungDiagram& y, const YoungDiagram& z) {
    if (y.blocks() != z.blocks())
        throw std::domain_error("compatibility requires equal block counts");
    if (y == z) return std::nullopt;
    for (const Run& src : runs(y).runs) {
        const int v = src.length;
        std::vector<int> dests{0};
        for (const Run& dst : runs(y).runs) dests.push_back(dst.length);
        for (int w : dests) {
            if (w == v && src.count < 2) continue;  // needs a second row to feed
            if (w == v - 1) continue;               // net identity, stays at y
            if (moved_rows(y, v, w) == z.rows()) {
                // reverse move: the grown row has length w+1 (1 when new),
                // the shrunk row length v-1 (0 = vanished, reverse opens one)
                return Compat{remove_one_block(y, v), BlockMove{v, w},
                              BlockMove{w == 0 ? 1 : w + 1, v - 1}};
            }
        }
    }
    return std::nullopt;
}

bool has_isolated_particles(const YoungDiagram& y) { return y.rows().back() == 1; }

YoungDiagram parse_diagram(const std::string& text) {
    std::vector<int> rows;
    std::size_t pos = 0, row = 0;
    while (pos <= text.size()) {
        ++row;
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::size_t a = pos, b = comma;
        while (a < b && std::isspace((unsigned char)text[a])) ++a;
        while (b > a && std::isspace((unsigned char)text[b - 1])) --b;
        if (a == b)
            throw std::invalid_argument("row " + std::to_string(row) + ": empty entry");
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + a, text.data() + b, value);
        if (ec != std::errc() || ptr != text.data() + b)
            throw std::invalid_argument("row " + std::to_string(row) + ": '" +
                                        text.substr(a, b - a) + "' is not a row length");
        rows.push_back(value);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return YoungDiagram(rows);  // positivity/ordering reported per row
}

std::string format_diagram(const YoungDiagram& y) {
    std::string s;
    for (std::size_t i = 0; i < y.rows().size(); ++i) {
        if (i) s += ',';
        s += std::to_string(y.rows()[i]);
    }
    return s;
}

} // namespace pssmfa
