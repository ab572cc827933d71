// Young diagrams label the basis of party- and site-symmetric bosonic
// states: a diagram lists, in weakly decreasing order, how many particles
// sit on each occupied site.
#pragma once

#include "pssmfa/exact.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace pssmfa {

class YoungDiagram {
public:
    /// Validates weakly decreasing, strictly positive rows.
    explicit YoungDiagram(std::vector<int> rows);

    int blocks() const { return blocks_; }                      // particle count n
    int row_count() const { return (int)rows_.size(); }         // occupied sites k
    const std::vector<int>& rows() const { return rows_; }

    bool operator==(const YoungDiagram&) const = default;
    auto operator<=>(const YoungDiagram&) const = default;

private:
    std::vector<int> rows_;
    int blocks_ = 0;
};

/// One cluster of equal-length rows.
struct Run {
    int length;  // row length shared by the cluster
    int count;   // number of rows in the cluster
};

/// Run-length view of a diagram, ordered by increasing row length, so
/// entry 0 is the shortest row present.
struct DiagramRuns {
    std::vector<Run> runs;

    int cluster_count() const { return (int)runs.size(); }

    /// Index of the cluster with the given row length, or -1.
    int cluster_of(int length) const;
};

/// All diagrams with n blocks and at most d rows, lexicographically
/// decreasing: enumerate_diagrams(3, 3) yields [3], [2,1], [1,1,1].
std::vector<YoungDiagram> enumerate_diagrams(int n, int d);

DiagramRuns runs(const YoungDiagram& y);

/// Number of length-n site strings (d sites available) whose occupancy
/// multiset has shape y; the squared normalisation of the associated
/// equal-superposition basis state.
BigInt normalization_constant(const YoungDiagram& y, int d);

/// normalization_constant for the rectangle with k rows of n/k blocks,
/// C(d,k) n! / ((n/k)!)^k.  Throws if k does not divide n.
BigInt rectangular_constant(int n, int k, int d);

/// Diagrams reachable by deleting a single block, one per run (delete from
/// the bottom row of each cluster), in increasing-cluster order.  The
/// result size always equals cluster_count().
std::vector<YoungDiagram> remove_block_children(const YoungDiagram& y);

/// A single-block move: take one block off a row of length `from` and put
/// it on a row of length `to` (`to == 0` starts a new row).
struct BlockMove {
    int from = 0;
    int to = 0;
};

/// Witness that two diagrams differ by exactly one block move, i.e. that
/// they share a child.  The shared child and the move seen from each side
/// are reported; a diagram is never compatible with itself.
struct Compat {
    YoungDiagram child;
    BlockMove move_y;  // applied to y, yields z
    BlockMove move_z;  // applied to z, yields y
};

std::optional<Compat> compatibility(const YoungDiagram& y, const YoungDiagram& z);

/// True iff the shortest row has length 1.
bool has_isolated_particles(const YoungDiagram& y);

/// Parse "3,2,1,1".  Rejects empty/non-numeric/non-positive entries and
/// increasing neighbours, naming the offending row position.
YoungDiagram parse_diagram(const std::string& text);

std::string format_diagram(const YoungDiagram& y);

} // namespace pssmfa
