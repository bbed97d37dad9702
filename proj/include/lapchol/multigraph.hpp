#pragma once

#include "lapchol/sparse.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lapchol {

/// A bundle of `count` parallel multi-edges to `nbr` whose weights sum to
/// `weight`. Only the sum matters downstream because elimination averages
/// the weights of a pair before sampling.
struct HalfEdge {
    Vertex nbr;
    std::uint32_t count;
    double weight;
};

/// Mutable weighted multi-graph used as the elimination workspace.
///
/// New edges between an existing pair are appended rather than merged; the
/// per-pair aggregate is computed by `gather`. Removing a vertex leaves stale
/// entries in neighbouring lists, which `gather` skips.
class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(std::size_t n);

    /// Graph of a Laplacian or SDDM matrix; only off-diagonals are read.
    static MultiGraph from_matrix(const SparseSym& m);

    std::size_t size() const noexcept { return adj_.size(); }

    void add_edge(Vertex u, Vertex v, double weight, std::uint32_t count = 1);

    /// Replace every multi-edge by k equal copies of 1/k its weight.
    void split(std::uint32_t k);

    bool removed(Vertex v) const { return removed_[v] != 0; }

    /// Live multi-edge count incident to v.
    std::uint64_t degree(Vertex v) const { return degree_[v]; }
    std::uint64_t multi_edge_count() const noexcept { return edges_; }

    /// Raw adjacency including stale entries and unmerged duplicates.
    std::span<const HalfEdge> raw(Vertex v) const { return adj_[v]; }

    /// Per-neighbour aggregate (count, summed weight) over live neighbours.
    /// `slot` is caller scratch of size n filled with -1; it is restored.
    void gather(Vertex v, std::vector<HalfEdge>& out, std::vector<std::int64_t>& slot) const;
    std::vector<HalfEdge> gather(Vertex v) const;

    /// Remove v and all its multi-edges.
    void remove_vertex(Vertex v);

private:
    std::vector<std::vector<HalfEdge>> adj_;
    std::vector<std::uint64_t> degree_;
    std::vector<std::uint8_t> removed_;
    std::uint64_t edges_ = 0;
};

SparseSym laplacian_of(const MultiGraph& g);

Components connected_components(const MultiGraph& g);

}  // namespace lapchol
