#include "lapchol/multigraph.hpp"

#include <algorithm>
#include <numeric>

namespace lapchol {

MultiGraph::MultiGraph(std::size_t n) : adj_(n), degree_(n, 0), removed_(n, 0) {}

MultiGraph MultiGraph::from_matrix(const SparseSym& m)
{
    MultiGraph g(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto cols = m.row_cols(i);
        const auto vals = m.row_vals(i);
        g.adj_[i].reserve(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            g.adj_[i].push_back({cols[k], 1, -vals[k]});
        }
        g.degree_[i] = cols.size();
        g.edges_ += cols.size();
    }
    g.edges_ /= 2;
    return g;
}

void MultiGraph::add_edge(Vertex u, Vertex v, double weight, std::uint32_t count)
{
    if (u == v) {
        throw Error("self-loop in multi-graph");
    }
    if (!(weight > 0.0) || count == 0) {
        throw Error("multi-edge weight and count must be positive");
    }
    if (removed_[u] || removed_[v]) {
        throw Error("edge touches a removed vertex");
    }
    adj_[u].push_back({v, count, weight});
    adj_[v].push_back({u, count, weight});
    degree_[u] += count;
    degree_[v] += count;
    edges_ += count;
}

void MultiGraph::split(std::uint32_t k)
{
    if (k == 0) {
        throw Error("split factor must be positive");
    }
    for (std::size_t v = 0; v < adj_.size(); ++v) {
        for (HalfEdge& e : adj_[v]) {
            e.count *= k;
        }
        degree_[v] *= k;
    }
    edges_ *= k;
}

void MultiGraph::gather(Vertex v, std::vector<HalfEdge>& out, std::vector<std::int64_t>& slot) const
{
    out.clear();
    for (const HalfEdge& e : adj_[v]) {
        if (removed_[e.nbr]) {
            continue;
        }
        std::int64_t& s = slot[e.nbr];
        if (s < 0) {
            s = static_cast<std::int64_t>(out.size());
            out.push_back(e);
        } else {
            out[static_cast<std::size_t>(s)].count += e.count;
            out[static_cast<std::size_t>(s)].weight += e.weight;
        }
    }
    for (const HalfEdge& e : out) {
        slot[e.nbr] = -1;
    }
}

std::vector<HalfEdge> MultiGraph::gather(Vertex v) const
{
    std::vector<HalfEdge> out;
    std::vector<std::int64_t> slot(size(), -1);
    gather(v, out, slot);
    return out;
}

void MultiGraph::remove_vertex(Vertex v)
{
    if (removed_[v]) {
        return;
    }
    for (const HalfEdge& e : adj_[v]) {
        if (!removed_[e.nbr]) {
            degree_[e.nbr] -= e.count;
            edges_ -= e.count;
        }
    }
    removed_[v] = 1;
    degree_[v] = 0;
    std::vector<HalfEdge>().swap(adj_[v]);
}

SparseSym laplacian_of(const MultiGraph& g)
{
    std::vector<Triplet> edges;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (g.removed(static_cast<Vertex>(v))) {
            continue;
        }
        for (const HalfEdge& e : g.raw(static_cast<Vertex>(v))) {
            if (e.nbr > v && !g.removed(e.nbr)) {
                edges.push_back({static_cast<Vertex>(v), e.nbr, e.weight});
            }
        }
    }
    return SparseSym::laplacian_from_edges(g.size(), edges);
}

Components connected_components(const MultiGraph& g)
{
    return connected_components(laplacian_of(g));
}

}  // namespace lapchol
