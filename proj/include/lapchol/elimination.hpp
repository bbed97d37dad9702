#pragma once

#include "lapchol/factorization.hpp"
#include "lapchol/multigraph.hpp"
#include "lapchol/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lapchol {

class IsolatedVertex : public Error {
public:
    using Error::Error;
};

enum class OrderPolicy { ApproxMinDegree, Random, Natural };

struct SamplerConfig {
    std::uint32_t split = 1;
    std::uint32_t merge = 1;  // 0 means unbounded
    std::uint64_t seed = 0;
    OrderPolicy order = OrderPolicy::ApproxMinDegree;

    static SamplerConfig ac(std::uint64_t seed = 0) { return {1, 1, seed}; }
    static SamplerConfig ac2(std::uint64_t seed = 0) { return {2, 2, seed}; }
    static SamplerConfig ac_s(std::uint32_t k, std::uint64_t seed = 0) { return {k, 0, seed}; }
    static SamplerConfig ac_sm(std::uint32_t k, std::uint32_t l, std::uint64_t seed = 0)
    {
        return {k, l, seed};
    }

    void validate() const;
};

struct SampledEdge {
    Vertex u;
    Vertex v;
    double weight;
};

struct StarTarget {
    Vertex j;
    double p;
};

struct EliminationStar {
    Vertex center;
    std::vector<StarTarget> targets;
    double weight;  // w̃
};

/// Live neighbours of v aggregated per pair, in star order: ascending pair
/// weight, ties by vertex index.
std::vector<HalfEdge> star_order(const MultiGraph& g, Vertex v);

/// One star per neighbour except the last, which has no later targets.
std::vector<EliminationStar> elimination_stars(const MultiGraph& g, Vertex v);
std::vector<EliminationStar> elimination_stars(const MultiGraph& g, Vertex v,
                                               std::span<const Vertex> neighbor_order);

/// One sample per star; `elimination` keys the random stream.
std::vector<SampledEdge> clique_tree_sample(const MultiGraph& g, Vertex v, const CounterRng& rng,
                                            std::uint64_t elimination = 0);

/// min(count, l) samples per star; l = 0 means unbounded.
std::vector<SampledEdge> clique_tree_sample_multiedge_merge(std::uint32_t l, const MultiGraph& g,
                                                            Vertex v, const CounterRng& rng,
                                                            std::uint64_t elimination = 0);

/// Exact clique on the neighbours of v, one edge per pair.
std::vector<SampledEdge> elimination_clique(const MultiGraph& g, Vertex v);

/// Approximate minimum-degree queue. Bucket b holds degrees in
/// (2^(b-2), 2^(b-1)], with degree 0 alone in bucket 0, so a popped vertex
/// has at most twice the current minimum degree. Updates push a fresh entry
/// when the bucket changes; stale entries are dropped on pop.
class DegreeQueue {
public:
    explicit DegreeQueue(std::span<const std::uint64_t> degrees);

    static std::size_t bucket_of(std::uint64_t degree) noexcept;

    bool empty() const noexcept { return remaining_ == 0; }
    std::size_t remaining() const noexcept { return remaining_; }

    void update(Vertex v, std::uint64_t degree);
    Vertex pop();

    /// Upper degree bound of the lowest non-empty bucket (after skipping
    /// stale entries); meaningful only when not empty.
    std::uint64_t min_bucket_bound();

private:
    void push(Vertex v);
    std::vector<std::vector<Vertex>> buckets_;
    std::vector<std::uint64_t> degree_;
    std::vector<std::uint8_t> bucket_;
    std::vector<std::uint8_t> done_;
    std::size_t lowest_ = 0;
    std::size_t remaining_ = 0;
};

/// Everything an observer may want to check after one elimination.
struct EliminationEvent {
    std::uint64_t step;
    Vertex v;
    std::span<const HalfEdge> neighbors;  // star order
    double d;
    std::span<const SampledEdge> samples;
    std::uint64_t degree_at_pop;
    std::uint64_t min_degree_at_pop;  // over live vertices; computed only when observed
    const MultiGraph& graph;  // after the samples are added
};

using EliminationObserver = std::function<void(const EliminationEvent&)>;

LowerTriFactorization approximate_cholesky(const SparseSym& laplacian, const SamplerConfig& cfg,
                                           const EliminationObserver& observer = {});
RowOpFactorization approximate_edgewise_cholesky(const SparseSym& laplacian, const SamplerConfig& cfg,
                                                 const EliminationObserver& observer = {});

LowerTriFactorization exact_cholesky(const SparseSym& laplacian);
RowOpFactorization exact_edgewise_cholesky(const SparseSym& laplacian);

/// Fixed order for the Random (Fisher-Yates) and Natural policies.
std::vector<Vertex> static_order(std::size_t n, OrderPolicy policy, std::uint64_t seed);

}  // namespace lapchol
