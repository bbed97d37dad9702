#include "lapchol/elimination.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace lapchol {

void SamplerConfig::validate() const
{
    if (split == 0) {
        throw Error("split factor k must be at least 1");
    }
}

// ---- star machinery ---------------------------------------------------------

namespace {

bool star_less(const HalfEdge& a, const HalfEdge& b)
{
    return a.weight != b.weight ? a.weight < b.weight : a.nbr < b.nbr;
}

// suf[i] = Σ_{j >= i} W_j, with suf[k] = 0.
void suffix_sums(std::span<const HalfEdge> nbrs, std::vector<double>& suf)
{
    suf.assign(nbrs.size() + 1, 0.0);
    for (std::size_t i = nbrs.size(); i-- > 0;) {
        suf[i] = suf[i + 1] + nbrs[i].weight;
    }
}

// Smallest j in [lo, k-1] with suf[j+1] <= target. Every W is positive, so
// j is drawn with probability W_j / suf[lo] when target = (1-u)·suf[lo].
std::size_t search_suffix(const std::vector<double>& suf, std::size_t lo, double target)
{
    std::size_t hi = suf.size() - 2;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (suf[mid + 1] <= target) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

// Star i emits min(count, l) samples (all of them when l = 0).
void sample_stars(std::span<const HalfEdge> nbrs, const std::vector<double>& suf, std::uint32_t l,
                  std::uint64_t key, std::vector<SampledEdge>& out)
{
    const double d = suf[0];
    for (std::size_t i = 0; i + 1 < nbrs.size(); ++i) {
        const std::uint32_t t = l == 0 ? nbrs[i].count : std::min(nbrs[i].count, l);
        const double rest = suf[i + 1];
        const double w = nbrs[i].weight / t * (rest / d);
        for (std::uint32_t h = 0; h < t; ++h) {
            const double u = CounterRng::uniform_keyed(key, i, h);
            const std::size_t j = search_suffix(suf, i + 1, (1.0 - u) * rest);
            out.push_back({nbrs[i].nbr, nbrs[j].nbr, w});
        }
    }
}

void exact_clique(std::span<const HalfEdge> nbrs, double d, std::vector<SampledEdge>& out)
{
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
            out.push_back({nbrs[i].nbr, nbrs[j].nbr, nbrs[i].weight * nbrs[j].weight / d});
        }
    }
}

std::vector<HalfEdge> sorted_neighbors(const MultiGraph& g, Vertex v)
{
    if (v >= g.size() || g.removed(v)) {
        throw Error("vertex " + std::to_string(v) + " is not in the graph");
    }
    std::vector<HalfEdge> nbrs = g.gather(v);
    std::sort(nbrs.begin(), nbrs.end(), star_less);
    return nbrs;
}

std::vector<HalfEdge> require_neighbors(const MultiGraph& g, Vertex v)
{
    auto nbrs = sorted_neighbors(g, v);
    if (nbrs.empty()) {
        throw IsolatedVertex("vertex " + std::to_string(v) + " has no neighbours");
    }
    return nbrs;
}

std::vector<EliminationStar> stars_from(std::span<const HalfEdge> nbrs)
{
    std::vector<double> suf;
    suffix_sums(nbrs, suf);
    std::vector<EliminationStar> stars;
    for (std::size_t i = 0; i + 1 < nbrs.size(); ++i) {
        EliminationStar s{nbrs[i].nbr, {}, nbrs[i].weight * suf[i + 1] / suf[0]};
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
            s.targets.push_back({nbrs[j].nbr, nbrs[j].weight / suf[i + 1]});
        }
        stars.push_back(std::move(s));
    }
    return stars;
}

}  // namespace

std::vector<HalfEdge> star_order(const MultiGraph& g, Vertex v) { return sorted_neighbors(g, v); }

std::vector<EliminationStar> elimination_stars(const MultiGraph& g, Vertex v)
{
    return stars_from(require_neighbors(g, v));
}

std::vector<EliminationStar> elimination_stars(const MultiGraph& g, Vertex v,
                                               std::span<const Vertex> neighbor_order)
{
    const auto nbrs = require_neighbors(g, v);
    if (neighbor_order.size() != nbrs.size()) {
        throw Error("neighbour order is not a permutation of the neighbours");
    }
    std::vector<HalfEdge> ordered;
    ordered.reserve(nbrs.size());
    for (Vertex u : neighbor_order) {
        const auto it = std::find_if(nbrs.begin(), nbrs.end(), [u](const HalfEdge& e) { return e.nbr == u; });
        if (it == nbrs.end()
            || std::any_of(ordered.begin(), ordered.end(), [u](const HalfEdge& e) { return e.nbr == u; })) {
            throw Error("neighbour order is not a permutation of the neighbours");
        }
        ordered.push_back(*it);
    }
    return stars_from(ordered);
}

std::vector<SampledEdge> clique_tree_sample(const MultiGraph& g, Vertex v, const CounterRng& rng,
                                            std::uint64_t elimination)
{
    return clique_tree_sample_multiedge_merge(1, g, v, rng, elimination);
}

std::vector<SampledEdge> clique_tree_sample_multiedge_merge(std::uint32_t l, const MultiGraph& g, Vertex v,
                                                            const CounterRng& rng, std::uint64_t elimination)
{
    const auto nbrs = require_neighbors(g, v);
    std::vector<double> suf;
    suffix_sums(nbrs, suf);
    std::vector<SampledEdge> out;
    sample_stars(nbrs, suf, l, rng.elimination_key(elimination), out);
    return out;
}

std::vector<SampledEdge> elimination_clique(const MultiGraph& g, Vertex v)
{
    const auto nbrs = require_neighbors(g, v);
    double d = 0.0;
    for (const HalfEdge& e : nbrs) {
        d += e.weight;
    }
    std::vector<SampledEdge> out;
    exact_clique(nbrs, d, out);
    return out;
}

// ---- ordering ---------------------------------------------------------------

DegreeQueue::DegreeQueue(std::span<const std::uint64_t> degrees)
    : buckets_(66), degree_(degrees.begin(), degrees.end()), bucket_(degrees.size()),
      done_(degrees.size(), 0), lowest_(buckets_.size()), remaining_(degrees.size())
{
    // Push in reverse so that, within a bucket, lower indices pop first.
    for (std::size_t v = degrees.size(); v-- > 0;) {
        bucket_[v] = static_cast<std::uint8_t>(bucket_of(degree_[v]));
        push(static_cast<Vertex>(v));
    }
}

std::size_t DegreeQueue::bucket_of(std::uint64_t degree) noexcept
{
    return degree == 0 ? 0 : 1 + static_cast<std::size_t>(std::bit_width(degree - 1));
}

void DegreeQueue::push(Vertex v)
{
    buckets_[bucket_[v]].push_back(v);
    lowest_ = std::min<std::size_t>(lowest_, bucket_[v]);
}

void DegreeQueue::update(Vertex v, std::uint64_t degree)
{
    if (done_[v]) {
        return;
    }
    degree_[v] = degree;
    const auto b = static_cast<std::uint8_t>(bucket_of(degree));
    if (b != bucket_[v]) {
        bucket_[v] = b;
        push(v);
    }
}

std::uint64_t DegreeQueue::min_bucket_bound()
{
    while (lowest_ < buckets_.size()) {
        auto& bucket = buckets_[lowest_];
        while (!bucket.empty() && (done_[bucket.back()] || bucket_[bucket.back()] != lowest_)) {
            bucket.pop_back();
        }
        if (!bucket.empty()) {
            return lowest_ <= 1 ? lowest_ : std::uint64_t{1} << (lowest_ - 1);
        }
        ++lowest_;
    }
    throw Error("degree queue is empty");
}

Vertex DegreeQueue::pop()
{
    min_bucket_bound();
    auto& bucket = buckets_[lowest_];
    const Vertex v = bucket.back();
    bucket.pop_back();
    done_[v] = 1;
    --remaining_;
    return v;
}

std::vector<Vertex> static_order(std::size_t n, OrderPolicy policy, std::uint64_t seed)
{
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    if (policy == OrderPolicy::Random) {
        StreamRng rng(seed ^ 0x6f72646572ULL);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
    }
    return order;
}

// ---- elimination engine -----------------------------------------------------

namespace {

class LowerTriSink {
public:
    explicit LowerTriSink(std::size_t n)
    {
        f_.n = n;
        f_.diag.assign(n, 0.0);
        f_.order.reserve(n);
        f_.col_ptr.reserve(n + 1);
    }

    void column(Vertex v, std::span<const HalfEdge> nbrs, const std::vector<double>& suf)
    {
        const double s = std::sqrt(suf[0]);
        f_.diag[v] = s;
        for (const HalfEdge& e : nbrs) {
            f_.row.push_back(e.nbr);
            f_.val.push_back(-e.weight / s);
        }
        close(v);
    }

    void empty(Vertex v) { close(v); }

    LowerTriFactorization take() { return std::move(f_); }
    LowerTriFactorization& get() { return f_; }

private:
    void close(Vertex v)
    {
        f_.order.push_back(v);
        f_.col_ptr.push_back(f_.row.size());
    }
    LowerTriFactorization f_;
};

class RowOpSink {
public:
    explicit RowOpSink(std::size_t n)
    {
        f_.n = n;
        f_.phi.assign(n, 0.0);
        f_.order.reserve(n);
    }

    void column(Vertex v, std::span<const HalfEdge> nbrs, const std::vector<double>& suf)
    {
        const std::size_t k = nbrs.size();
        f_.order.push_back(v);
        f_.pivots.push_back({v, nbrs[k - 1].nbr, f_.shifts.size()});
        for (std::size_t i = 0; i + 1 < k; ++i) {
            f_.shifts.push_back({nbrs[i].nbr, nbrs[i].weight / suf[i]});
        }
        f_.phi[v] = nbrs[k - 1].weight * nbrs[k - 1].weight / suf[0];
    }

    void empty(Vertex v) { f_.order.push_back(v); }

    RowOpFactorization take() { return std::move(f_); }
    RowOpFactorization& get() { return f_; }

private:
    RowOpFactorization f_;
};

enum class CliqueMode { Sampled, Exact };

template <typename Sink>
void eliminate(const SparseSym& laplacian, const SamplerConfig& cfg, CliqueMode mode, Sink& sink,
               EliminationDiagnostics& diag, const EliminationObserver& observer)
{
    cfg.validate();
    if (!is_laplacian(laplacian)) {
        throw NotLaplacian("factorization input is not a graph Laplacian");
    }
    const std::size_t n = laplacian.size();
    MultiGraph g = MultiGraph::from_matrix(laplacian);
    if (mode == CliqueMode::Sampled && cfg.split > 1) {
        g.split(cfg.split);
    }
    const CounterRng rng(cfg.seed);

    const bool greedy = cfg.order == OrderPolicy::ApproxMinDegree;
    std::vector<Vertex> fixed;
    std::optional<DegreeQueue> queue;
    if (greedy) {
        std::vector<std::uint64_t> deg(n);
        for (std::size_t v = 0; v < n; ++v) {
            deg[v] = g.degree(static_cast<Vertex>(v));
        }
        queue.emplace(deg);
    } else {
        fixed = static_order(n, cfg.order, cfg.seed);
    }

    std::vector<std::int64_t> slot(n, -1);
    std::vector<HalfEdge> nbrs;
    std::vector<double> suf;
    std::vector<SampledEdge> samples;

    for (std::uint64_t step = 0; step < n; ++step) {
        std::uint64_t min_degree = 0;
        if (observer) {
            min_degree = std::numeric_limits<std::uint64_t>::max();
            for (std::size_t u = 0; u < n; ++u) {
                if (!g.removed(static_cast<Vertex>(u))) {
                    min_degree = std::min(min_degree, g.degree(static_cast<Vertex>(u)));
                }
            }
        }
        const Vertex v = greedy ? queue->pop() : fixed[step];
        const std::uint64_t degree_at_pop = g.degree(v);

        g.gather(v, nbrs, slot);
        std::sort(nbrs.begin(), nbrs.end(), star_less);
        suffix_sums(nbrs, suf);
        samples.clear();

        const bool usable = !nbrs.empty() && std::isfinite(suf[0]) && suf[0] > 0.0
                            && std::all_of(nbrs.begin(), nbrs.end(), [](const HalfEdge& e) { return e.weight > 0.0; });
        if (!nbrs.empty() && !usable) {
            ++diag.degenerate;
        }
        if (usable) {
            diag.max_degree = std::max(diag.max_degree, nbrs.size());
            sink.column(v, nbrs, suf);
            if (mode == CliqueMode::Exact) {
                exact_clique(nbrs, suf[0], samples);
            } else {
                sample_stars(nbrs, suf, cfg.merge, rng.elimination_key(step), samples);
            }
        } else {
            sink.empty(v);
        }

        g.remove_vertex(v);
        for (const SampledEdge& e : samples) {
            if (e.u == e.v) {
                throw Error("internal error: sampled a self-loop");
            }
            g.add_edge(e.u, e.v, e.weight);
        }
        diag.samples += samples.size();
        if (greedy) {
            for (const HalfEdge& e : nbrs) {
                queue->update(e.nbr, g.degree(e.nbr));
            }
        }
        if (observer) {
            observer(EliminationEvent{step, v, nbrs, nbrs.empty() ? 0.0 : suf[0], samples, degree_at_pop,
                                      min_degree, g});
        }
    }
}

}  // namespace

LowerTriFactorization approximate_cholesky(const SparseSym& laplacian, const SamplerConfig& cfg,
                                           const EliminationObserver& observer)
{
    LowerTriSink sink(laplacian.size());
    eliminate(laplacian, cfg, CliqueMode::Sampled, sink, sink.get().diagnostics, observer);
    sink.get().components = connected_components(laplacian);
    return sink.take();
}

RowOpFactorization approximate_edgewise_cholesky(const SparseSym& laplacian, const SamplerConfig& cfg,
                                                 const EliminationObserver& observer)
{
    RowOpSink sink(laplacian.size());
    eliminate(laplacian, cfg, CliqueMode::Sampled, sink, sink.get().diagnostics, observer);
    sink.get().components = connected_components(laplacian);
    return sink.take();
}

LowerTriFactorization exact_cholesky(const SparseSym& laplacian)
{
    LowerTriSink sink(laplacian.size());
    eliminate(laplacian, SamplerConfig{}, CliqueMode::Exact, sink, sink.get().diagnostics, {});
    sink.get().components = connected_components(laplacian);
    return sink.take();
}

RowOpFactorization exact_edgewise_cholesky(const SparseSym& laplacian)
{
    RowOpSink sink(laplacian.size());
    eliminate(laplacian, SamplerConfig{}, CliqueMode::Exact, sink, sink.get().diagnostics, {});
    sink.get().components = connected_components(laplacian);
    return sink.take();
}

}  // namespace lapchol
