#include "lapchol/generators.hpp"

#include "lapchol/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lapchol {

// ---- grids --------------------------------------------------------------------

std::string to_string(Coefficients c)
{
    switch (c) {
    case Coefficients::Uniform: return "uniform";
    case Coefficients::Checkerboard: return "checkerboard";
    case Coefficients::AnisotropicWeight: return "aniso-weight";
    case Coefficients::AnisotropicStretch: return "aniso-stretch";
    }
    return "uniform";
}

Coefficients parse_coefficients(const std::string& s)
{
    for (Coefficients c : {Coefficients::Uniform, Coefficients::Checkerboard, Coefficients::AnisotropicWeight,
                           Coefficients::AnisotropicStretch}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw Error("unknown coefficient model '" + s + "'");
}

GridSpec GridSpec::cube(std::size_t points_per_axis)
{
    return {points_per_axis, points_per_axis, points_per_axis, Coefficients::Uniform, 1, 1.0, 1.0};
}

GridSpec GridSpec::checkerboard(std::size_t points_per_axis, std::size_t k, double w)
{
    return {points_per_axis, points_per_axis, points_per_axis, Coefficients::Checkerboard, k, w, 1.0};
}

GridSpec GridSpec::anisotropic_weight(std::size_t points_per_axis, double w)
{
    return {points_per_axis, points_per_axis, points_per_axis, Coefficients::AnisotropicWeight, 1, w, 1.0};
}

GridSpec GridSpec::anisotropic_stretch(std::size_t points, double eta)
{
    const auto n1 = static_cast<std::size_t>(std::max(2.0, std::round(eta * static_cast<double>(points))));
    return {n1, points, points, Coefficients::AnisotropicStretch, 1, 1.0, eta};
}

std::size_t GridSpec::unknowns() const { return (n1 - 2) * (n2 - 2) * (n3 - 2); }

void GridSpec::validate() const
{
    if (n1 < 2 || n2 < 2 || n3 < 2) {
        throw Error("grid needs at least 2 points per axis");
    }
    if (k < 1 || !(w > 0.0) || !(eta > 0.0)) {
        throw Error("grid parameters need k >= 1, w > 0, eta > 0");
    }
    if (model == Coefficients::Checkerboard) {
        for (std::size_t m : {n1, n2, n3}) {
            if ((m - 1) % k != 0) {
                throw Error("checkerboard regions must align with grid points: (points - 1) must be divisible by k");
            }
        }
    }
    if (model == Coefficients::AnisotropicStretch) {
        const auto want = static_cast<std::size_t>(std::max(2.0, std::round(eta * static_cast<double>(n2))));
        if (n1 != want || n3 != n2) {
            throw Error("stretched grid needs n1 = max(2, round(eta * n2)) and n3 = n2");
        }
    }
}

double checkerboard_mu(std::size_t k, double w, double x, double y, double z)
{
    const double kd = static_cast<double>(k);
    const auto cell = static_cast<long long>(std::floor(kd * x)) + static_cast<long long>(std::floor(kd * y))
                      + static_cast<long long>(std::floor(kd * z));
    return cell % 2 == 0 ? 1.0 : w;
}

SparseSym poisson_grid(const GridSpec& spec)
{
    spec.validate();
    const std::size_t m1 = spec.n1 - 2, m2 = spec.n2 - 2, m3 = spec.n3 - 2;
    const std::size_t n = m1 * m2 * m3;
    const double h1 = 1.0 / static_cast<double>(spec.n1 - 1);
    const double h2 = 1.0 / static_cast<double>(spec.n2 - 1);
    const double h3 = 1.0 / static_cast<double>(spec.n3 - 1);

    // Coefficient between grid point (i,j,k) and its neighbour along `axis`
    // in direction `dir` (points are 0-based including the boundary).
    auto coeff = [&](std::size_t i, std::size_t j, std::size_t k, int axis, int dir) {
        switch (spec.model) {
        case Coefficients::Uniform:
        case Coefficients::AnisotropicStretch: return 1.0;
        case Coefficients::AnisotropicWeight: return axis == 0 ? spec.w : 1.0;
        case Coefficients::Checkerboard: {
            double x = static_cast<double>(i) * h1, y = static_cast<double>(j) * h2, z = static_cast<double>(k) * h3;
            const double half = 0.5 * dir;
            (axis == 0 ? x : axis == 1 ? y : z) += half * (axis == 0 ? h1 : axis == 1 ? h2 : h3);
            return checkerboard_mu(spec.k, spec.w, x, y, z);
        }
        }
        return 1.0;
    };
    auto index = [&](std::size_t i, std::size_t j, std::size_t k) {
        return static_cast<Vertex>(((i - 1) * m2 + (j - 1)) * m3 + (k - 1));
    };

    std::vector<Triplet> entries;
    entries.reserve(4 * n);
    for (std::size_t i = 1; i <= m1; ++i) {
        for (std::size_t j = 1; j <= m2; ++j) {
            for (std::size_t k = 1; k <= m3; ++k) {
                const Vertex p = index(i, j, k);
                double diag = 0.0;
                for (int axis = 0; axis < 3; ++axis) {
                    for (int dir : {-1, 1}) {
                        const double a = coeff(i, j, k, axis, dir);
                        diag += a;
                        std::size_t q[3] = {i, j, k};
                        q[axis] = static_cast<std::size_t>(static_cast<long long>(q[axis]) + dir);
                        const std::size_t lim[3] = {m1, m2, m3};
                        if (dir > 0 && q[axis] >= 1 && q[axis] <= lim[axis]) {
                            entries.push_back({p, index(q[0], q[1], q[2]), -a});
                        }
                    }
                }
                entries.push_back({p, p, diag});
            }
        }
    }
    return SparseSym::from_triplets(n, entries, false);
}

// ---- stars --------------------------------------------------------------------

void StarSpec::validate() const
{
    if (k < 2 || l < 1) {
        throw Error("Sachdeva star needs clique size k >= 2 and l >= 1 leaves");
    }
}

SparseSym sachdeva_star(const StarSpec& spec)
{
    spec.validate();
    const std::size_t n = 1 + spec.l * spec.k;
    std::vector<Triplet> edges;
    edges.reserve(spec.l * (1 + spec.k * (spec.k - 1) / 2));
    for (std::size_t c = 0; c < spec.l; ++c) {
        const auto base = static_cast<Vertex>(1 + c * spec.k);
        edges.push_back({0, base, 1.0});
        for (std::size_t a = 0; a < spec.k; ++a) {
            for (std::size_t b = a + 1; b < spec.k; ++b) {
                edges.push_back({static_cast<Vertex>(base + a), static_cast<Vertex>(base + b), 1.0});
            }
        }
    }
    return SparseSym::laplacian_from_edges(n, edges);
}

// ---- chimera building blocks --------------------------------------------------

void EdgeGraph::simplify()
{
    for (auto& [u, v] : edges) {
        if (u > v) {
            std::swap(u, v);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
}

namespace {

struct Dsu {
    std::vector<Vertex> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Vertex{0}); }
    Vertex find(Vertex x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(Vertex a, Vertex b)
    {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace

bool EdgeGraph::connected() const
{
    if (n <= 1) {
        return true;
    }
    Dsu dsu(n);
    std::size_t merges = 0;
    for (const auto& [u, v] : edges) {
        merges += dsu.unite(u, v);
    }
    return merges == n - 1;
}

EdgeGraph path_graph(std::size_t n)
{
    EdgeGraph g{n, {}};
    for (std::size_t i = 1; i < n; ++i) {
        g.edges.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
    }
    return g;
}

EdgeGraph ring_graph(std::size_t n)
{
    EdgeGraph g = path_graph(n);
    if (n >= 3) {
        g.edges.emplace_back(static_cast<Vertex>(n - 1), 0);
    }
    return g;
}

EdgeGraph complete_graph(std::size_t n)
{
    EdgeGraph g{n, {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            g.edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
        }
    }
    return g;
}

EdgeGraph grid2d_graph(std::size_t rows, std::size_t cols)
{
    EdgeGraph g{rows * cols, {}};
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto v = static_cast<Vertex>(r * cols + c);
            if (c + 1 < cols) {
                g.edges.emplace_back(v, v + 1);
            }
            if (r + 1 < rows) {
                g.edges.emplace_back(v, static_cast<Vertex>(v + cols));
            }
        }
    }
    return g;
}

EdgeGraph random_tree(std::size_t n, StreamRng& rng)
{
    EdgeGraph g{n, {}};
    for (std::size_t i = 1; i < n; ++i) {
        g.edges.emplace_back(static_cast<Vertex>(rng.below(i)), static_cast<Vertex>(i));
    }
    return g;
}

EdgeGraph cartesian_product(const EdgeGraph& g, const EdgeGraph& h)
{
    EdgeGraph p{g.n * h.n, {}};
    p.edges.reserve(g.edges.size() * h.n + h.edges.size() * g.n);
    for (std::size_t a = 0; a < g.n; ++a) {
        for (const auto& [u, v] : h.edges) {
            p.edges.emplace_back(static_cast<Vertex>(a * h.n + u), static_cast<Vertex>(a * h.n + v));
        }
    }
    for (const auto& [u, v] : g.edges) {
        for (std::size_t b = 0; b < h.n; ++b) {
            p.edges.emplace_back(static_cast<Vertex>(u * h.n + b), static_cast<Vertex>(v * h.n + b));
        }
    }
    return p;
}

EdgeGraph generalized_necklace(const EdgeGraph& g, const EdgeGraph& h, std::size_t cross, StreamRng& rng)
{
    EdgeGraph out{g.n * h.n, {}};
    for (std::size_t a = 0; a < g.n; ++a) {
        for (const auto& [u, v] : h.edges) {
            out.edges.emplace_back(static_cast<Vertex>(a * h.n + u), static_cast<Vertex>(a * h.n + v));
        }
    }
    for (const auto& [u, v] : g.edges) {
        for (std::size_t c = 0; c < cross; ++c) {
            out.edges.emplace_back(static_cast<Vertex>(u * h.n + rng.below(h.n)),
                                   static_cast<Vertex>(v * h.n + rng.below(h.n)));
        }
    }
    return out;
}

EdgeGraph two_lift(const EdgeGraph& g, StreamRng& rng)
{
    EdgeGraph out{2 * g.n, {}};
    const auto n = static_cast<Vertex>(g.n);
    for (const auto& [u, v] : g.edges) {
        if (rng.coin()) {
            out.edges.emplace_back(u, v);
            out.edges.emplace_back(u + n, v + n);
        } else {
            out.edges.emplace_back(u, v + n);
            out.edges.emplace_back(u + n, v);
        }
    }
    return out;
}

EdgeGraph thicken(const EdgeGraph& g, double rate, StreamRng& rng)
{
    std::vector<std::vector<Vertex>> adj(g.n);
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    EdgeGraph out = g;
    for (std::size_t v = 0; v < g.n; ++v) {
        const std::size_t d = adj[v].size();
        if (d < 2) {
            continue;
        }
        // Expected rate · C(d,2) closing edges, drawn as random pairs.
        const double pairs = rate * static_cast<double>(d * (d - 1) / 2);
        auto count = static_cast<std::size_t>(pairs);
        count += rng.uniform() <= pairs - static_cast<double>(count);
        for (std::size_t c = 0; c < count; ++c) {
            const std::size_t a = rng.below(d);
            std::size_t b = rng.below(d - 1);
            b += b >= a;
            out.edges.emplace_back(adj[v][a], adj[v][b]);
        }
    }
    return out;
}

namespace {

// Grow g to exactly `target` vertices by hanging new vertices off random ones.
void pad(EdgeGraph& g, std::size_t target, StreamRng& rng)
{
    if (g.n == 0 && target > 0) {
        g.n = 1;
    }
    while (g.n < target) {
        g.edges.emplace_back(static_cast<Vertex>(rng.below(g.n)), static_cast<Vertex>(g.n));
        ++g.n;
    }
}

std::size_t isqrt(std::size_t s) { return static_cast<std::size_t>(std::sqrt(static_cast<double>(s))); }

EdgeGraph base_graph(std::size_t s, StreamRng& rng)
{
    EdgeGraph g;
    switch (rng.below(4)) {
    case 0: g = path_graph(s); break;
    case 1: g = ring_graph(s); break;
    case 2: g = random_tree(s, rng); break;
    default: {
        const std::size_t rows = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::max<std::size_t>(1, isqrt(s)))));
        g = grid2d_graph(rows, s / rows);
        break;
    }
    }
    pad(g, s, rng);
    return g;
}

EdgeGraph build_chimera(std::size_t s, int depth, double rate, StreamRng& rng)
{
    if (s <= 1) {
        return EdgeGraph{s, {}};
    }
    if (s < 12 || depth >= 4) {
        return base_graph(s, rng);
    }
    EdgeGraph g;
    const auto root = static_cast<std::int64_t>(std::max<std::size_t>(2, isqrt(s)));
    switch (rng.below(5)) {
    case 0: g = base_graph(s, rng); break;
    case 1: {
        const auto a = static_cast<std::size_t>(rng.between(2, root));
        const EdgeGraph left = build_chimera(a, depth + 1, rate, rng);
        const EdgeGraph right = build_chimera(s / a, depth + 1, rate, rng);
        g = cartesian_product(left, right);
        break;
    }
    case 2: {
        const auto a = static_cast<std::size_t>(rng.between(2, root));
        const EdgeGraph outer = build_chimera(a, depth + 1, rate, rng);
        const EdgeGraph inner = build_chimera(s / a, depth + 1, rate, rng);
        g = generalized_necklace(outer, inner, static_cast<std::size_t>(rng.between(1, 3)), rng);
        break;
    }
    case 3: g = two_lift(build_chimera(s / 2, depth + 1, rate, rng), rng); break;
    default: g = thicken(build_chimera(s, depth + 1, rate, rng), rate, rng); break;
    }
    pad(g, s, rng);
    return g;
}

void connect(EdgeGraph& g, StreamRng& rng)
{
    Dsu dsu(g.n);
    for (const auto& [u, v] : g.edges) {
        dsu.unite(u, v);
    }
    std::vector<Vertex> roots;
    for (std::size_t v = 0; v < g.n; ++v) {
        if (dsu.find(static_cast<Vertex>(v)) == v) {
            roots.push_back(static_cast<Vertex>(v));
        }
    }
    for (std::size_t c = 1; c < roots.size(); ++c) {
        // Join each extra component to a random vertex seen so far.
        const Vertex anchor = static_cast<Vertex>(rng.below(roots[c]));
        g.edges.emplace_back(anchor, roots[c]);
    }
}

std::size_t ceil_cbrt(std::size_t n)
{
    auto c = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n))));
    while (c * c * c < n) {
        ++c;
    }
    while (c > 1 && (c - 1) * (c - 1) * (c - 1) >= n) {
        --c;
    }
    return std::max<std::size_t>(c, 1);
}

}  // namespace

void ChimeraSpec::validate() const
{
    if (n < 2) {
        throw Error("chimera needs at least 2 vertices");
    }
    if (n > std::numeric_limits<Vertex>::max() / 2) {
        throw Error("chimera size too large");
    }
    if (!(thickening_rate >= 0.0 && thickening_rate <= 1.0)) {
        throw Error("thickening rate must lie in [0, 1]");
    }
}

SparseSym chimera(const ChimeraSpec& spec)
{
    spec.validate();
    StreamRng rng(mix64(spec.seed) ^ mix64(spec.n * 0x9E3779B97F4A7C15ULL));
    EdgeGraph g = build_chimera(spec.n, 0, spec.thickening_rate, rng);
    g.simplify();
    connect(g, rng);
    g.simplify();

    std::vector<double> weight(g.edges.size(), 1.0);
    if (spec.weighted) {
        StreamRng wr = rng.fork(0x77656967ULL);
        if (wr.coin()) {
            for (double& w : weight) {
                w = wr.uniform();
            }
        } else {
            std::vector<double> x(g.n);
            for (double& v : x) {
                v = wr.uniform();
            }
            std::vector<double> deg(g.n, 0.0);
            for (const auto& [u, v] : g.edges) {
                deg[u] += 1.0;
                deg[v] += 1.0;
            }
            const auto smooth = wr.below(4);
            for (std::uint64_t s = 0; s < smooth; ++s) {
                // Lazy random walk step: x <- (x + D^-1 A x) / 2.
                std::vector<double> ax(g.n, 0.0);
                for (const auto& [u, v] : g.edges) {
                    ax[u] += x[v];
                    ax[v] += x[u];
                }
                for (std::size_t i = 0; i < g.n; ++i) {
                    x[i] = 0.5 * (x[i] + (deg[i] > 0.0 ? ax[i] / deg[i] : x[i]));
                }
            }
            for (std::size_t e = 0; e < g.edges.size(); ++e) {
                weight[e] = std::max(std::abs(x[g.edges[e].first] - x[g.edges[e].second]), 1e-12);
            }
        }
        if (wr.coin()) {
            for (double& w : weight) {
                w = 1.0 / w;
            }
        }
    }

    std::vector<Triplet> entries;
    entries.reserve(g.edges.size() + g.n);
    std::vector<double> diag(g.n, 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        entries.push_back({u, v, -weight[e]});
        diag[u] += weight[e];
        diag[v] += weight[e];
    }
    if (spec.sddm_boundary) {
        const std::size_t stride = ceil_cbrt(g.n);
        for (std::size_t i = 0; i < g.n; i += stride) {
            diag[i] += 1.0;
        }
    }
    for (std::size_t i = 0; i < g.n; ++i) {
        entries.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i), diag[i]});
    }
    return SparseSym::from_triplets(g.n, entries, false);
}

// ---- right-hand sides -----------------------------------------------------------

std::vector<double> generic_rhs(const SparseSym& m, std::uint64_t seed)
{
    StreamRng rng(seed ^ 0x726873ULL);
    std::vector<double> g(m.size());
    for (double& v : g) {
        v = rng.normal();
    }
    std::vector<double> b = m.multiply(g);
    const double nb = kernels::serial::norm2(b);
    if (nb > 0.0) {
        for (double& v : b) {
            v /= nb;
        }
    }
    return b;
}

}  // namespace lapchol
