#pragma once

// Dense reference computations. Everything here is built from plain edge
// lists with Eigen so that it shares no code with the library under test.

#include "lapchol/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

namespace oracle {

using Dense = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Edge {
    int u, v;
    double w;
};

struct Graph {
    int n = 0;
    std::vector<Edge> edges;
};

inline Dense laplacian(const Graph& g)
{
    Dense L = Dense::Zero(g.n, g.n);
    for (const Edge& e : g.edges) {
        L(e.u, e.u) += e.w;
        L(e.v, e.v) += e.w;
        L(e.u, e.v) -= e.w;
        L(e.v, e.u) -= e.w;
    }
    return L;
}

inline lapchol::SparseSym to_sparse(const Graph& g)
{
    std::vector<lapchol::Triplet> t;
    for (const Edge& e : g.edges) {
        t.push_back({static_cast<lapchol::Vertex>(e.u), static_cast<lapchol::Vertex>(e.v), e.w});
    }
    return lapchol::SparseSym::laplacian_from_edges(static_cast<std::size_t>(g.n), t);
}

inline lapchol::SparseSym to_sparse(const Dense& a)
{
    std::vector<lapchol::Triplet> t;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (a(i, j) != 0.0) {
                t.push_back({static_cast<lapchol::Vertex>(i), static_cast<lapchol::Vertex>(j), a(i, j)});
            }
        }
    }
    return lapchol::SparseSym::from_triplets(static_cast<std::size_t>(a.rows()), t, true);
}

inline Dense to_dense(const lapchol::SparseSym& m)
{
    Dense a = Dense::Zero(static_cast<int>(m.size()), static_cast<int>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            a(static_cast<int>(i), static_cast<int>(j)) = m.at(static_cast<lapchol::Vertex>(i), static_cast<lapchol::Vertex>(j));
        }
    }
    return a;
}

/// Random spanning tree plus extra random edges; weights log-uniform in
/// [1e-2, 1e2] unless `unit`.
inline Graph random_connected(int n, std::mt19937_64& rng, double extra = 0.3, bool unit = false)
{
    Graph g;
    g.n = n;
    std::uniform_real_distribution<double> lw(-2.0, 2.0);
    auto weight = [&] { return unit ? 1.0 : std::pow(10.0, lw(rng)); };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        g.edges.push_back({perm[i], perm[pick(rng)], weight()});
    }
    std::bernoulli_distribution coin(extra);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (coin(rng)) {
                g.edges.push_back({u, v, weight()});
            }
        }
    }
    return g;
}

inline Graph complete(int n, double w = 1.0)
{
    Graph g;
    g.n = n;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            g.edges.push_back({u, v, w});
        }
    }
    return g;
}

/// Laplacian plus a random non-negative diagonal with at least one positive
/// entry per component, so the result is nonsingular SDDM.
inline Dense random_sddm(int n, std::mt19937_64& rng)
{
    Dense a = laplacian(random_connected(n, rng));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        if (u(rng) < 0.3) {
            a(i, i) += std::pow(10.0, 4.0 * u(rng) - 2.0);
        }
    }
    a(0, 0) += 0.5;
    return a;
}

/// Column-by-column Cholesky through dense Schur complements in the given
/// order. Column v (as a dense n-vector) is L(:,v)/sqrt(L(v,v)), or zero when
/// the pivot vanished.
inline std::vector<Vec> schur_columns(Dense L, const std::vector<unsigned>& order)
{
    std::vector<Vec> cols(L.rows(), Vec::Zero(L.rows()));
    for (unsigned v : order) {
        const double d = L(v, v);
        if (d <= 1e-12 * std::max(1.0, L.cwiseAbs().maxCoeff())) {
            continue;
        }
        Vec c = L.col(v) / std::sqrt(d);
        L -= c * c.transpose();
        L.row(v).setZero();
        L.col(v).setZero();
        cols[v] = c;
    }
    return cols;
}

/// Moore-Penrose pseudo-inverse through a symmetric eigendecomposition.
inline Dense pinv(const Dense& a)
{
    Eigen::SelfAdjointEigenSolver<Dense> es(a);
    const double cut = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
    Vec inv = es.eigenvalues().unaryExpr([cut](double x) { return std::abs(x) > cut ? 1.0 / x : 0.0; });
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

inline Vec to_vec(const std::vector<double>& x) { return Eigen::Map<const Vec>(x.data(), static_cast<int>(x.size())); }

inline std::vector<double> from_vec(const Vec& x) { return {x.data(), x.data() + x.size()}; }

inline double max_abs_diff(const Dense& a, const Dense& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
