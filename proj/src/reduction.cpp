#include "lapchol/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lapchol {

GrembanLift lift(const SparseSym& m, double eps)
{
    const MatrixClass cls = classify(m, eps);
    if (cls.kind == MatrixKind::NotSupported) {
        throw NotSddm("matrix is not SDDM (nearness " + std::to_string(cls.nearness) + ")");
    }
    const std::size_t n = m.size();
    constexpr double unit = std::numeric_limits<double>::epsilon();
    std::vector<Triplet> edges;
    edges.reserve(m.offdiag_pairs() + n);
    for (const Triplet& t : m.upper_entries()) {
        edges.push_back({t.row, t.col, -t.value});
    }
    const auto extra = static_cast<Vertex>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (double v : m.row_vals(i)) {
            off -= v;
        }
        const double excess = m.diag(i) - off;
        // Round-off residue and the clamped negative excess of
        // approximately-SDDM rows both get no edge.
        const double roundoff = static_cast<double>(m.row_cols(i).size() + 1) * unit * std::max(m.diag(i), off);
        if (excess > roundoff) {
            edges.push_back({static_cast<Vertex>(i), extra, excess});
        }
    }
    GrembanLift out;
    out.base_n = n;
    out.extra_vertex = extra;
    out.lifted = SparseSym::laplacian_from_edges(n + 1, edges);
    return out;
}

std::vector<double> lift_rhs(const GrembanLift& lift, std::span<const double> b)
{
    if (b.size() != lift.base_n) {
        throw DimensionMismatch("lift_rhs: expected length " + std::to_string(lift.base_n));
    }
    std::vector<double> out(b.begin(), b.end());
    double sum = 0.0;
    for (double v : b) {
        sum += v;
    }
    out.push_back(-sum);
    return out;
}

std::vector<double> recover(const GrembanLift& lift, std::span<const double> y)
{
    if (y.size() != lift.base_n + 1) {
        throw DimensionMismatch("recover: expected length " + std::to_string(lift.base_n + 1));
    }
    std::vector<double> x(y.begin(), y.end() - 1);
    const double ground = y[lift.extra_vertex];
    for (double& v : x) {
        v -= ground;
    }
    return x;
}

}  // namespace lapchol
