#include "lapchol/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lapchol {

namespace {

struct Pair {
    Vertex i;
    Vertex j;
    double v;
};

// Sort by (i, j) and sum duplicates; drops exact zeros.
void sort_and_merge(std::vector<Pair>& pairs)
{
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    std::size_t out = 0;
    for (std::size_t k = 0; k < pairs.size();) {
        Pair acc = pairs[k++];
        while (k < pairs.size() && pairs[k].i == acc.i && pairs[k].j == acc.j) {
            acc.v += pairs[k++].v;
        }
        if (acc.v != 0.0) {
            pairs[out++] = acc;
        }
    }
    pairs.resize(out);
}

Vertex find_root(std::vector<Vertex>& parent, Vertex x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

SparseSym::SparseSym(std::size_t n) : ptr_(n + 1, 0), diag_(n, 0.0) {}

SparseSym SparseSym::from_triplets(std::size_t n, std::span<const Triplet> entries, bool mirrored)
{
    SparseSym m(n);
    std::vector<Pair> upper;
    std::vector<Pair> lower;
    upper.reserve(mirrored ? entries.size() / 2 + 1 : entries.size());
    for (const Triplet& t : entries) {
        if (t.row >= n || t.col >= n) {
            throw DimensionMismatch("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col)
                                    + ") outside a " + std::to_string(n) + "x" + std::to_string(n)
                                    + " matrix");
        }
        if (!std::isfinite(t.value)) {
            throw Error("non-finite matrix entry");
        }
        if (t.row == t.col) {
            m.diag_[t.row] += t.value;
        } else if (!mirrored || t.row < t.col) {
            upper.push_back({std::min(t.row, t.col), std::max(t.row, t.col), t.value});
        } else {
            lower.push_back({t.col, t.row, t.value});
        }
    }
    sort_and_merge(upper);
    if (mirrored) {
        sort_and_merge(lower);
        bool same = upper.size() == lower.size();
        for (std::size_t k = 0; same && k < upper.size(); ++k) {
            const double scale = std::max(std::abs(upper[k].v), std::abs(lower[k].v));
            same = upper[k].i == lower[k].i && upper[k].j == lower[k].j
                   && std::abs(upper[k].v - lower[k].v) <= 1e-12 * scale;
        }
        if (!same) {
            throw Error("matrix is not symmetric");
        }
    }

    std::vector<std::size_t> count(n + 1, 0);
    for (const Pair& p : upper) {
        ++count[p.i + 1];
        ++count[p.j + 1];
    }
    std::partial_sum(count.begin(), count.end(), m.ptr_.begin());
    m.col_.resize(2 * upper.size());
    m.val_.resize(2 * upper.size());
    std::vector<std::size_t> fill(m.ptr_.begin(), m.ptr_.end() - 1);
    // Pairs are sorted by (i, j), so each row receives its lower entries
    // first and both halves arrive in ascending column order.
    for (const Pair& p : upper) {
        m.col_[fill[p.i]] = p.j;
        m.val_[fill[p.i]++] = p.v;
        m.col_[fill[p.j]] = p.i;
        m.val_[fill[p.j]++] = p.v;
    }
    return m;
}

SparseSym SparseSym::laplacian_from_edges(std::size_t n, std::span<const Triplet> edges)
{
    std::vector<Triplet> entries;
    entries.reserve(edges.size());
    for (const Triplet& e : edges) {
        if (!(e.value > 0.0)) {
            throw Error("edge weights must be positive");
        }
        if (e.row == e.col) {
            throw Error("self-loop in edge list");
        }
        entries.push_back({e.row, e.col, -e.value});
    }
    SparseSym m = from_triplets(n, entries, false);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (double v : m.row_vals(i)) {
            d -= v;
        }
        m.diag_[i] = d;
    }
    return m;
}

double SparseSym::at(std::size_t i, std::size_t j) const
{
    if (i == j) {
        return diag_[i];
    }
    const auto cols = row_cols(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Vertex>(j));
    if (it == cols.end() || *it != j) {
        return 0.0;
    }
    return val_[ptr_[i] + static_cast<std::size_t>(it - cols.begin())];
}

std::vector<Triplet> SparseSym::upper_entries() const
{
    std::vector<Triplet> out;
    out.reserve(offdiag_pairs());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) {
            if (col_[k] > i) {
                out.push_back({static_cast<Vertex>(i), col_[k], val_[k]});
            }
        }
    }
    return out;
}

std::vector<double> SparseSym::row_sums() const
{
    std::vector<double> s(diag_);
    for (std::size_t i = 0; i < size(); ++i) {
        for (double v : row_vals(i)) {
            s[i] += v;
        }
    }
    return s;
}

void SparseSym::multiply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != size() || y.size() != size()) {
        throw DimensionMismatch("multiply: vector length does not match matrix");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        double acc = diag_[i] * x[i];
        for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) {
            acc += val_[k] * x[col_[k]];
        }
        y[i] = acc;
    }
}

std::vector<double> SparseSym::multiply(std::span<const double> x) const
{
    std::vector<double> y(size());
    multiply(x, y);
    return y;
}

std::vector<double> SparseSym::to_dense() const
{
    const std::size_t n = size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = diag_[i];
        for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) {
            a[i * n + col_[k]] = val_[k];
        }
    }
    return a;
}

std::string to_string(MatrixKind kind)
{
    switch (kind) {
    case MatrixKind::Laplacian: return "laplacian";
    case MatrixKind::Sddm: return "sddm";
    case MatrixKind::ApproxSddm: return "approx-sddm";
    case MatrixKind::NotSupported: break;
    }
    return "not-supported";
}

MatrixClass classify(const SparseSym& m, double eps)
{
    constexpr double unit = std::numeric_limits<double>::epsilon();
    MatrixClass out;
    bool negative = false;
    bool positive = false;
    bool unsupported = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double d = m.diag(i);
        double off = 0.0;
        double sum = d;
        for (double v : m.row_vals(i)) {
            if (v > 0.0) {
                unsupported = true;
            }
            off -= v;
            sum += v;
        }
        if (d < 0.0) {
            unsupported = true;
            continue;
        }
        // A row counts as summing to zero when the residue is within the
        // round-off of accumulating it; eps only bounds how negative a row may be.
        const double roundoff = static_cast<double>(m.row_cols(i).size() + 1) * unit * std::max(d, off);
        if (std::abs(sum) <= roundoff) {
            continue;
        }
        if (sum > 0.0) {
            positive = true;
            continue;
        }
        negative = true;
        const double ratio = d > 0.0 ? -sum / d : std::numeric_limits<double>::infinity();
        out.nearness = std::max(out.nearness, ratio);
    }
    if (unsupported) {
        out.kind = MatrixKind::NotSupported;
    } else if (negative) {
        out.kind = out.nearness <= eps ? MatrixKind::ApproxSddm : MatrixKind::NotSupported;
    } else {
        out.kind = positive ? MatrixKind::Sddm : MatrixKind::Laplacian;
    }
    return out;
}

bool is_laplacian(const SparseSym& m, double eps)
{
    for (std::size_t i = 0; i < m.size(); ++i) {
        double off = 0.0;
        for (double v : m.row_vals(i)) {
            if (v > 0.0) {
                return false;
            }
            off -= v;
        }
        if (std::abs(m.diag(i) - off) > eps * std::max(m.diag(i), off)) {
            return false;
        }
    }
    return true;
}

Components connected_components(const SparseSym& m)
{
    const std::size_t n = m.size();
    std::vector<Vertex> parent(n);
    std::iota(parent.begin(), parent.end(), Vertex{0});
    for (std::size_t i = 0; i < n; ++i) {
        for (Vertex j : m.row_cols(i)) {
            if (j > i) {
                const Vertex a = find_root(parent, static_cast<Vertex>(i));
                const Vertex b = find_root(parent, j);
                if (a != b) {
                    parent[std::max(a, b)] = std::min(a, b);
                }
            }
        }
    }
    Components c;
    c.label.assign(n, 0);
    std::vector<Vertex> root_label(n, std::numeric_limits<Vertex>::max());
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex r = find_root(parent, static_cast<Vertex>(i));
        if (root_label[r] == std::numeric_limits<Vertex>::max()) {
            root_label[r] = static_cast<Vertex>(c.count++);
        }
        c.label[i] = root_label[r];
    }
    return c;
}

void project_out_kernel(const Components& comps, std::span<double> x)
{
    if (x.size() != comps.label.size()) {
        throw DimensionMismatch("projection: vector length does not match component labels");
    }
    std::vector<double> sum(comps.count, 0.0);
    std::vector<std::size_t> size(comps.count, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum[comps.label[i]] += x[i];
        ++size[comps.label[i]];
    }
    for (std::size_t c = 0; c < comps.count; ++c) {
        sum[c] /= static_cast<double>(size[c]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= sum[comps.label[i]];
    }
}

}  // namespace lapchol
