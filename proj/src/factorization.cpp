#include "lapchol/factorization.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace lapchol {

namespace {

void check_len(std::size_t got, std::size_t want, const char* what)
{
    if (got != want) {
        throw DimensionMismatch(std::string(what) + ": vector length " + std::to_string(got)
                                + " does not match factorization size " + std::to_string(want));
    }
}

}  // namespace

// ---- column form ----------------------------------------------------------

std::size_t LowerTriFactorization::nnz() const noexcept
{
    std::size_t d = 0;
    for (double s : diag) {
        d += s != 0.0;
    }
    return row.size() + d;
}

void LowerTriFactorization::apply(std::span<const double> x, std::span<double> y) const
{
    check_len(x.size(), n, "apply");
    check_len(y.size(), n, "apply");
    std::vector<double> t(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Vertex v = order[p];
        double acc = diag[v] * x[v];
        for (std::size_t k = col_ptr[p]; k < col_ptr[p + 1]; ++k) {
            acc += val[k] * x[row[k]];
        }
        t[p] = acc;
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Vertex v = order[p];
        y[v] += diag[v] * t[p];
        for (std::size_t k = col_ptr[p]; k < col_ptr[p + 1]; ++k) {
            y[row[k]] += val[k] * t[p];
        }
    }
}

std::vector<double> LowerTriFactorization::apply(std::span<const double> x) const
{
    std::vector<double> y(n);
    apply(x, y);
    return y;
}

void LowerTriFactorization::apply_pinv(std::span<const double> r, std::span<double> x) const
{
    check_len(r.size(), n, "apply_pinv");
    check_len(x.size(), n, "apply_pinv");
    std::copy(r.begin(), r.end(), x.begin());
    project_out_kernel(components, x);
    // Unit lower factor has column e_v + (ℓ/s) off the diagonal.
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Vertex v = order[p];
        const double s = diag[v];
        if (s == 0.0) {
            continue;
        }
        const double xv = x[v] / s;
        for (std::size_t k = col_ptr[p]; k < col_ptr[p + 1]; ++k) {
            x[row[k]] -= val[k] * xv;
        }
    }
    for (Vertex v : order) {
        x[v] = diag[v] != 0.0 ? x[v] / (diag[v] * diag[v]) : 0.0;
    }
    for (std::size_t p = order.size(); p-- > 0;) {
        const Vertex v = order[p];
        const double s = diag[v];
        if (s == 0.0) {
            continue;
        }
        double acc = 0.0;
        for (std::size_t k = col_ptr[p]; k < col_ptr[p + 1]; ++k) {
            acc += val[k] * x[row[k]];
        }
        x[v] -= acc / s;
    }
    project_out_kernel(components, x);
}

std::vector<double> LowerTriFactorization::apply_pinv(std::span<const double> r) const
{
    std::vector<double> x(n);
    apply_pinv(r, x);
    return x;
}

std::vector<double> LowerTriFactorization::product_dense() const
{
    std::vector<double> a(n * n, 0.0);
    std::vector<std::pair<Vertex, double>> col;
    for (std::size_t p = 0; p < order.size(); ++p) {
        col.clear();
        if (diag[order[p]] != 0.0) {
            col.emplace_back(order[p], diag[order[p]]);
        }
        for (std::size_t k = col_ptr[p]; k < col_ptr[p + 1]; ++k) {
            col.emplace_back(row[k], val[k]);
        }
        for (const auto& [i, vi] : col) {
            for (const auto& [j, vj] : col) {
                a[i * n + j] += vi * vj;
            }
        }
    }
    return a;
}

// ---- row-operation form -----------------------------------------------------

std::size_t RowOpFactorization::nnz() const noexcept
{
    std::size_t d = 0;
    for (double f : phi) {
        d += f > 0.0;
    }
    return op_count() + d;
}

void RowOpFactorization::apply(std::span<const double> x, std::span<double> y) const
{
    check_len(x.size(), n, "apply");
    check_len(y.size(), n, "apply");
    std::copy(x.begin(), x.end(), y.begin());
    // Pᵀ: pivots in order, each S_1ᵀ .. S_{k-1}ᵀ then Aᵀ.
    for (std::size_t p = 0; p < pivots.size(); ++p) {
        const Vertex v = pivots[p].v;
        for (std::uint64_t s = pivots[p].first_shift; s < shift_end(p); ++s) {
            const double c = shifts[s].theta / (1.0 - shifts[s].theta);
            y[v] += c * (y[v] - y[shifts[s].target]);
        }
        y[v] -= y[pivots[p].attach];
    }
    for (std::size_t i = 0; i < n; ++i) {
        y[i] *= phi[i];
    }
    // P: everything reversed.
    for (std::size_t p = pivots.size(); p-- > 0;) {
        const Vertex v = pivots[p].v;
        y[pivots[p].attach] -= y[v];
        for (std::uint64_t s = shift_end(p); s-- > pivots[p].first_shift;) {
            const double c = shifts[s].theta / (1.0 - shifts[s].theta);
            const double t = c * y[v];
            y[v] += t;
            y[shifts[s].target] -= t;
        }
    }
}

std::vector<double> RowOpFactorization::apply(std::span<const double> x) const
{
    std::vector<double> y(n);
    apply(x, y);
    return y;
}

void RowOpFactorization::apply_pinv(std::span<const double> r, std::span<double> x) const
{
    check_len(r.size(), n, "apply_pinv");
    check_len(x.size(), n, "apply_pinv");
    std::copy(r.begin(), r.end(), x.begin());
    project_out_kernel(components, x);
    for (std::size_t p = 0; p < pivots.size(); ++p) {
        const Vertex v = pivots[p].v;
        for (std::uint64_t s = pivots[p].first_shift; s < shift_end(p); ++s) {
            const double th = shifts[s].theta;
            x[shifts[s].target] += th * x[v];
            x[v] *= 1.0 - th;
        }
        x[pivots[p].attach] += x[v];
    }
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = phi[i] > 0.0 ? x[i] / phi[i] : 0.0;
    }
    for (std::size_t p = pivots.size(); p-- > 0;) {
        const Vertex v = pivots[p].v;
        x[v] += x[pivots[p].attach];
        for (std::uint64_t s = shift_end(p); s-- > pivots[p].first_shift;) {
            const double th = shifts[s].theta;
            x[v] = (1.0 - th) * x[v] + th * x[shifts[s].target];
        }
    }
    project_out_kernel(components, x);
}

std::vector<double> RowOpFactorization::apply_pinv(std::span<const double> r) const
{
    std::vector<double> x(n);
    apply_pinv(r, x);
    return x;
}

std::vector<double> apply_precond_inverse(const RowOpFactorization& f, std::span<const double> r)
{
    return f.apply_pinv(r);
}

bool RowOpFactorization::operator==(const RowOpFactorization& o) const
{
    auto same_pivots = [&] {
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            if (pivots[i].v != o.pivots[i].v || pivots[i].attach != o.pivots[i].attach
                || pivots[i].first_shift != o.pivots[i].first_shift) {
                return false;
            }
        }
        return true;
    };
    auto same_shifts = [&] {
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            if (shifts[i].target != o.shifts[i].target
                || std::bit_cast<std::uint64_t>(shifts[i].theta) != std::bit_cast<std::uint64_t>(o.shifts[i].theta)) {
                return false;
            }
        }
        return true;
    };
    return n == o.n && order == o.order && pivots.size() == o.pivots.size() && shifts.size() == o.shifts.size()
           && same_pivots() && same_shifts() && phi == o.phi && components.count == o.components.count
           && components.label == o.components.label;
}

// ---- binary container -------------------------------------------------------

namespace {

constexpr char magic[8] = {'L', 'A', 'P', 'C', 'H', 'O', 'L', 'F'};
constexpr std::uint32_t format_version = 1;

static_assert(std::endian::native == std::endian::little, "factorization files are little-endian");

template <typename T>
void put(std::ostream& out, const T& v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void put_vec(std::ostream& out, const std::vector<T>& v)
{
    put<std::uint64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T get(std::istream& in)
{
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
        throw Error("truncated factorization file");
    }
    return v;
}

template <typename T>
std::vector<T> get_vec(std::istream& in, std::uint64_t limit)
{
    const auto count = get<std::uint64_t>(in);
    if (count > limit) {
        throw Error("corrupt factorization file: section too large");
    }
    // Grow in chunks so a corrupt length fails on the read, not on allocation.
    constexpr std::uint64_t chunk = std::uint64_t{1} << 16;
    std::vector<T> v;
    for (std::uint64_t done = 0; done < count;) {
        const std::uint64_t step = std::min(chunk, count - done);
        v.resize(done + step);
        if (!in.read(reinterpret_cast<char*>(v.data() + done), static_cast<std::streamsize>(step * sizeof(T)))) {
            throw Error("truncated factorization file");
        }
        done += step;
    }
    return v;
}

struct PackedPivot {
    std::uint32_t v;
    std::uint32_t attach;
    std::uint64_t first_shift;
};

struct PackedShift {
    std::uint32_t target;
    std::uint32_t pad;
    double theta;
};

}  // namespace

void RowOpFactorization::write(std::ostream& out) const
{
    out.write(magic, sizeof magic);
    put(out, format_version);
    put<std::uint32_t>(out, 0);
    put<std::uint64_t>(out, n);
    put_vec(out, order);
    std::vector<PackedPivot> pp(pivots.size());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        pp[i] = {pivots[i].v, pivots[i].attach, pivots[i].first_shift};
    }
    put_vec(out, pp);
    std::vector<PackedShift> ps(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        ps[i] = {shifts[i].target, 0, shifts[i].theta};
    }
    put_vec(out, ps);
    put_vec(out, phi);
    put<std::uint64_t>(out, components.count);
    put_vec(out, components.label);
    put<std::uint64_t>(out, diagnostics.degenerate);
    put<std::uint64_t>(out, diagnostics.max_degree);
    put<std::uint64_t>(out, diagnostics.samples);
    if (!out) {
        throw Error("failed writing factorization");
    }
}

RowOpFactorization RowOpFactorization::read(std::istream& in)
{
    char head[8];
    if (!in.read(head, sizeof head) || std::memcmp(head, magic, sizeof magic) != 0) {
        throw Error("not a factorization file");
    }
    const auto version = get<std::uint32_t>(in);
    if (version != format_version) {
        throw Error("unsupported factorization version " + std::to_string(version));
    }
    get<std::uint32_t>(in);
    RowOpFactorization f;
    f.n = get<std::uint64_t>(in);
    constexpr std::uint64_t big = std::uint64_t{1} << 40;
    f.order = get_vec<Vertex>(in, f.n);
    const auto pp = get_vec<PackedPivot>(in, f.n);
    const auto ps = get_vec<PackedShift>(in, big);
    f.pivots.resize(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i) {
        f.pivots[i] = {pp[i].v, pp[i].attach, pp[i].first_shift};
        if (pp[i].v >= f.n || pp[i].attach >= f.n || pp[i].first_shift > ps.size()
            || (i > 0 && pp[i].first_shift < pp[i - 1].first_shift)) {
            throw Error("corrupt factorization file: pivot out of range");
        }
    }
    f.shifts.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].target >= f.n) {
            throw Error("corrupt factorization file: shift target out of range");
        }
        f.shifts[i] = {ps[i].target, ps[i].theta};
    }
    f.phi = get_vec<double>(in, f.n);
    f.components.count = get<std::uint64_t>(in);
    f.components.label = get_vec<Vertex>(in, f.n);
    if (f.phi.size() != f.n || f.components.label.size() != f.n) {
        throw Error("corrupt factorization file: per-vertex arrays have the wrong length");
    }
    for (Vertex c : f.components.label) {
        if (c >= f.components.count) {
            throw Error("corrupt factorization file: component label out of range");
        }
    }
    f.diagnostics.degenerate = get<std::uint64_t>(in);
    f.diagnostics.max_degree = get<std::uint64_t>(in);
    f.diagnostics.samples = get<std::uint64_t>(in);
    return f;
}

void RowOpFactorization::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    write(out);
}

RowOpFactorization RowOpFactorization::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read(in);
}

}  // namespace lapchol
