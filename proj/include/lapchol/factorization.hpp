#pragma once

#include "lapchol/sparse.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lapchol {

/// Counters from one elimination run.
struct EliminationDiagnostics {
    std::size_t degenerate = 0;       // vertices skipped because d or a weight underflowed
    std::size_t max_degree = 0;       // largest distinct-neighbour count seen
    std::uint64_t samples = 0;        // sampled multi-edges added
};

/// Column form: eliminating v emits the column (v, sqrt(d)), (u, -a(u)/sqrt(d)).
/// The last vertex of each component gets an all-zero column.
class LowerTriFactorization {
public:
    std::size_t n = 0;
    std::vector<Vertex> order;            // elimination order
    std::vector<std::size_t> col_ptr{0};  // per elimination step
    std::vector<Vertex> row;              // off-diagonal rows
    std::vector<double> val;              // off-diagonal values
    std::vector<double> diag;             // per vertex, sqrt(d) or 0
    Components components;
    EliminationDiagnostics diagnostics;

    std::size_t size() const noexcept { return n; }

    /// Stored non-zeros: off-diagonals plus non-zero diagonals.
    std::size_t nnz() const noexcept;
    std::size_t offdiag_nnz() const noexcept { return row.size(); }

    /// y = 𝓛𝓛ᵀ x.
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    /// Pseudo-inverse of 𝓛𝓛ᵀ: projected forward/back substitution.
    void apply_pinv(std::span<const double> r, std::span<double> x) const;
    std::vector<double> apply_pinv(std::span<const double> r) const;

    /// Dense 𝓛𝓛ᵀ, row-major; for tests on small n.
    std::vector<double> product_dense() const;
};

/// Two-coordinate row operations. For a pivot v with neighbours sorted
/// ascending, the pivot's factor is S_1 ... S_{k-1} A, where
///   S_i = I + c (e_v - e_i) e_vᵀ,  c = θ/(1-θ),  θ = a(i) / Σ_{j>=i} a(j)
///   A   = I - e_k e_vᵀ
/// and Φ(v) = a(k)²/d. The operator is P Φ Pᵀ with P the product over pivots.
class RowOpFactorization {
public:
    struct Pivot {
        Vertex v;
        Vertex attach;
        std::uint64_t first_shift;  // shifts [first_shift, next pivot's first_shift)
    };
    struct Shift {
        Vertex target;
        double theta;
    };

    std::size_t n = 0;
    std::vector<Vertex> order;
    std::vector<Pivot> pivots;   // vertices with at least one neighbour, in order
    std::vector<Shift> shifts;
    std::vector<double> phi;     // per vertex
    Components components;
    EliminationDiagnostics diagnostics;

    std::size_t size() const noexcept { return n; }

    std::size_t op_count() const noexcept { return shifts.size() + pivots.size(); }

    /// Non-zeros of the equivalent column form: one per op plus positive Φ.
    std::size_t nnz() const noexcept;
    std::size_t offdiag_nnz() const noexcept { return op_count(); }

    std::uint64_t shift_end(std::size_t pivot) const
    {
        return pivot + 1 < pivots.size() ? pivots[pivot + 1].first_shift : shifts.size();
    }

    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    void apply_pinv(std::span<const double> r, std::span<double> x) const;
    std::vector<double> apply_pinv(std::span<const double> r) const;

    void write(std::ostream& out) const;
    static RowOpFactorization read(std::istream& in);
    void save(const std::string& path) const;
    static RowOpFactorization load(const std::string& path);

    bool operator==(const RowOpFactorization& o) const;
};

std::vector<double> apply_precond_inverse(const RowOpFactorization& f, std::span<const double> r);

}  // namespace lapchol
