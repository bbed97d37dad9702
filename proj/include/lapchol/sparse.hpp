#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lapchol {

using Vertex = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotLaplacian : public Error {
public:
    using Error::Error;
};

class NotSddm : public Error {
public:
    using Error::Error;
};

struct Triplet {
    Vertex row;
    Vertex col;
    double value;
};

/// Symmetric sparse matrix. Off-diagonals are held in CSR over both
/// triangles (so row scans see every neighbour); the diagonal is separate.
class SparseSym {
public:
    SparseSym() = default;
    explicit SparseSym(std::size_t n);

    /// Duplicates are summed, explicit zeros dropped. Each off-diagonal pair
    /// may be given once (either triangle) or in both triangles with equal
    /// values; `mirrored` says which.
    static SparseSym from_triplets(std::size_t n, std::span<const Triplet> entries, bool mirrored);

    /// Weighted edge list (u, v, w) with w > 0; builds the graph Laplacian.
    static SparseSym laplacian_from_edges(std::size_t n, std::span<const Triplet> edges);

    std::size_t size() const noexcept { return diag_.size(); }
    std::size_t offdiag_pairs() const noexcept { return col_.size() / 2; }

    /// Full symmetric count including the diagonal: 2·pairs + n.
    std::size_t nnz() const noexcept { return col_.size() + diag_.size(); }

    double diag(std::size_t i) const { return diag_[i]; }
    std::span<const double> diagonal() const noexcept { return diag_; }

    std::span<const Vertex> row_cols(std::size_t i) const
    {
        return {col_.data() + ptr_[i], col_.data() + ptr_[i + 1]};
    }
    std::span<const double> row_vals(std::size_t i) const
    {
        return {val_.data() + ptr_[i], val_.data() + ptr_[i + 1]};
    }

    const std::vector<std::size_t>& row_ptr() const noexcept { return ptr_; }
    const std::vector<Vertex>& col_idx() const noexcept { return col_; }
    const std::vector<double>& values() const noexcept { return val_; }

    double at(std::size_t i, std::size_t j) const;

    /// Each off-diagonal pair once, with i < j.
    std::vector<Triplet> upper_entries() const;

    std::vector<double> row_sums() const;

    std::vector<double> multiply(std::span<const double> x) const;
    void multiply(std::span<const double> x, std::span<double> y) const;

    std::vector<double> to_dense() const;

    bool operator==(const SparseSym&) const = default;

private:
    std::vector<std::size_t> ptr_{0};
    std::vector<Vertex> col_;
    std::vector<double> val_;
    std::vector<double> diag_;
};

inline constexpr double default_class_eps = 10.0 * std::numeric_limits<double>::epsilon();

enum class MatrixKind { Laplacian, Sddm, ApproxSddm, NotSupported };

struct MatrixClass {
    MatrixKind kind = MatrixKind::NotSupported;
    double nearness = 0.0;
};

std::string to_string(MatrixKind kind);

MatrixClass classify(const SparseSym& m, double eps = default_class_eps);

/// Looser test used by the factorizations: non-positive off-diagonals and
/// every |row sum| <= eps * max(diag, off-diagonal mass).
bool is_laplacian(const SparseSym& m, double eps = default_class_eps);

/// Component labels are dense 0..count-1 in order of first appearance.
struct Components {
    std::vector<Vertex> label;
    std::size_t count = 0;
};

Components connected_components(const SparseSym& m);

/// Subtract the per-component mean in place.
void project_out_kernel(const Components& comps, std::span<double> x);

}  // namespace lapchol
