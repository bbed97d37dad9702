#pragma once

#include "lapchol/sparse.hpp"

#include <span>
#include <vector>

namespace lapchol {

/// Laplacian one dimension larger than an SDDM matrix: the extra vertex is
/// joined to each row with positive diagonal excess.
struct GrembanLift {
    std::size_t base_n = 0;
    Vertex extra_vertex = 0;
    SparseSym lifted;
};

/// Throws NotSddm unless classify() gives Laplacian, SDDM or ApproxSDDM.
/// Negative excesses of approximately-SDDM rows are clamped to zero.
GrembanLift lift(const SparseSym& m, double eps = default_class_eps);

std::vector<double> lift_rhs(const GrembanLift& lift, std::span<const double> b);

std::vector<double> recover(const GrembanLift& lift, std::span<const double> y);

}  // namespace lapchol
