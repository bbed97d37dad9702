#pragma once

#include "lapchol/elimination.hpp"
#include "lapchol/pcg.hpp"
#include "lapchol/sparse.hpp"

#include <span>
#include <string>
#include <vector>

namespace lapchol {

/// Parses ac | ac2 | ac-sK | ac-sKmL | ac-random-order (case-insensitive).
SamplerConfig parse_variant(const std::string& name, std::uint64_t seed = 0);

/// Canonical name: ac, ac2, ac-sK, ac-sKmL, ac-random-order, or
/// ac-sKmL-random-order for other randomized-order configs.
std::string variant_name(const SamplerConfig& cfg);

struct Solution {
    std::vector<double> x;
    SolveReport report;
    MatrixClass matrix_class;
    std::size_t factor_nnz = 0;
    std::size_t factor_offdiag = 0;
};

/// Full pipeline: classify, lift SDDM inputs to a Laplacian, factor, run PCG,
/// map back. Laplacian right-hand sides are projected onto the image first.
/// The reported residual is measured on the input system.
Solution solve(const SparseSym& m, std::span<const double> b, const SamplerConfig& sampler,
               const PcgConfig& pcg = {}, bool parallel_kernels = false);

}  // namespace lapchol
