#pragma once

#include "lapchol/elimination.hpp"
#include "lapchol/pcg.hpp"
#include "lapchol/sparse.hpp"

#include <string>
#include <vector>

namespace lapchol {

enum class ConditionMethod { Lanczos, Power };

std::string to_string(ConditionMethod m);

struct ConditionEstimate {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double kappa = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double tolerance = 0.0;  // relative change of κ over the final window
    ConditionMethod method = ConditionMethod::Lanczos;
};

/// Relative condition number of the preconditioned operator Minv·A on the
/// complement of `kernel` (per-component constants). Lanczos reads the CG
/// coefficients; power iteration runs on Minv·A and on λmax·I − Minv·A.
ConditionEstimate estimate_condition(const LinearOperator& apply_a, const LinearOperator& apply_minv,
                                     const Components& kernel, std::size_t iterations = 200,
                                     std::uint64_t seed = 1, ConditionMethod method = ConditionMethod::Lanczos);

struct StudyInstance {
    std::string name;
    SparseSym matrix;  // Laplacian or SDDM
};

struct VariantRow {
    std::string instance;
    std::string variant;
    std::size_t nnz = 0;
    double t_total_per_nnz = 0.0;
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::MaxIters;
    double size_ratio = 0.0;  // factor off-diagonals per input edge
    ConditionEstimate condition;
};

VariantRow variant_study_row(const StudyInstance& instance, const SamplerConfig& variant, const PcgConfig& pcg = {},
                             std::size_t estimator_iterations = 200,
                             ConditionMethod method = ConditionMethod::Lanczos);

std::vector<VariantRow> variant_study(const std::vector<StudyInstance>& instances,
                                      const std::vector<SamplerConfig>& variants, const PcgConfig& pcg = {},
                                      std::size_t estimator_iterations = 200,
                                      ConditionMethod method = ConditionMethod::Lanczos);

std::string format_variant_table(const std::vector<VariantRow>& rows);

}  // namespace lapchol
