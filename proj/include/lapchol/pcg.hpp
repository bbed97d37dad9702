#pragma once

#include "lapchol/sparse.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lapchol {

class BreakdownIndefinite : public Error {
public:
    using Error::Error;
};

/// y = op(x); y is fully overwritten.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct PcgConfig {
    double tolerance = 1e-8;
    std::size_t max_iters = 1000;
    std::size_t stagnation_window = 50;     // confirmed residual checks
    double stagnation_improvement = 1e-3;   // relative gain needed within the window
    std::size_t stagnation_steps = 3;       // consecutive negligible updates
    std::size_t true_residual_period = 100;

    void validate() const;
};

enum class SolveStatus { Converged, Stagnated, MaxIters, Failed };

std::string to_string(SolveStatus s);
SolveStatus parse_status(const std::string& s);

struct SolveReport {
    std::size_t n = 0;
    std::size_t nnz = 0;
    double t_build = 0.0;
    double t_solve = 0.0;
    std::size_t iterations = 0;
    double rel_residual = 1.0;
    SolveStatus status = SolveStatus::MaxIters;

    double t_total() const noexcept { return t_build + t_solve; }
};

/// Scalars of one CG step, for Lanczos estimates and tests.
struct PcgStep {
    std::size_t iteration;
    double alpha;
    double beta;
    double recursive_residual;  // relative, from the recurrence
    std::span<const double> x;
};

using PcgObserver = std::function<void(const PcgStep&)>;

struct PcgResult {
    std::vector<double> x;
    SolveReport report;
};

PcgResult pcg_solve(const LinearOperator& apply_a, const LinearOperator& apply_minv, std::span<const double> b,
                    const PcgConfig& cfg = {}, const PcgObserver& observer = {});

double relative_residual(const LinearOperator& apply_a, std::span<const double> x, std::span<const double> b);

LinearOperator as_operator(const SparseSym& a, bool parallel = false);
LinearOperator identity_operator();

}  // namespace lapchol
