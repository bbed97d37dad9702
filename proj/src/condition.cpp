#include "lapchol/condition.hpp"

#include "lapchol/generators.hpp"
#include "lapchol/kernels.hpp"
#include "lapchol/reduction.hpp"
#include "lapchol/solver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace lapchol {

namespace ks = kernels::serial;

std::string to_string(ConditionMethod m) { return m == ConditionMethod::Lanczos ? "lanczos" : "power"; }

namespace {

std::vector<double> start_vector(const Components& kernel, std::uint64_t seed)
{
    StreamRng rng(seed ^ 0x636f6e64ULL);
    std::vector<double> x(kernel.label.size());
    for (double& v : x) {
        v = rng.normal();
    }
    project_out_kernel(kernel, x);
    return x;
}

std::pair<double, double> ritz_extremes(const std::vector<double>& alpha, const std::vector<double>& beta,
                                        std::size_t m)
{
    Eigen::VectorXd diag(static_cast<Eigen::Index>(m));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(m > 0 ? m - 1 : 0));
    for (std::size_t j = 0; j < m; ++j) {
        diag[static_cast<Eigen::Index>(j)] = 1.0 / alpha[j] + (j > 0 ? beta[j - 1] / alpha[j - 1] : 0.0);
        if (j + 1 < m) {
            sub[static_cast<Eigen::Index>(j)] = std::sqrt(beta[j]) / alpha[j];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().maxCoeff(), es.eigenvalues().minCoeff()};
}

ConditionEstimate lanczos(const LinearOperator& apply_a, const LinearOperator& apply_minv, const Components& kernel,
                          std::size_t iterations, std::uint64_t seed)
{
    const std::vector<double> x0 = start_vector(kernel, seed);
    std::vector<double> b(x0.size());
    apply_a(x0, b);
    std::vector<double> alpha, beta;
    PcgConfig cfg;
    cfg.tolerance = 1e-14;
    cfg.max_iters = iterations;
    cfg.true_residual_period = iterations + 1;
    try {
        pcg_solve(apply_a, apply_minv, b, cfg, [&](const PcgStep& s) {
            alpha.push_back(s.alpha);
            beta.push_back(s.beta);
        });
    } catch (const BreakdownIndefinite&) {
        // Keep the coefficients gathered before the breakdown.
    }
    ConditionEstimate est;
    est.method = ConditionMethod::Lanczos;
    est.iterations = alpha.size();
    if (alpha.empty()) {
        return est;
    }
    const auto [hi, lo] = ritz_extremes(alpha, beta, alpha.size());
    est.lambda_max = hi;
    est.lambda_min = lo;
    est.kappa = hi / lo;
    const std::size_t back = std::min<std::size_t>(10, alpha.size() - 1);
    if (back > 0) {
        const auto [h2, l2] = ritz_extremes(alpha, beta, alpha.size() - back);
        est.tolerance = std::abs(est.kappa - h2 / l2) / est.kappa;
    }
    est.converged = est.tolerance <= 1e-2;
    return est;
}

// Power iteration for the dominant eigenvalue of shift·I + sign·Minv·A.
double power_extreme(const LinearOperator& apply_a, const LinearOperator& apply_minv, const Components& kernel,
                     std::size_t iterations, std::uint64_t seed, double shift, double sign, double& change)
{
    std::vector<double> x = start_vector(kernel, seed);
    std::vector<double> ax(x.size()), y(x.size());
    double lambda = 0.0, previous = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        const double nx = ks::norm2(x);
        for (double& v : x) {
            v /= nx;
        }
        apply_a(x, ax);
        apply_minv(ax, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = shift * x[i] + sign * y[i];
        }
        project_out_kernel(kernel, y);
        // Rayleigh quotient in the A inner product, where Minv·A is self-adjoint.
        previous = lambda;
        lambda = ks::dot(ax, y) / ks::dot(ax, x);
        x.swap(y);
    }
    change = lambda != 0.0 ? std::abs(lambda - previous) / std::abs(lambda) : 1.0;
    return lambda;
}

ConditionEstimate power(const LinearOperator& apply_a, const LinearOperator& apply_minv, const Components& kernel,
                        std::size_t iterations, std::uint64_t seed)
{
    ConditionEstimate est;
    est.method = ConditionMethod::Power;
    est.iterations = iterations;
    double c1 = 0.0, c2 = 0.0;
    est.lambda_max = power_extreme(apply_a, apply_minv, kernel, iterations, seed, 0.0, 1.0, c1);
    const double mu = power_extreme(apply_a, apply_minv, kernel, iterations, seed + 1, est.lambda_max, -1.0, c2);
    est.lambda_min = est.lambda_max - mu;
    est.kappa = est.lambda_min > 0.0 ? est.lambda_max / est.lambda_min : std::numeric_limits<double>::infinity();
    est.tolerance = std::max(c1, c2 * std::abs(mu) / std::max(std::abs(est.lambda_min), 1e-300));
    est.converged = est.lambda_min > 0.0 && est.tolerance <= 1e-3;
    return est;
}

}  // namespace

ConditionEstimate estimate_condition(const LinearOperator& apply_a, const LinearOperator& apply_minv,
                                     const Components& kernel, std::size_t iterations, std::uint64_t seed,
                                     ConditionMethod method)
{
    if (iterations < 2) {
        throw Error("condition estimation needs at least 2 iterations");
    }
    return method == ConditionMethod::Lanczos ? lanczos(apply_a, apply_minv, kernel, iterations, seed)
                                              : power(apply_a, apply_minv, kernel, iterations, seed);
}

VariantRow variant_study_row(const StudyInstance& instance, const SamplerConfig& variant, const PcgConfig& pcg,
                             std::size_t estimator_iterations, ConditionMethod method)
{
    VariantRow row;
    row.instance = instance.name;
    row.variant = variant_name(variant);
    row.nnz = instance.matrix.nnz();

    const std::vector<double> b = generic_rhs(instance.matrix, variant.seed + 1);
    const Solution sol = solve(instance.matrix, b, variant, pcg);
    row.iterations = sol.report.iterations;
    row.status = sol.report.status;
    row.t_total_per_nnz = sol.report.t_total() / static_cast<double>(row.nnz);

    std::optional<GrembanLift> lifted;
    if (sol.matrix_class.kind != MatrixKind::Laplacian) {
        lifted = lift(instance.matrix);
    }
    const SparseSym& system = lifted ? lifted->lifted : instance.matrix;
    const RowOpFactorization f = approximate_edgewise_cholesky(system, variant);
    row.size_ratio = static_cast<double>(f.offdiag_nnz()) / static_cast<double>(system.offdiag_pairs());
    row.condition = estimate_condition(
        as_operator(system), [&f](std::span<const double> x, std::span<double> y) { f.apply_pinv(x, y); },
        f.components, estimator_iterations, variant.seed + 7, method);
    return row;
}

std::vector<VariantRow> variant_study(const std::vector<StudyInstance>& instances,
                                      const std::vector<SamplerConfig>& variants, const PcgConfig& pcg,
                                      std::size_t estimator_iterations, ConditionMethod method)
{
    std::vector<VariantRow> rows;
    for (const StudyInstance& inst : instances) {
        for (const SamplerConfig& v : variants) {
            rows.push_back(variant_study_row(inst, v, pcg, estimator_iterations, method));
        }
    }
    return rows;
}

std::string format_variant_table(const std::vector<VariantRow>& rows)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %-16s %12s %8s %10s %12s %10s %s\n", "instance", "variant", "t/nnz(us)",
                  "iters", "size", "kappa", "est.tol", "method");
    out << line;
    for (const VariantRow& r : rows) {
        std::snprintf(line, sizeof line, "%-24s %-16s %12.4f %8zu %10.3f %12.4g %10.2g %s%s\n", r.instance.c_str(),
                      r.variant.c_str(), r.t_total_per_nnz * 1e6, r.iterations, r.size_ratio, r.condition.kappa,
                      r.condition.tolerance, to_string(r.condition.method).c_str(),
                      r.condition.converged ? "" : " (not converged)");
        out << line;
    }
    return out.str();
}

}  // namespace lapchol
