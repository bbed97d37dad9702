#include "lapchol/pcg.hpp"

#include "lapchol/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace lapchol {

namespace ks = kernels::serial;

void PcgConfig::validate() const
{
    if (!(tolerance > 0.0)) {
        throw Error("tolerance must be positive");
    }
    if (max_iters < 1) {
        throw Error("max_iters must be at least 1");
    }
    if (true_residual_period < 1 || stagnation_window < 1 || stagnation_steps < 1) {
        throw Error("stagnation parameters must be positive");
    }
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Stagnated: return "stagnated";
    case SolveStatus::MaxIters: return "max-iters";
    case SolveStatus::Failed: break;
    }
    return "failed";
}

SolveStatus parse_status(const std::string& s)
{
    for (SolveStatus v : {SolveStatus::Converged, SolveStatus::Stagnated, SolveStatus::MaxIters, SolveStatus::Failed}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw Error("unknown solve status '" + s + "'");
}

double relative_residual(const LinearOperator& apply_a, std::span<const double> x, std::span<const double> b)
{
    if (x.size() != b.size()) {
        throw DimensionMismatch("relative_residual: x and b differ in length");
    }
    std::vector<double> r(b.size());
    apply_a(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = b[i] - r[i];
    }
    const double bn = ks::norm2(b);
    const double rn = ks::norm2(r);
    if (bn == 0.0) {
        return rn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return rn / bn;
}

LinearOperator as_operator(const SparseSym& a, bool parallel)
{
    if (parallel) {
        return [&a](std::span<const double> x, std::span<double> y) { kernels::parallel::spmv(a, x, y); };
    }
    return [&a](std::span<const double> x, std::span<double> y) { ks::spmv(a, x, y); };
}

LinearOperator identity_operator()
{
    return [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); };
}

PcgResult pcg_solve(const LinearOperator& apply_a, const LinearOperator& apply_minv, std::span<const double> b,
                    const PcgConfig& cfg, const PcgObserver& observer)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = b.size();
    PcgResult out;
    out.x.assign(n, 0.0);
    out.report.n = n;
    auto finish = [&](SolveStatus status, double rel, std::size_t iters) {
        out.report.status = status;
        out.report.rel_residual = rel;
        out.report.iterations = iters;
        out.report.t_solve = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(out);
    };

    const double bnorm = ks::norm2(b);
    if (bnorm == 0.0) {
        return finish(SolveStatus::Converged, 0.0, 0);
    }

    std::vector<double>& x = out.x;
    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n), p(n), q(n), rt(n);

    auto true_residual = [&]() {
        apply_a(x, rt);
        for (std::size_t i = 0; i < n; ++i) {
            rt[i] = b[i] - rt[i];
        }
        return ks::norm2(rt) / bnorm;
    };

    apply_minv(r, z);
    double rz = ks::dot(r, z);
    if (rz < 0.0) {
        throw BreakdownIndefinite("preconditioner is not positive semi-definite (rᵀz < 0)");
    }
    p = z;

    std::vector<double> checks;
    std::size_t quiet_steps = 0;
    double rel = 1.0;

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        if (rz == 0.0) {
            // The preconditioned residual vanished without convergence.
            const double t = true_residual();
            return finish(t <= cfg.tolerance ? SolveStatus::Converged : SolveStatus::Stagnated, t, it - 1);
        }
        apply_a(p, q);
        const double pq = ks::dot(p, q);
        if (!(pq > 0.0)) {
            throw BreakdownIndefinite("operator is not positive definite on the search direction (pᵀAp <= 0)");
        }
        const double alpha = rz / pq;
        ks::axpy(alpha, p, x);
        ks::axpy(-alpha, q, r);

        const double step = std::abs(alpha) * ks::norm2(p);
        quiet_steps = step <= std::numeric_limits<double>::epsilon() * ks::norm2(x) ? quiet_steps + 1 : 0;

        rel = ks::norm2(r) / bnorm;
        const bool tentative = rel <= cfg.tolerance;
        if (tentative || it % cfg.true_residual_period == 0 || quiet_steps >= cfg.stagnation_steps) {
            const double t = true_residual();
            checks.push_back(t);
            if (t <= cfg.tolerance) {
                if (observer) {
                    observer(PcgStep{it, alpha, 0.0, rel, x});
                }
                return finish(SolveStatus::Converged, t, it);
            }
            if (quiet_steps >= cfg.stagnation_steps) {
                return finish(SolveStatus::Stagnated, t, it);
            }
            if (checks.size() > cfg.stagnation_window) {
                const double before = *std::min_element(checks.begin(), checks.end() - static_cast<std::ptrdiff_t>(cfg.stagnation_window));
                const double recent = *std::min_element(checks.end() - static_cast<std::ptrdiff_t>(cfg.stagnation_window), checks.end());
                if (recent > before * (1.0 - cfg.stagnation_improvement)) {
                    return finish(SolveStatus::Stagnated, t, it);
                }
            }
            if (tentative) {
                // The recurrence drifted; continue from the true residual.
                r = rt;
                rel = t;
            }
        }

        apply_minv(r, z);
        const double rz_next = ks::dot(r, z);
        if (rz_next < 0.0) {
            throw BreakdownIndefinite("preconditioner is not positive semi-definite (rᵀz < 0)");
        }
        const double beta = rz_next / rz;
        if (observer) {
            observer(PcgStep{it, alpha, beta, rel, x});
        }
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
        rz = rz_next;
    }
    const double t = true_residual();
    return finish(t <= cfg.tolerance ? SolveStatus::Converged : SolveStatus::MaxIters, t, cfg.max_iters);
}

}  // namespace lapchol
