#include "lapchol/solver.hpp"

#include "lapchol/kernels.hpp"
#include "lapchol/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <optional>

namespace lapchol {

namespace {

std::optional<std::uint32_t> parse_count(std::string_view s)
{
    std::uint32_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || v == 0) {
        return std::nullopt;
    }
    return v;
}

bool strip_suffix(std::string& s, std::string_view suffix)
{
    if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
        s.resize(s.size() - suffix.size());
        return true;
    }
    return false;
}

}  // namespace

SamplerConfig parse_variant(const std::string& name, std::uint64_t seed)
{
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    SamplerConfig cfg;
    cfg.seed = seed;
    if (strip_suffix(s, "-random-order")) {
        cfg.order = OrderPolicy::Random;
    } else if (strip_suffix(s, "-natural-order")) {
        cfg.order = OrderPolicy::Natural;
    }
    if (s == "ac") {
        cfg.split = 1;
        cfg.merge = 1;
        return cfg;
    }
    if (s == "ac2") {
        cfg.split = 2;
        cfg.merge = 2;
        return cfg;
    }
    if (s.starts_with("ac-s")) {
        const std::string_view rest = std::string_view(s).substr(4);
        const auto m = rest.find('m');
        const auto k = parse_count(rest.substr(0, m));
        if (k) {
            cfg.split = *k;
            if (m == std::string_view::npos) {
                cfg.merge = 0;
                return cfg;
            }
            if (const auto l = parse_count(rest.substr(m + 1))) {
                cfg.merge = *l;
                return cfg;
            }
        }
    }
    throw Error("unknown solver variant '" + name + "' (expected ac, ac2, ac-sK, ac-sKmL or ac-random-order)");
}

std::string variant_name(const SamplerConfig& cfg)
{
    std::string base;
    if (cfg.split == 1 && cfg.merge == 1) {
        base = "ac";
    } else if (cfg.split == 2 && cfg.merge == 2) {
        base = "ac2";
    } else if (cfg.merge == 0) {
        base = "ac-s" + std::to_string(cfg.split);
    } else {
        base = "ac-s" + std::to_string(cfg.split) + "m" + std::to_string(cfg.merge);
    }
    switch (cfg.order) {
    case OrderPolicy::ApproxMinDegree: return base;
    case OrderPolicy::Random: return base + "-random-order";
    case OrderPolicy::Natural: return base + "-natural-order";
    }
    return base;
}

Solution solve(const SparseSym& m, std::span<const double> b, const SamplerConfig& sampler, const PcgConfig& pcg,
               bool parallel_kernels)
{
    if (b.size() != m.size()) {
        throw DimensionMismatch("solve: right-hand side length does not match the matrix");
    }
    Solution out;
    out.matrix_class = classify(m);
    if (out.matrix_class.kind == MatrixKind::NotSupported) {
        throw NotSddm("matrix is neither SDDM nor a Laplacian (nearness " + std::to_string(out.matrix_class.nearness)
                      + ")");
    }
    const bool laplacian = out.matrix_class.kind == MatrixKind::Laplacian;

    const auto t0 = std::chrono::steady_clock::now();
    std::optional<GrembanLift> lifted;
    std::vector<double> rhs;
    if (laplacian) {
        rhs.assign(b.begin(), b.end());
        project_out_kernel(connected_components(m), rhs);
    } else {
        lifted = lift(m);
        rhs = lift_rhs(*lifted, b);
    }
    const SparseSym& system = laplacian ? m : lifted->lifted;
    const RowOpFactorization f = approximate_edgewise_cholesky(system, sampler);
    project_out_kernel(f.components, rhs);
    const double t_build = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // A lifted residual bounds the original one, so scale the target by
    // ‖b‖/‖b̂‖ to meet the tolerance on the input system.
    PcgConfig cfg = pcg;
    if (!laplacian) {
        const double bn = kernels::serial::norm2(b);
        const double bh = kernels::serial::norm2(rhs);
        if (bn > 0.0 && bh > 0.0) {
            cfg.tolerance = pcg.tolerance * std::min(1.0, bn / bh);
        }
    }
    PcgResult r = pcg_solve(
        as_operator(system, parallel_kernels),
        [&f](std::span<const double> x, std::span<double> y) { f.apply_pinv(x, y); }, rhs, cfg);

    out.report = r.report;
    out.report.t_build = t_build;
    out.report.n = m.size();
    out.report.nnz = m.nnz();
    if (laplacian) {
        out.x = std::move(r.x);
        out.report.rel_residual = relative_residual(as_operator(m, parallel_kernels), out.x, rhs);
    } else {
        out.x = recover(*lifted, r.x);
        out.report.rel_residual = relative_residual(as_operator(m, parallel_kernels), out.x, b);
    }
    if (out.report.status == SolveStatus::Converged && out.report.rel_residual > pcg.tolerance) {
        out.report.status = SolveStatus::Stagnated;
    } else if (out.report.status != SolveStatus::Converged && out.report.rel_residual <= pcg.tolerance) {
        out.report.status = SolveStatus::Converged;
    }
    out.factor_nnz = f.nnz();
    out.factor_offdiag = f.offdiag_nnz();
    return out;
}

}  // namespace lapchol
