#include "doctest.h"
#include "oracles.hpp"

#include "lapchol/elimination.hpp"
#include "lapchol/generators.hpp"
#include "lapchol/solver.hpp"

using namespace lapchol;
using oracle::Dense;
using oracle::Vec;

namespace {

LinearOperator dense_op(const Dense& A)
{
    return [A](std::span<const double> x, std::span<double> y) {
        const Vec r = A * Eigen::Map<const Vec>(x.data(), static_cast<int>(x.size()));
        std::copy(r.data(), r.data() + r.size(), y.begin());
    };
}

}  // namespace

TEST_CASE("identity system converges in one iteration")
{
    const std::vector<double> b{1, -2, 3.5};
    const auto res = pcg_solve(identity_operator(), identity_operator(), b);
    CHECK(res.report.status == SolveStatus::Converged);
    CHECK(res.report.iterations == 1);
    CHECK(res.x == b);
}

TEST_CASE("exact preconditioner converges in one iteration")
{
    const Dense A = (Dense(2, 2) << 4, 1, 1, 3).finished();
    const auto res = pcg_solve(dense_op(A), dense_op(A.inverse()), std::vector<double>{1, 2});
    CHECK(res.report.iterations == 1);
    CHECK(res.report.rel_residual <= 1e-12);
}

TEST_CASE("relative residual")
{
    const Dense A = (Dense(2, 2) << 4, 1, 1, 3).finished();
    const std::vector<double> b{1, 2};
    CHECK(relative_residual(dense_op(A), std::vector<double>{0, 0}, b) == 1.0);
    const Vec x = A.inverse() * oracle::to_vec(b);
    CHECK(relative_residual(dense_op(A), oracle::from_vec(x), b) <= 1e-15);

    const Dense L = (Dense(3, 3) << 1, -1, 0, -1, 2, -1, 0, -1, 1).finished();
    const std::vector<double> bl{1, 0, -1};
    const Vec xl = oracle::pinv(L) * oracle::to_vec(bl);
    const double r0 = relative_residual(dense_op(L), oracle::from_vec(xl), bl);
    const double r1 = relative_residual(dense_op(L), oracle::from_vec((xl.array() + 7.0).matrix()), bl);
    CHECK(r0 == doctest::Approx(r1).epsilon(1e-12));
    CHECK_THROWS_AS(relative_residual(dense_op(L), std::vector<double>{1}, bl), DimensionMismatch);
}

TEST_CASE("breakdown on indefinite operators")
{
    const Dense A = (Dense(2, 2) << 1, 0, 0, -1).finished();
    CHECK_THROWS_AS(pcg_solve(dense_op(A), identity_operator(), std::vector<double>{0, 1}), BreakdownIndefinite);
    const Dense N = -Dense::Identity(2, 2);
    CHECK_THROWS_AS(pcg_solve(identity_operator(), dense_op(N), std::vector<double>{1, 1}), BreakdownIndefinite);
}

TEST_CASE("max-iters and stagnation are reported")
{
    const SparseSym L = poisson_grid(GridSpec::cube(12));
    const auto b = generic_rhs(L, 1);
    PcgConfig few;
    few.max_iters = 3;
    const auto r = pcg_solve(as_operator(L), identity_operator(), b, few);
    CHECK(r.report.status == SolveStatus::MaxIters);
    CHECK(r.report.iterations == 3);

    PcgConfig impossible;
    impossible.tolerance = 1e-30;
    impossible.max_iters = 100000;
    impossible.true_residual_period = 5;
    impossible.stagnation_window = 4;
    const auto s = pcg_solve(as_operator(L), identity_operator(), b, impossible);
    CHECK(s.report.status == SolveStatus::Stagnated);
    CHECK(s.report.iterations < 100000);
    CHECK(s.report.rel_residual < 1e-12);

    PcgConfig bad;
    bad.tolerance = 0;
    CHECK_THROWS_AS(pcg_solve(as_operator(L), identity_operator(), b, bad), Error);
}

TEST_CASE("zero right-hand side")
{
    const auto r = pcg_solve(identity_operator(), identity_operator(), std::vector<double>{0, 0});
    CHECK(r.report.iterations == 0);
    CHECK(r.x == std::vector<double>{0, 0});
}

TEST_CASE("observer sees every step and parallel kernels give the same answer")
{
    const SparseSym L = poisson_grid(GridSpec::cube(10));
    const auto b = generic_rhs(L, 2);
    std::size_t seen = 0;
    const auto serial = solve(L, b, SamplerConfig::ac(1));
    const auto parallel = solve(L, b, SamplerConfig::ac(1), {}, true);
    CHECK(serial.report.iterations == parallel.report.iterations);
    const auto r = pcg_solve(as_operator(L), identity_operator(), b, {}, [&](const PcgStep& s) {
        ++seen;
        CHECK(s.iteration == seen);
        CHECK(s.alpha > 0);
    });
    CHECK(seen == r.report.iterations);
}

TEST_CASE("status names round trip")
{
    for (SolveStatus s : {SolveStatus::Converged, SolveStatus::Stagnated, SolveStatus::MaxIters, SolveStatus::Failed}) {
        CHECK(parse_status(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_status("done"), Error);
}

TEST_CASE("variant names")
{
    CHECK(parse_variant("ac").split == 1);
    CHECK(parse_variant("ac").merge == 1);
    CHECK(parse_variant("AC2").split == 2);
    CHECK(parse_variant("ac2").merge == 2);
    CHECK(parse_variant("ac-s3").split == 3);
    CHECK(parse_variant("ac-s3").merge == 0);
    CHECK(parse_variant("ac-s3m2").merge == 2);
    CHECK(parse_variant("ac-random-order").order == OrderPolicy::Random);
    CHECK(parse_variant("ac-s2m2-natural-order").order == OrderPolicy::Natural);
    CHECK(parse_variant("ac2", 9).seed == 9);
    for (const char* n : {"ac", "ac2", "ac-s1", "ac-s3m3", "ac-random-order"}) {
        CHECK(variant_name(parse_variant(n)) == n);
    }
    CHECK_THROWS_AS(parse_variant("ac-s0"), Error);
    CHECK_THROWS_AS(parse_variant("ichol"), Error);
    CHECK_THROWS_AS(parse_variant("ac-sxm2"), Error);
}

TEST_CASE("solve on Laplacian and SDDM inputs")
{
    std::mt19937_64 rng(31);
    const SparseSym L = oracle::to_sparse(oracle::random_connected(80, rng, 0.1));
    const auto b = generic_rhs(L, 3);
    const auto s = solve(L, b, SamplerConfig::ac2(1));
    CHECK(s.matrix_class.kind == MatrixKind::Laplacian);
    CHECK(s.report.status == SolveStatus::Converged);
    CHECK(relative_residual(as_operator(L), s.x, b) <= 1e-8);

    const Dense M = oracle::random_sddm(60, rng);
    const Vec bm = Vec::Random(60);
    const auto t = solve(oracle::to_sparse(M), oracle::from_vec(bm), SamplerConfig::ac(2));
    CHECK(t.matrix_class.kind == MatrixKind::Sddm);
    CHECK((M * oracle::to_vec(t.x) - bm).norm() <= 1e-8 * bm.norm());

    CHECK_THROWS_AS(solve(L, std::vector<double>(3), SamplerConfig::ac()), DimensionMismatch);
    CHECK_THROWS_AS(solve(oracle::to_sparse((Dense(2, 2) << 1, 2, 2, 1).finished()), std::vector<double>{1, 1},
                          SamplerConfig::ac()),
                    NotSddm);
}
