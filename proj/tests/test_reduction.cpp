#include "doctest.h"
#include "oracles.hpp"

#include "lapchol/elimination.hpp"
#include "lapchol/reduction.hpp"
#include "lapchol/solver.hpp"

#include <cfloat>

using namespace lapchol;
using oracle::Dense;

TEST_CASE("lift of a 1x1 matrix")
{
    const GrembanLift g = lift(oracle::to_sparse(Dense::Constant(1, 1, 2.0)));
    CHECK(g.base_n == 1);
    CHECK(g.extra_vertex == 1);
    CHECK(oracle::to_dense(g.lifted) == (Dense(2, 2) << 2, -2, -2, 2).finished());
}

TEST_CASE("lift of a Laplacian leaves the extra vertex isolated")
{
    const GrembanLift g = lift(oracle::to_sparse((Dense(2, 2) << 1, -1, -1, 1).finished()));
    const Dense expect = (Dense(3, 3) << 1, -1, 0, -1, 1, 0, 0, 0, 0).finished();
    CHECK(oracle::to_dense(g.lifted) == expect);
}

TEST_CASE("lift joins each row to the extra vertex with its excess")
{
    const GrembanLift g = lift(oracle::to_sparse((Dense(2, 2) << 3, -1, -1, 2).finished()));
    const Dense L = oracle::to_dense(g.lifted);
    CHECK(L(0, 1) == -1);
    CHECK(L(0, 2) == -2);
    CHECK(L(1, 2) == -1);
    CHECK((L * oracle::Vec::Ones(3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(classify(g.lifted).kind == MatrixKind::Laplacian);
}

TEST_CASE("lift rejects unsupported matrices")
{
    CHECK_THROWS_AS(lift(oracle::to_sparse((Dense(2, 2) << 1, 1, 1, 1).finished())), NotSddm);
    CHECK_THROWS_AS(lift(oracle::to_sparse((Dense(2, 2) << 1, -3, -3, 1).finished())), NotSddm);
}

TEST_CASE("approximately SDDM rows are clamped")
{
    const double delta = 5 * DBL_EPSILON;
    const GrembanLift g = lift(oracle::to_sparse((Dense(2, 2) << 1, -1 - delta, -1 - delta, 1).finished()));
    CHECK(g.lifted.at(0, 2) == 0.0);
    CHECK(g.lifted.at(1, 2) == 0.0);
}

TEST_CASE("lift_rhs and recover")
{
    const GrembanLift one = lift(oracle::to_sparse(Dense::Constant(1, 1, 2.0)));
    CHECK(lift_rhs(one, std::vector<double>{1}) == std::vector<double>{1, -1});
    CHECK(recover(one, std::vector<double>{0.25, -0.25}) == std::vector<double>{0.5});
    CHECK(recover(one, std::vector<double>{7, 7}) == std::vector<double>{0});

    const GrembanLift two = lift(oracle::to_sparse((Dense(2, 2) << 3, -1, -1, 2).finished()));
    CHECK(lift_rhs(two, std::vector<double>{0.5, -0.5}) == std::vector<double>{0.5, -0.5, 0});
    CHECK(lift_rhs(two, std::vector<double>{3, 4}) == std::vector<double>{3, 4, -7});
    CHECK_THROWS_AS(lift_rhs(two, std::vector<double>{1}), DimensionMismatch);
    CHECK_THROWS_AS(recover(two, std::vector<double>{1, 2}), DimensionMismatch);
}

TEST_CASE("lifted right-hand sides sum to zero")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = lift(oracle::to_sparse(oracle::random_sddm(30, rng)));
        std::vector<double> b(30);
        double l1 = 0;
        for (double& v : b) {
            v = nd(rng) * 1e3;
            l1 += std::abs(v);
        }
        const auto bh = lift_rhs(g, b);
        double s = 0;
        for (double v : bh) {
            s += v;
        }
        CHECK(std::abs(s) <= 31 * DBL_EPSILON * l1);
    }
}

TEST_CASE("recover of the lifted pseudo-inverse solves the SDDM system")
{
    std::mt19937_64 rng(5);
    const Dense M = oracle::random_sddm(5, rng);
    const GrembanLift g = lift(oracle::to_sparse(M));
    const oracle::Vec b = oracle::Vec::Random(5);
    const oracle::Vec y = oracle::pinv(oracle::to_dense(g.lifted)) * oracle::to_vec(lift_rhs(g, oracle::from_vec(b)));
    const oracle::Vec x = oracle::to_vec(recover(g, oracle::from_vec(y)));
    const oracle::Vec expect = M.partialPivLu().solve(b);
    CHECK((x - expect).norm() <= 1e-10 * expect.norm());
}

TEST_CASE("solve handles disconnected SDDM inputs and Laplacian components")
{
    // Block 0-1 is SDDM, block 2-3 is a Laplacian component
    const Dense M = (Dense(4, 4) << 3, -1, 0, 0, -1, 2, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1).finished();
    const std::vector<double> b{1, 2, 0.5, -0.5};
    const Solution s = solve(oracle::to_sparse(M), b, SamplerConfig::ac(1));
    CHECK(s.report.status == SolveStatus::Converged);
    const oracle::Vec r = M * oracle::to_vec(s.x) - oracle::to_vec(b);
    CHECK(r.norm() <= 1e-8 * oracle::to_vec(b).norm());
}
