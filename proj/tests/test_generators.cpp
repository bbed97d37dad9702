#include "doctest.h"
#include "oracles.hpp"

#include "lapchol/generators.hpp"

#include <cmath>
#include <set>

using namespace lapchol;

namespace {

// Uniform 7-point stencil assembled by walking every interior point.
oracle::Dense stencil_walker(std::size_t p1, std::size_t p2, std::size_t p3)
{
    const int m1 = static_cast<int>(p1) - 2, m2 = static_cast<int>(p2) - 2, m3 = static_cast<int>(p3) - 2;
    const int n = m1 * m2 * m3;
    oracle::Dense A = oracle::Dense::Zero(n, n);
    auto id = [&](int i, int j, int k) { return (i * m2 + j) * m3 + k; };
    for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) {
            for (int k = 0; k < m3; ++k) {
                A(id(i, j, k), id(i, j, k)) = 6;
                const int nb[6][3] = {{i - 1, j, k}, {i + 1, j, k}, {i, j - 1, k}, {i, j + 1, k}, {i, j, k - 1}, {i, j, k + 1}};
                for (const auto& q : nb) {
                    if (q[0] >= 0 && q[0] < m1 && q[1] >= 0 && q[1] < m2 && q[2] >= 0 && q[2] < m3) {
                        A(id(i, j, k), id(q[0], q[1], q[2])) = -1;
                    }
                }
            }
        }
    }
    return A;
}

std::size_t nonzeros(const oracle::Dense& A) { return static_cast<std::size_t>((A.array() != 0.0).count()); }

}  // namespace

TEST_CASE("3x3x3 grid has one unknown")
{
    const SparseSym m = poisson_grid(GridSpec::cube(3));
    REQUIRE(m.size() == 1);
    CHECK(m.diag(0) == 6.0);
}

TEST_CASE("uniform grids match a brute-force stencil walker")
{
    for (std::size_t p : {4u, 5u, 7u, 10u}) {
        const oracle::Dense A = stencil_walker(p, p, p);
        const SparseSym m = poisson_grid(GridSpec::cube(p));
        CHECK(oracle::to_dense(m) == A);
        CHECK(m.nnz() == nonzeros(A));
        CHECK(classify(m).kind == MatrixKind::Sddm);
    }
    const SparseSym s = poisson_grid(GridSpec::anisotropic_stretch(4, 2.0));
    CHECK(oracle::to_dense(s) == stencil_walker(8, 4, 4));
}

TEST_CASE("grid sizes at the 66-interior scale")
{
    const GridSpec g = GridSpec::cube(68);
    CHECK(g.unknowns() == 287496);
    // Each interior point has 6 neighbours except at the faces: nnz = n + 2·(3·m²·(m-1))
    const std::size_t m = 66;
    CHECK(g.unknowns() + 2 * 3 * m * m * (m - 1) == 1986336);
}

TEST_CASE("checkerboard coefficient")
{
    CHECK(checkerboard_mu(4, 1e5, 0.1, 0.1, 0.1) == 1.0);
    CHECK(checkerboard_mu(4, 1e5, 0.3, 0.1, 0.1) == 1e5);
    CHECK(checkerboard_mu(4, 1e5, 0.3, 0.3, 0.1) == 1.0);
    CHECK_THROWS_AS(poisson_grid(GridSpec::checkerboard(10, 4, 1e5)), Error);
    const SparseSym m = poisson_grid(GridSpec::checkerboard(9, 4, 1e5));
    CHECK(classify(m).kind == MatrixKind::Sddm);
    std::set<double> values;
    for (double v : m.values()) {
        values.insert(v);
    }
    CHECK(values == std::set<double>{-1e5, -1.0});
}

TEST_CASE("anisotropic weight scales the first axis")
{
    const SparseSym m = poisson_grid(GridSpec::anisotropic_weight(6, 100.0));
    const std::size_t stride = 4 * 4;
    CHECK(m.at(0, stride) == -100.0);
    CHECK(m.at(0, 1) == -1.0);
    CHECK(m.at(0, 4) == -1.0);
    CHECK(m.diag(0) == 204.0);
    CHECK(GridSpec::anisotropic_stretch(10, 0.1).n1 == 2);
    CHECK(GridSpec::anisotropic_stretch(10, 2.25).n1 == 23);
}

TEST_CASE("Sachdeva star closed forms")
{
    const SparseSym s = sachdeva_star({4, 3});
    CHECK(s.size() == 13);
    CHECK(s.offdiag_pairs() == 21);
    CHECK(classify(s).kind == MatrixKind::Laplacian);
    CHECK(connected_components(s).count == 1);
    for (std::size_t k : {5u, 10u, 20u}) {
        const StarSpec spec = StarSpec::family(k);
        const SparseSym m = sachdeva_star(spec);
        CHECK(m.size() == 1 + spec.l * k);
        CHECK(m.offdiag_pairs() == spec.l * (1 + k * (k - 1) / 2));
    }
    const SparseSym big = sachdeva_star(StarSpec::family(100));
    CHECK(big.size() == 5001);
    CHECK(big.nnz() == 500101);
    CHECK_THROWS_AS(sachdeva_star({1, 3}), Error);
}

TEST_CASE("generalized necklace of a triangle over K2")
{
    StreamRng rng(5);
    const EdgeGraph g = generalized_necklace(complete_graph(3), complete_graph(2), 1, rng);
    CHECK(g.n == 6);
    CHECK(g.edges.size() == 6);
    CHECK(g.connected());
}

TEST_CASE("base graphs and combiners")
{
    CHECK(path_graph(5).edges.size() == 4);
    CHECK(ring_graph(5).edges.size() == 5);
    CHECK(complete_graph(5).edges.size() == 10);
    CHECK(grid2d_graph(3, 4).edges.size() == 17);
    StreamRng rng(1);
    const EdgeGraph t = random_tree(30, rng);
    CHECK(t.edges.size() == 29);
    CHECK(t.connected());
    const EdgeGraph p = cartesian_product(path_graph(3), path_graph(4));
    CHECK(p.n == 12);
    CHECK(p.edges.size() == grid2d_graph(3, 4).edges.size());
    const EdgeGraph l = two_lift(ring_graph(6), rng);
    CHECK(l.n == 12);
    CHECK(l.edges.size() == 12);
    EdgeGraph th = thicken(path_graph(50), 1.0, rng);
    th.simplify();
    CHECK(th.edges.size() == 49 + 48);
}

TEST_CASE("chimeras")
{
    const SparseSym two = chimera({2, 7});
    CHECK(two.size() == 2);
    CHECK(two.offdiag_pairs() == 1);

    for (std::size_t n : {10u, 100u, 1000u, 5000u}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const SparseSym c = chimera({n, seed});
            CHECK(c.size() == n);
            CHECK(connected_components(c).count == 1);
            CHECK(classify(c).kind == MatrixKind::Laplacian);
        }
    }
    CHECK(chimera({1000, 1}) == chimera({1000, 1}));
    CHECK_FALSE(chimera({1000, 1}) == chimera({1000, 2}));

    ChimeraSpec w{2000, 4, true};
    const SparseSym cw = chimera(w);
    CHECK(classify(cw).kind == MatrixKind::Laplacian);
    std::set<double> distinct(cw.values().begin(), cw.values().end());
    CHECK(distinct.size() > 10);

    ChimeraSpec s{1000, 4, true, true};
    const SparseSym cs = chimera(s);
    CHECK(classify(cs).kind == MatrixKind::Sddm);
    const auto sums = cs.row_sums();
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (i % 10 == 0) {
            CHECK(sums[i] == doctest::Approx(1.0));
        } else {
            CHECK(std::abs(sums[i]) <= 1e-9 * cs.diag(i));
        }
    }
    CHECK_THROWS_AS(chimera({0, 1}), Error);
}

TEST_CASE("right-hand sides")
{
    const SparseSym c = chimera({500, 3});
    const auto b = generic_rhs(c, 11);
    double norm = 0, sum = 0;
    for (double v : b) {
        norm += v * v;
        sum += v;
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(sum) <= 1e-12);
    CHECK(b == generic_rhs(c, 11));
    CHECK(b != generic_rhs(c, 12));
    CHECK(grid_rhs(c, 11) == b);
}
