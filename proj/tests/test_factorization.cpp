#include "doctest.h"
#include "oracles.hpp"

#include "lapchol/elimination.hpp"

#include <cstring>
#include <sstream>

using namespace lapchol;
using oracle::Dense;
using oracle::Vec;

namespace {

Dense product(const LowerTriFactorization& f)
{
    const auto p = f.product_dense();
    const int n = static_cast<int>(f.size());
    return Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(p.data(), n, n);
}

Dense operator_matrix(const RowOpFactorization& f)
{
    const int n = static_cast<int>(f.size());
    Dense A(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        A.col(j) = oracle::to_vec(f.apply(e));
    }
    return A;
}

const SparseSym p2 = SparseSym::laplacian_from_edges(2, std::vector<Triplet>{{0, 1, 1.0}});

}  // namespace

TEST_CASE("P2 lower-triangular factor")
{
    const auto f = exact_cholesky(p2);
    REQUIRE(f.order.size() == 2);
    const Vertex first = f.order[0];
    CHECK(f.diag[first] == doctest::Approx(1.0));
    CHECK(f.diag[f.order[1]] == 0.0);
    REQUIRE(f.offdiag_nnz() == 1);
    CHECK(f.val[0] == doctest::Approx(-1.0));
    CHECK(product(f) == (Dense(2, 2) << 1, -1, -1, 1).finished());
}

TEST_CASE("P2 row-operation factor")
{
    const auto f = exact_edgewise_cholesky(p2);
    CHECK(f.pivots.size() == 1);
    CHECK(f.shifts.empty());
    CHECK(f.phi[f.pivots[0].v] == doctest::Approx(1.0));
    CHECK(f.phi[f.pivots[0].attach] == 0.0);
    CHECK(f.apply(std::vector<double>{1, -1}) == std::vector<double>{2, -2});
}

TEST_CASE("P2 pseudo-inverse matches the dense pseudo-inverse")
{
    const Dense L = (Dense(2, 2) << 1, -1, -1, 1).finished();
    const Vec expect = oracle::pinv(L) * Vec(Eigen::Vector2d(1, -1));
    const auto x = apply_precond_inverse(exact_edgewise_cholesky(p2), std::vector<double>{1, -1});
    CHECK(x[0] == doctest::Approx(expect[0]));
    CHECK(x[1] == doctest::Approx(expect[1]));
    CHECK(oracle::to_vec(exact_cholesky(p2).apply_pinv(std::vector<double>{1, -1})).isApprox(expect));
    CHECK(apply_precond_inverse(exact_edgewise_cholesky(p2), std::vector<double>{3, 3}) == std::vector<double>{0, 0});
}

TEST_CASE("triangle: exact elimination leaves the dense Schur complement")
{
    const oracle::Graph tri = oracle::complete(3);
    const auto f = exact_cholesky(oracle::to_sparse(tri));
    CHECK(oracle::max_abs_diff(product(f), oracle::laplacian(tri)) <= 1e-14);
    // After the first pivot the remaining edge weighs 1 + 1·1/2
    const Vertex v = f.order[0];
    const Dense L = oracle::laplacian(tri);
    Dense S = L;
    S -= L.col(v) * L.row(v) / L(v, v);
    Vertex a = v == 0 ? 1 : 0, b = v == 2 ? 1 : 2;
    CHECK(-S(a, b) == doctest::Approx(1.5));
}

TEST_CASE("K13 centre elimination creates the 1/3 triangle")
{
    MultiGraph g(4);
    for (Vertex u : {1u, 2u, 3u}) {
        g.add_edge(0, u, 1.0);
    }
    const auto c = elimination_clique(g, 0);
    CHECK(c.size() == 3);
    for (const auto& e : c) {
        CHECK(e.weight == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("exact factorizations reproduce L on random graphs")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::random_connected(5 + trial * 4, rng, 0.2);
        const Dense L = oracle::laplacian(g);
        const SparseSym m = oracle::to_sparse(g);
        const double scale = L.cwiseAbs().maxCoeff();
        CHECK(oracle::max_abs_diff(product(exact_cholesky(m)), L) <= 1e-12 * scale);
        CHECK(oracle::max_abs_diff(operator_matrix(exact_edgewise_cholesky(m)), L) <= 1e-12 * scale);
    }
}

TEST_CASE("exact pseudo-inverse is an inverse on the image, per component")
{
    std::mt19937_64 rng(22);
    auto g = oracle::random_connected(15, rng);
    const auto h = oracle::random_connected(10, rng);
    for (const auto& e : h.edges) {
        g.edges.push_back({e.u + 15, e.v + 15, e.w});
    }
    g.n = 25;
    const Dense L = oracle::laplacian(g);
    const auto f = exact_edgewise_cholesky(oracle::to_sparse(g));
    CHECK(f.components.count == 2);
    Vec r = Vec::Random(25);
    r.head(15).array() -= r.head(15).mean();
    r.tail(10).array() -= r.tail(10).mean();
    const Vec x = oracle::to_vec(apply_precond_inverse(f, oracle::from_vec(r)));
    CHECK((L * x - r).cwiseAbs().maxCoeff() <= 1e-10 * r.cwiseAbs().maxCoeff());
    CHECK(std::abs(x.head(15).sum()) <= 1e-10);
    CHECK(std::abs(x.tail(10).sum()) <= 1e-10);
    CHECK_THROWS_AS(apply_precond_inverse(f, std::vector<double>(3)), DimensionMismatch);
}

TEST_CASE("row-operation and lower-triangular forms agree on a 30-vertex graph")
{
    std::mt19937_64 rng(23);
    const SparseSym m = oracle::to_sparse(oracle::random_connected(30, rng, 0.2));
    const auto lt = approximate_cholesky(m, SamplerConfig::ac(9));
    const auto ro = approximate_edgewise_cholesky(m, SamplerConfig::ac(9));
    CHECK(lt.order == ro.order);
    for (int t = 0; t < 20; ++t) {
        const Vec z = Vec::Random(30);
        const Vec a = oracle::to_vec(lt.apply(oracle::from_vec(z)));
        const Vec b = oracle::to_vec(ro.apply(oracle::from_vec(z)));
        CHECK((a - b).norm() <= 1e-12 * a.norm());
    }
}

TEST_CASE("serialization round trip and corruption checks")
{
    std::mt19937_64 rng(24);
    const SparseSym m = oracle::to_sparse(oracle::random_connected(40, rng, 0.2));
    const auto f = approximate_edgewise_cholesky(m, SamplerConfig::ac2(1));
    std::stringstream ss;
    f.write(ss);
    const std::string bytes = ss.str();
    std::istringstream in(bytes);
    CHECK(RowOpFactorization::read(in) == f);

    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream bad_magic(bad);
    CHECK_THROWS_AS(RowOpFactorization::read(bad_magic), Error);
    std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(RowOpFactorization::read(truncated), Error);

    // A shift count of 2^39 in a short file must fail cleanly
    std::string huge = bytes;
    const std::size_t shifts_at = 8 + 4 + 4 + 8 + 8 + 4 * f.order.size() + 8 + 16 * f.pivots.size();
    const std::uint64_t claim = std::uint64_t{1} << 39;
    std::memcpy(huge.data() + shifts_at, &claim, sizeof claim);
    std::istringstream lying(huge);
    CHECK_THROWS_AS(RowOpFactorization::read(lying), Error);
}

TEST_CASE("factor size counts")
{
    const auto f = exact_cholesky(oracle::to_sparse(oracle::complete(4)));
    // K4 fills completely: 3 + 2 + 1 off-diagonals, 3 non-zero diagonals
    CHECK(f.offdiag_nnz() == 6);
    CHECK(f.nnz() == 9);
    const auto r = exact_edgewise_cholesky(oracle::to_sparse(oracle::complete(4)));
    CHECK(r.op_count() == 6);
    CHECK(r.nnz() == 9);
}
