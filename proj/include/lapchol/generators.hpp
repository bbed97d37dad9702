#pragma once

#include "lapchol/rng.hpp"
#include "lapchol/sparse.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lapchol {

// ---- 3D Poisson grids ---------------------------------------------------------

enum class Coefficients { Uniform, Checkerboard, AnisotropicWeight, AnisotropicStretch };

std::string to_string(Coefficients c);
Coefficients parse_coefficients(const std::string& s);

/// Points per axis include the two boundary points, so n_i = m_i + 2 for m_i
/// interior unknowns along that axis.
struct GridSpec {
    std::size_t n1 = 3;
    std::size_t n2 = 3;
    std::size_t n3 = 3;
    Coefficients model = Coefficients::Uniform;
    std::size_t k = 1;   // checkerboard intervals per axis
    double w = 1.0;      // checkerboard contrast or axis-1 weight
    double eta = 1.0;    // stretch factor

    static GridSpec cube(std::size_t points_per_axis);
    static GridSpec checkerboard(std::size_t points_per_axis, std::size_t k, double w);
    static GridSpec anisotropic_weight(std::size_t points_per_axis, double w);
    /// n2 = n3 = points, n1 = max(2, round(eta * points)).
    static GridSpec anisotropic_stretch(std::size_t points, double eta);

    std::size_t unknowns() const;
    void validate() const;
};

/// μ for the checkerboard: 1 when floor(kx)+floor(ky)+floor(kz) is even.
double checkerboard_mu(std::size_t k, double w, double x, double y, double z);

SparseSym poisson_grid(const GridSpec& spec);

// ---- Sachdeva stars -----------------------------------------------------------

struct StarSpec {
    std::size_t k = 4;  // clique size
    std::size_t l = 2;  // leaf cliques; k/2 in the benchmark family

    static StarSpec family(std::size_t k) { return {k, k / 2}; }
    void validate() const;
};

/// Vertex 0 is the hub; clique c occupies 1 + c·k ... and its first vertex
/// is joined to the hub.
SparseSym sachdeva_star(const StarSpec& spec);

// ---- Chimeras -----------------------------------------------------------------

/// Unweighted simple graph under construction; duplicates are tolerated
/// and removed by `simplify`.
struct EdgeGraph {
    std::size_t n = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;

    void simplify();
    bool connected() const;
};

EdgeGraph path_graph(std::size_t n);
EdgeGraph ring_graph(std::size_t n);
EdgeGraph complete_graph(std::size_t n);
EdgeGraph grid2d_graph(std::size_t rows, std::size_t cols);
EdgeGraph random_tree(std::size_t n, StreamRng& rng);

EdgeGraph cartesian_product(const EdgeGraph& g, const EdgeGraph& h);
/// One copy of H per vertex of G; each edge of G gets `cross` random edges
/// between the two corresponding copies.
EdgeGraph generalized_necklace(const EdgeGraph& g, const EdgeGraph& h, std::size_t cross, StreamRng& rng);
EdgeGraph two_lift(const EdgeGraph& g, StreamRng& rng);
/// Adds each 2-hop path's closing edge with probability `rate`.
EdgeGraph thicken(const EdgeGraph& g, double rate, StreamRng& rng);

struct ChimeraSpec {
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    bool weighted = false;
    bool sddm_boundary = false;
    double thickening_rate = 0.1;

    void validate() const;
};

/// Connected, exactly spec.n vertices. Laplacian, or SDDM with unit excess
/// at indices divisible by ceil(n^(1/3)) when sddm_boundary is set.
SparseSym chimera(const ChimeraSpec& spec);

// ---- right-hand sides -----------------------------------------------------------

/// b = M g / ‖M g‖ with g standard Gaussian from `seed`.
std::vector<double> generic_rhs(const SparseSym& m, std::uint64_t seed);
inline std::vector<double> grid_rhs(const SparseSym& m, std::uint64_t seed) { return generic_rhs(m, seed); }
inline std::vector<double> star_rhs(const SparseSym& m, std::uint64_t seed) { return generic_rhs(m, seed); }

}  // namespace lapchol
