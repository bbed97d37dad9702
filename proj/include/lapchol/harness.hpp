#pragma once

#include "lapchol/pcg.hpp"
#include "lapchol/sparse.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lapchol {

/// Residual bands: ok at or under the tolerance, star when it is exceeded by
/// a factor in (1, 1e4], double-star for (1e4, 1e8), inf from 1e8 or on failure.
enum class Band { Ok, Star, DoubleStar, Inf };

std::string to_string(Band b);
Band parse_band(const std::string& s);
Band band_of(double rel_residual, double tolerance, bool failed = false);

struct RunRecord {
    std::string instance;
    std::string family;
    std::size_t n = 0;
    std::size_t nnz = 0;
    std::string variant;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;
    double t_build = 0.0;
    double t_solve = 0.0;
    std::size_t iterations = 0;
    double rel_residual = 1.0;
    SolveStatus status = SolveStatus::Failed;
    Band band = Band::Inf;
    std::string error;

    double t_total() const noexcept { return t_build + t_solve; }
};

inline constexpr const char* csv_schema = "lapchol-runs v1";

/// One header comment with the schema tag, a column row, then one row per
/// solve. With `timing` false the three time columns are left out.
void write_csv(std::ostream& out, const std::vector<RunRecord>& records, bool timing = true);

/// Throws if the schema tag is missing or a stored band disagrees with the
/// band recomputed from the residual.
std::vector<RunRecord> read_csv(std::istream& in);

struct InstanceSpec {
    std::string id;
    std::string family;  // grid | sachdeva | chimera | path | file
    std::string params_json = "{}";
    std::vector<std::uint64_t> seeds{1};
};

struct Manifest {
    std::vector<InstanceSpec> instances;
    std::vector<std::string> variants{"ac"};
    double tolerance = 1e-8;
    std::size_t max_iters = 1000;
};

Manifest parse_manifest(const std::string& json_text);
Manifest load_manifest(const std::string& path);

/// Builds the matrix for one instance. `seed` only matters for chimeras.
SparseSym build_instance(const InstanceSpec& spec, std::uint64_t seed);

struct SuiteOptions {
    bool serial = false;            // one instance at a time
    bool parallel_kernels = false;  // OpenMP spmv inside each solve
};

/// One row per (instance, seed, variant) in manifest order. Matrix loading is
/// not timed; failures become band-inf rows.
std::vector<RunRecord> run_suite(const Manifest& manifest, const SuiteOptions& options = {});

/// Type-7 quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);

struct SummaryRow {
    std::string family;
    std::string variant;
    std::size_t count = 0;
    double median = 0.0;  // of t_total / nnz, seconds
    double q75 = 0.0;
    double max = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace lapchol
