#include "lapchol/harness.hpp"

#include "lapchol/generators.hpp"
#include "lapchol/matrix_market.hpp"
#include "lapchol/solver.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace lapchol {

using nlohmann::json;

// ---- bands --------------------------------------------------------------------

std::string to_string(Band b)
{
    switch (b) {
    case Band::Ok: return "ok";
    case Band::Star: return "star";
    case Band::DoubleStar: return "double-star";
    case Band::Inf: break;
    }
    return "inf";
}

Band parse_band(const std::string& s)
{
    for (Band b : {Band::Ok, Band::Star, Band::DoubleStar, Band::Inf}) {
        if (to_string(b) == s) {
            return b;
        }
    }
    throw Error("unknown residual band '" + s + "'");
}

Band band_of(double rel_residual, double tolerance, bool failed)
{
    if (failed || !std::isfinite(rel_residual)) {
        return Band::Inf;
    }
    const double ratio = rel_residual / tolerance;
    if (ratio <= 1.0) {
        return Band::Ok;
    }
    if (ratio <= 1e4) {
        return Band::Star;
    }
    if (ratio < 1e8) {
        return Band::DoubleStar;
    }
    return Band::Inf;
}

// ---- CSV ------------------------------------------------------------------------

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string clean(std::string s)
{
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r' || c == '"') {
            c = ';';
        }
    }
    return s;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunRecord>& records, bool timing)
{
    out << "# " << csv_schema << '\n';
    out << "instance,family,n,nnz,variant,seed,tol";
    if (timing) {
        out << ",t_build,t_solve,t_total";
    }
    out << ",iterations,rel_residual,status,band,error\n";
    for (const RunRecord& r : records) {
        out << clean(r.instance) << ',' << clean(r.family) << ',' << r.n << ',' << r.nnz << ',' << clean(r.variant)
            << ',' << r.seed << ',' << num(r.tolerance);
        if (timing) {
            out << ',' << num(r.t_build) << ',' << num(r.t_solve) << ',' << num(r.t_total());
        }
        out << ',' << r.iterations << ',' << num(r.rel_residual) << ',' << to_string(r.status) << ','
            << to_string(r.band) << ',' << clean(r.error) << '\n';
    }
}

std::vector<RunRecord> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind(std::string("# ") + csv_schema, 0) != 0) {
        throw Error(std::string("not a ") + csv_schema + " file");
    }
    if (!std::getline(in, line)) {
        throw Error("missing CSV column row");
    }
    const auto names = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < names.size(); ++i) {
        col[names[i]] = i;
    }
    for (const char* required : {"instance", "family", "n", "nnz", "variant", "seed", "tol", "iterations",
                                 "rel_residual", "status", "band"}) {
        if (!col.contains(required)) {
            throw Error(std::string("CSV lacks column ") + required);
        }
    }
    const bool timing = col.contains("t_build") && col.contains("t_solve");
    std::vector<RunRecord> out;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != names.size()) {
            throw Error("CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields");
        }
        RunRecord r;
        try {
            r.instance = f[col["instance"]];
            r.family = f[col["family"]];
            r.n = std::stoull(f[col["n"]]);
            r.nnz = std::stoull(f[col["nnz"]]);
            r.variant = f[col["variant"]];
            r.seed = std::stoull(f[col["seed"]]);
            r.tolerance = std::stod(f[col["tol"]]);
            if (timing) {
                r.t_build = std::stod(f[col["t_build"]]);
                r.t_solve = std::stod(f[col["t_solve"]]);
            }
            r.iterations = std::stoull(f[col["iterations"]]);
            r.rel_residual = std::stod(f[col["rel_residual"]]);
            r.status = parse_status(f[col["status"]]);
            r.band = parse_band(f[col["band"]]);
            if (col.contains("error")) {
                r.error = f[col["error"]];
            }
        } catch (const std::logic_error&) {
            throw Error("malformed value on CSV line " + std::to_string(line_no));
        }
        const Band expect = band_of(r.rel_residual, r.tolerance, r.status == SolveStatus::Failed);
        if (expect != r.band) {
            throw Error("CSV line " + std::to_string(line_no) + ": stored band " + to_string(r.band)
                        + " disagrees with residual (" + to_string(expect) + ")");
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---- manifests ------------------------------------------------------------------

Manifest parse_manifest(const std::string& json_text)
{
    Manifest m;
    try {
        const json j = json::parse(json_text);
        m.tolerance = j.value("tol", 1e-8);
        m.max_iters = j.value("max_iters", std::size_t{1000});
        if (j.contains("variants")) {
            m.variants = j.at("variants").get<std::vector<std::string>>();
        }
        for (const json& inst : j.at("instances")) {
            InstanceSpec s;
            s.id = inst.at("id").get<std::string>();
            s.family = inst.at("family").get<std::string>();
            s.params_json = inst.value("params", json::object()).dump();
            if (inst.contains("seeds")) {
                s.seeds = inst.at("seeds").get<std::vector<std::uint64_t>>();
            }
            if (s.seeds.empty()) {
                throw Error("instance " + s.id + " lists no seeds");
            }
            m.instances.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("bad manifest: ") + e.what());
    }
    for (const std::string& v : m.variants) {
        parse_variant(v);
    }
    return m;
}

Manifest load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

SparseSym build_instance(const InstanceSpec& spec, std::uint64_t seed)
{
    const json p = json::parse(spec.params_json);
    if (spec.family == "grid") {
        const auto points = p.value("points", std::size_t{10});
        const Coefficients model = parse_coefficients(p.value("model", std::string("uniform")));
        GridSpec g;
        switch (model) {
        case Coefficients::Uniform: g = GridSpec::cube(points); break;
        case Coefficients::Checkerboard: g = GridSpec::checkerboard(points, p.value("k", std::size_t{2}), p.value("w", 1e5)); break;
        case Coefficients::AnisotropicWeight: g = GridSpec::anisotropic_weight(points, p.value("w", 1e3)); break;
        case Coefficients::AnisotropicStretch: g = GridSpec::anisotropic_stretch(points, p.value("eta", 4.0)); break;
        }
        return poisson_grid(g);
    }
    if (spec.family == "sachdeva") {
        const auto k = p.value("k", std::size_t{20});
        return sachdeva_star({k, p.value("l", k / 2)});
    }
    if (spec.family == "chimera") {
        ChimeraSpec c;
        c.n = p.value("n", std::size_t{1000});
        c.seed = seed;
        c.weighted = p.value("weighted", false);
        c.sddm_boundary = p.value("sddm", false);
        c.thickening_rate = p.value("thickening", 0.1);
        return chimera(c);
    }
    if (spec.family == "path") {
        const auto n = p.value("n", std::size_t{2});
        std::vector<Triplet> edges;
        for (std::size_t i = 1; i < n; ++i) {
            edges.push_back({static_cast<Vertex>(i - 1), static_cast<Vertex>(i), 1.0});
        }
        return SparseSym::laplacian_from_edges(n, edges);
    }
    if (spec.family == "file") {
        return read_matrix_market(p.at("path").get<std::string>());
    }
    throw Error("unknown instance family '" + spec.family + "'");
}

// ---- suite ------------------------------------------------------------------------

std::vector<RunRecord> run_suite(const Manifest& manifest, const SuiteOptions& options)
{
    struct Job {
        std::size_t instance;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < manifest.instances.size(); ++i) {
        for (std::uint64_t s : manifest.instances[i].seeds) {
            jobs.push_back({i, s});
        }
    }
    const std::size_t nv = manifest.variants.size();
    std::vector<RunRecord> records(jobs.size() * nv);
    PcgConfig pcg;
    pcg.tolerance = manifest.tolerance;
    pcg.max_iters = manifest.max_iters;

    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) if (!options.serial)
    for (std::ptrdiff_t jdx = 0; jdx < count; ++jdx) {
        const Job& job = jobs[static_cast<std::size_t>(jdx)];
        const InstanceSpec& spec = manifest.instances[job.instance];
        std::optional<SparseSym> matrix;
        std::vector<double> b;
        std::string load_error;
        try {
            matrix = build_instance(spec, job.seed);
            b = generic_rhs(*matrix, job.seed);
        } catch (const std::exception& e) {
            load_error = e.what();
        }
        for (std::size_t v = 0; v < nv; ++v) {
            RunRecord& r = records[static_cast<std::size_t>(jdx) * nv + v];
            r.instance = spec.id;
            r.family = spec.family;
            r.variant = manifest.variants[v];
            r.seed = job.seed;
            r.tolerance = manifest.tolerance;
            if (!matrix) {
                r.error = load_error;
                continue;
            }
            r.n = matrix->size();
            r.nnz = matrix->nnz();
            try {
                const Solution s = solve(*matrix, b, parse_variant(r.variant, job.seed), pcg, options.parallel_kernels);
                r.t_build = s.report.t_build;
                r.t_solve = s.report.t_solve;
                r.iterations = s.report.iterations;
                r.rel_residual = s.report.rel_residual;
                r.status = s.report.status;
            } catch (const std::exception& e) {
                r.status = SolveStatus::Failed;
                r.error = e.what();
            }
            r.band = band_of(r.rel_residual, r.tolerance, r.status == SolveStatus::Failed);
        }
    }
    return records;
}

// ---- summaries ----------------------------------------------------------------------

double quantile(std::vector<double> values, double q)
{
    if (values.empty()) {
        throw Error("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records)
{
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> samples;
    for (const RunRecord& r : records) {
        if (r.nnz == 0) {
            continue;
        }
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const SummaryRow& s) { return s.family == r.family && s.variant == r.variant; });
        if (it == rows.end()) {
            rows.push_back({r.family, r.variant});
            samples.emplace_back();
            it = rows.end() - 1;
        }
        samples[static_cast<std::size_t>(it - rows.begin())].push_back(r.t_total() / static_cast<double>(r.nnz));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].count = samples[i].size();
        rows[i].median = quantile(samples[i], 0.5);
        rows[i].q75 = quantile(samples[i], 0.75);
        rows[i].max = *std::max_element(samples[i].begin(), samples[i].end());
    }
    return rows;
}

std::string format_summary(const std::vector<SummaryRow>& rows)
{
    std::ostringstream out;
    out << "# t_total/nnz in microseconds. Absolute times depend on the machine that produced them\n"
           "# and are not comparable with figures measured elsewhere.\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-18s %6s %12s %12s %12s\n", "family", "variant", "runs", "median",
                  "p75", "max");
    out << line;
    for (const SummaryRow& r : rows) {
        std::snprintf(line, sizeof line, "%-14s %-18s %6zu %12.5f %12.5f %12.5f\n", r.family.c_str(),
                      r.variant.c_str(), r.count, r.median * 1e6, r.q75 * 1e6, r.max * 1e6);
        out << line;
    }
    return out.str();
}

}  // namespace lapchol
