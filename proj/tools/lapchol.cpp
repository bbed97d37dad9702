// lapchol: generate instances, solve, run suites, plot scaling, compare variants.
//
// Output files land in $LAPCHOL_OUTPUT_DIR (default: the working directory).
// The exit status is nonzero only for harness errors; a solve that misses its
// tolerance is reported in the output and still exits 0.
#include "lapchol/condition.hpp"
#include "lapchol/generators.hpp"
#include "lapchol/harness.hpp"
#include "lapchol/matrix_market.hpp"
#include "lapchol/plot.hpp"
#include "lapchol/solver.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace lapchol;
using nlohmann::json;

namespace {

fs::path output_dir()
{
    const char* env = std::getenv("LAPCHOL_OUTPUT_DIR");
    fs::path dir = env && *env ? fs::path(env) : fs::current_path();
    fs::create_directories(dir);
    return dir;
}

fs::path out_path(const std::string& name)
{
    const fs::path p(name);
    return p.is_absolute() ? p : output_dir() / p;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

struct GenerateArgs {
    std::string family = "grid";
    std::size_t points = 10;
    std::string model = "uniform";
    std::size_t k = 4;
    std::size_t l = 0;
    double w = 1e3;
    double eta = 4.0;
    std::size_t n = 1000;
    bool weighted = false;
    bool sddm = false;
    std::uint64_t seed = 1;
    std::string format = "mm";
    std::string name;
};

int run_generate(const GenerateArgs& a)
{
    json params;
    if (a.family == "grid") {
        params = {{"points", a.points}, {"model", a.model}, {"k", a.k}, {"w", a.w}, {"eta", a.eta}};
    } else if (a.family == "sachdeva") {
        params = {{"k", a.k}, {"l", a.l ? a.l : a.k / 2}};
    } else if (a.family == "chimera") {
        params = {{"n", a.n}, {"weighted", a.weighted}, {"sddm", a.sddm}};
    } else if (a.family == "path") {
        params = {{"n", a.n}};
    } else {
        throw Error("generate: unknown family '" + a.family + "'");
    }
    const InstanceSpec spec{a.name, a.family, params.dump(), {a.seed}};
    const SparseSym m = build_instance(spec, a.seed);
    const std::string stem = a.name.empty() ? a.family + "_" + std::to_string(a.seed) : a.name;
    const fs::path mtx = out_path(stem + ".mtx");
    write_matrix_market(mtx.string(), m, "lapchol " + a.family + " " + params.dump());
    const json sidecar = {{"family", a.family},
                          {"params", params},
                          {"seed", a.seed},
                          {"class", to_string(classify(m).kind)},
                          {"n", m.size()},
                          {"nnz", m.nnz()}};
    write_text(out_path(stem + ".json"), sidecar.dump(2) + "\n");
    std::cout << mtx.string() << "  n=" << m.size() << " nnz=" << m.nnz() << " class=" << to_string(classify(m).kind)
              << "\n";
    return 0;
}

struct SolveArgs {
    std::string input;
    std::string rhs;
    std::string variant = "ac";
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::size_t max_iters = 1000;
    bool parallel = false;
    std::string csv;
};

int run_solve(const SolveArgs& a)
{
    const SparseSym m = read_matrix_market(a.input);
    std::vector<double> b;
    if (a.rhs.empty()) {
        b = generic_rhs(m, a.seed);
    } else {
        std::istringstream in(slurp(a.rhs));
        double v;
        while (in >> v) {
            b.push_back(v);
        }
    }
    const SamplerConfig sampler = parse_variant(a.variant, a.seed);
    PcgConfig pcg;
    pcg.tolerance = a.tol;
    pcg.max_iters = a.max_iters;
    pcg.validate();
    if (b.size() != m.size()) {
        throw DimensionMismatch("right-hand side has " + std::to_string(b.size()) + " entries for a matrix of size "
                                + std::to_string(m.size()));
    }

    RunRecord r;
    r.instance = fs::path(a.input).stem().string();
    r.family = "file";
    r.n = m.size();
    r.nnz = m.nnz();
    r.variant = a.variant;
    r.seed = a.seed;
    r.tolerance = a.tol;
    try {
        const Solution s = solve(m, b, sampler, pcg, a.parallel);
        r.t_build = s.report.t_build;
        r.t_solve = s.report.t_solve;
        r.iterations = s.report.iterations;
        r.rel_residual = s.report.rel_residual;
        r.status = s.report.status;
        std::cout << "class: " << to_string(s.matrix_class.kind) << "\nfactor nnz: " << s.factor_nnz << "\n";
    } catch (const Error& e) {
        r.status = SolveStatus::Failed;
        r.error = e.what();
        std::cout << "solve failed: " << e.what() << "\n";
    }
    r.band = band_of(r.rel_residual, r.tolerance, r.status == SolveStatus::Failed);
    std::printf("n=%zu nnz=%zu iterations=%zu rel_residual=%.3e status=%s band=%s t_build=%.4fs t_solve=%.4fs\n", r.n,
                r.nnz, r.iterations, r.rel_residual, to_string(r.status).c_str(), to_string(r.band).c_str(),
                r.t_build, r.t_solve);
    if (!a.csv.empty()) {
        std::ofstream out(out_path(a.csv));
        write_csv(out, {r});
    }
    return 0;
}

struct SuiteArgs {
    std::string manifest;
    std::string csv = "runs.csv";
    bool serial = false;
    bool parallel_kernels = false;
    bool no_timing = false;
    std::vector<std::string> variants;
    double tol = 0.0;
    std::size_t max_iters = 0;
};

Manifest load_with_overrides(const std::string& path, const std::vector<std::string>& variants, double tol,
                             std::size_t max_iters)
{
    Manifest m = load_manifest(path);
    if (!variants.empty()) {
        m.variants = variants;
        for (const auto& v : variants) {
            parse_variant(v);
        }
    }
    if (tol > 0.0) {
        m.tolerance = tol;
    }
    if (max_iters > 0) {
        m.max_iters = max_iters;
    }
    return m;
}

int run_suite_cmd(const SuiteArgs& a)
{
    const Manifest m = load_with_overrides(a.manifest, a.variants, a.tol, a.max_iters);
    const auto records = run_suite(m, {a.serial, a.parallel_kernels});
    const fs::path csv = out_path(a.csv);
    {
        std::ofstream out(csv);
        if (!out) {
            throw Error("cannot write " + csv.string());
        }
        write_csv(out, records, !a.no_timing);
    }
    std::size_t bad = 0;
    for (const auto& r : records) {
        bad += r.band != Band::Ok;
    }
    std::cout << format_summary(summarize(records));
    std::cout << records.size() << " solves, " << bad << " outside tolerance; records in " << csv.string() << "\n";
    return 0;
}

struct PlotArgs {
    std::string csv;
    std::string mode = "all";
    std::string prefix = "scaling";
};

int run_plot(const PlotArgs& a)
{
    std::ifstream in(a.csv);
    if (!in) {
        throw Error("cannot open " + a.csv);
    }
    const auto records = read_csv(in);
    std::vector<PlotMode> modes;
    if (a.mode == "all") {
        modes = {PlotMode::Time, PlotMode::TimePerNnz, PlotMode::TimePerNnzLog3};
    } else {
        modes = {parse_plot_mode(a.mode)};
    }
    for (PlotMode mode : modes) {
        const PlotData d = plot_scaling(records, mode);
        const std::string stem = a.prefix + "_" + to_string(mode);
        write_text(out_path(stem + ".json"), to_json(d) + "\n");
        write_text(out_path(stem + ".svg"), render_svg(d));
        std::cout << out_path(stem + ".svg").string() << "\n";
    }
    return 0;
}

struct VariantsArgs {
    std::string manifest;
    std::vector<std::string> variants;
    std::size_t iterations = 200;
    std::string method = "lanczos";
    std::uint64_t seed = 1;
    double tol = 0.0;
    std::size_t max_iters = 0;
};

int run_variants(const VariantsArgs& a)
{
    const Manifest m = load_with_overrides(a.manifest, a.variants, a.tol, a.max_iters);
    const ConditionMethod method = a.method == "power" ? ConditionMethod::Power : ConditionMethod::Lanczos;
    if (a.method != "power" && a.method != "lanczos") {
        throw Error("unknown estimator '" + a.method + "'");
    }
    PcgConfig pcg;
    pcg.tolerance = m.tolerance;
    pcg.max_iters = m.max_iters;
    std::vector<StudyInstance> instances;
    for (const InstanceSpec& spec : m.instances) {
        instances.push_back({spec.id, build_instance(spec, spec.seeds.front())});
    }
    std::vector<SamplerConfig> variants;
    for (const std::string& v : m.variants) {
        variants.push_back(parse_variant(v, a.seed));
    }
    std::cout << format_variant_table(variant_study(instances, variants, pcg, a.iterations, method));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Approximate Cholesky Laplacian and SDDM solver harness"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "write a generated instance as MatrixMarket plus a JSON sidecar");
    g->add_option("family", gen.family, "grid | sachdeva | chimera | path")->required();
    g->add_option("--points", gen.points, "grid points per axis, boundary included");
    g->add_option("--model", gen.model, "uniform | checkerboard | aniso-weight | aniso-stretch");
    g->add_option("--k", gen.k, "checkerboard intervals, or clique size for sachdeva");
    g->add_option("--l", gen.l, "sachdeva clique count (default k/2)");
    g->add_option("--w", gen.w, "coefficient contrast");
    g->add_option("--eta", gen.eta, "stretch factor");
    g->add_option("--n", gen.n, "vertices for chimera and path");
    g->add_flag("--weighted", gen.weighted);
    g->add_flag("--sddm", gen.sddm);
    g->add_option("--seed", gen.seed);
    g->add_option("--format", gen.format)->check(CLI::IsMember({"mm"}));
    g->add_option("-o,--name", gen.name, "output file stem");

    SolveArgs sol;
    auto* s = app.add_subcommand("solve", "solve one MatrixMarket system");
    s->add_option("input", sol.input)->required()->check(CLI::ExistingFile);
    s->add_option("--rhs", sol.rhs, "whitespace separated right-hand side (default: seeded M·g)");
    s->add_option("--variant", sol.variant, "ac | ac2 | ac-sK | ac-sKmL | ac-random-order");
    s->add_option("--tol", sol.tol);
    s->add_option("--seed", sol.seed);
    s->add_option("--max-iters", sol.max_iters);
    s->add_flag("--parallel-kernels", sol.parallel);
    s->add_option("--csv", sol.csv, "also write a one-row CSV");

    SuiteArgs su;
    auto* u = app.add_subcommand("suite", "run every (instance, seed, variant) of a manifest");
    u->add_option("manifest", su.manifest)->required()->check(CLI::ExistingFile);
    u->add_option("--csv", su.csv);
    u->add_flag("--serial", su.serial, "solve one instance at a time");
    u->add_flag("--parallel-kernels", su.parallel_kernels);
    u->add_flag("--no-timing", su.no_timing, "leave the time columns out of the CSV");
    u->add_option("--variant", su.variants, "override the manifest's variants");
    u->add_option("--tol", su.tol);
    u->add_option("--max-iters", su.max_iters);

    PlotArgs pl;
    auto* p = app.add_subcommand("plot", "scaling plots from a run CSV");
    p->add_option("csv", pl.csv)->required()->check(CLI::ExistingFile);
    p->add_option("--mode", pl.mode, "time | time_per_nnz | time_per_nnz_log3 | all");
    p->add_option("--prefix", pl.prefix);

    VariantsArgs va;
    auto* v = app.add_subcommand("variants", "timing, size ratio and condition number per variant");
    v->add_option("manifest", va.manifest)->required()->check(CLI::ExistingFile);
    v->add_option("--variant", va.variants);
    v->add_option("--iterations", va.iterations, "estimator iterations");
    v->add_option("--method", va.method, "lanczos | power");
    v->add_option("--seed", va.seed);
    v->add_option("--tol", va.tol);
    v->add_option("--max-iters", va.max_iters);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*g) {
            return run_generate(gen);
        }
        if (*s) {
            return run_solve(sol);
        }
        if (*u) {
            return run_suite_cmd(su);
        }
        if (*p) {
            return run_plot(pl);
        }
        return run_variants(va);
    } catch (const std::exception& e) {
        std::cerr << "lapchol: " << e.what() << "\n";
        return 1;
    }
}
