#include "doctest.h"

#include "lapchol/harness.hpp"
#include "lapchol/plot.hpp"

#include <cmath>
#include <sstream>

using namespace lapchol;

namespace {

RunRecord record(const std::string& family, std::size_t nnz, double t, double rel, SolveStatus st = SolveStatus::Converged)
{
    RunRecord r;
    r.instance = family + std::to_string(nnz);
    r.family = family;
    r.n = nnz / 7;
    r.nnz = nnz;
    r.variant = "ac";
    r.t_build = t / 4;
    r.t_solve = t - t / 4;
    r.iterations = 10;
    r.rel_residual = rel;
    r.status = st;
    r.band = band_of(rel, r.tolerance, st == SolveStatus::Failed);
    return r;
}

}  // namespace

TEST_CASE("residual bands")
{
    const double tol = 1e-8;
    CHECK(band_of(0.0, tol) == Band::Ok);
    CHECK(band_of(1e-8, tol) == Band::Ok);
    CHECK(band_of(1.0000001e-8, tol) == Band::Star);
    CHECK(band_of(1e-4, tol) == Band::Star);
    CHECK(band_of(1.01e-4, tol) == Band::DoubleStar);
    CHECK(band_of(0.99, tol) == Band::DoubleStar);
    CHECK(band_of(1.0, tol) == Band::Inf);
    CHECK(band_of(1e-12, tol, true) == Band::Inf);
    CHECK(band_of(NAN, tol) == Band::Inf);
    for (Band b : {Band::Ok, Band::Star, Band::DoubleStar, Band::Inf}) {
        CHECK(parse_band(to_string(b)) == b);
    }
    CHECK_THROWS_AS(parse_band("**"), Error);
}

TEST_CASE("CSV round trip with and without timing")
{
    std::vector<RunRecord> rs{record("grid", 1000, 0.01, 1e-9), record("star", 5000, 0.2, 3e-6),
                              record("chimera", 70, 0.0, 1.0, SolveStatus::Failed)};
    rs[2].error = "boom, with a comma\nand a newline";
    for (bool timing : {true, false}) {
        std::stringstream ss;
        write_csv(ss, rs, timing);
        const auto back = read_csv(ss);
        REQUIRE(back.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(back[i].instance == rs[i].instance);
            CHECK(back[i].nnz == rs[i].nnz);
            CHECK(back[i].rel_residual == rs[i].rel_residual);
            CHECK(back[i].band == rs[i].band);
            CHECK(back[i].status == rs[i].status);
            CHECK(back[i].t_total() == doctest::Approx(timing ? rs[i].t_total() : 0.0));
        }
        CHECK(back[2].error.find('\n') == std::string::npos);
    }
}

TEST_CASE("CSV reader rejects bad input")
{
    std::istringstream no_tag("instance,family\n");
    CHECK_THROWS_AS(read_csv(no_tag), Error);

    std::stringstream ss;
    write_csv(ss, {record("grid", 1000, 0.01, 1e-9)});
    std::string text = ss.str();
    const auto pos = text.rfind(",ok,");
    text.replace(pos, 4, ",star,");
    std::istringstream tampered(text);
    CHECK_THROWS_AS(read_csv(tampered), Error);

    std::istringstream short_row("# lapchol-runs v1\ninstance,family,n,nnz,variant,seed,tol,iterations,rel_residual,status,band\na,b,1\n");
    CHECK_THROWS_AS(read_csv(short_row), Error);
}

TEST_CASE("manifest parsing")
{
    const Manifest m = parse_manifest(R"({"tol": 1e-6, "variants": ["ac", "ac-s2m2"],
        "instances": [{"id": "p", "family": "path", "params": {"n": 2}},
                      {"id": "c", "family": "chimera", "params": {"n": 50}, "seeds": [3, 4]}]})");
    CHECK(m.tolerance == 1e-6);
    CHECK(m.variants.size() == 2);
    REQUIRE(m.instances.size() == 2);
    CHECK(m.instances[1].seeds == std::vector<std::uint64_t>{3, 4});
    CHECK(build_instance(m.instances[0], 1).size() == 2);
    CHECK(build_instance(m.instances[1], 3).size() == 50);

    CHECK_THROWS_AS(parse_manifest("{"), Error);
    CHECK_THROWS_AS(parse_manifest(R"({"instances": [{"id": "x"}]})"), Error);
    CHECK_THROWS_AS(parse_manifest(R"({"variants": ["bogus"], "instances": []})"), Error);
    CHECK_THROWS_AS(build_instance({"x", "nope"}, 1), Error);
}

TEST_CASE("suite on a P2 instance and a broken instance")
{
    const Manifest m = parse_manifest(R"({"instances": [
        {"id": "p2", "family": "path", "params": {"n": 2}},
        {"id": "missing", "family": "file", "params": {"path": "/nonexistent/file.mtx"}}]})");
    const auto rs = run_suite(m, {true, false});
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].band == Band::Ok);
    CHECK(rs[0].iterations <= 2);
    CHECK(rs[1].band == Band::Inf);
    CHECK(rs[1].status == SolveStatus::Failed);
    CHECK_FALSE(rs[1].error.empty());
}

TEST_CASE("quantiles and summaries")
{
    CHECK(quantile({4, 1, 3, 2}, 0.5) == 2.5);
    CHECK(quantile({4, 1, 3, 2}, 0.75) == 3.25);
    CHECK(quantile({5}, 0.75) == 5);
    CHECK(quantile({1, 2, 3}, 1.0) == 3);
    CHECK_THROWS_AS(quantile({}, 0.5), Error);

    std::vector<RunRecord> rs{record("grid", 100, 1e-4, 1e-9), record("grid", 100, 3e-4, 1e-9),
                              record("grid", 100, 2e-4, 1e-9), record("star", 200, 4e-4, 1e-9)};
    const auto rows = summarize(rs);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].family == "grid");
    CHECK(rows[0].count == 3);
    CHECK(rows[0].median == doctest::Approx(2e-6));
    CHECK(rows[0].q75 == doctest::Approx(2.5e-6));
    CHECK(rows[0].max == doctest::Approx(3e-6));
    CHECK(rows[1].median == doctest::Approx(2e-6));
    const std::string table = format_summary(rows);
    CHECK(table.find("not comparable") != std::string::npos);
}

TEST_CASE("plot arithmetic")
{
    CHECK(reference_time(1e6) == doctest::Approx(2.16).epsilon(1e-14));
    CHECK(normalize(PlotMode::Time, 1e6, 0.05) == 0.05);
    CHECK(normalize(PlotMode::TimePerNnz, 1e6, 0.05) == doctest::Approx(5e-8).epsilon(1e-14));
    CHECK(normalize(PlotMode::TimePerNnzLog3, 1e6, 0.05) == doctest::Approx(0.05 / 216e6).epsilon(1e-14));
    CHECK(normalize(PlotMode::TimePerNnzLog3, 1e6, reference_time(1e6)) == doctest::Approx(1e-8).epsilon(1e-14));
    CHECK_THROWS_AS(normalize(PlotMode::TimePerNnzLog3, 1.0, 1.0), Error);
    for (PlotMode m : {PlotMode::Time, PlotMode::TimePerNnz, PlotMode::TimePerNnzLog3}) {
        CHECK(parse_plot_mode(to_string(m)) == m);
    }
}

TEST_CASE("plot data, JSON and SVG")
{
    std::vector<RunRecord> rs{record("grid", 1000000, 0.05, 1e-9), record("grid", 10000, 0.001, 1e-9),
                              record("star", 50000, 0.01, 1e-3)};
    const PlotData d = plot_scaling(rs, PlotMode::TimePerNnz, 16);
    CHECK(d.points.size() == 3);
    CHECK(d.points[0].y == doctest::Approx(5e-8));
    CHECK_FALSE(d.points[0].failed);
    CHECK(d.points[2].failed);
    REQUIRE(d.curve.size() == 16);
    CHECK(d.curve.front().nnz == 10000);
    CHECK(d.curve.back().nnz == 1000000);

    const PlotData back = plot_from_json(to_json(d));
    CHECK(back.points.size() == 3);
    CHECK(back.curve.size() == 16);
    CHECK(back.curve[5].y == d.curve[5].y);
    const std::string svg = render_svg(back);
    CHECK(svg == render_svg(d));
    CHECK(svg.find("class=\"failed\"") != std::string::npos);
    CHECK(svg.find("class=\"reference\"") != std::string::npos);

    CHECK_THROWS_AS(plot_scaling({}, PlotMode::Time), Error);
    CHECK_THROWS_AS(render_svg(PlotData{}), Error);
}
