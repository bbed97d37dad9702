#include "lapchol/plot.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lapchol {

using nlohmann::json;

std::string to_string(PlotMode m)
{
    switch (m) {
    case PlotMode::Time: return "time";
    case PlotMode::TimePerNnz: return "time_per_nnz";
    case PlotMode::TimePerNnzLog3: break;
    }
    return "time_per_nnz_log3";
}

PlotMode parse_plot_mode(const std::string& s)
{
    for (PlotMode m : {PlotMode::Time, PlotMode::TimePerNnz, PlotMode::TimePerNnzLog3}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    throw Error("unknown plot mode '" + s + "'");
}

double reference_time(double nnz)
{
    const double l = std::log10(nnz);
    return reference_constant * nnz * l * l * l;
}

double normalize(PlotMode mode, double nnz, double t_total)
{
    switch (mode) {
    case PlotMode::Time: return t_total;
    case PlotMode::TimePerNnz: return t_total / nnz;
    case PlotMode::TimePerNnzLog3: break;
    }
    if (nnz <= 1.0) {
        throw Error("nnz·log10(nnz)^3 normalization needs nnz > 1");
    }
    const double l = std::log10(nnz);
    return t_total / (nnz * l * l * l);
}

PlotData plot_scaling(const std::vector<RunRecord>& records, PlotMode mode, std::size_t curve_samples)
{
    PlotData d;
    d.mode = mode;
    for (const RunRecord& r : records) {
        if (r.nnz < 2) {
            continue;  // the matrix never loaded
        }
        PlotPoint p;
        p.label = r.instance + "/" + r.variant;
        p.nnz = static_cast<double>(r.nnz);
        p.t_total = r.t_total();
        p.y = normalize(mode, p.nnz, p.t_total);
        p.failed = r.band != Band::Ok;
        d.points.push_back(std::move(p));
    }
    if (d.points.empty()) {
        throw Error("nothing to plot");
    }
    auto [lo_it, hi_it] = std::minmax_element(d.points.begin(), d.points.end(),
                                              [](const PlotPoint& a, const PlotPoint& b) { return a.nnz < b.nnz; });
    double lo = lo_it->nnz, hi = hi_it->nnz;
    if (lo == hi) {
        lo = std::max(2.0, lo / 10.0);
        hi *= 10.0;
    }
    curve_samples = std::max<std::size_t>(curve_samples, 2);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < curve_samples; ++i) {
        const double x = i == 0                   ? lo
                         : i + 1 == curve_samples ? hi
                                                  : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(curve_samples - 1));
        d.curve.push_back({x, normalize(mode, x, reference_time(x))});
    }
    return d;
}

std::string to_json(const PlotData& data)
{
    json j;
    j["mode"] = to_string(data.mode);
    j["reference"] = {{"c", reference_constant}, {"formula", "c*nnz*log10(nnz)^3"}};
    j["points"] = json::array();
    for (const PlotPoint& p : data.points) {
        j["points"].push_back({{"label", p.label}, {"nnz", p.nnz}, {"t_total", p.t_total}, {"y", p.y},
                               {"failed", p.failed}});
    }
    j["curve"] = json::array();
    for (const CurveSample& c : data.curve) {
        j["curve"].push_back({{"nnz", c.nnz}, {"y", c.y}});
    }
    return j.dump(2);
}

PlotData plot_from_json(const std::string& text)
{
    PlotData d;
    try {
        const json j = json::parse(text);
        d.mode = parse_plot_mode(j.at("mode").get<std::string>());
        for (const json& p : j.at("points")) {
            d.points.push_back({p.at("label").get<std::string>(), p.at("nnz").get<double>(),
                                p.at("t_total").get<double>(), p.at("y").get<double>(), p.at("failed").get<bool>()});
        }
        for (const json& c : j.at("curve")) {
            d.curve.push_back({c.at("nnz").get<double>(), c.at("y").get<double>()});
        }
    } catch (const json::exception& e) {
        throw Error(std::string("bad plot data: ") + e.what());
    }
    if (d.points.empty()) {
        throw Error("nothing to plot");
    }
    return d;
}

namespace {

struct LogAxis {
    double lo, hi;  // decades
    double pixel_lo, pixel_hi;

    LogAxis(double vmin, double vmax, double p0, double p1)
        : lo(std::floor(std::log10(vmin))), hi(std::ceil(std::log10(vmax))), pixel_lo(p0), pixel_hi(p1)
    {
        if (hi <= lo) {
            hi = lo + 1;
        }
    }
    double operator()(double v) const { return pixel_lo + (std::log10(v) - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string y_label(PlotMode m)
{
    switch (m) {
    case PlotMode::Time: return "total time (s)";
    case PlotMode::TimePerNnz: return "total time / nnz (s)";
    case PlotMode::TimePerNnzLog3: break;
    }
    return "total time / (nnz log10(nnz)^3) (s)";
}

}  // namespace

std::string render_svg(const PlotData& data)
{
    if (data.points.empty()) {
        throw Error("nothing to plot");
    }
    constexpr double W = 720, H = 480, L = 90, R = 20, T = 20, B = 60;
    double xmin = INFINITY, xmax = 0, ymin = INFINITY, ymax = 0;
    auto grow = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        if (y > 0) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    };
    for (const PlotPoint& p : data.points) {
        grow(p.nnz, p.y);
    }
    for (const CurveSample& c : data.curve) {
        grow(c.nnz, c.y);
    }
    if (ymax == 0) {
        ymin = ymax = 1;
    }
    const LogAxis xa(xmin, xmax, L, W - R);
    const LogAxis ya(ymin, ymax, H - B, T);

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<g class=\"axes\" stroke=\"black\" font-size=\"11\" font-family=\"sans-serif\">\n";
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n";
    for (double e = xa.lo; e <= xa.hi; e += 1) {
        const double x = xa(std::pow(10.0, e));
        s << "<line x1=\"" << fmt(x) << "\" y1=\"" << H - B << "\" x2=\"" << fmt(x) << "\" y2=\"" << H - B + 5
          << "\"/><text stroke=\"none\" x=\"" << fmt(x) << "\" y=\"" << H - B + 18
          << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    for (double e = ya.lo; e <= ya.hi; e += 1) {
        const double y = ya(std::pow(10.0, e));
        s << "<line x1=\"" << L - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << L << "\" y2=\"" << fmt(y)
          << "\"/><text stroke=\"none\" x=\"" << L - 8 << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    s << "<text stroke=\"none\" x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\">nnz</text>\n";
    s << "<text stroke=\"none\" transform=\"translate(18," << (T + H - B) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << y_label(data.mode) << "</text>\n</g>\n";

    s << "<polyline class=\"reference\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\" points=\"";
    for (const CurveSample& c : data.curve) {
        if (c.y > 0) {
            s << fmt(xa(c.nnz)) << ',' << fmt(ya(c.y)) << ' ';
        }
    }
    s << "\"/>\n";
    for (const PlotPoint& p : data.points) {
        if (p.y <= 0) {
            continue;
        }
        const double x = xa(p.nnz), y = ya(p.y);
        if (p.failed) {
            s << "<rect class=\"failed\" x=\"" << fmt(x - 4) << "\" y=\"" << fmt(y - 4)
              << "\" width=\"8\" height=\"8\" fill=\"red\"/>\n";
        } else {
            s << "<circle class=\"solved\" cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
              << "\" r=\"3.5\" fill=\"steelblue\"/>\n";
        }
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace lapchol
