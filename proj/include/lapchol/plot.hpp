#pragma once

#include "lapchol/harness.hpp"

#include <string>
#include <vector>

namespace lapchol {

enum class PlotMode { Time, TimePerNnz, TimePerNnzLog3 };

std::string to_string(PlotMode m);
PlotMode parse_plot_mode(const std::string& s);

inline constexpr double reference_constant = 1e-8;  // seconds

/// c·nnz·log10(nnz)^3 in seconds.
double reference_time(double nnz);

/// Maps a total time onto the y axis of the given mode.
double normalize(PlotMode mode, double nnz, double t_total);

struct PlotPoint {
    std::string label;
    double nnz = 0.0;
    double t_total = 0.0;
    double y = 0.0;
    bool failed = false;
};

struct CurveSample {
    double nnz = 0.0;
    double y = 0.0;
};

struct PlotData {
    PlotMode mode = PlotMode::Time;
    std::vector<PlotPoint> points;
    std::vector<CurveSample> curve;  // log-spaced over the nnz range of the points
};

/// Throws on an empty record set.
PlotData plot_scaling(const std::vector<RunRecord>& records, PlotMode mode, std::size_t curve_samples = 64);

std::string to_json(const PlotData& data);
PlotData plot_from_json(const std::string& text);

/// Static SVG with log-scaled axes. A function of `data` alone.
std::string render_svg(const PlotData& data);

}  // namespace lapchol
