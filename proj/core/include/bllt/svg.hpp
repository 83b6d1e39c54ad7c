#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bllt {

/// Minimal self-contained line-plot writer: polylines plus axes, no external
/// dependency, deterministic output bytes.
struct SvgSeries {
    std::vector<double> xs;
    std::vector<double> ys;
    std::string color = "#000000";
    double stroke_width = 1.0;
};

void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<SvgSeries>& series, const std::string& title,
                    int width_px = 900, int height_px = 560);

} // namespace bllt
