#include "bllt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "bllt/errors.hpp"

namespace bllt {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<SvgSeries>& series, const std::string& title,
                    int width_px, int height_px) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
    for (const auto& s : series) {
        for (double x : s.xs) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
        }
        for (double y : s.ys) {
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (!(x_min < x_max)) { x_min -= 0.5; x_max += 0.5; }
    if (!(y_min < y_max)) { y_min -= 0.5; y_max += 0.5; }
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double ml = 70, mr = 20, mt = 40, mb = 50; // margins
    const double pw = width_px - ml - mr, ph = height_px - mt - mb;
    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px
        << "\" height=\"" << height_px << "\" viewBox=\"0 0 " << width_px << " "
        << height_px << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width_px / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml)
        << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // ticks: five per axis
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        out << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
            << fmt(px(fx)) << "\" y2=\"" << fmt(mt + ph + 5)
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(mt + ph + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt_tick(fx) << "</text>\n";
        out << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(py(fy)) << "\" x2=\""
            << fmt(ml) << "\" y2=\"" << fmt(py(fy))
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt_tick(fy) << "</text>\n";
    }

    for (const auto& s : series) {
        if (s.xs.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"" << fmt(s.stroke_width) << "\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (i) out << " ";
            out << fmt(px(s.xs[i])) << "," << fmt(py(s.ys[i]));
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

} // namespace bllt
