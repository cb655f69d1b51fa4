#pragma once

// Self-contained SVG plot of the Inner, R1 and R2 boundaries, optionally
// overlaid with sweep verdict markers. Fixed 800x600 canvas; the plot area
// is inset by 70 px (left), 30 px (right), 30 px (top), 60 px (bottom).

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "regions.hpp"
#include "sweep.hpp"

namespace ehnet {

struct SvgLayout {
    static constexpr double width = 800, height = 600;
    static constexpr double left = 70, right = 30, top = 30, bottom = 60;
};

inline void write_region_svg(std::ostream& os, const SystemParams& p, std::size_t resolution,
                             const std::vector<SweepRow>* sweep = nullptr) {
    using L = SvgLayout;
    const RegionId regions[] = {RegionId::Inner, RegionId::R1, RegionId::R2};
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};

    std::vector<std::vector<RatePoint>> curves;
    double xmax = 0, ymax = 0;
    for (auto r : regions) {
        curves.push_back(trace_boundary(p, r, resolution));
        for (const auto& pt : curves.back()) {
            xmax = std::max(xmax, pt.lambda_s);
            ymax = std::max(ymax, pt.lambda_r);
        }
    }
    if (sweep) {
        for (const auto& row : *sweep) {
            xmax = std::max(xmax, row.lambda_s);
            ymax = std::max(ymax, row.lambda_r);
        }
    }
    if (!(xmax > 0)) xmax = 1;
    if (!(ymax > 0)) ymax = 1;
    xmax *= 1.05;
    ymax *= 1.05;

    const double pw = L::width - L::left - L::right;
    const double ph = L::height - L::top - L::bottom;
    auto sx = [&](double v) { return format_fixed6(L::left + v / xmax * pw); };
    auto sy = [&](double v) { return format_fixed6(L::top + ph - v / ymax * ph); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
          "viewBox=\"0 0 800 600\">\n";
    os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<line class=\"axis\" x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(xmax)
       << "\" y2=\"" << sy(0) << "\" stroke=\"black\"/>\n";
    os << "<line class=\"axis\" x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(0)
       << "\" y2=\"" << sy(ymax) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(xmax / 2) << "\" y=\"" << (L::height - 20)
       << "\" text-anchor=\"middle\">&#955;_S = " << format_fixed6(xmax) << " at right edge</text>\n";
    os << "<text x=\"20\" y=\"" << sy(ymax / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << sy(ymax / 2) << ")\">&#955;_R = " << format_fixed6(ymax) << " at top edge</text>\n";

    for (std::size_t k = 0; k < curves.size(); ++k) {
        os << "<polyline id=\"" << to_string(regions[k]) << "\" fill=\"none\" stroke=\""
           << colors[k] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < curves[k].size(); ++i) {
            if (i) os << ' ';
            os << sx(curves[k][i].lambda_s) << ',' << sy(curves[k][i].lambda_r);
        }
        os << "\"/>\n";
    }

    if (sweep) {
        for (const auto& row : *sweep) {
            const char* fill = row.verdict.tag == Verdict::Stable     ? "#2ca02c"
                               : row.verdict.tag == Verdict::Unstable ? "#d62728"
                                                                      : "#7f7f7f";
            os << "<circle class=\"" << to_string(row.verdict.tag) << "\" cx=\""
               << sx(row.lambda_s) << "\" cy=\"" << sy(row.lambda_r) << "\" r=\"4\" fill=\""
               << fill << "\"/>\n";
        }
    }
    os << "</svg>\n";
}

inline void emit_region_svg(const SystemParams& p, std::size_t resolution,
                            const std::vector<SweepRow>* sweep, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_region_svg(out, p, resolution, sweep);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ehnet
