// Command-line surface: depth tables, contour figures, scenario generation
// and hull membership, with CSV/SVG output.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lqdepth/contour.hpp"
#include "lqdepth/depth.hpp"

namespace lqdepth::cli {

/// How a contour figure is drawn.
struct RenderSpec {
    std::vector<double> levels;  // strictly increasing, each in (0, 1]
    DepthOrder order = DepthOrder::finite(1.0);
    std::size_t rays = 72;
    int canvas_px = 720;
    bool show_hull = true;
    bool show_mean = true;
    bool log_transform = false;
};

/// Static SVG: hollow circles for observations, a filled circle for the mean,
/// a dashed hull outline, and one path per contour level.
std::string render_svg(const DataCloud& cloud,
                       const std::vector<contour::ContourPolyline>& polylines,
                       const RenderSpec& spec);

/// Ten equally spaced levels from `from` to 1.0 inclusive.
std::vector<double> default_levels(double from = 0.25);

/// Runs one command (depth | contour | scenario | hull). Returns the process
/// exit code: 0 on success, 2 on argument/parse/validation errors, 3 on
/// solver failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lqdepth::cli
