// Depth contours: boundaries of the trimmed regions {x : depth(x) >= alpha},
// extracted by ray bisection from the sample mean (d = 2 only).
#pragma once

#include <array>
#include <span>
#include <vector>

#include "lqdepth/depth.hpp"

namespace lqdepth::contour {

using Point2 = std::array<double, 2>;

/// Closed polyline tracing one depth contour. Vertices sit on equally spaced
/// rays from the sample mean, ordered by strictly increasing ray angle; the
/// polyline is implicitly closed. The alpha = 1 contour degenerates to the
/// single vertex at the mean.
struct ContourPolyline {
    double level = 0.0;
    DepthOrder order = DepthOrder::finite(1.0);
    std::vector<Point2> vertices;
};

struct ContourOptions {
    double depth_tol = 1e-4;      // |depth(vertex) - alpha| target
    // Bisection stops at radius_tol * (1 + r). The default is tight enough
    // that vertex jitter stays far below the convexity tolerance of
    // check_nested_convex even on exactly polygonal (q = 1) contours, whose
    // collinear vertices leave no curvature margin.
    double radius_tol = 1e-12;
    std::size_t max_doublings = 60;
    double initial_radius = 0.0;  // <= 0 means: derived from the data spread
    DepthOptions depth;
};

/// Point mean + r * u with depth r chosen so depth is alpha (within
/// depth_tol). Depth decreases monotonically along rays from the mean, so the
/// radius is found by doubling until depth < alpha and then bisecting; the
/// returned radius is the outermost one still achieving depth >= alpha.
Point2 ray_boundary_point(const DataCloud& cloud, DepthOrder order, double alpha,
                          Point2 direction, const ContourOptions& options = {});

/// Applies ray_boundary_point on `rays` equally spaced directions.
ContourPolyline contour_polyline(const DataCloud& cloud, DepthOrder order, double alpha,
                                 std::size_t rays, const ContourOptions& options = {});

/// True iff every polyline is convex and each higher-level polyline lies
/// inside the lower-level one. Requires at least two polylines sharing the
/// same order with strictly increasing levels.
bool check_nested_convex(std::span<const ContourPolyline> polylines);

/// Vertices of the convex hull of a 2-d point set, counter-clockwise.
std::vector<Point2> convex_hull_2d(const linalg::Matrix& points);

}  // namespace lqdepth::contour
