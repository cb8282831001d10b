#include "lqdepth/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lqdepth::contour {

namespace {

double data_radius(const DataCloud& cloud) {
    double trace = 0.0;
    for (std::size_t j = 0; j < cloud.dim(); ++j) trace += cloud.covariance()(j, j);
    const double r = std::sqrt(trace / static_cast<double>(cloud.dim()));
    return r > 0.0 ? r : 1.0;
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Signed-area based orientation; returns vertices in CCW order.
std::vector<Point2> oriented_ccw(std::span<const Point2> poly) {
    double area2 = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        area2 += a[0] * b[1] - b[0] * a[1];
    }
    std::vector<Point2> out(poly.begin(), poly.end());
    if (area2 < 0.0) std::reverse(out.begin(), out.end());
    return out;
}

bool polygon_is_convex(std::span<const Point2> poly) {
    if (poly.size() < 3) return true;
    const std::vector<Point2> p = oriented_ccw(poly);
    const std::size_t m = p.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = p[i];
        const Point2& b = p[(i + 1) % m];
        const Point2& c = p[(i + 2) % m];
        const double e1 = std::hypot(b[0] - a[0], b[1] - a[1]);
        const double e2 = std::hypot(c[0] - b[0], c[1] - b[1]);
        if (cross(a, b, c) < -1e-9 * e1 * e2) return false;
    }
    return true;
}

double polygon_scale(std::span<const Point2> poly) {
    double s = 0.0;
    for (const Point2& v : poly) s = std::max({s, std::fabs(v[0]), std::fabs(v[1])});
    return 1.0 + s;
}

bool point_in_convex_polygon(std::span<const Point2> poly_ccw, const Point2& pt,
                             double slack) {
    const std::size_t m = poly_ccw.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = poly_ccw[i];
        const Point2& b = poly_ccw[(i + 1) % m];
        const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        if (len == 0.0) continue;
        if (cross(a, b, pt) / len < -slack) return false;
    }
    return true;
}

// Depth evaluations inside one ray search. Orders served by the convex
// engine reuse the previous optimum as a warm start; the successive query
// points along a ray are close, so this cuts most of the descent iterations
// without changing the minimizer (the objective is convex).
class RayDepthEvaluator {
public:
    RayDepthEvaluator(const DataCloud& cloud, DepthOrder order, const DepthOptions& opts)
        : cloud_(cloud), order_(order), opts_(opts) {
        use_convex_ = !order.is_infinite() && order.q() >= 1.0 + 1e-6 &&
                      (order.q() != 2.0 || opts.force_convex_q2);
    }

    double operator()(const Vector& x) {
        if (!use_convex_) return lq_depth(cloud_, x, order_, opts_).depth;
        bool at_mean = true;
        for (std::size_t j = 0; j < x.size(); ++j) at_mean &= x[j] == cloud_.mean()[j];
        if (at_mean) return 1.0;

        Vector rhs = x;
        rhs.push_back(1.0);
        convex::NullspaceProgram prog(cloud_.constraint_factor(),
                                      cloud_.constraint_factor().min_norm_solve(rhs),
                                      order_.q());
        std::optional<std::span<const double>> start;
        if (!warm_.empty()) start = std::span<const double>(warm_);
        convex::MinimizeResult res = convex::minimize(prog, opts_.convex, start);
        warm_ = std::move(res.coordinates);
        return 1.0 / (1.0 + std::max(res.discrepancy, 0.0));
    }

private:
    const DataCloud& cloud_;
    DepthOrder order_;
    const DepthOptions& opts_;
    bool use_convex_ = false;
    Vector warm_;
};

}  // namespace

Point2 ray_boundary_point(const DataCloud& cloud, DepthOrder order, double alpha,
                          Point2 direction, const ContourOptions& options) {
    if (cloud.dim() != 2)
        throw std::invalid_argument("contours are only defined for 2-d clouds");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("contour level must lie in (0, 1]");
    const Point2 mean{cloud.mean()[0], cloud.mean()[1]};
    if (alpha == 1.0) return mean;  // depth 1 is attained only at the mean

    const double len = std::hypot(direction[0], direction[1]);
    if (!(len > 0.0)) throw std::invalid_argument("ray direction must be nonzero");
    const Point2 u{direction[0] / len, direction[1] / len};

    RayDepthEvaluator evaluator(cloud, order, options.depth);
    const auto depth_at = [&](double r) {
        return evaluator(Vector{mean[0] + r * u[0], mean[1] + r * u[1]});
    };

    double r_in = 0.0;  // depth >= alpha
    double r_out = options.initial_radius > 0.0 ? options.initial_radius : data_radius(cloud);
    std::size_t doublings = 0;
    while (depth_at(r_out) >= alpha) {
        r_in = r_out;
        r_out *= 2.0;
        if (++doublings > options.max_doublings)
            throw SolverFailure("ray search failed to exit the trimmed region");
    }

    while (r_out - r_in > options.radius_tol * (1.0 + r_in)) {
        const double mid = 0.5 * (r_in + r_out);
        if (depth_at(mid) >= alpha)
            r_in = mid;
        else
            r_out = mid;
    }
    return {mean[0] + r_in * u[0], mean[1] + r_in * u[1]};
}

ContourPolyline contour_polyline(const DataCloud& cloud, DepthOrder order, double alpha,
                                 std::size_t rays, const ContourOptions& options) {
    if (rays < 8) throw std::invalid_argument("contour needs at least 8 rays");
    if (cloud.dim() != 2)
        throw std::invalid_argument("contours are only defined for 2-d clouds");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("contour level must lie in (0, 1]");

    ContourPolyline poly{alpha, order, {}};
    if (alpha == 1.0) {
        poly.vertices.push_back({cloud.mean()[0], cloud.mean()[1]});
        return poly;
    }
    poly.vertices.reserve(rays);
    for (std::size_t j = 0; j < rays; ++j) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(rays);
        const Point2 u{std::cos(theta), std::sin(theta)};
        try {
            poly.vertices.push_back(ray_boundary_point(cloud, order, alpha, u, options));
        } catch (const std::exception& e) {
            throw SolverFailure("contour ray at angle " + std::to_string(theta) + ": " +
                                e.what());
        }
    }
    return poly;
}

bool check_nested_convex(std::span<const ContourPolyline> polylines) {
    if (polylines.size() < 2)
        throw std::invalid_argument("nestedness check needs at least two polylines");
    for (std::size_t i = 0; i < polylines.size(); ++i) {
        if (i > 0 && !(polylines[i].level > polylines[i - 1].level))
            throw std::invalid_argument("contour levels must be strictly increasing");
        const bool same_order =
            polylines[i].order.is_infinite() == polylines[0].order.is_infinite() &&
            (polylines[i].order.is_infinite() ||
             polylines[i].order.q() == polylines[0].order.q());
        if (!same_order)
            throw std::invalid_argument("polylines must share one depth order");
    }

    for (const ContourPolyline& poly : polylines)
        if (!polygon_is_convex(poly.vertices)) return false;

    // Outer polylines have lower levels; every vertex of an inner polyline
    // must lie inside each outer one.
    for (std::size_t outer = 0; outer < polylines.size(); ++outer) {
        const std::vector<Point2>& overt = polylines[outer].vertices;
        if (overt.size() < 3) {
            // A degenerate outer contour cannot contain a larger inner one.
            for (std::size_t inner = outer + 1; inner < polylines.size(); ++inner)
                if (polylines[inner].vertices.size() >= overt.size() &&
                    polylines[inner].vertices != overt)
                    return false;
            continue;
        }
        const std::vector<Point2> ccw = oriented_ccw(overt);
        const double slack = 1e-7 * polygon_scale(ccw);
        for (std::size_t inner = outer + 1; inner < polylines.size(); ++inner)
            for (const Point2& v : polylines[inner].vertices)
                if (!point_in_convex_polygon(ccw, v, slack)) return false;
    }
    return true;
}

std::vector<Point2> convex_hull_2d(const linalg::Matrix& points) {
    if (points.cols() != 2)
        throw std::invalid_argument("convex_hull_2d expects 2-d points");
    std::vector<Point2> pts(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) pts[i] = {points(i, 0), points(i, 1)};
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    // Andrew monotone chain.
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower_end && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace lqdepth::contour
