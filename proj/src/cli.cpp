#include "lqdepth/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lqdepth/data.hpp"

namespace lqdepth::cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

DataCloud load_cloud_file(const std::string& path, bool log_transform) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open data file '" + path + "'");
    return data::load_csv(in, log_transform);
}

linalg::Matrix load_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open points file '" + path + "'");
    return data::load_points_csv(in);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::invalid_argument("failed writing '" + path + "'");
}

std::vector<double> parse_levels(const std::string& csv) {
    std::vector<double> levels;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            levels.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse level '" + tok + "'");
        }
    }
    return levels;
}

void validate_levels(const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("need at least one contour level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0) || levels[i] > 1.0)
            throw std::invalid_argument("contour levels must lie in (0, 1]");
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw std::invalid_argument("contour levels must be strictly increasing");
    }
}

struct DataSource {
    std::string data_path;
    std::string scenario;
    std::size_t n = 1000;
    std::uint64_t seed = 42;
    bool log_transform = false;

    DataCloud load() const {
        if (!data_path.empty() && !scenario.empty())
            throw std::invalid_argument("--data and --scenario are mutually exclusive");
        if (!data_path.empty()) return load_cloud_file(data_path, log_transform);
        if (!scenario.empty()) {
            if (log_transform)
                throw std::invalid_argument("--log only applies to --data input");
            return data::generate({data::parse_scenario(scenario), n, seed});
        }
        throw std::invalid_argument("one of --data or --scenario is required");
    }
};

void emit_point_row(std::ostream& out, std::span<const double> x) {
    for (double v : x) out << fmt(v) << ',';
}

int cmd_depth(const std::string& data_path, bool log_transform, const std::string& q_token,
              const std::string& mode, const std::string& points_path, std::ostream& out) {
    const DataCloud cloud = load_cloud_file(data_path, log_transform);
    const linalg::Matrix queries = load_points_file(points_path);
    if (queries.cols() != cloud.dim())
        throw std::invalid_argument("query points have dimension " +
                                    std::to_string(queries.cols()) + ", data has " +
                                    std::to_string(cloud.dim()));

    for (std::size_t j = 0; j < cloud.dim(); ++j) out << 'x' << j << ',';
    out << "depth,s_q\n";
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        const std::span<const double> x(queries.row_ptr(i), queries.cols());
        DepthResult r;
        if (mode == "mahalanobis")
            r = mahalanobis_depth(cloud, x);
        else if (mode == "zonoid")
            r = zonoid_depth(cloud, x);
        else
            r = lq_depth(cloud, x, DepthOrder::parse(q_token));
        emit_point_row(out, x);
        out << fmt(r.depth) << ',' << (r.discrepancy ? fmt(*r.discrepancy) : "") << '\n';
    }
    return 0;
}

int cmd_hull(const std::string& data_path, bool log_transform,
             const std::string& points_path, std::ostream& out) {
    const DataCloud cloud = load_cloud_file(data_path, log_transform);
    const linalg::Matrix queries = load_points_file(points_path);
    if (queries.cols() != cloud.dim())
        throw std::invalid_argument("query points have dimension " +
                                    std::to_string(queries.cols()) + ", data has " +
                                    std::to_string(cloud.dim()));
    for (std::size_t j = 0; j < cloud.dim(); ++j) out << 'x' << j << ',';
    out << "in_hull\n";
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        const std::span<const double> x(queries.row_ptr(i), queries.cols());
        emit_point_row(out, x);
        out << (in_convex_hull(cloud, x) ? '1' : '0') << '\n';
    }
    return 0;
}

int cmd_scenario(const std::string& scenario, std::size_t n, std::uint64_t seed,
                 const std::string& out_path) {
    const DataCloud cloud = data::generate({data::parse_scenario(scenario), n, seed});
    std::string body;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = 0; j < cloud.dim(); ++j) {
            if (j > 0) body += ',';
            body += fmt(cloud.points()(i, j));
        }
        body += '\n';
    }
    write_file(out_path, body);
    return 0;
}

int cmd_contour(const DataSource& source, const std::string& q_token,
                std::vector<double> levels, std::size_t rays, int canvas, bool show_hull,
                bool show_mean, const std::string& out_path,
                const std::string& vertices_path) {
    const DataCloud cloud = source.load();
    validate_levels(levels);
    RenderSpec spec;
    spec.levels = levels;
    spec.order = DepthOrder::parse(q_token);
    spec.rays = rays;
    spec.canvas_px = canvas;
    spec.show_hull = show_hull;
    spec.show_mean = show_mean;
    spec.log_transform = source.log_transform;

    std::vector<contour::ContourPolyline> polylines;
    polylines.reserve(levels.size());
    for (double level : levels)
        polylines.push_back(contour::contour_polyline(cloud, spec.order, level, rays));

    if (!out_path.empty()) write_file(out_path, render_svg(cloud, polylines, spec));
    if (!vertices_path.empty()) {
        std::string body = "level,x,y\n";
        for (const auto& poly : polylines)
            for (const auto& v : poly.vertices)
                body += fmt(poly.level) + ',' + fmt(v[0]) + ',' + fmt(v[1]) + '\n';
        write_file(vertices_path, body);
    }
    return 0;
}

}  // namespace

std::vector<double> default_levels(double from) {
    std::vector<double> levels(10);
    for (std::size_t i = 0; i < 10; ++i)
        levels[i] = from + (1.0 - from) * static_cast<double>(i) / 9.0;
    levels.back() = 1.0;
    return levels;
}

std::string render_svg(const DataCloud& cloud,
                       const std::vector<contour::ContourPolyline>& polylines,
                       const RenderSpec& spec) {
    if (cloud.dim() != 2) throw std::invalid_argument("svg rendering needs 2-d data");
    validate_levels(spec.levels);
    if (polylines.size() != spec.levels.size())
        throw std::invalid_argument("one polyline per level is required");

    double minx = cloud.points()(0, 0), maxx = minx;
    double miny = cloud.points()(0, 1), maxy = miny;
    const auto grow = [&](double x, double y) {
        minx = std::min(minx, x), maxx = std::max(maxx, x);
        miny = std::min(miny, y), maxy = std::max(maxy, y);
    };
    for (std::size_t i = 0; i < cloud.size(); ++i)
        grow(cloud.points()(i, 0), cloud.points()(i, 1));
    for (const auto& poly : polylines)
        for (const auto& v : poly.vertices) grow(v[0], v[1]);

    const double span = std::max({maxx - minx, maxy - miny, 1e-9});
    const double canvas = static_cast<double>(spec.canvas_px);
    const double pad = 0.06 * canvas;
    const double scale = (canvas - 2.0 * pad) / span;
    const auto px = [&](double x) { return pad + (x - minx) * scale; };
    const auto py = [&](double y) { return canvas - pad - (y - miny) * scale; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(spec.canvas_px) + "\" height=\"" + std::to_string(spec.canvas_px) +
           "\" viewBox=\"0 0 " + std::to_string(spec.canvas_px) + " " +
           std::to_string(spec.canvas_px) + "\">\n";

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        svg += "  <circle cx=\"" + fmt_px(px(cloud.points()(i, 0))) + "\" cy=\"" +
               fmt_px(py(cloud.points()(i, 1))) +
               "\" r=\"2.5\" fill=\"none\" stroke=\"#444444\" stroke-width=\"0.8\"/>\n";
    }

    if (spec.show_hull) {
        const std::vector<contour::Point2> hull = contour::convex_hull_2d(cloud.points());
        svg += "  <polygon points=\"";
        for (std::size_t i = 0; i < hull.size(); ++i) {
            if (i > 0) svg += ' ';
            svg += fmt_px(px(hull[i][0])) + ',' + fmt_px(py(hull[i][1]));
        }
        svg += "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" "
               "stroke-dasharray=\"6 4\"/>\n";
    }

    for (const auto& poly : polylines) {
        svg += "  <path d=\"";
        for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
            svg += i == 0 ? "M " : "L ";
            svg += fmt_px(px(poly.vertices[i][0])) + ' ' + fmt_px(py(poly.vertices[i][1]));
            svg += ' ';
        }
        svg += "Z\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.4\"/>\n";
    }

    if (spec.show_mean) {
        svg += "  <circle cx=\"" + fmt_px(px(cloud.mean()[0])) + "\" cy=\"" +
               fmt_px(py(cloud.mean()[1])) + "\" r=\"5\" fill=\"#000000\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"L_q-norm zonoid depth toolkit"};
    app.require_subcommand(1);

    // depth
    auto* depth_cmd = app.add_subcommand("depth", "depth of query points (CSV on stdout)");
    std::string d_data, d_q = "2", d_mode = "lq", d_points;
    bool d_log = false;
    depth_cmd->add_option("--data", d_data, "data CSV")->required();
    depth_cmd->add_flag("--log", d_log, "apply natural log to the data");
    depth_cmd->add_option("--q", d_q, "depth order (>= 1 or 'inf')");
    depth_cmd->add_option("--q-mode", d_mode, "lq | mahalanobis | zonoid")
        ->check(CLI::IsMember({"lq", "mahalanobis", "zonoid"}));
    depth_cmd->add_option("--points", d_points, "query points CSV")->required();

    // contour
    auto* contour_cmd = app.add_subcommand("contour", "trace depth contours to SVG");
    DataSource c_source;
    std::string c_q = "1", c_levels_csv, c_out, c_vertices;
    double c_levels_from = 0.25;
    std::size_t c_rays = 72;
    int c_canvas = 720;
    bool c_no_hull = false, c_no_mean = false;
    contour_cmd->add_option("--data", c_source.data_path, "data CSV");
    contour_cmd->add_option("--scenario", c_source.scenario, "s1 | s2 | s3");
    contour_cmd->add_option("--n", c_source.n, "scenario sample size");
    contour_cmd->add_option("--seed", c_source.seed, "scenario seed");
    contour_cmd->add_flag("--log", c_source.log_transform, "apply natural log to the data");
    contour_cmd->add_option("--q", c_q, "depth order (>= 1 or 'inf')");
    contour_cmd->add_option("--levels", c_levels_csv, "comma-separated levels in (0,1]");
    contour_cmd->add_option("--levels-from", c_levels_from,
                            "first of 10 equally spaced levels ending at 1.0");
    contour_cmd->add_option("--rays", c_rays, "rays per contour (>= 8)");
    contour_cmd->add_option("--canvas", c_canvas, "canvas size in pixels");
    contour_cmd->add_flag("--no-hull", c_no_hull, "omit the convex hull outline");
    contour_cmd->add_flag("--no-mean", c_no_mean, "omit the mean marker");
    contour_cmd->add_option("--out", c_out, "output SVG path")->required();
    contour_cmd->add_option("--vertices-out", c_vertices, "also write vertices CSV");

    // scenario
    auto* scen_cmd = app.add_subcommand("scenario", "generate a synthetic cloud as CSV");
    std::string s_scenario, s_out;
    std::size_t s_n = 1000;
    std::uint64_t s_seed = 42;
    scen_cmd->add_option("--scenario", s_scenario, "s1 | s2 | s3")->required();
    scen_cmd->add_option("--n", s_n, "sample size");
    scen_cmd->add_option("--seed", s_seed, "seed");
    scen_cmd->add_option("--out", s_out, "output CSV path")->required();

    // hull
    auto* hull_cmd = app.add_subcommand("hull", "convex-hull membership of query points");
    std::string h_data, h_points;
    bool h_log = false;
    hull_cmd->add_option("--data", h_data, "data CSV")->required();
    hull_cmd->add_flag("--log", h_log, "apply natural log to the data");
    hull_cmd->add_option("--points", h_points, "query points CSV")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (depth_cmd->parsed())
            return cmd_depth(d_data, d_log, d_q, d_mode, d_points, out);
        if (hull_cmd->parsed()) return cmd_hull(h_data, h_log, h_points, out);
        if (scen_cmd->parsed()) return cmd_scenario(s_scenario, s_n, s_seed, s_out);
        if (contour_cmd->parsed()) {
            std::vector<double> levels = c_levels_csv.empty() ? default_levels(c_levels_from)
                                                              : parse_levels(c_levels_csv);
            return cmd_contour(c_source, c_q, std::move(levels), c_rays, c_canvas,
                               !c_no_hull, !c_no_mean, c_out, c_vertices);
        }
    } catch (const convex::ConvergenceFailure& e) {
        err << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace lqdepth::cli
