#include "lqdepth/depth.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lqdepth {

namespace {

constexpr double kQ1DispatchBand = 1e-6;  // 1 <= q < 1+band routes to the q=1 LP

void check_query(const DataCloud& cloud, std::span<const double> x) {
    if (x.size() != cloud.dim())
        throw std::invalid_argument("query point dimension does not match the cloud");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("query point must be finite");
}

bool is_mean(const DataCloud& cloud, std::span<const double> x) {
    const Vector& m = cloud.mean();
    for (std::size_t j = 0; j < m.size(); ++j)
        if (x[j] != m[j]) return false;
    return true;
}

Vector uniform_weights(std::size_t n) {
    return Vector(n, 1.0 / static_cast<double>(n));
}

DepthResult exact_center_result(const DataCloud& cloud) {
    return {1.0, 0.0, uniform_weights(cloud.size())};
}

DepthResult result_from_discrepancy(double s, Vector weights) {
    s = std::max(s, 0.0);
    return {1.0 / (1.0 + s), s, std::move(weights)};
}

// Weight vector recovered from the +/- decomposition w_i = np_i - 1.
Vector weights_from_signed(std::span<const double> plus, std::span<const double> minus,
                           std::size_t n) {
    Vector p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = (1.0 + plus[i] - minus[i]) / static_cast<double>(n);
    return p;
}

// Shared equality rows of the programs over P_x, in the centered form
//   sum_i w_i = 0,   sum_i w_i (X_i - x) = n (x - mean).
// `col` maps observation i to the column holding w_i's +part; the -part is
// assumed to sit at col(i) + stride with negated coefficients.
void fill_signed_rows(const DataCloud& cloud, std::span<const double> x,
                      linalg::Matrix& eq, Vector& rhs, std::size_t first_row,
                      std::size_t first_col, std::size_t stride) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    const Vector& mean = cloud.mean();
    for (std::size_t i = 0; i < n; ++i) {
        eq(first_row, first_col + i) = 1.0;
        eq(first_row, first_col + i + stride) = -1.0;
    }
    rhs[first_row] = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t row = first_row + 1 + j;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = cloud.points()(i, j) - x[j];
            eq(row, first_col + i) = c;
            eq(row, first_col + i + stride) = -c;
        }
        rhs[row] = static_cast<double>(n) * (x[j] - mean[j]);
    }
}

DepthResult lq_depth_q1(const DataCloud& cloud, std::span<const double> x) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    lp::LpProblem problem;
    problem.objective.assign(2 * n, 1.0);
    problem.equality = linalg::Matrix(d + 1, 2 * n);
    problem.rhs.assign(d + 1, 0.0);
    fill_signed_rows(cloud, x, problem.equality, problem.rhs, 0, 0, n);

    const lp::LpSolution sol = lp::solve(problem);
    if (sol.status != lp::LpStatus::Optimal)
        throw SolverFailure("q=1 depth program did not solve");
    const double s = sol.value / static_cast<double>(n);
    Vector p = weights_from_signed(std::span(sol.point).subspan(0, n),
                                   std::span(sol.point).subspan(n, n), n);
    return result_from_discrepancy(s, std::move(p));
}

// Epigraph program: min t subject to t >= v+_i + v-_i and the P_x rows.
DepthResult lq_depth_linf_split(const DataCloud& cloud, std::span<const double> x) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    const std::size_t m = 3 * n + 1;  // t, v+, v-, slacks
    lp::LpProblem problem;
    problem.objective.assign(m, 0.0);
    problem.objective[0] = 1.0;
    problem.equality = linalg::Matrix(n + d + 1, m);
    problem.rhs.assign(n + d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        problem.equality(i, 0) = -1.0;
        problem.equality(i, 1 + i) = 1.0;
        problem.equality(i, 1 + n + i) = 1.0;
        problem.equality(i, 1 + 2 * n + i) = 1.0;
    }
    fill_signed_rows(cloud, x, problem.equality, problem.rhs, n, 1, n);

    const lp::LpSolution sol = lp::solve(problem);
    if (sol.status != lp::LpStatus::Optimal)
        throw SolverFailure("q=inf depth program did not solve");
    Vector p = weights_from_signed(std::span(sol.point).subspan(1, n),
                                   std::span(sol.point).subspan(1 + n, n), n);
    return result_from_discrepancy(sol.value, std::move(p));
}

// Scaled form of the same program: with u_i = w_i / t and lambda = 1/t,
// maximize lambda subject to sum u_i = 0, sum u_i (X_i - x) = lambda m,
// u in [-1, 1]^n. Substituting u = utilde - 1 keeps all variables in [0, 2].
DepthResult lq_depth_linf_scaled(const DataCloud& cloud, std::span<const double> x) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    const Vector& mean = cloud.mean();
    lp::LpProblem problem;
    problem.objective.assign(n + 1, 0.0);
    problem.objective[n] = -1.0;  // maximize lambda
    problem.equality = linalg::Matrix(d + 1, n + 1);
    problem.rhs.assign(d + 1, 0.0);
    problem.upper_bounds.assign(n + 1, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        problem.equality(0, i) = 1.0;
        problem.upper_bounds[i] = 2.0;
    }
    problem.rhs[0] = static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
        double coeff_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = cloud.points()(i, j) - x[j];
            problem.equality(1 + j, i) = c;
            coeff_sum += c;
        }
        problem.equality(1 + j, n) = -static_cast<double>(n) * (x[j] - mean[j]);
        problem.rhs[1 + j] = coeff_sum;
    }

    const lp::LpSolution sol = lp::solve(problem);
    if (sol.status != lp::LpStatus::Optimal)
        throw SolverFailure("q=inf depth program did not solve");
    const double lambda = sol.point[n];
    if (!(lambda > 0.0))
        throw SolverFailure("q=inf depth program returned a nonpositive scale");
    const double s = 1.0 / lambda;
    Vector p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = (1.0 + (sol.point[i] - 1.0) * s) / static_cast<double>(n);
    return result_from_discrepancy(s, std::move(p));
}

DepthResult lq_depth_convex(const DataCloud& cloud, std::span<const double> x, double q,
                            const convex::Options& options) {
    Vector rhs(x.begin(), x.end());
    rhs.push_back(1.0);
    Vector particular = cloud.constraint_factor().min_norm_solve(rhs);
    convex::NullspaceProgram prog(cloud.constraint_factor(), std::move(particular), q);
    convex::MinimizeResult res = convex::minimize(prog, options);
    return result_from_discrepancy(res.discrepancy, std::move(res.weights));
}

}  // namespace

DataCloud::DataCloud(linalg::Matrix points) : points_(std::move(points)) {
    const std::size_t n = points_.rows(), d = points_.cols();
    if (d == 0) throw std::invalid_argument("data cloud needs at least one coordinate");
    if (n < d + 1)
        throw SingularCovariance("data cloud needs at least d+1 observations");
    mean_ = linalg::mean(points_);
    covariance_ = linalg::covariance(points_);
    factor_ = linalg::spd_factorize(covariance_);

    constraint_ = linalg::Matrix(d + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) constraint_(j, i) = points_(i, j);
        constraint_(d, i) = 1.0;
    }
    nullspace_.emplace(constraint_);
    if (nullspace_->rank() < d + 1)
        throw RankDeficient("constraint matrix lacks full row rank");
}

Vector DataCloud::point(std::size_t i) const {
    Vector p(dim());
    for (std::size_t j = 0; j < dim(); ++j) p[j] = points_(i, j);
    return p;
}

DepthOrder DepthOrder::finite(double q) {
    if (!std::isfinite(q) || q < 1.0)
        throw std::invalid_argument("depth order must satisfy q >= 1");
    return DepthOrder(q);
}

DepthOrder DepthOrder::infinity() {
    return DepthOrder(std::numeric_limits<double>::infinity());
}

DepthOrder DepthOrder::parse(std::string_view token) {
    std::string lowered(token);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "inf" || lowered == "infinity") return infinity();
    double q = 0.0;
    const auto [end, ec] = std::from_chars(lowered.data(), lowered.data() + lowered.size(), q);
    if (ec != std::errc() || end != lowered.data() + lowered.size())
        throw std::invalid_argument("cannot parse depth order '" + std::string(token) + "'");
    return finite(q);
}

std::string DepthOrder::to_string() const {
    if (is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", q_);
    return buf;
}

DepthResult mahalanobis_depth(const DataCloud& cloud, std::span<const double> x) {
    check_query(cloud, x);
    const std::size_t n = cloud.size(), d = cloud.dim();
    Vector diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = x[j] - cloud.mean()[j];
    const double dist = linalg::norm2(cloud.covariance_factor().half_solve(diff));

    // The optimal q=2 weights in closed form: w_i = (X_i - mean) . cov^{-1} diff.
    const Vector u = cloud.covariance_factor().solve(diff);
    Vector p(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 0.0;
        for (std::size_t j = 0; j < d; ++j) w += (cloud.points()(i, j) - cloud.mean()[j]) * u[j];
        p[i] = (1.0 + w) / static_cast<double>(n);
    }
    return result_from_discrepancy(dist, std::move(p));
}

DepthResult zonoid_depth(const DataCloud& cloud, std::span<const double> x) {
    check_query(cloud, x);
    if (is_mean(cloud, x)) return exact_center_result(cloud);
    const std::size_t n = cloud.size(), d = cloud.dim();

    // min t subject to n p_i <= t, p in the standard simplex slice S_x.
    const std::size_t m = 2 * n + 1;  // p, t, slacks
    lp::LpProblem problem;
    problem.objective.assign(m, 0.0);
    problem.objective[n] = 1.0;
    problem.equality = linalg::Matrix(n + d + 1, m);
    problem.rhs.assign(n + d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        problem.equality(i, i) = static_cast<double>(n);
        problem.equality(i, n) = -1.0;
        problem.equality(i, n + 1 + i) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) problem.equality(n, i) = 1.0;
    problem.rhs[n] = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            problem.equality(n + 1 + j, i) = cloud.points()(i, j);
        problem.rhs[n + 1 + j] = x[j];
    }

    const lp::LpSolution sol = lp::solve(problem);
    if (sol.status == lp::LpStatus::Infeasible) return {0.0, std::nullopt, std::nullopt};
    if (sol.status != lp::LpStatus::Optimal)
        throw SolverFailure("zonoid depth program did not solve");
    const double t = std::max(sol.value, 1.0);
    Vector p(sol.point.begin(), sol.point.begin() + static_cast<std::ptrdiff_t>(n));
    return result_from_discrepancy(t - 1.0, std::move(p));
}

DepthResult lq_depth(const DataCloud& cloud, std::span<const double> x, DepthOrder order,
                     const DepthOptions& options) {
    check_query(cloud, x);
    if (is_mean(cloud, x)) return exact_center_result(cloud);
    if (order.is_infinite()) {
        return options.linf_route == LinfRoute::ScaledLp ? lq_depth_linf_scaled(cloud, x)
                                                         : lq_depth_linf_split(cloud, x);
    }
    const double q = order.q();
    if (q < 1.0 + kQ1DispatchBand) return lq_depth_q1(cloud, x);
    if (q == 2.0 && !options.force_convex_q2) return mahalanobis_depth(cloud, x);
    return lq_depth_convex(cloud, x, q, options.convex);
}

bool in_convex_hull(const DataCloud& cloud, std::span<const double> x) {
    check_query(cloud, x);
    const std::size_t n = cloud.size(), d = cloud.dim();
    lp::LpProblem problem;
    problem.objective.assign(n, 0.0);
    problem.equality = linalg::Matrix(d + 1, n);
    problem.rhs.assign(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) problem.equality(0, i) = 1.0;
    problem.rhs[0] = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            problem.equality(1 + j, i) = cloud.points()(i, j);
        problem.rhs[1 + j] = x[j];
    }
    return lp::solve(problem).status == lp::LpStatus::Optimal;
}

std::vector<DepthResult> batch_depth(const DataCloud& cloud, const std::vector<Vector>& xs,
                                     DepthOrder order, const DepthOptions& options) {
    std::vector<DepthResult> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        try {
            out.push_back(lq_depth(cloud, xs[i], order, options));
        } catch (const std::exception& e) {
            throw DepthError("query point " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace lqdepth
