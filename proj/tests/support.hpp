// Shared test utilities: cloud builders, seeded generators, and the
// independent oracles the expected values are frozen from.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "lqdepth/data.hpp"
#include "lqdepth/depth.hpp"

namespace testsupport {

using lqdepth::DataCloud;
using lqdepth::Vector;
using lqdepth::linalg::Matrix;

inline Matrix points_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t n = rows.size();
    const std::size_t d = rows.begin()->size();
    Vector entries;
    entries.reserve(n * d);
    for (const auto& row : rows)
        for (double v : row) entries.push_back(v);
    return Matrix(n, d, std::move(entries));
}

inline DataCloud make_cloud(std::initializer_list<std::initializer_list<double>> rows) {
    return DataCloud(points_matrix(rows));
}

/// 1-d cloud helper.
inline DataCloud make_cloud_1d(std::initializer_list<double> values) {
    Vector entries(values);
    const std::size_t n = entries.size();
    return DataCloud(Matrix(n, 1, std::move(entries)));
}

inline double next_normal(lqdepth::data::SplitMix64& rng) {
    return rng.normal_pair().first;
}

inline DataCloud random_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
    lqdepth::data::SplitMix64 rng(seed);
    Matrix points(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) points(i, j) = next_normal(rng);
    return DataCloud(std::move(points));
}

/// Ternary search for the minimum of a convex function on [lo, hi].
inline double minimize_convex_1d(const std::function<double(double)>& f, double lo,
                                 double hi, int iterations = 300) {
    for (int it = 0; it < iterations; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return f(0.5 * (lo + hi));
}

/// Brute-force oracle for the cloud {0, 1, 2} queried at x: the feasible
/// weights form the one-parameter family p(t) = (t + x - 1.5 - ... ) derived
/// by eliminating the two equality constraints with p_3 = t free. For
/// x = 1.5 this is p(t) = (t - 0.5, 1.5 - 2 t, t).
struct OneParamFamily {
    // p(t) = base + t * dir, both length n.
    Vector base;
    Vector dir;

    Vector weights(double t) const {
        Vector p(base.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = base[i] + t * dir[i];
        return p;
    }

    double power_mean(double t, double q) const {
        const Vector p = weights(t);
        const double n = static_cast<double>(p.size());
        double acc = 0.0;
        for (double pi : p) acc += std::pow(std::fabs(n * pi - 1.0), q);
        return std::pow(acc / n, 1.0 / q);
    }

    double max_norm(double t) const {
        const Vector p = weights(t);
        const double n = static_cast<double>(p.size());
        double m = 0.0;
        for (double pi : p) m = std::max(m, std::fabs(n * pi - 1.0));
        return m;
    }

    /// S_q by brute force over the family; q <= 0 selects the max norm.
    double discrepancy(double q, double lo = -10.0, double hi = 10.0) const {
        if (q <= 0.0)
            return minimize_convex_1d([&](double t) { return max_norm(t); }, lo, hi);
        return minimize_convex_1d([&](double t) { return power_mean(t, q); }, lo, hi);
    }
};

/// Family for the cloud {0, 1, 2} in R^1 queried at x; p3 = t is free:
/// p1 + p2 + p3 = 1 and p2 + 2 p3 = x give p2 = x - 2t, p1 = 1 - x + t.
inline OneParamFamily family_012(double x) {
    return {{1.0 - x, x, 0.0}, {1.0, -2.0, 1.0}};
}

/// Gaussian elimination with partial pivoting. Test-local on purpose: the
/// oracles must stay independent of the library's linear algebra.
inline Vector gauss_solve(std::vector<Vector> a, Vector b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vector x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

/// One-parameter feasible family for a cloud with exactly n = d+2
/// observations: fixing p_n = t, the remaining d+1 components solve a square
/// system, so p(t) is affine in t.
inline OneParamFamily family_for(const DataCloud& cloud, const Vector& x) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    if (n != d + 2) throw std::logic_error("family_for needs n = d+2");

    std::vector<Vector> a(d + 1, Vector(d + 1, 0.0));
    for (std::size_t j = 0; j + 1 < n; ++j) {
        a[0][j] = 1.0;
        for (std::size_t c = 0; c < d; ++c) a[1 + c][j] = cloud.points()(j, c);
    }
    const auto rhs_at = [&](double t) {
        Vector rhs(d + 1);
        rhs[0] = 1.0 - t;
        for (std::size_t c = 0; c < d; ++c)
            rhs[1 + c] = x[c] - t * cloud.points()(n - 1, c);
        return rhs;
    };
    Vector p0 = gauss_solve(a, rhs_at(0.0));
    Vector p1 = gauss_solve(a, rhs_at(1.0));
    OneParamFamily fam;
    fam.base = p0;
    fam.base.push_back(0.0);
    fam.dir.resize(n);
    for (std::size_t j = 0; j + 1 < n; ++j) fam.dir[j] = p1[j] - p0[j];
    fam.dir[n - 1] = 1.0;
    return fam;
}

/// Classical zonoid oracle over a one-parameter family: minimizes
/// max_i (n p_i) over the sub-interval where p(t) >= 0; returns 0 when that
/// interval is empty (x outside the hull).
inline double zonoid_depth_oracle(const OneParamFamily& fam) {
    double tlo = -1e18, thi = 1e18;
    for (std::size_t i = 0; i < fam.base.size(); ++i) {
        const double b = fam.base[i], m = fam.dir[i];
        if (std::fabs(m) < 1e-15) {
            if (b < -1e-12) return 0.0;
            continue;
        }
        const double bound = -b / m;
        if (m > 0.0)
            tlo = std::max(tlo, bound);
        else
            thi = std::min(thi, bound);
    }
    if (tlo > thi + 1e-12) return 0.0;
    const double n = static_cast<double>(fam.base.size());
    const auto max_np = [&](double t) {
        const Vector p = fam.weights(t);
        double m = -1e300;
        for (double pi : p) m = std::max(m, n * pi);
        return m;
    };
    const double t_star = minimize_convex_1d(max_np, tlo, thi);
    return 1.0 / t_star;
}

}  // namespace testsupport
