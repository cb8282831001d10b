// Public depth API: classical zonoid depth, Mahalanobis depth, and the
// L_q-norm zonoid depth family for q in [1, inf].
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lqdepth/convex.hpp"
#include "lqdepth/linalg.hpp"
#include "lqdepth/lp.hpp"

namespace lqdepth {

/// Immutable data cloud of n observations in R^d with the derived quantities
/// every depth query needs: sample mean, covariance factor, and the
/// factorized constraint matrix [coordinates; ones] whose null space
/// parametrizes the admissible weight vectors.
///
/// Construction requires n >= d+1 and a positive definite covariance;
/// otherwise SingularCovariance is thrown. Instances are safe to share
/// across threads.
class DataCloud {
public:
    explicit DataCloud(linalg::Matrix points);

    std::size_t size() const { return points_.rows(); }
    std::size_t dim() const { return points_.cols(); }
    const linalg::Matrix& points() const { return points_; }
    const Vector& mean() const { return mean_; }
    const linalg::Matrix& covariance() const { return covariance_; }
    const linalg::SpdFactor& covariance_factor() const { return factor_; }
    /// The (d+1) x n stacked matrix [coordinates; ones].
    const linalg::Matrix& constraint_matrix() const { return constraint_; }
    const linalg::NullspaceFactor& constraint_factor() const { return *nullspace_; }
    Vector point(std::size_t i) const;

private:
    linalg::Matrix points_;
    Vector mean_;
    linalg::Matrix covariance_;
    linalg::SpdFactor factor_;
    linalg::Matrix constraint_;
    std::optional<linalg::NullspaceFactor> nullspace_;
};

/// Depth order q in [1, inf]; infinity is a first-class value.
class DepthOrder {
public:
    static DepthOrder finite(double q);
    static DepthOrder infinity();
    /// Accepts a decimal number >= 1 or "inf" (case-insensitive).
    static DepthOrder parse(std::string_view token);

    bool is_infinite() const { return std::isinf(q_); }
    double q() const { return q_; }
    std::string to_string() const;

private:
    explicit DepthOrder(double q) : q_(q) {}
    double q_;
};

struct DepthResult {
    double depth = 0.0;
    /// Discrepancy s_q with depth = 1/(1+s_q); absent only for the classical
    /// zonoid depth outside the convex hull, where depth is exactly zero.
    std::optional<double> discrepancy;
    /// Optimal weight vector over the admissible set, when one exists.
    std::optional<Vector> weights;
};

/// Which linear program backs the q = inf depth. Both routes are equivalent;
/// the scaled form keeps the row count at d+1 regardless of n, which makes
/// large clouds cheap, while the split form mirrors the epigraph program
/// with one coupling row per observation.
enum class LinfRoute { ScaledLp, SplitLp };

struct DepthOptions {
    /// Route q = 2 through the convex engine instead of the closed form
    /// (used by cross-checks; the closed form is the default).
    bool force_convex_q2 = false;
    LinfRoute linf_route = LinfRoute::ScaledLp;
    convex::Options convex;
};

/// 1 / (1 + Mahalanobis distance of x from the sample mean).
DepthResult mahalanobis_depth(const DataCloud& cloud, std::span<const double> x);

/// Classical zonoid depth: 1 / min max_i (n p_i) over nonnegative weights,
/// exactly 0 outside the convex hull of the cloud.
DepthResult zonoid_depth(const DataCloud& cloud, std::span<const double> x);

/// L_q-norm zonoid depth, strictly positive for every finite x.
DepthResult lq_depth(const DataCloud& cloud, std::span<const double> x, DepthOrder order,
                     const DepthOptions& options = {});

/// True iff x is a convex combination of the observations (within the LP
/// feasibility tolerance).
bool in_convex_hull(const DataCloud& cloud, std::span<const double> x);

/// Element-wise lq_depth; the first failing point aborts with its index.
std::vector<DepthResult> batch_depth(const DataCloud& cloud,
                                     const std::vector<Vector>& xs, DepthOrder order,
                                     const DepthOptions& options = {});

}  // namespace lqdepth
