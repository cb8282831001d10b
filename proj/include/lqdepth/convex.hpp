// Minimizes sum_i |n p_i - 1|^q over an affine set of weight vectors,
// parametrized through the null space of the constraint matrix.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "lqdepth/linalg.hpp"

namespace lqdepth::convex {

struct Options {
    double gradient_tol = 1e-8;       // stop when ||g|| <= tol * (1 + f)
    double step_floor = 1e-14;        // line-search step collapse threshold
    std::size_t max_iterations = 10000;
    std::size_t memory = 10;          // quasi-Newton correction pairs
    double armijo_c = 1e-4;
};

/// The smooth convex program behind the finite-q depths (q > 1):
///
///     min_z f(z) = sum_i |n p_i(z) - 1|^q,   p(z) = p_part + B z,
///
/// where p_part is one feasible weight vector and the columns of B span the
/// null space of the constraint matrix, so every p(z) stays feasible.
class NullspaceProgram {
public:
    NullspaceProgram(const linalg::NullspaceFactor& factor, Vector particular, double q);

    const linalg::NullspaceFactor& factor() const { return *factor_; }
    const Vector& particular() const { return particular_; }
    double exponent() const { return q_; }
    std::size_t sample_size() const { return particular_.size(); }
    std::size_t dim() const { return factor_->null_dim(); }

    /// Feasible weight vector p(z) for null-space coordinates z.
    Vector weights_at(std::span<const double> z) const;

private:
    const linalg::NullspaceFactor* factor_;
    Vector particular_;
    double q_;
};

/// f(z) and its exact gradient in z-coordinates.
std::pair<double, Vector> objective_and_gradient(const NullspaceProgram& prog,
                                                 std::span<const double> z);

struct MinimizeResult {
    Vector weights;       // argmin p*
    double discrepancy;   // s_q = ((1/n) f*)^(1/q)
    double objective;     // f*
    std::size_t iterations = 0;
    Vector coordinates;   // z* in null-space coordinates (warm-start input)
};

/// Raised when the iteration cap is hit; carries the best iterate seen.
struct ConvergenceFailure : DepthError {
    ConvergenceFailure(const std::string& msg, Vector best_weights, double best_discrepancy)
        : DepthError(msg),
          best_weights(std::move(best_weights)),
          best_discrepancy(best_discrepancy) {}
    Vector best_weights;
    double best_discrepancy;
};

/// Limited-memory quasi-Newton descent with Armijo backtracking, started from
/// z = 0 (the minimum-norm feasible point) unless `initial` is given.
MinimizeResult minimize(const NullspaceProgram& prog, const Options& options = {},
                        std::optional<std::span<const double>> initial = std::nullopt);

}  // namespace lqdepth::convex
