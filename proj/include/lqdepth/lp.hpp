// Dense two-phase simplex for small equality-form linear programs.
#pragma once

#include <limits>
#include <vector>

#include "lqdepth/linalg.hpp"

namespace lqdepth::lp {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasibilityTol = 1e-8;

/// min objective . x   subject to  equality x = rhs  and per-variable bounds.
/// Lower bounds are 0 by default; variables flagged in `free_vars` are
/// unbounded below. `upper_bounds` may cap individual variables (empty means
/// no variable has an upper bound; +inf entries mean the same per variable).
struct LpProblem {
    Vector objective;
    linalg::Matrix equality;
    Vector rhs;
    std::vector<bool> free_vars;  // empty or size m; true = lower bound -inf
    Vector upper_bounds;          // empty or size m; +inf = unbounded above
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = std::numeric_limits<double>::quiet_NaN();
    Vector point;
};

/// Two-phase simplex on a dense tableau. Rows are made nonnegative, slack-like
/// singleton columns are used as a crash basis, remaining rows receive
/// artificial variables. Dantzig pricing with a Bland fallback once the
/// degenerate-pivot count exceeds 5x the variable count.
LpSolution solve(const LpProblem& problem);

}  // namespace lqdepth::lp
