#include "lqdepth/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace lqdepth::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : std::uint8_t { AtLower, AtUpper, Basic };

class Simplex {
public:
    explicit Simplex(const LpProblem& p) : prob_(p) { build(); }

    LpSolution run() {
        if (n_artificial_ > 0) {
            phase_ = 1;
            init_costs_phase1();
            iterate();
            double infeas = 0.0;
            for (std::size_t i = 0; i < rows_; ++i)
                if (is_artificial(basis_[i])) infeas += std::max(rhs_val_[i], 0.0);
            if (infeas > kFeasibilityTol * (1.0 + rhs_scale_))
                return {LpStatus::Infeasible, std::numeric_limits<double>::quiet_NaN(), {}};
            expel_artificials();
        }
        phase_ = 2;
        init_costs_phase2();
        if (!iterate())
            return {LpStatus::Unbounded, -kInf, {}};
        return extract();
    }

private:
    const LpProblem& prob_;
    std::size_t rows_ = 0;
    std::size_t m_orig_ = 0;
    std::size_t m_work_ = 0;   // after free-variable splitting
    std::size_t total_ = 0;    // including artificials
    std::size_t n_artificial_ = 0;
    double rhs_scale_ = 0.0;
    int phase_ = 1;
    bool bland_ = false;
    std::size_t degenerate_pivots_ = 0;

    linalg::Matrix tab_;            // rows_ x total_
    Vector rhs_val_;                // current basic values
    Vector upper_;                  // per working variable
    Vector cost_;                   // phase-2 costs per working variable
    Vector zrow_;                   // reduced costs for the current phase
    std::vector<int> basis_;        // row -> column
    std::vector<VarState> state_;
    std::vector<bool> frozen_;      // artificials barred from re-entering
    std::vector<int> split_of_;     // original var -> negative-part column (-1 if none)

    bool is_artificial(int j) const { return static_cast<std::size_t>(j) >= m_work_; }

    void build() {
        m_orig_ = prob_.objective.size();
        rows_ = prob_.equality.rows();
        if (prob_.equality.cols() != m_orig_ || prob_.rhs.size() != rows_)
            throw std::invalid_argument("lp: inconsistent problem dimensions");
        if (!prob_.free_vars.empty() && prob_.free_vars.size() != m_orig_)
            throw std::invalid_argument("lp: free-variable mask has wrong length");
        if (!prob_.upper_bounds.empty() && prob_.upper_bounds.size() != m_orig_)
            throw std::invalid_argument("lp: upper-bound vector has wrong length");

        split_of_.assign(m_orig_, -1);
        m_work_ = m_orig_;
        for (std::size_t j = 0; j < m_orig_; ++j) {
            if (!prob_.free_vars.empty() && prob_.free_vars[j]) {
                if (!prob_.upper_bounds.empty() && std::isfinite(prob_.upper_bounds[j]))
                    throw std::invalid_argument("lp: upper bound on a free variable");
                split_of_[j] = static_cast<int>(m_work_++);
            }
        }

        rhs_scale_ = linalg::max_abs(prob_.rhs);
        std::vector<double> row_sign(rows_, 1.0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (prob_.rhs[i] < 0.0) row_sign[i] = -1.0;

        // Count nonzeros per working column to find crash singletons.
        std::vector<std::uint32_t> col_count(m_orig_, 0);
        std::vector<std::size_t> col_row(m_orig_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* row = prob_.equality.row_ptr(i);
            for (std::size_t j = 0; j < m_orig_; ++j)
                if (row[j] != 0.0) {
                    ++col_count[j];
                    col_row[j] = i;
                }
        }

        basis_.assign(rows_, -1);
        std::vector<int> crash_col(rows_, -1);
        for (std::size_t j = 0; j < m_orig_; ++j) {
            if (col_count[j] != 1 || split_of_[j] >= 0) continue;
            const std::size_t i = col_row[j];
            if (crash_col[i] >= 0) continue;
            const double e = prob_.equality(i, j) * row_sign[i];
            if (e <= kPivotTol) continue;
            const double value = prob_.rhs[i] * row_sign[i] / e;
            const double ub = prob_.upper_bounds.empty() ? kInf : prob_.upper_bounds[j];
            if (value > ub + kFeasibilityTol) continue;
            crash_col[i] = static_cast<int>(j);
        }

        n_artificial_ = 0;
        for (std::size_t i = 0; i < rows_; ++i)
            if (crash_col[i] < 0) ++n_artificial_;
        total_ = m_work_ + n_artificial_;

        tab_ = linalg::Matrix(rows_, total_);
        rhs_val_.assign(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double* out = tab_.row_ptr(i);
            const double* row = prob_.equality.row_ptr(i);
            for (std::size_t j = 0; j < m_orig_; ++j) {
                out[j] = row[j] * row_sign[i];
                if (split_of_[j] >= 0) out[split_of_[j]] = -out[j];
            }
            rhs_val_[i] = prob_.rhs[i] * row_sign[i];
        }

        upper_.assign(total_, kInf);
        cost_.assign(total_, 0.0);
        for (std::size_t j = 0; j < m_orig_; ++j) {
            cost_[j] = prob_.objective[j];
            if (split_of_[j] >= 0)
                cost_[split_of_[j]] = -prob_.objective[j];
            else if (!prob_.upper_bounds.empty())
                upper_[j] = prob_.upper_bounds[j];
        }

        state_.assign(total_, VarState::AtLower);
        frozen_.assign(total_, false);

        std::size_t art = m_work_;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (crash_col[i] >= 0) {
                const std::size_t j = static_cast<std::size_t>(crash_col[i]);
                const double piv = tab_(i, j);
                double* row = tab_.row_ptr(i);
                for (std::size_t k = 0; k < total_; ++k) row[k] /= piv;
                rhs_val_[i] /= piv;
                basis_[i] = static_cast<int>(j);
                state_[j] = VarState::Basic;
            } else {
                tab_(i, art) = 1.0;
                basis_[i] = static_cast<int>(art);
                state_[art] = VarState::Basic;
                ++art;
            }
        }
    }

    void init_costs_phase1() {
        zrow_.assign(total_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) continue;
            const double* row = tab_.row_ptr(i);
            for (std::size_t j = 0; j < total_; ++j) zrow_[j] -= row[j];
        }
        for (std::size_t j = m_work_; j < total_; ++j) zrow_[j] += 1.0;
    }

    void init_costs_phase2() {
        zrow_ = cost_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = tab_.row_ptr(i);
            for (std::size_t j = 0; j < total_; ++j) zrow_[j] -= cb * row[j];
        }
    }

    int pick_entering() const {
        int best = -1;
        double best_score = kPivotTol;
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] == VarState::Basic || frozen_[j]) continue;
            if (phase_ == 2 && is_artificial(static_cast<int>(j))) continue;
            double score;
            if (state_[j] == VarState::AtLower)
                score = -zrow_[j];
            else
                score = zrow_[j];
            if (score <= kPivotTol) continue;
            if (bland_) return static_cast<int>(j);
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(j);
            }
        }
        return best;
    }

    // Returns false when an unbounded ray is detected (phase 2 only).
    bool iterate() {
        const std::size_t cap = 50000 + 50 * (rows_ + total_);
        for (std::size_t iter = 0; iter < cap; ++iter) {
            const int enter = pick_entering();
            if (enter < 0) return true;
            const std::size_t j = static_cast<std::size_t>(enter);
            const double dir = state_[j] == VarState::AtLower ? 1.0 : -1.0;

            double theta = upper_[j];  // bound span of the entering variable
            int leave_row = -1;
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = tab_(i, j) * dir;
                double limit;
                if (a > kPivotTol) {
                    limit = rhs_val_[i] / a;
                } else if (a < -kPivotTol && std::isfinite(upper_[basis_[i]])) {
                    limit = (rhs_val_[i] - upper_[basis_[i]]) / a;
                } else {
                    continue;
                }
                if (limit < -1e-12) limit = 0.0;
                if (limit < theta - 1e-12 ||
                    (bland_ && leave_row >= 0 && limit < theta + 1e-12 &&
                     basis_[i] < basis_[leave_row])) {
                    theta = limit;
                    leave_row = static_cast<int>(i);
                }
            }

            if (!std::isfinite(theta)) {
                if (phase_ == 1)
                    throw SolverFailure("lp: unbounded phase-1 subproblem");
                return false;
            }
            if (theta <= 1e-12) {
                if (++degenerate_pivots_ > 5 * total_) bland_ = true;
                theta = std::max(theta, 0.0);
            }

            if (leave_row < 0) {
                // Entering variable runs to its opposite bound; basis unchanged.
                for (std::size_t i = 0; i < rows_; ++i)
                    rhs_val_[i] -= tab_(i, j) * dir * theta;
                state_[j] = state_[j] == VarState::AtLower ? VarState::AtUpper
                                                           : VarState::AtLower;
                continue;
            }

            pivot(static_cast<std::size_t>(leave_row), j, dir, theta);
        }
        throw SolverFailure("lp: pivot limit exceeded");
    }

    void pivot(std::size_t lr, std::size_t j, double dir, double theta) {
        const double enter_from = state_[j] == VarState::AtLower ? 0.0 : upper_[j];
        for (std::size_t i = 0; i < rows_; ++i) rhs_val_[i] -= tab_(i, j) * dir * theta;

        // The leaving variable lands on whichever of its bounds its updated
        // value sits at (always the lower one when it has no upper bound).
        const int leaving = basis_[lr];
        const double leave_val = rhs_val_[lr];
        if (std::isfinite(upper_[leaving]) &&
            std::fabs(leave_val - upper_[leaving]) < std::fabs(leave_val))
            state_[leaving] = VarState::AtUpper;
        else
            state_[leaving] = VarState::AtLower;
        if (phase_ == 1 && is_artificial(leaving)) frozen_[leaving] = true;

        const double piv = tab_(lr, j);
        double* prow = tab_.row_ptr(lr);
        for (std::size_t k = 0; k < total_; ++k) prow[k] /= piv;
        prow[j] = 1.0;

        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == lr) continue;
            const double f = tab_(i, j);
            if (f == 0.0) continue;
            double* row = tab_.row_ptr(i);
            for (std::size_t k = 0; k < total_; ++k) row[k] -= f * prow[k];
            row[j] = 0.0;
        }
        const double zj = zrow_[j];
        if (zj != 0.0) {
            for (std::size_t k = 0; k < total_; ++k) zrow_[k] -= zj * prow[k];
            zrow_[j] = 0.0;
        }

        basis_[lr] = static_cast<int>(j);
        state_[j] = VarState::Basic;
        rhs_val_[lr] = enter_from + dir * theta;
    }

    // After phase 1, pivot zero-level artificials out of the basis where a
    // structural column is available; rows with none are redundant and keep
    // their artificial pinned at zero.
    void expel_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) continue;
            const double* row = tab_.row_ptr(i);
            int target = -1;
            for (std::size_t j = 0; j < m_work_; ++j) {
                if (state_[j] == VarState::Basic) continue;
                if (std::fabs(row[j]) > kPivotTol) {
                    target = static_cast<int>(j);
                    break;
                }
            }
            if (target < 0) continue;
            const std::size_t j = static_cast<std::size_t>(target);
            const double dir = state_[j] == VarState::AtLower ? 1.0 : -1.0;
            pivot(i, j, dir, 0.0);
        }
        for (std::size_t j = m_work_; j < total_; ++j) frozen_[j] = true;
    }

    LpSolution extract() const {
        Vector work(total_, 0.0);
        for (std::size_t j = 0; j < total_; ++j)
            if (state_[j] == VarState::AtUpper) work[j] = upper_[j];
        for (std::size_t i = 0; i < rows_; ++i)
            work[basis_[i]] = rhs_val_[i];

        Vector x(m_orig_, 0.0);
        for (std::size_t j = 0; j < m_orig_; ++j) {
            x[j] = work[j];
            if (split_of_[j] >= 0) x[j] -= work[split_of_[j]];
        }

        double value = 0.0;
        for (std::size_t j = 0; j < m_orig_; ++j) value += prob_.objective[j] * x[j];

        Vector residual = linalg::matvec(prob_.equality, x);
        double violation = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            violation = std::max(violation, std::fabs(residual[i] - prob_.rhs[i]));
        if (violation > 10.0 * kFeasibilityTol * (1.0 + rhs_scale_))
            throw SolverFailure("lp: solution fails feasibility check");

        return {LpStatus::Optimal, value, std::move(x)};
    }
};

}  // namespace

LpSolution solve(const LpProblem& problem) {
    Simplex s(problem);
    return s.run();
}

}  // namespace lqdepth::lp
