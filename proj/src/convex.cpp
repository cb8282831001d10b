#include "lqdepth/convex.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace lqdepth::convex {

namespace {

bool near_integer(double q) { return q == std::floor(q) && q <= 64.0; }

double int_pow(double base, long e) {
    double r = 1.0, b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Adds |w|^q to f and returns d/dw |w|^q = q sign(w) |w|^(q-1).
struct PowerTerm {
    double q;
    bool integral;
    long qi;

    explicit PowerTerm(double q_) : q(q_), integral(near_integer(q_)), qi(static_cast<long>(q_)) {}

    void accumulate(double w, double& f, double& dw) const {
        const double a = std::fabs(w);
        double pow_qm1;
        if (integral)
            pow_qm1 = int_pow(a, qi - 1);
        else
            pow_qm1 = a == 0.0 ? 0.0 : std::pow(a, q - 1.0);
        f += pow_qm1 * a;
        dw = q * std::copysign(pow_qm1, w);
    }
};

}  // namespace

NullspaceProgram::NullspaceProgram(const linalg::NullspaceFactor& factor, Vector particular,
                                   double q)
    : factor_(&factor), particular_(std::move(particular)), q_(q) {
    if (!(q > 1.0) || !std::isfinite(q))
        throw std::invalid_argument("nullspace program requires finite q > 1");
    if (particular_.size() != factor.n())
        throw std::invalid_argument("particular solution has wrong length");
}

Vector NullspaceProgram::weights_at(std::span<const double> z) const {
    Vector p = particular_;
    if (!z.empty()) {
        Vector shift = factor_->null_to_full(z);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += shift[i];
    }
    return p;
}

namespace {

// f(z) and gradient; writes p(z) into `p` and the gradient into `grad`.
double evaluate(const NullspaceProgram& prog, std::span<const double> z, Vector& p,
                Vector& grad) {
    const std::size_t n = prog.sample_size();
    const double nd = static_cast<double>(n);
    const PowerTerm term(prog.exponent());

    p = prog.weights_at(z);
    double f = 0.0;
    Vector dfdp(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dw;
        term.accumulate(nd * p[i] - 1.0, f, dw);
        dfdp[i] = nd * dw;
    }
    grad = prog.dim() > 0 ? prog.factor().full_to_null(dfdp) : Vector{};
    return f;
}

double discrepancy_from(double f, std::size_t n, double q) {
    if (f <= 0.0) return 0.0;
    return std::pow(f / static_cast<double>(n), 1.0 / q);
}

}  // namespace

std::pair<double, Vector> objective_and_gradient(const NullspaceProgram& prog,
                                                 std::span<const double> z) {
    if (z.size() != prog.dim())
        throw std::invalid_argument("objective_and_gradient: z has wrong length");
    Vector p, grad;
    const double f = evaluate(prog, z, p, grad);
    return {f, std::move(grad)};
}

MinimizeResult minimize(const NullspaceProgram& prog, const Options& options,
                        std::optional<std::span<const double>> initial) {
    const std::size_t k = prog.dim();
    const std::size_t n = prog.sample_size();
    const double q = prog.exponent();

    Vector z(k, 0.0);
    if (initial) {
        if (initial->size() != k)
            throw std::invalid_argument("minimize: initial point has wrong length");
        z.assign(initial->begin(), initial->end());
    }

    Vector p, grad;
    double f = evaluate(prog, z, p, grad);
    if (k == 0)
        return {std::move(p), discrepancy_from(f, n, q), f, 0, {}};

    struct Pair {
        Vector s, y;
        double rho;
    };
    std::deque<Pair> history;

    Vector direction(k), z_trial(k), p_trial, grad_trial;
    // Stationarity scale: a plain tol*(1+f) test is blind to problems whose
    // objective is tiny everywhere (query points near the mean), so the unit
    // term is capped by the starting value. For f0 >= 1 this equals
    // tol*(1+f); for small f0 it is strictly tighter.
    const double unit_scale = std::min(1.0, f);
    bool converged = false;
    std::size_t iter = 0;
    for (; iter <= options.max_iterations; ++iter) {
        const double gnorm = linalg::norm2(grad);
        if (f == 0.0 || gnorm <= options.gradient_tol * (f + unit_scale)) {
            converged = true;
            break;
        }
        if (iter == options.max_iterations) break;

        // Two-loop recursion; falls back to steepest descent when the
        // resulting direction is not a descent direction.
        direction = grad;
        std::vector<double> alphas(history.size());
        for (std::size_t ii = history.size(); ii-- > 0;) {
            const Pair& h = history[ii];
            alphas[ii] = h.rho * linalg::dot(h.s, direction);
            for (std::size_t j = 0; j < k; ++j) direction[j] -= alphas[ii] * h.y[j];
        }
        if (!history.empty()) {
            const Pair& last = history.back();
            const double gamma = linalg::dot(last.s, last.y) / linalg::dot(last.y, last.y);
            for (double& v : direction) v *= gamma;
        }
        for (std::size_t ii = 0; ii < history.size(); ++ii) {
            const Pair& h = history[ii];
            const double beta = h.rho * linalg::dot(h.y, direction);
            for (std::size_t j = 0; j < k; ++j) direction[j] += (alphas[ii] - beta) * h.s[j];
        }
        for (double& v : direction) v = -v;

        double gd = linalg::dot(grad, direction);
        if (!(gd < 0.0)) {
            for (std::size_t j = 0; j < k; ++j) direction[j] = -grad[j];
            gd = -gnorm * gnorm;
        }

        // Armijo backtracking with halving.
        double alpha = 1.0;
        const double dir_norm = linalg::max_abs(direction);
        const double z_scale = 1.0 + linalg::max_abs(z);
        bool collapsed = false;
        double f_trial = f;
        while (true) {
            if (alpha * dir_norm < options.step_floor * z_scale) {
                collapsed = true;
                break;
            }
            for (std::size_t j = 0; j < k; ++j) z_trial[j] = z[j] + alpha * direction[j];
            f_trial = evaluate(prog, z_trial, p_trial, grad_trial);
            if (std::isfinite(f_trial) && f_trial <= f + options.armijo_c * alpha * gd) break;
            alpha *= 0.5;
        }
        if (collapsed) {
            converged = true;  // step collapse is an accepted stationary exit
            break;
        }

        Vector s(k), y(k);
        for (std::size_t j = 0; j < k; ++j) {
            s[j] = z_trial[j] - z[j];
            y[j] = grad_trial[j] - grad[j];
        }
        const double sy = linalg::dot(s, y);
        if (sy > 1e-12 * linalg::norm2(s) * linalg::norm2(y)) {
            history.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (history.size() > options.memory) history.pop_front();
        }

        z.swap(z_trial);
        f = f_trial;
        p.swap(p_trial);
        grad.swap(grad_trial);
    }

    if (!converged)
        throw ConvergenceFailure("minimize: iteration cap exceeded", std::move(p),
                                 discrepancy_from(f, n, q));

    return {std::move(p), discrepancy_from(f, n, q), f, iter, std::move(z)};
}

}  // namespace lqdepth::convex
