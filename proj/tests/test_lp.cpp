#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lqdepth/lp.hpp"
#include "support.hpp"

using namespace lqdepth;
using linalg::Matrix;

namespace {

lp::LpProblem simple(Vector c, Matrix e, Vector f) {
    lp::LpProblem p;
    p.objective = std::move(c);
    p.equality = std::move(e);
    p.rhs = std::move(f);
    return p;
}

}  // namespace

TEST_CASE("basic outcomes") {
    SUBCASE("optimal") {
        const lp::LpSolution s =
            lp::solve(simple({1.0, 0.0}, Matrix(1, 2, {1.0, 1.0}), {1.0}));
        REQUIRE(s.status == lp::LpStatus::Optimal);
        CHECK(s.value == doctest::Approx(0.0));
        CHECK(s.point[0] == doctest::Approx(0.0));
        CHECK(s.point[1] == doctest::Approx(1.0));
    }
    SUBCASE("infeasible") {
        const lp::LpSolution s = lp::solve(simple({0.0}, Matrix(1, 1, {1.0}), {-1.0}));
        CHECK(s.status == lp::LpStatus::Infeasible);
    }
    SUBCASE("unbounded") {
        const lp::LpSolution s =
            lp::solve(simple({-1.0, 0.0}, Matrix(1, 2, {1.0, -1.0}), {0.0}));
        CHECK(s.status == lp::LpStatus::Unbounded);
    }
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(lp::solve(simple({1.0}, Matrix(1, 2, {1.0, 1.0}), {1.0})),
                    std::invalid_argument);
}

TEST_CASE("free variables") {
    lp::LpProblem p = simple({1.0}, Matrix(1, 1, {1.0}), {-5.0});
    p.free_vars = {true};
    const lp::LpSolution s = lp::solve(p);
    REQUIRE(s.status == lp::LpStatus::Optimal);
    CHECK(s.point[0] == doctest::Approx(-5.0));
    CHECK(s.value == doctest::Approx(-5.0));
}

TEST_CASE("upper bounds") {
    SUBCASE("bound flip without equality rows") {
        lp::LpProblem p = simple({-1.0}, Matrix(0, 1, {}), {});
        p.upper_bounds = {3.0};
        const lp::LpSolution s = lp::solve(p);
        REQUIRE(s.status == lp::LpStatus::Optimal);
        CHECK(s.value == doctest::Approx(-3.0));
        CHECK(s.point[0] == doctest::Approx(3.0));
    }
    SUBCASE("bounded knapsack row") {
        // max x1 + 2 x2 s.t. x1 + x2 = 1.5, x in [0,1]^2.
        lp::LpProblem p = simple({-1.0, -2.0}, Matrix(1, 2, {1.0, 1.0}), {1.5});
        p.upper_bounds = {1.0, 1.0};
        const lp::LpSolution s = lp::solve(p);
        REQUIRE(s.status == lp::LpStatus::Optimal);
        CHECK(s.value == doctest::Approx(-2.5));
        CHECK(s.point[0] == doctest::Approx(0.5));
        CHECK(s.point[1] == doctest::Approx(1.0));
    }
    SUBCASE("upper bounds can make a problem infeasible") {
        lp::LpProblem p = simple({0.0, 0.0}, Matrix(1, 2, {1.0, 1.0}), {3.0});
        p.upper_bounds = {1.0, 1.0};
        CHECK(lp::solve(p).status == lp::LpStatus::Infeasible);
    }
}

TEST_CASE("degenerate problem still solves") {
    // Multiple rows force degenerate pivots at zero.
    Matrix e(3, 3, {1, 1, 0, 1, 0, 1, 0, 1, 1});
    const lp::LpSolution s = lp::solve(simple({1, 1, 1}, std::move(e), {1, 1, 0}));
    REQUIRE(s.status == lp::LpStatus::Optimal);
    CHECK(s.value == doctest::Approx(1.0));
}

TEST_CASE("solution feasibility and objective consistency on random problems") {
    data::SplitMix64 rng(101);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t r = 2 + rng.next() % 3;
        const std::size_t m = r + 1 + rng.next() % 6;
        Matrix e(r, m);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < m; ++j) e(i, j) = testsupport::next_normal(rng);
        // Feasible by construction: rhs = E x0 with x0 >= 0.
        Vector x0(m);
        for (double& v : x0) v = rng.uniform01();
        const Vector f = linalg::matvec(e, x0);
        Vector c(m);
        for (double& v : c) v = rng.uniform01();  // c >= 0 keeps the LP bounded

        const lp::LpSolution s = lp::solve(simple(c, e, f));
        REQUIRE(s.status == lp::LpStatus::Optimal);

        const Vector back = linalg::matvec(e, s.point);
        for (std::size_t i = 0; i < r; ++i)
            CHECK(std::fabs(back[i] - f[i]) <= 1e-8 * (1.0 + linalg::max_abs(f)));
        const double cx =
            std::inner_product(c.begin(), c.end(), s.point.begin(), 0.0);
        CHECK(std::fabs(cx - s.value) <= 1e-8 * (1.0 + std::fabs(s.value)));
        CHECK(s.value <= std::inner_product(c.begin(), c.end(), x0.begin(), 0.0) + 1e-8);
        for (double v : s.point) CHECK(v >= -1e-9);
    }
}

TEST_CASE("permuted problems return the same optimum") {
    data::SplitMix64 rng(202);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t r = 2 + rng.next() % 2;
        const std::size_t m = r + 2 + rng.next() % 5;
        Matrix e(r, m);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < m; ++j) e(i, j) = testsupport::next_normal(rng);
        Vector x0(m);
        for (double& v : x0) v = rng.uniform01();
        const Vector f = linalg::matvec(e, x0);
        Vector c(m);
        for (double& v : c) v = rng.uniform01();

        const lp::LpSolution base = lp::solve(simple(c, e, f));
        REQUIRE(base.status == lp::LpStatus::Optimal);

        // Random row and column permutations.
        std::vector<std::size_t> rows(r), cols(m);
        std::iota(rows.begin(), rows.end(), 0);
        std::iota(cols.begin(), cols.end(), 0);
        for (std::size_t i = r; i-- > 1;) std::swap(rows[i], rows[rng.next() % (i + 1)]);
        for (std::size_t j = m; j-- > 1;) std::swap(cols[j], cols[rng.next() % (j + 1)]);

        Matrix ep(r, m);
        Vector fp(r), cp(m);
        for (std::size_t i = 0; i < r; ++i) {
            fp[i] = f[rows[i]];
            for (std::size_t j = 0; j < m; ++j) ep(i, j) = e(rows[i], cols[j]);
        }
        for (std::size_t j = 0; j < m; ++j) cp[j] = c[cols[j]];

        const lp::LpSolution perm = lp::solve(simple(cp, ep, fp));
        REQUIRE(perm.status == lp::LpStatus::Optimal);
        CHECK(std::fabs(perm.value - base.value) <= 1e-8 * (1.0 + std::fabs(base.value)));
    }
}

TEST_CASE("determinism: identical inputs give identical outcomes") {
    Matrix e(2, 4, {1, 2, -1, 0.5, 0, 1, 1, -2});
    const lp::LpProblem p = simple({1, 2, 0, 1}, std::move(e), {1.0, 0.5});
    const lp::LpSolution a = lp::solve(p);
    const lp::LpSolution b = lp::solve(p);
    REQUIRE(a.status == b.status);
    CHECK(a.value == b.value);
    for (std::size_t j = 0; j < a.point.size(); ++j) CHECK(a.point[j] == b.point[j]);
}
