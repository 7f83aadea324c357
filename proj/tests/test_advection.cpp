#include "widthlab/advection.hpp"
#include "widthlab/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace widthlab;

namespace {

// Brute-force oracle: dense 2D midpoint quadrature of |u - ubar|^p on
// [0,1]x[-1,1], evaluating the indicator solutions pointwise.
double dense_lp_distance(const AdvectionSolution& a, const AdvectionSolution& b, double p, int nt,
                         int nx) {
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double x = -1.0 + 2.0 * (i + 0.5) / nx;
        for (int j = 0; j < nt; ++j) {
            const double t = (j + 0.5) / nt;
            acc += std::pow(std::abs(a.value(t, x) - b.value(t, x)), p) * (2.0 / nx) * (1.0 / nt);
        }
    }
    return std::pow(acc, 1.0 / p);
}

PiecewiseLinear random_speed(Rng& rng, int pieces) {
    PiecewiseLinear c;
    c.xs.push_back(-1.0);
    for (int i = 1; i < pieces; ++i) c.xs.push_back(-1.0 + 2.0 * i / pieces + rng.uniform(-0.3, 0.3) / pieces);
    c.xs.push_back(1.0);
    for (std::size_t i = 0; i < c.xs.size(); ++i) c.ys.push_back(rng.uniform(1.0, 2.0));
    return c;
}

}  // namespace

TEST_CASE("constant speeds give linear breakthrough curves") {
    const auto one = solve_advection_exact([](double) { return 1.0; }, 1.0, 2.0);
    const auto two = solve_advection_exact([](double) { return 2.0; }, 1.0, 2.0);
    for (double x : {-1.0, -0.37, 0.0, 0.2, 0.75, 1.0}) {
        CHECK(std::abs(one.breakthrough(x) - x) < 1e-12);
        CHECK(std::abs(two.breakthrough(x) - x / 2.0) < 1e-12);
    }
}

TEST_CASE("linear speed has the logarithmic closed form") {
    const auto sol = solve_advection_exact([](double x) { return 1.5 + 0.5 * x; }, 1.0, 2.0, 1e-10);
    for (double x : {-0.99, -0.5, 0.0, 0.31, 0.77, 1.0}) {
        const double expect = 2.0 * std::log((1.5 + 0.5 * x) / 1.5);
        CHECK(std::abs(sol.breakthrough(x) - expect) < 1e-10);
    }
}

TEST_CASE("breakthrough curve is strictly increasing with slope in [1/R, 1/r]") {
    Rng rng(52);
    const PiecewiseLinear c = random_speed(rng, 7);
    const auto sol = solve_advection_exact(c.fn(), 1.0, 2.0);
    const auto table = sol.table();
    CHECK(std::abs(sol.breakthrough(0.0)) < 1e-12);
    for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        const double slope =
            (table[i + 1].second - table[i].second) / (table[i + 1].first - table[i].first);
        CHECK(slope >= 1.0 / 2.0 - 1e-9);
        CHECK(slope <= 1.0 / 1.0 + 1e-9);
    }
}

TEST_CASE("speed below the declared lower bound is rejected") {
    CHECK_THROWS_WITH(solve_advection_exact([](double x) { return x < 0 ? 1.5 : 0.5; }, 1.0, 2.0),
                      Catch::Matchers::ContainsSubstring("below"));
}

TEST_CASE("distance of a solution to itself is zero") {
    const auto sol = solve_advection_exact([](double x) { return 1.2 + 0.3 * std::sin(3 * x); }, 0.9, 1.5);
    CHECK(advection_distance(sol, sol, 1.0) == 0.0);
    CHECK(advection_distance(sol, sol, 2.0) == 0.0);
}

TEST_CASE("constant pair distances match the dense quadrature oracle") {
    const auto one = solve_advection_exact([](double) { return 1.0; }, 1.0, 2.0);
    const auto two = solve_advection_exact([](double) { return 2.0; }, 1.0, 2.0);
    const double d1 = advection_distance(one, two, 1.0);
    const double d2 = advection_distance(one, two, 2.0);
    CHECK(std::abs(d1 - 0.25) < 1e-10);
    CHECK(std::abs(d2 - 0.5) < 1e-10);
    // oracle agreement (midpoint rule converges O(1/n) for indicators)
    CHECK(std::abs(dense_lp_distance(one, two, 1.0, 2000, 2000) - d1) < 2e-3);
    CHECK(std::abs(dense_lp_distance(one, two, 2.0, 2000, 2000) - d2) < 2e-3);
}

TEST_CASE("p-power relation: distance(p) = distance(1)^(1/p)") {
    Rng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const PiecewiseLinear ca = random_speed(rng, 5), cb = random_speed(rng, 6);
        const auto sa = solve_advection_exact(ca.fn(), 1.0, 2.0);
        const auto sb = solve_advection_exact(cb.fn(), 1.0, 2.0);
        const double d1 = advection_distance(sa, sb, 1.0);
        for (double p : {2.0, 3.0}) {
            const double dp = advection_distance(sa, sb, p);
            CHECK(std::abs(dp - std::pow(d1, 1.0 / p)) <= 1e-12 * std::max(1.0, dp) + 1e-13);
        }
    }
}

TEST_CASE("Holder bound r^{-2/p} ||c - cbar||_1^{1/p} holds semi-analytically") {
    Rng rng(1234);
    const double r = 1.0;
    for (int rep = 0; rep < 50; ++rep) {
        const PiecewiseLinear ca = random_speed(rng, 4 + static_cast<int>(rng.below(5)));
        const PiecewiseLinear cb = random_speed(rng, 4 + static_cast<int>(rng.below(5)));
        const auto sa = solve_advection_exact(ca.fn(), 1.0, 2.0);
        const auto sb = solve_advection_exact(cb.fn(), 1.0, 2.0);
        const double l1 = exact_l1_distance(ca, cb);
        for (double p : {1.0, 2.0}) {
            const double lhs = advection_distance(sa, sb, p);
            const double rhs = std::pow(r, -2.0 / p) * std::pow(l1, 1.0 / p);
            REQUIRE(lhs <= rhs + 1e-10);
        }
    }
}
