#pragma once

#include "widthlab/coefficient_field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace widthlab {

namespace detail {

struct SimpsonPanel {
    double x0, xm, x1;
    double f0, fm, f1;
    double integral;  // Simpson value over [x0, x1]
};

/// Adaptive Simpson refinement; accepted panels are collected left-to-right.
/// Panels are at least depth-2, so the top-level midpoint is always a panel
/// boundary.
inline void refine_simpson(const std::function<double(double)>& f, double x0, double x1, double f0,
                           double fm, double f1, double whole, double tol, int depth,
                           std::vector<SimpsonPanel>& leaves) {
    const double xm = 0.5 * (x0 + x1);
    const double xl = 0.5 * (x0 + xm), xr = 0.5 * (xm + x1);
    const double fl = f(xl), fr = f(xr);
    const double left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + fm);
    const double right = (x1 - xm) / 6.0 * (fm + 4.0 * fr + f1);
    const double err = (left + right - whole) / 15.0;
    if ((std::abs(err) <= tol && depth >= 2) || depth >= 48) {
        leaves.push_back({x0, xl, xm, f0, fl, fm, left});
        leaves.push_back({xm, xr, x1, fm, fr, f1, right});
        return;
    }
    refine_simpson(f, x0, xm, f0, fl, fm, left, tol / 2.0, depth + 1, leaves);
    refine_simpson(f, xm, x1, fm, fr, f1, right, tol / 2.0, depth + 1, leaves);
}

inline std::vector<SimpsonPanel> adaptive_simpson_panels(const std::function<double(double)>& f,
                                                         double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    std::vector<SimpsonPanel> leaves;
    refine_simpson(f, a, b, fa, fm, fb, whole, tol, 0, leaves);
    return leaves;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    double acc = 0.0;
    for (const auto& p : adaptive_simpson_panels(f, a, b, tol)) acc += p.integral;
    return acc;
}

}  // namespace detail

/// Exact solution of u_t + c(x) u_x = 0 on [0,1]x[-1,1] with a front entering
/// at x = 0: everything reduces to the breakthrough curve T(x) = int_0^x ds/c.
/// The curve is tabulated once by adaptive Simpson quadrature and evaluated by
/// the exact antiderivative of the per-panel quadratic interpolant of 1/c,
/// which carries the same order of accuracy as the quadrature itself.
class AdvectionSolution {
public:
    AdvectionSolution(std::vector<detail::SimpsonPanel> panels, double value_at_left, double r, double R)
        : panels_(std::move(panels)), r_(r), R_(R) {
        if (panels_.empty()) throw std::invalid_argument("AdvectionSolution: empty table");
        cumulative_.resize(panels_.size() + 1);
        cumulative_[0] = value_at_left;
        for (std::size_t i = 0; i < panels_.size(); ++i)
            cumulative_[i + 1] = cumulative_[i] + panels_[i].integral;
        for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i)
            if (!(cumulative_[i + 1] > cumulative_[i]))
                throw std::runtime_error("advection: breakthrough curve is not strictly increasing");
    }

    /// T(x) = int_0^x ds / c(s); strictly increasing with T(0) = 0.
    double breakthrough(double x) const {
        const double lo = panels_.front().x0, hi = panels_.back().x1;
        if (x <= lo) return cumulative_.front() + (x - lo) * panels_.front().f0;
        if (x >= hi) return cumulative_.back() + (x - hi) * panels_.back().f1;
        std::size_t a = 0, b = panels_.size() - 1;
        while (a < b) {
            const std::size_t m = (a + b + 1) / 2;
            if (panels_[m].x0 <= x)
                a = m;
            else
                b = m - 1;
        }
        const auto& p = panels_[a];
        const double h = p.x1 - p.x0;
        const double s = (x - p.x0) / h;
        // Integrated Lagrange weights of the quadratic through f at s=0,1/2,1;
        // at s=1 they reduce to Simpson (1/6, 2/3, 1/6), so the curve is
        // continuous across panel boundaries.
        const double w0 = ((2.0 / 3.0) * s - 1.5) * s * s + s;
        const double wm = (2.0 - (4.0 / 3.0) * s) * s * s;
        const double w1 = ((2.0 / 3.0) * s - 0.5) * s * s;
        return cumulative_[a] + h * (p.f0 * w0 + p.fm * wm + p.f1 * w1);
    }

    /// Indicator value of the transported front.
    double value(double t, double x) const { return t <= breakthrough(x) ? 1.0 : 0.0; }

    double lower_speed() const { return r_; }
    double upper_speed() const { return R_; }
    double domain_lo() const { return panels_.front().x0; }
    double domain_hi() const { return panels_.back().x1; }

    /// Table nodes (x, T) for diagnostics and slope checks.
    std::vector<std::pair<double, double>> table() const {
        std::vector<std::pair<double, double>> out;
        out.reserve(panels_.size() + 1);
        out.emplace_back(panels_.front().x0, cumulative_.front());
        for (std::size_t i = 0; i < panels_.size(); ++i)
            out.emplace_back(panels_[i].x1, cumulative_[i + 1]);
        return out;
    }

private:
    std::vector<detail::SimpsonPanel> panels_;
    std::vector<double> cumulative_;
    double r_, R_;
};

/// Tabulates the breakthrough curve of a speed field c on [-1,1] to absolute
/// tolerance tol. Speeds must stay inside the field's declared bounds;
/// positivity is always enforced.
inline AdvectionSolution solve_advection_exact(const CoefficientField& c, double tol = 1e-10) {
    if (c.kind != CoefficientField::Kind::Scalar)
        throw std::invalid_argument("solve_advection_exact: c must be a scalar field");
    const double r = c.ellipticity_bounds ? c.ellipticity_bounds->first : 0.0;
    const double R =
        c.ellipticity_bounds ? c.ellipticity_bounds->second : std::numeric_limits<double>::infinity();
    auto reciprocal = [&, r, R](double x) {
        const double v = c.scalar(Vec2(x, 0.0), 0.0);
        if (!(v > 0.0) || v < r - 1e-12)
            throw std::runtime_error("solve_advection_exact: speed below its lower bound at x=" +
                                     std::to_string(x));
        if (v > R + 1e-12)
            throw std::runtime_error("solve_advection_exact: speed above its upper bound at x=" +
                                     std::to_string(x));
        return 1.0 / v;
    };
    // The safety factor keeps both the cumulative quadrature error and the
    // per-panel interpolation error of breakthrough() within the caller's tol.
    auto panels = detail::adaptive_simpson_panels(reciprocal, -1.0, 1.0, tol / 16.0);
    // Anchor T(0) = 0. The top-level midpoint x=0 is a panel boundary.
    double at_zero = 0.0;
    for (const auto& p : panels) {
        if (p.x1 <= 0.0) at_zero += p.integral;
    }
    return AdvectionSolution(std::move(panels), -at_zero, r, R);
}

inline AdvectionSolution solve_advection_exact(const std::function<double(double)>& c, double r,
                                               double R, double tol = 1e-10) {
    auto field = CoefficientField::scalar_field([c](const Vec2& p, double) { return c(p.x()); });
    field.ellipticity_bounds = {r, R};
    return solve_advection_exact(field, tol);
}

/// L^p([0,1]x[-1,1]) distance of two transported fronts. The integrand of
/// |u - ubar|^p is {0,1}-valued, so the distance is exactly
///   ( int_{-1}^{1} | clamp_[0,1] T(x) - clamp_[0,1] Tbar(x) | dx )^{1/p},
/// and both curves are negative for x < 0, so only [0,1] contributes.
inline double advection_distance(const AdvectionSolution& s1, const AdvectionSolution& s2, double p) {
    if (p < 1.0) throw std::invalid_argument("advection_distance: p must be >= 1");
    auto clamped_gap = [&](double x) {
        const double a = std::clamp(s1.breakthrough(x), 0.0, 1.0);
        const double b = std::clamp(s2.breakthrough(x), 0.0, 1.0);
        return std::abs(a - b);
    };
    const double integral = detail::adaptive_simpson(clamped_gap, 0.0, 1.0, 1e-11);
    return std::pow(std::max(0.0, integral), 1.0 / p);
}

/// Piecewise-linear speed profile on [-1,1] with exact L1 arithmetic; the
/// semi-analytic ingredient of the advection Holder checks.
struct PiecewiseLinear {
    std::vector<double> xs;  // strictly increasing, spanning [-1, 1]
    std::vector<double> ys;

    double operator()(double x) const {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return ys[i] + t * (ys[i + 1] - ys[i]);
    }

    std::function<double(double)> fn() const {
        return [copy = *this](double x) { return copy(x); };
    }
};

/// Exact L1([-1,1]) distance: merge breakpoints and integrate each linear
/// piece of the difference, splitting at its sign change.
inline double exact_l1_distance(const PiecewiseLinear& a, const PiecewiseLinear& b) {
    std::vector<double> grid;
    grid.reserve(a.xs.size() + b.xs.size());
    grid.insert(grid.end(), a.xs.begin(), a.xs.end());
    grid.insert(grid.end(), b.xs.begin(), b.xs.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double x0 = grid[i], x1 = grid[i + 1];
        const double d0 = a(x0) - b(x0), d1 = a(x1) - b(x1);
        if (d0 * d1 >= 0.0) {
            acc += 0.5 * std::abs(d0 + d1) * (x1 - x0);
        } else {
            const double root = x0 + (x1 - x0) * d0 / (d0 - d1);
            acc += 0.5 * std::abs(d0) * (root - x0) + 0.5 * std::abs(d1) * (x1 - root);
        }
    }
    return acc;
}

}  // namespace widthlab
