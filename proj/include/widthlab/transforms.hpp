#pragma once

#include "widthlab/convex_sets.hpp"
#include "widthlab/linalg.hpp"
#include "widthlab/mesh.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace widthlab {

/// C^1 domain transformation with explicit Jacobian and inverse.
struct Transform {
    std::function<Vec2(const Vec2&)> forward;
    std::function<Mat2(const Vec2&)> jacobian;
    std::function<Vec2(const Vec2&)> inverse;
};

inline Transform identity_transform() {
    Transform t;
    t.forward = [](const Vec2& p) { return p; };
    t.jacobian = [](const Vec2&) { return Mat2(Mat2::Identity()); };
    t.inverse = [](const Vec2& p) { return p; };
    return t;
}

namespace detail {

/// Newton solve of x + g(x) = y for monotone 1D maps with g' > -1.
inline double invert_monotone_1d(double y, const std::function<double(double)>& g,
                                 const std::function<double(double)>& dg) {
    double x = y;
    for (int it = 0; it < 100; ++it) {
        const double f = x + g(x) - y;
        if (std::abs(f) <= 1e-14 * (1.0 + std::abs(y))) return x;
        x -= f / (1.0 + dg(x));
    }
    throw std::runtime_error("transform inverse: Newton did not converge");
}

}  // namespace detail

/// Family of transformations indexed by a parameter set Lambda, with the
/// identity at lambda = 0.
struct TransformFamily {
    enum class Kind { Rotation, SineStretch, CurveStretch };

    Kind kind;
    ConvexSet param_set;

    Transform at(const Eigen::VectorXd& lambda) const {
        switch (kind) {
            case Kind::Rotation: {
                if (lambda.size() != 1) throw std::invalid_argument("rotation family: lambda must be 1-d");
                const double c = std::cos(lambda[0]), s = std::sin(lambda[0]);
                Mat2 rot;
                rot << c, -s, s, c;
                const Mat2 inv = rot.transpose();
                Transform t;
                t.forward = [rot](const Vec2& p) { return Vec2(rot * p); };
                t.jacobian = [rot](const Vec2&) { return rot; };
                t.inverse = [inv](const Vec2& p) { return Vec2(inv * p); };
                return t;
            }
            case Kind::SineStretch: {
                if (lambda.size() != 2) throw std::invalid_argument("sine stretch family: lambda must be 2-d");
                const double l1 = lambda[0], l2 = lambda[1];
                Transform t;
                t.forward = [l1, l2](const Vec2& p) {
                    return Vec2(p.x() + l1 * std::sin(p.x()), p.y() + l2 * std::sin(p.y()));
                };
                t.jacobian = [l1, l2](const Vec2& p) {
                    Mat2 j = Mat2::Zero();
                    j(0, 0) = 1.0 + l1 * std::cos(p.x());
                    j(1, 1) = 1.0 + l2 * std::cos(p.y());
                    return j;
                };
                t.inverse = [l1, l2](const Vec2& p) {
                    const double x1 = detail::invert_monotone_1d(
                        p.x(), [l1](double x) { return l1 * std::sin(x); },
                        [l1](double x) { return l1 * std::cos(x); });
                    const double x2 = detail::invert_monotone_1d(
                        p.y(), [l2](double x) { return l2 * std::sin(x); },
                        [l2](double x) { return l2 * std::cos(x); });
                    return Vec2(x1, x2);
                };
                return t;
            }
            case Kind::CurveStretch: {
                // lambda = (a_1, b_1, ..., a_n, b_n); the curve offset is
                //   rho(x1) = sum sqrt(6)/(k^2 pi) (a_k cos k x1 + b_k sin k x1).
                if (lambda.size() % 2 != 0)
                    throw std::invalid_argument("curve stretch family: lambda must pair (a_k, b_k)");
                const Eigen::VectorXd coeff = lambda;
                auto rho = [coeff](double x1) {
                    double acc = 0.0;
                    for (int k = 1; 2 * k <= coeff.size(); ++k)
                        acc += std::sqrt(6.0) / (k * k * M_PI) *
                               (coeff[2 * k - 2] * std::cos(k * x1) + coeff[2 * k - 1] * std::sin(k * x1));
                    return acc;
                };
                auto drho = [coeff](double x1) {
                    double acc = 0.0;
                    for (int k = 1; 2 * k <= coeff.size(); ++k)
                        acc += std::sqrt(6.0) / (k * M_PI) *
                               (-coeff[2 * k - 2] * std::sin(k * x1) + coeff[2 * k - 1] * std::cos(k * x1));
                    return acc;
                };
                Transform t;
                t.forward = [rho](const Vec2& p) {
                    return Vec2(p.x(), p.y() + rho(p.x()) * std::sin(p.y()));
                };
                t.jacobian = [rho, drho](const Vec2& p) {
                    Mat2 j;
                    j << 1.0, 0.0, drho(p.x()) * std::sin(p.y()), 1.0 + rho(p.x()) * std::cos(p.y());
                    return j;
                };
                t.inverse = [rho](const Vec2& p) {
                    const double r = rho(p.x());
                    const double x2 = detail::invert_monotone_1d(
                        p.y(), [r](double x) { return r * std::sin(x); },
                        [r](double x) { return r * std::cos(x); });
                    return Vec2(p.x(), x2);
                };
                return t;
            }
        }
        throw std::logic_error("TransformFamily: unknown kind");
    }
};

/// Disk rotating an interior feature around the origin; Lambda = [-pi, pi].
inline TransformFamily rotation_family() {
    return {TransformFamily::Kind::Rotation, ConvexSet::cube(1, -M_PI, M_PI)};
}

/// Axis-wise sine stretch on (-pi,pi)^2; Lambda = [-1/2, 1/2]^2.
inline TransformFamily sine_stretch_family() {
    return {TransformFamily::Kind::SineStretch, ConvexSet::cube(2, -0.5, 0.5)};
}

/// Vertical stretch under a trigonometric curve on (-pi,pi)x(0,pi);
/// Lambda = { sum (a_k^2+b_k^2)/w_k <= (3/8)^2 } truncated to n_active pairs.
inline TransformFamily curve_stretch_family(const std::vector<double>& block_weights, int n_active) {
    if (n_active < 1 || n_active > static_cast<int>(block_weights.size()))
        throw std::invalid_argument("curve_stretch_family: bad active block count");
    Eigen::VectorXd w(2 * n_active);
    for (int k = 0; k < n_active; ++k) {
        w[2 * k] = block_weights[k];
        w[2 * k + 1] = block_weights[k];
    }
    return {TransformFamily::Kind::CurveStretch, ConvexSet::weighted_ellipsoid(w, 3.0 / 8.0)};
}

/// Sample cloud for sup-type transform diagnostics: nodes plus centroids.
inline std::vector<Vec2> transform_sample_points(const Mesh& mesh) {
    std::vector<Vec2> pts = mesh.nodes;
    pts.reserve(pts.size() + mesh.triangles.size());
    for (const auto& tri : mesh.triangles)
        pts.push_back((mesh.nodes[tri[0]] + mesh.nodes[tri[1]] + mesh.nodes[tri[2]]) / 3.0);
    return pts;
}

/// Sampled C^1 distance from the identity of beta = T_lambda2 o T_lambda1^{-1}:
///   max over samples of max(|beta(x) - x|, ||d beta/dx - I||_2).
/// A lower estimate of the true sup; density comes from the sample cloud.
inline double delta_beta(const TransformFamily& family, const Eigen::VectorXd& lambda1,
                         const Eigen::VectorXd& lambda2, const std::vector<Vec2>& sample_points) {
    const Transform t1 = family.at(lambda1);
    const Transform t2 = family.at(lambda2);
    double worst = 0.0;
    for (const Vec2& x : sample_points) {
        const Vec2 w = t1.inverse(x);
        const Vec2 bx = t2.forward(w);
        const Mat2 jb = t2.jacobian(w) * t1.jacobian(w).inverse();
        worst = std::max(worst, (bx - x).norm());
        worst = std::max(worst, spectral_norm(Mat2(jb - Mat2::Identity())));
    }
    return worst;
}

}  // namespace widthlab
