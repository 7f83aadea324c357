#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace widthlab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Spectral norm of a small matrix (largest singular value).
inline double spectral_norm(const Eigen::MatrixXd& m) {
    return m.jacobiSvd().singularValues()(0);
}

inline double smallest_singular_value(const Mat2& m) {
    Eigen::JacobiSVD<Mat2> svd(m);
    return svd.singularValues()(1);
}

/// Eigenvalue range of a symmetric 2x2 matrix.
inline std::pair<double, double> sym2_eig_range(const Mat2& a) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

/// det(I+Q) bracket used by the transform-perturbation constants:
/// (1-alpha)^d <= det(I+Q) <= (1+alpha)^d whenever alpha = ||Q||_2 < 1.
struct DetBounds {
    double lower;
    double upper;
};

inline DetBounds det_perturbation_bounds(double alpha, int d) {
    return {std::pow(1.0 - alpha, d), std::pow(1.0 + alpha, d)};
}

}  // namespace widthlab
