#pragma once

#include "widthlab/linalg.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace widthlab {

/// Evaluable spatial (or space-time) coefficient: scalar, 2-vector, or
/// symmetric 2x2 matrix valued. Immutable after construction.
struct CoefficientField {
    enum class Kind { Scalar, Vector2, SymMatrix2 };

    Kind kind = Kind::Scalar;
    bool time_dependent = false;
    std::function<double(const Vec2&, double)> scalar_fn;
    std::function<Vec2(const Vec2&, double)> vector_fn;
    std::function<Mat2(const Vec2&, double)> matrix_fn;
    std::optional<double> lipschitz_hint;                    // spatial Lipschitz constant
    std::optional<std::pair<double, double>> ellipticity_bounds;  // r <= eig <= R

    double scalar(const Vec2& x, double t = 0.0) const { return scalar_fn(x, t); }
    Vec2 vector(const Vec2& x, double t = 0.0) const { return vector_fn(x, t); }
    Mat2 matrix(const Vec2& x, double t = 0.0) const { return matrix_fn(x, t); }

    static CoefficientField scalar_field(std::function<double(const Vec2&, double)> fn,
                                         bool time_dependent = false) {
        CoefficientField f;
        f.kind = Kind::Scalar;
        f.time_dependent = time_dependent;
        f.scalar_fn = std::move(fn);
        return f;
    }

    static CoefficientField constant(double value) {
        auto f = scalar_field([value](const Vec2&, double) { return value; });
        f.lipschitz_hint = 0.0;
        return f;
    }

    static CoefficientField vector2_field(std::function<Vec2(const Vec2&, double)> fn,
                                          bool time_dependent = false) {
        CoefficientField f;
        f.kind = Kind::Vector2;
        f.time_dependent = time_dependent;
        f.vector_fn = std::move(fn);
        return f;
    }

    static CoefficientField constant_vector2(const Vec2& value) {
        return vector2_field([value](const Vec2&, double) { return value; });
    }

    static CoefficientField sym_matrix2_field(std::function<Mat2(const Vec2&, double)> fn,
                                              bool time_dependent = false) {
        CoefficientField f;
        f.kind = Kind::SymMatrix2;
        f.time_dependent = time_dependent;
        f.matrix_fn = std::move(fn);
        return f;
    }

    /// scalar(x,t) * I2, the matrix form every isotropic example uses.
    static CoefficientField isotropic(std::function<double(const Vec2&, double)> fn,
                                      bool time_dependent = false) {
        auto wrapped = [fn = std::move(fn)](const Vec2& x, double t) {
            return Mat2(fn(x, t) * Mat2::Identity());
        };
        return sym_matrix2_field(wrapped, time_dependent);
    }

    static CoefficientField identity_matrix(double scale = 1.0) {
        auto f = sym_matrix2_field([scale](const Vec2&, double) { return Mat2(scale * Mat2::Identity()); });
        f.lipschitz_hint = 0.0;
        f.ellipticity_bounds = {scale, scale};
        return f;
    }
};

/// Piecewise-constant scalar field on a K-by-K cell grid over a rectangle,
/// value values[i*K + j] on cell [i/K,(i+1)/K) x [j/K,(j+1)/K) of the
/// normalized rectangle. Points outside clamp to the nearest cell.
inline CoefficientField grid_cell_field(double x_lo, double x_hi, double y_lo, double y_hi, int K,
                                        std::vector<double> values) {
    if (K < 1 || static_cast<int>(values.size()) != K * K)
        throw std::invalid_argument("grid_cell_field: need K*K values");
    const double wx = (x_hi - x_lo) / K, wy = (y_hi - y_lo) / K;
    auto fn = [=, values = std::move(values)](const Vec2& p, double) {
        int i = static_cast<int>(std::floor((p.x() - x_lo) / wx));
        int j = static_cast<int>(std::floor((p.y() - y_lo) / wy));
        i = std::min(std::max(i, 0), K - 1);
        j = std::min(std::max(j, 0), K - 1);
        return values[static_cast<std::size_t>(i) * K + j];
    };
    return CoefficientField::scalar_field(fn);
}

/// Sampled invariant checks: symmetry of matrix values to 1e-14 and, when
/// declared, eigenvalues inside the ellipticity bounds on a grid of points.
inline void validate_field_samples(const CoefficientField& f, const std::vector<Vec2>& points,
                                   const std::vector<double>& times = {0.0}) {
    if (f.kind != CoefficientField::Kind::SymMatrix2) return;
    const auto bounds = f.ellipticity_bounds;
    for (double t : times) {
        for (const auto& p : points) {
            const Mat2 a = f.matrix(p, t);
            if (std::abs(a(0, 1) - a(1, 0)) > 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff()))
                throw std::runtime_error("coefficient field: matrix value is not symmetric");
            if (bounds) {
                const auto [lo, hi] = sym2_eig_range(a);
                if (lo < bounds->first - 1e-10 || hi > bounds->second + 1e-10)
                    throw std::runtime_error("coefficient field: sampled eigenvalue outside ellipticity bounds");
            }
        }
    }
}

}  // namespace widthlab
