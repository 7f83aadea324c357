#pragma once

#include "widthlab/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <sstream>
#include <stdexcept>

namespace widthlab {

/// Direct sparse solve with a residual guarantee: ||Ax-b|| <= tol*(1+||b||).
/// Symmetric systems go through Cholesky, general ones through sparse LU.
inline Eigen::VectorXd solve_linear(const SpMat& matrix, const Eigen::VectorXd& rhs,
                                    bool symmetric_hint, double tol = 1e-10) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
    if (matrix.rows() != rhs.size()) throw std::invalid_argument("solve_linear: rhs size mismatch");

    Eigen::VectorXd x;
    if (symmetric_hint) {
        Eigen::SimplicialLLT<SpMat> chol(matrix);
        if (chol.info() != Eigen::Success)
            throw std::runtime_error("solve_linear: Cholesky factorization failed (matrix not SPD?)");
        x = chol.solve(rhs);
    } else {
        Eigen::SparseLU<SpMat> lu;
        lu.analyzePattern(matrix);
        lu.factorize(matrix);
        if (lu.info() != Eigen::Success) throw std::runtime_error("solve_linear: LU factorization failed");
        x = lu.solve(rhs);
    }
    const double residual = (matrix * x - rhs).norm();
    if (!(residual <= tol * (1.0 + rhs.norm()))) {
        std::ostringstream msg;
        msg << "solve_linear: residual " << residual << " exceeds tolerance " << tol * (1.0 + rhs.norm());
        throw std::runtime_error(msg.str());
    }
    return x;
}

}  // namespace widthlab
