#pragma once

#include "widthlab/assembly.hpp"
#include "widthlab/solve.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace widthlab {

/// Discrete solution: nodal values on a mesh, one row per time level for
/// trajectories. Pinned (Dirichlet) entries are exact zeros.
struct Snapshot {
    std::shared_ptr<const Mesh> mesh;
    Eigen::MatrixXd values;          // levels x nodes (1 x nodes when static)
    std::vector<double> time_grid;   // empty for static snapshots

    int levels() const { return static_cast<int>(values.rows()); }
    bool is_trajectory() const { return !time_grid.empty(); }
    Eigen::VectorXd level(int k) const { return values.row(k).transpose(); }

    static Snapshot static_field(std::shared_ptr<const Mesh> mesh, const Eigen::VectorXd& v) {
        Snapshot s;
        s.mesh = std::move(mesh);
        s.values = v.transpose();
        return s;
    }
};

enum class NormKind { L2, H10, L2T_H10, Hm1 };

/// Norm and spectral machinery for one mesh + pin set. The mass matrix, unit
/// stiffness and their factorizations are built once and shared read-only.
class FemSpace {
public:
    FemSpace(std::shared_ptr<const Mesh> mesh,
             std::initializer_list<NodeClass> pin = {NodeClass::OuterBoundary})
        : mesh_(std::move(mesh)),
          mass_(assemble_mass(*mesh_)),
          stiffness_(assemble_unit_stiffness(*mesh_)),
          map_(make_dirichlet_map(*mesh_, pin)) {
        reduced_stiffness_ = map_.reduce_matrix(stiffness_);
        reduced_mass_ = map_.reduce_matrix(mass_);
    }

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
    const DirichletMap& dirichlet_map() const { return map_; }
    const SpMat& mass() const { return mass_; }
    const SpMat& unit_stiffness() const { return stiffness_; }
    const SpMat& reduced_mass() const { return reduced_mass_; }
    const SpMat& reduced_unit_stiffness() const { return reduced_stiffness_; }

    double l2_norm(const Eigen::VectorXd& v) const { return std::sqrt(std::max(0.0, v.dot(mass_ * v))); }

    double h10_norm(const Eigen::VectorXd& v) const {
        return std::sqrt(std::max(0.0, v.dot(stiffness_ * v)));
    }

    /// Discrete H^-1 norm of a load functional: sqrt(F^T K^-1 F) on the
    /// pinned-reduced unit stiffness (the Riesz representative route).
    double h_minus1_norm(const Eigen::VectorXd& full_load) const {
        ensure_stiffness_factorization();
        const Eigen::VectorXd fr = map_.reduce(full_load);
        const Eigen::VectorXd v = stiffness_llt_->solve(fr);
        return std::sqrt(std::max(0.0, fr.dot(v)));
    }

    double norm(const Snapshot& s, NormKind which) const {
        if (s.values.cols() != mesh_->node_count())
            throw std::invalid_argument("norm: snapshot length does not match mesh");
        switch (which) {
            case NormKind::L2:
                require_static(s);
                return l2_norm(s.level(0));
            case NormKind::H10:
                require_static(s);
                return h10_norm(s.level(0));
            case NormKind::L2T_H10: {
                if (!s.is_trajectory())
                    throw std::invalid_argument("norm: L2T_H10 requires a time grid");
                // Trapezoid rule in time over squared H10 norms.
                double acc = 0.0;
                for (int k = 0; k + 1 < s.levels(); ++k) {
                    const double dt = s.time_grid[k + 1] - s.time_grid[k];
                    const double a = s.level(k).dot(stiffness_ * s.level(k));
                    const double b = s.level(k + 1).dot(stiffness_ * s.level(k + 1));
                    acc += 0.5 * dt * (a + b);
                }
                return std::sqrt(std::max(0.0, acc));
            }
            case NormKind::Hm1:
                require_static(s);
                return h_minus1_norm(s.level(0));
        }
        throw std::logic_error("norm: unknown kind");
    }

    /// Poincare constant C_P = lambda_min^{-1/2} of K v = lambda M v on the
    /// pinned system, by inverse power iteration to relative tolerance.
    double poincare_constant(double rel_tol = 1e-8, int max_iter = 10000) const {
        if (poincare_cache_ > 0.0) return poincare_cache_;
        ensure_stiffness_factorization();
        Eigen::VectorXd x = Eigen::VectorXd::Ones(map_.reduced_size());
        x /= std::sqrt(x.dot(reduced_mass_ * x));
        double lambda_prev = 0.0;
        for (int it = 0; it < max_iter; ++it) {
            Eigen::VectorXd y = stiffness_llt_->solve(reduced_mass_ * x);
            const double mn = std::sqrt(y.dot(reduced_mass_ * y));
            y /= mn;
            const double lambda = y.dot(reduced_stiffness_ * y);
            x.swap(y);
            if (it > 0 && std::abs(lambda - lambda_prev) <= rel_tol * lambda) {
                poincare_cache_ = 1.0 / std::sqrt(lambda);
                return poincare_cache_;
            }
            lambda_prev = lambda;
        }
        throw std::runtime_error("poincare_constant: inverse power iteration did not converge");
    }

    /// Solve the reduced SPD system K_r x = b_r with the cached factorization.
    Eigen::VectorXd solve_reduced_stiffness(const Eigen::VectorXd& reduced_rhs) const {
        ensure_stiffness_factorization();
        return stiffness_llt_->solve(reduced_rhs);
    }

private:
    void require_static(const Snapshot& s) const {
        if (s.levels() != 1)
            throw std::invalid_argument("norm: pointwise norm of a trajectory needs L2T_H10");
    }

    void ensure_stiffness_factorization() const {
        if (!stiffness_llt_) {
            stiffness_llt_ = std::make_unique<Eigen::SimplicialLLT<SpMat>>(reduced_stiffness_);
            if (stiffness_llt_->info() != Eigen::Success)
                throw std::runtime_error("FemSpace: reduced stiffness is not SPD");
        }
    }

    std::shared_ptr<const Mesh> mesh_;
    SpMat mass_;
    SpMat stiffness_;
    DirichletMap map_;
    SpMat reduced_stiffness_;
    SpMat reduced_mass_;
    mutable std::unique_ptr<Eigen::SimplicialLLT<SpMat>> stiffness_llt_;
    mutable double poincare_cache_ = -1.0;
};

}  // namespace widthlab
