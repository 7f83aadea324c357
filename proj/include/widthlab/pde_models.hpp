#pragma once

#include "widthlab/fem_space.hpp"
#include "widthlab/transforms.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace widthlab {

/// Galerkin solution of -div(a grad u) + c u = f with homogeneous Dirichlet
/// data on the outer boundary (plus the interface when pinned).
inline Snapshot solve_elliptic_fixed(const CoefficientField& a, const CoefficientField* c,
                                     const CoefficientField& f, std::shared_ptr<const Mesh> mesh,
                                     std::initializer_list<NodeClass> pin = {NodeClass::OuterBoundary},
                                     double tol = 1e-10) {
    if (c) {
        // reaction coefficient must be nonnegative for this model
        for (int t = 0; t < std::min(mesh->triangle_count(), 64); ++t) {
            const auto quad = tri_quadrature(*mesh, t);
            for (const auto& q : quad.points)
                if (c->scalar(q, 0.0) < -1e-12)
                    throw std::invalid_argument("solve_elliptic_fixed: reaction coefficient is negative");
        }
    }
    const SpMat K = assemble_elliptic(*mesh, a, c);
    const Eigen::VectorXd F = assemble_load(*mesh, f);
    const auto sys = apply_dirichlet(K, F, *mesh, pin);
    const Eigen::VectorXd u = solve_linear(sys.matrix, sys.rhs, true, tol);
    return Snapshot::static_field(std::move(mesh), sys.map.expand(u));
}

/// Backward-Euler trajectory of the parabolic problem
///   u' - div(a grad u) + b . grad u + c u = f,  u(0) = P_{L2} g,
/// with coefficients evaluated at the new time level. The load enters as a
/// callback t -> assembled load vector, the initial state as a load vector.
/// Unstabilized transport requires mesh Peclet ||b|| h / (2r) < 1, asserted
/// up front.
inline Snapshot solve_parabolic_loads(const CoefficientField& a, const CoefficientField& b,
                                      const CoefficientField& c,
                                      const std::function<Eigen::VectorXd(double)>& load_at,
                                      const Eigen::VectorXd& g_load, std::shared_ptr<const Mesh> mesh,
                                      int steps, double T, double tol = 1e-10) {
    if (steps < 1) throw std::invalid_argument("solve_parabolic: steps must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("solve_parabolic: T must be positive");
    if (!a.ellipticity_bounds)
        throw std::invalid_argument("solve_parabolic: diffusion field needs ellipticity bounds");
    const double r = a.ellipticity_bounds->first;

    // Peclet guard on sampled transport magnitudes.
    double b_max = 0.0;
    for (int t = 0; t < mesh->triangle_count(); t += std::max(1, mesh->triangle_count() / 64)) {
        const auto quad = tri_quadrature(*mesh, t);
        for (const auto& q : quad.points) b_max = std::max(b_max, b.vector(q, 0.0).norm());
    }
    const double h = mesh->mean_edge_length();
    if (!(b_max * h / (2.0 * r) < 1.0))
        throw std::runtime_error("solve_parabolic: mesh Peclet number b*h/(2r) >= 1, refine the mesh");

    const DirichletMap map = make_dirichlet_map(*mesh, {NodeClass::OuterBoundary});
    const SpMat mass = assemble_mass(*mesh);
    const SpMat mass_r = map.reduce_matrix(mass);
    const double dt = T / steps;

    Snapshot traj;
    traj.mesh = mesh;
    traj.values.resize(steps + 1, mesh->node_count());
    traj.time_grid.resize(steps + 1);
    for (int n = 0; n <= steps; ++n) traj.time_grid[n] = dt * n;

    // u(0): L2 projection onto the pinned-to-zero subspace.
    Eigen::SimplicialLLT<SpMat> mass_llt(mass_r);
    if (mass_llt.info() != Eigen::Success) throw std::runtime_error("solve_parabolic: mass matrix not SPD");
    Eigen::VectorXd u = mass_llt.solve(map.reduce(g_load));
    traj.values.row(0) = map.expand(u).transpose();

    const bool coeffs_static = !a.time_dependent && !b.time_dependent && !c.time_dependent;

    Eigen::SparseLU<SpMat> lu;
    SpMat step_matrix;
    auto build_step_matrix = [&](double t_new) {
        const SpMat K = assemble_elliptic(*mesh, a, nullptr, t_new);
        const SpMat B = assemble_advection_reaction(*mesh, b, c, t_new);
        step_matrix = map.reduce_matrix(K) + map.reduce_matrix(B) + SpMat((1.0 / dt) * mass_r);
        lu.compute(step_matrix);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("solve_parabolic: singular step matrix");
    };

    if (coeffs_static) build_step_matrix(dt);
    for (int n = 1; n <= steps; ++n) {
        const double t_new = dt * n;
        if (!coeffs_static) build_step_matrix(t_new);
        const Eigen::VectorXd rhs = (1.0 / dt) * (mass_r * u) + map.reduce(load_at(t_new));
        u = lu.solve(rhs);
        const double residual = (step_matrix * u - rhs).norm();
        if (!(residual <= tol * (1.0 + rhs.norm())))
            throw std::runtime_error("solve_parabolic: step solve exceeded the residual tolerance");
        traj.values.row(n) = map.expand(u).transpose();
    }
    return traj;
}

inline Snapshot solve_parabolic(const CoefficientField& a, const CoefficientField& b,
                                const CoefficientField& c, const CoefficientField& f,
                                const CoefficientField& g, std::shared_ptr<const Mesh> mesh, int steps,
                                double T, double tol = 1e-10) {
    Eigen::VectorXd cached_load;
    if (!f.time_dependent) cached_load = assemble_load(*mesh, f);
    auto load_at = [mesh, f, cached_load](double t) {
        return f.time_dependent ? assemble_load(*mesh, f, t) : cached_load;
    };
    return solve_parabolic_loads(a, b, c, load_at, assemble_load(*mesh, g), mesh, steps, T, tol);
}

/// Extended-domain solve for a parametrized subdomain: solve on the whole
/// master-domain mesh transported by the family, with zero data on the outer
/// boundary and on the transported interface. The restriction to the inner
/// (or outer) side of the interface is the subdomain solution.
inline Snapshot solve_elliptic_vardomain(const CoefficientField& a, const CoefficientField& f,
                                         const Eigen::VectorXd& lambda, const TransformFamily& family,
                                         const Mesh& ref_mesh, double tol = 1e-10) {
    if (!family.param_set.contains(lambda, 1e-9))
        throw std::invalid_argument("solve_elliptic_vardomain: lambda outside the parameter set");
    auto mapped = std::make_shared<const Mesh>(map_mesh(ref_mesh, family.at(lambda)));
    return solve_elliptic_fixed(a, nullptr, f, mapped,
                                {NodeClass::OuterBoundary, NodeClass::Interface}, tol);
}

/// Constant-time point location by uniform binning of triangle boxes.
class TriangleLocator {
public:
    explicit TriangleLocator(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
        const auto& nodes = mesh_->nodes;
        lo_ = hi_ = nodes.front();
        for (const auto& p : nodes) {
            lo_ = lo_.cwiseMin(p);
            hi_ = hi_.cwiseMax(p);
        }
        const double h = std::max(mesh_->mean_edge_length(), 1e-12);
        nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x() - lo_.x()) / h)));
        ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y() - lo_.y()) / h)));
        bins_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (int t = 0; t < mesh_->triangle_count(); ++t) {
            Vec2 tlo = nodes[mesh_->triangles[t][0]], thi = tlo;
            for (int v : mesh_->triangles[t]) {
                tlo = tlo.cwiseMin(nodes[v]);
                thi = thi.cwiseMax(nodes[v]);
            }
            const auto [i0, j0] = cell_of(tlo);
            const auto [i1, j1] = cell_of(thi);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) bins_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
        }
    }

    /// P1 interpolation of nodal values at p, or nullopt outside the mesh.
    std::optional<double> interpolate(const Eigen::VectorXd& nodal, const Vec2& p) const {
        if (p.x() < lo_.x() - 1e-12 || p.x() > hi_.x() + 1e-12 || p.y() < lo_.y() - 1e-12 ||
            p.y() > hi_.y() + 1e-12)
            return std::nullopt;
        const auto [ci, cj] = cell_of(p);
        for (int t : bins_[static_cast<std::size_t>(cj) * nx_ + ci]) {
            const auto& tri = mesh_->triangles[t];
            const Vec2 p0 = mesh_->nodes[tri[0]], p1 = mesh_->nodes[tri[1]], p2 = mesh_->nodes[tri[2]];
            const double den = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
            const double b1 = ((p - p0).x() * (p2 - p0).y() - (p - p0).y() * (p2 - p0).x()) / den;
            const double b2 = ((p1 - p0).x() * (p - p0).y() - (p1 - p0).y() * (p - p0).x()) / den;
            const double b0 = 1.0 - b1 - b2;
            const double eps = -1e-10;
            if (b0 >= eps && b1 >= eps && b2 >= eps)
                return b0 * nodal[tri[0]] + b1 * nodal[tri[1]] + b2 * nodal[tri[2]];
        }
        return std::nullopt;
    }

private:
    std::pair<int, int> cell_of(const Vec2& p) const {
        const int i = std::clamp(static_cast<int>((p.x() - lo_.x()) / (hi_.x() - lo_.x()) * nx_), 0, nx_ - 1);
        const int j = std::clamp(static_cast<int>((p.y() - lo_.y()) / (hi_.y() - lo_.y()) * ny_), 0, ny_ - 1);
        return {i, j};
    }

    std::shared_ptr<const Mesh> mesh_;
    Vec2 lo_, hi_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> bins_;
};

/// L2 distance over the master domain between snapshots living on two images
/// of one reference mesh. Identical meshes take the exact mass-matrix route;
/// otherwise both fields are sampled on a fixed tensor Gauss grid (2x2 points
/// per cell of size half the mean edge, i.e. at least 4 points per cell
/// diameter) through their own P1 interpolants. Points outside a mesh are on
/// the master-domain boundary up to the polygonal gap and contribute zero.
inline double l2_distance_crossmesh(const Snapshot& s1, const Snapshot& s2) {
    if (s1.levels() != 1 || s2.levels() != 1)
        throw std::invalid_argument("l2_distance_crossmesh: static snapshots only");
    const Mesh& m1 = *s1.mesh;
    const Mesh& m2 = *s2.mesh;
    if (m1.node_count() != m2.node_count() || m1.triangle_count() != m2.triangle_count())
        throw std::invalid_argument("l2_distance_crossmesh: meshes are not images of one reference mesh");

    const bool identical = [&] {
        for (int i = 0; i < m1.node_count(); ++i)
            if (m1.nodes[i] != m2.nodes[i]) return false;
        return true;
    }();
    if (identical) {
        const SpMat mass = assemble_mass(m1);
        const Eigen::VectorXd d = s1.level(0) - s2.level(0);
        return std::sqrt(std::max(0.0, d.dot(mass * d)));
    }

    Vec2 lo = m1.nodes.front(), hi = lo;
    for (const auto& p : m1.nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    for (const auto& p : m2.nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double h = 0.5 * std::min(m1.mean_edge_length(), m2.mean_edge_length());
    const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / h)));
    const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / h)));
    const double cx = (hi.x() - lo.x()) / nx, cy = (hi.y() - lo.y()) / ny;

    const TriangleLocator loc1(s1.mesh), loc2(s2.mesh);
    const Eigen::VectorXd v1 = s1.level(0), v2 = s2.level(0);
    const double offset = 0.5 / std::sqrt(3.0);  // 2-point Gauss in each direction
    double acc = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            for (int gj = 0; gj < 2; ++gj) {
                for (int gi = 0; gi < 2; ++gi) {
                    const Vec2 p(lo.x() + (i + 0.5 + (gi ? offset : -offset)) * cx,
                                 lo.y() + (j + 0.5 + (gj ? offset : -offset)) * cy);
                    const double a = loc1.interpolate(v1, p).value_or(0.0);
                    const double b = loc2.interpolate(v2, p).value_or(0.0);
                    acc += (a - b) * (a - b) * (cx * cy / 4.0);
                }
            }
        }
    }
    return std::sqrt(acc);
}

/// Coefficient transport under a domain automorphism beta:
///   a~(y) = J a J^T / det J  and  f~(y) = f / det J, both at x = beta^{-1}(y).
/// Solving with (a~, f~) on beta(Omega) reproduces u o beta^{-1}.
inline std::pair<CoefficientField, CoefficientField> pushforward_coefficients(
    const CoefficientField& a, const CoefficientField& f, const Transform& beta) {
    if (a.kind != CoefficientField::Kind::SymMatrix2)
        throw std::invalid_argument("pushforward_coefficients: a must be a sym_matrix2 field");
    if (f.kind != CoefficientField::Kind::Scalar)
        throw std::invalid_argument("pushforward_coefficients: f must be a scalar field");

    auto a_new = CoefficientField::sym_matrix2_field(
        [a, beta](const Vec2& y, double t) {
            const Vec2 x = beta.inverse(y);
            const Mat2 J = beta.jacobian(x);
            const double det = J.determinant();
            if (!(det > 0.0))
                throw std::runtime_error("pushforward_coefficients: non-invertible Jacobian");
            return Mat2((J * a.matrix(x, t) * J.transpose()) / det);
        },
        a.time_dependent);
    auto f_new = CoefficientField::scalar_field(
        [f, beta](const Vec2& y, double t) {
            const Vec2 x = beta.inverse(y);
            const double det = beta.jacobian(x).determinant();
            if (!(det > 0.0))
                throw std::runtime_error("pushforward_coefficients: non-invertible Jacobian");
            return f.scalar(x, t) / det;
        },
        f.time_dependent);
    return {std::move(a_new), std::move(f_new)};
}

}  // namespace widthlab
