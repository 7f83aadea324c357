#pragma once

#include "widthlab/coefficient_field.hpp"
#include "widthlab/mesh.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <vector>

namespace widthlab {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// 3-point Gauss rule on the reference triangle (degree-2 exact), mapped to a
/// physical triangle. Barycentric weights are all 1/3.
struct TriQuadrature {
    std::array<Vec2, 3> points;
    double weight;  // per point: |T|/3
};

inline TriQuadrature tri_quadrature(const Mesh& mesh, int t) {
    static constexpr double b[3][3] = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                                       {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                                       {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
    TriQuadrature q;
    for (int k = 0; k < 3; ++k) q.points[k] = b[k][0] * p0 + b[k][1] * p1 + b[k][2] * p2;
    q.weight = mesh.signed_area(t) / 3.0;
    return q;
}

/// Constant P1 shape-function gradients on a triangle.
inline std::array<Vec2, 3> p1_gradients(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
    const double two_area = 2.0 * mesh.signed_area(t);
    return {Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / two_area,
            Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / two_area,
            Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / two_area};
}

/// Barycentric values of the P1 basis at the 3 Gauss points.
inline double p1_basis_at_gauss(int point, int vertex) {
    static constexpr double b[3][3] = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                                       {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                                       {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
    return b[point][vertex];
}

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::runtime_error(std::string("assembly: non-finite ") + what +
                                                    " value at a quadrature point");
}
}  // namespace detail

/// Stiffness (+ optional reaction mass) matrix of the form
///   integral (grad u)^T a grad v + c u v
/// over all nodes; Dirichlet rows are not eliminated here. When the field
/// declares ellipticity bounds they are enforced at every quadrature point.
inline SpMat assemble_elliptic(const Mesh& mesh, const CoefficientField& a,
                               const CoefficientField* c = nullptr, double t = 0.0) {
    if (a.kind != CoefficientField::Kind::SymMatrix2)
        throw std::invalid_argument("assemble_elliptic: a must be a sym_matrix2 field");
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
    for (int tr = 0; tr < mesh.triangle_count(); ++tr) {
        const auto grads = p1_gradients(mesh, tr);
        const auto quad = tri_quadrature(mesh, tr);
        const auto& tri = mesh.triangles[tr];
        Eigen::Matrix3d ke = Eigen::Matrix3d::Zero();
        for (int q = 0; q < 3; ++q) {
            const Mat2 aval = a.matrix(quad.points[q], t);
            detail::require_finite(aval.sum(), "diffusion");
            if (a.ellipticity_bounds) {
                const auto [lo, hi] = sym2_eig_range(aval);
                if (lo < a.ellipticity_bounds->first - 1e-10 || hi > a.ellipticity_bounds->second + 1e-10)
                    throw std::runtime_error("assemble_elliptic: ellipticity violation at a quadrature point");
            }
            double cval = 0.0;
            if (c) {
                cval = c->scalar(quad.points[q], t);
                detail::require_finite(cval, "reaction");
            }
            for (int i = 0; i < 3; ++i) {
                const Vec2 agi = aval * grads[i];
                for (int j = 0; j < 3; ++j) {
                    double entry = quad.weight * grads[j].dot(agi);
                    if (c)
                        entry += quad.weight * cval * p1_basis_at_gauss(q, i) * p1_basis_at_gauss(q, j);
                    ke(j, i) += entry;
                }
            }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trips.emplace_back(tri[j], tri[i], ke(j, i));
    }
    SpMat mat(mesh.node_count(), mesh.node_count());
    mat.setFromTriplets(trips.begin(), trips.end());
    return mat;
}

/// Advection-reaction matrix for integral of v b^T grad u + c u v at fixed t.
/// Generally nonsymmetric.
inline SpMat assemble_advection_reaction(const Mesh& mesh, const CoefficientField& b,
                                         const CoefficientField& c, double t = 0.0) {
    if (b.kind != CoefficientField::Kind::Vector2)
        throw std::invalid_argument("assemble_advection_reaction: b must be a vector2 field");
    if (c.kind != CoefficientField::Kind::Scalar)
        throw std::invalid_argument("assemble_advection_reaction: c must be a scalar field");
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
    for (int tr = 0; tr < mesh.triangle_count(); ++tr) {
        const auto grads = p1_gradients(mesh, tr);
        const auto quad = tri_quadrature(mesh, tr);
        const auto& tri = mesh.triangles[tr];
        for (int q = 0; q < 3; ++q) {
            const Vec2 bval = b.vector(quad.points[q], t);
            const double cval = c.scalar(quad.points[q], t);
            detail::require_finite(bval.sum(), "advection");
            detail::require_finite(cval, "reaction");
            for (int i = 0; i < 3; ++i) {  // trial u
                for (int j = 0; j < 3; ++j) {  // test v
                    const double entry =
                        quad.weight * p1_basis_at_gauss(q, j) *
                        (bval.dot(grads[i]) + cval * p1_basis_at_gauss(q, i));
                    trips.emplace_back(tri[j], tri[i], entry);
                }
            }
        }
    }
    SpMat mat(mesh.node_count(), mesh.node_count());
    mat.setFromTriplets(trips.begin(), trips.end());
    return mat;
}

/// Exact P1 mass matrix (the 3-point rule is degree-2 exact).
inline SpMat assemble_mass(const Mesh& mesh) {
    const CoefficientField one = CoefficientField::constant(1.0);
    const CoefficientField zero_b = CoefficientField::constant_vector2(Vec2::Zero());
    return assemble_advection_reaction(mesh, zero_b, one, 0.0);
}

/// Unit-coefficient stiffness, the H^1_0 Gram matrix.
inline SpMat assemble_unit_stiffness(const Mesh& mesh) {
    return assemble_elliptic(mesh, CoefficientField::identity_matrix());
}

/// Load vector integral of f v by the 3-point rule.
inline Eigen::VectorXd assemble_load(const Mesh& mesh, const CoefficientField& f, double t = 0.0) {
    if (f.kind != CoefficientField::Kind::Scalar)
        throw std::invalid_argument("assemble_load: f must be a scalar field");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.node_count());
    for (int tr = 0; tr < mesh.triangle_count(); ++tr) {
        const auto quad = tri_quadrature(mesh, tr);
        const auto& tri = mesh.triangles[tr];
        for (int q = 0; q < 3; ++q) {
            const double fval = f.scalar(quad.points[q], t);
            detail::require_finite(fval, "load");
            for (int j = 0; j < 3; ++j) rhs[tri[j]] += quad.weight * fval * p1_basis_at_gauss(q, j);
        }
    }
    return rhs;
}

/// Index map between the full node set and the free (unpinned) subset.
/// Reconstruction places exact zeros at pinned nodes.
struct DirichletMap {
    int full_size = 0;
    std::vector<int> keep;             // free node -> full node
    std::vector<int> full_to_reduced;  // full node -> free index or -1

    int reduced_size() const { return static_cast<int>(keep.size()); }

    Eigen::VectorXd reduce(const Eigen::VectorXd& full) const {
        Eigen::VectorXd out(reduced_size());
        for (int i = 0; i < reduced_size(); ++i) out[i] = full[keep[i]];
        return out;
    }

    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(full_size);
        for (int i = 0; i < reduced_size(); ++i) out[keep[i]] = reduced[i];
        return out;
    }

    SpMat reduce_matrix(const SpMat& full) const {
        std::vector<Triplet> trips;
        trips.reserve(full.nonZeros());
        for (int k = 0; k < full.outerSize(); ++k) {
            for (SpMat::InnerIterator it(full, k); it; ++it) {
                const int r = full_to_reduced[it.row()];
                const int c = full_to_reduced[it.col()];
                if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
            }
        }
        SpMat out(reduced_size(), reduced_size());
        out.setFromTriplets(trips.begin(), trips.end());
        return out;
    }
};

inline DirichletMap make_dirichlet_map(const Mesh& mesh, std::initializer_list<NodeClass> pin) {
    if (pin.size() == 0) throw std::invalid_argument("make_dirichlet_map: pin set must be nonempty");
    std::set<NodeClass> pinned(pin);
    DirichletMap map;
    map.full_size = mesh.node_count();
    map.full_to_reduced.assign(mesh.node_count(), -1);
    for (int i = 0; i < mesh.node_count(); ++i) {
        if (!pinned.count(mesh.node_class[i])) {
            map.full_to_reduced[i] = static_cast<int>(map.keep.size());
            map.keep.push_back(i);
        }
    }
    if (map.keep.empty()) throw std::invalid_argument("make_dirichlet_map: all nodes pinned, empty system");
    return map;
}

/// Eliminates pinned rows/columns of (matrix, rhs).
struct ReducedSystem {
    SpMat matrix;
    Eigen::VectorXd rhs;
    DirichletMap map;
};

inline ReducedSystem apply_dirichlet(const SpMat& matrix, const Eigen::VectorXd& rhs, const Mesh& mesh,
                                     std::initializer_list<NodeClass> pin) {
    DirichletMap map = make_dirichlet_map(mesh, pin);
    return {map.reduce_matrix(matrix), map.reduce(rhs), std::move(map)};
}

}  // namespace widthlab
