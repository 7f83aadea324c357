#include "widthlab/fem_space.hpp"
#include "widthlab/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

using namespace widthlab;

namespace {

std::shared_ptr<const Mesh> unit_square(int n) {
    return std::make_shared<const Mesh>(build_rect_mesh({0, 1, 0, 1}, n, n));
}

Eigen::VectorXd interpolate(const Mesh& mesh, const std::function<double(const Vec2&)>& f) {
    Eigen::VectorXd v(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) v[i] = f(mesh.nodes[i]);
    return v;
}

SpMat sparse_identity(int n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

}  // namespace

TEST_CASE("solve_linear: identity system returns the rhs") {
    Eigen::VectorXd b(4);
    b << 1, -2, 3, 0.5;
    const Eigen::VectorXd x = solve_linear(sparse_identity(4), b, true);
    CHECK((x - b).norm() == 0.0);
}

TEST_CASE("solve_linear: 1D Poisson tridiagonal against direct elimination oracle") {
    // -u'' = 1 discretized on 4 interior nodes, h = 1/5: (1/h^2) tridiag(-1,2,-1) u = 1.
    const int n = 4;
    const double h = 1.0 / (n + 1);
    std::vector<Triplet> trips;
    for (int i = 0; i < n; ++i) {
        trips.emplace_back(i, i, 2.0 / (h * h));
        if (i > 0) trips.emplace_back(i, i - 1, -1.0 / (h * h));
        if (i + 1 < n) trips.emplace_back(i, i + 1, -1.0 / (h * h));
    }
    SpMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);

    // Oracle: Thomas elimination written out longhand.
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0 / (h * h));
    Eigen::VectorXd rhs = b;
    const double off = -1.0 / (h * h);
    for (int i = 1; i < n; ++i) {
        const double m = off / diag[i - 1];
        diag[i] -= m * off;
        rhs[i] -= m * rhs[i - 1];
    }
    Eigen::VectorXd expect(n);
    expect[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) expect[i] = (rhs[i] - off * expect[i + 1]) / diag[i];

    const Eigen::VectorXd x = solve_linear(A, b, true);
    CHECK((x - expect).cwiseAbs().maxCoeff() < 1e-12);
    // cross-check the closed form u(x) = x(1-x)/2 at the nodes
    for (int i = 0; i < n; ++i) {
        const double xi = (i + 1) * h;
        CHECK(std::abs(x[i] - 0.5 * xi * (1.0 - xi)) < 1e-12);
    }
}

TEST_CASE("solve_linear: random SPD system hits the residual bound") {
    Rng rng(123);
    const int n = 50;
    Eigen::MatrixXd Adense(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Adense(i, j) = rng.uniform(-1, 1);
    const Eigen::MatrixXd spd = Adense.transpose() * Adense + Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.uniform(-1, 1);
    const Eigen::VectorXd x = solve_linear(spd.sparseView(), b, true);
    CHECK((spd * x - b).norm() <= 1e-10 * (1.0 + b.norm()));
}

TEST_CASE("solve_linear: nonsymmetric path and diagnostics") {
    Eigen::MatrixXd A(2, 2);
    A << 1, 2, 0, 1;
    Eigen::VectorXd b(2);
    b << 3, 1;
    const Eigen::VectorXd x = solve_linear(A.sparseView(), b, false);
    CHECK(std::abs(x[0] - 1.0) < 1e-12);
    CHECK(std::abs(x[1] - 1.0) < 1e-12);
    CHECK_THROWS(solve_linear(A.sparseView(), Eigen::VectorXd::Ones(3), false));
}

TEST_CASE("norms: zero snapshot is zero in every norm") {
    auto mesh = unit_square(4);
    const FemSpace space(mesh);
    const Snapshot zero = Snapshot::static_field(mesh, Eigen::VectorXd::Zero(mesh->node_count()));
    CHECK(space.norm(zero, NormKind::L2) == 0.0);
    CHECK(space.norm(zero, NormKind::H10) == 0.0);
    CHECK(space.norm(zero, NormKind::Hm1) == 0.0);
}

TEST_CASE("norms: interpolated sine product converges to the analytic values") {
    // ||sin(pi x)sin(pi y)||_L2 = 1/2, |.|_H10 = pi/sqrt(2)
    double prev_l2_err = -1.0, prev_h1_err = -1.0;
    for (int n : {16, 32, 64}) {
        auto mesh = unit_square(n);
        const FemSpace space(mesh);
        const Snapshot s = Snapshot::static_field(
            mesh, interpolate(*mesh, [](const Vec2& p) {
                return std::sin(M_PI * p.x()) * std::sin(M_PI * p.y());
            }));
        const double l2_err = std::abs(space.norm(s, NormKind::L2) - 0.5);
        const double h1_err = std::abs(space.norm(s, NormKind::H10) - M_PI / std::sqrt(2.0));
        if (prev_l2_err > 0.0) CHECK(l2_err < prev_l2_err / 3.0);  // O(h^2)
        if (prev_h1_err > 0.0) CHECK(h1_err < prev_h1_err / 1.5);  // at least O(h)
        prev_l2_err = l2_err;
        prev_h1_err = h1_err;
    }
    CHECK(prev_l2_err < 3e-4);
    CHECK(prev_h1_err < 0.03);
}

TEST_CASE("norms: mismatched snapshot length is rejected") {
    auto mesh = unit_square(3);
    const FemSpace space(mesh);
    const Snapshot bad = Snapshot::static_field(mesh, Eigen::VectorXd::Zero(5));
    CHECK_THROWS_AS(space.norm(bad, NormKind::L2), std::invalid_argument);
}

TEST_CASE("H^-1 norm is the dual norm of H10 (attained at the Riesz representative)") {
    auto mesh = unit_square(12);
    const FemSpace space(mesh);
    Rng rng(42);
    Eigen::VectorXd load(mesh->node_count());
    for (int i = 0; i < load.size(); ++i) load[i] = rng.uniform(-1, 1);
    const double dual = space.h_minus1_norm(load);
    const auto& map = space.dirichlet_map();
    const Eigen::VectorXd fr = map.reduce(load);

    // sup over 100 random v of F^T v / |v|_H10 never exceeds the dual norm
    double best = 0.0;
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd v(map.reduced_size());
        for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
        const Eigen::VectorXd vf = map.expand(v);
        const double ratio = fr.dot(v) / space.h10_norm(vf);
        CHECK(ratio <= dual + 1e-10);
        best = std::max(best, ratio);
    }
    // attained at v = K^{-1} F
    const Eigen::VectorXd riesz = space.solve_reduced_stiffness(fr);
    const double attained = fr.dot(riesz) / space.h10_norm(map.expand(riesz));
    CHECK(std::abs(attained - dual) <= 1e-10 * std::max(1.0, dual));
    CHECK(best <= attained + 1e-10);
}

TEST_CASE("trajectory norm uses the trapezoid rule in time") {
    auto mesh = unit_square(6);
    const FemSpace space(mesh);
    Snapshot traj;
    traj.mesh = mesh;
    traj.time_grid = {0.0, 0.5, 1.0};
    traj.values = Eigen::MatrixXd::Zero(3, mesh->node_count());
    const Eigen::VectorXd v = interpolate(*mesh, [](const Vec2& p) {
        return std::sin(M_PI * p.x()) * std::sin(M_PI * p.y());
    });
    for (int k = 0; k < 3; ++k) traj.values.row(k) = (k * 0.5) * v.transpose();
    // |u(t)|_H10 = t |v|, so integral of t^2 |v|^2 by trapezoid = |v|^2 * (0.25*0.5 + 1.25*0.25... )
    const double h1 = space.h10_norm(v);
    const double expect = std::sqrt(0.5 * 0.5 * (0.0 + 0.25) * h1 * h1 + 0.5 * 0.5 * (0.25 + 1.0) * h1 * h1);
    CHECK(std::abs(space.norm(traj, NormKind::L2T_H10) - expect) < 1e-12);
}

TEST_CASE("Poincare constant: unit square") {
    auto mesh = unit_square(32);
    const FemSpace space(mesh);
    const double cp = space.poincare_constant();
    CHECK(std::abs(cp - 1.0 / (M_PI * std::sqrt(2.0))) < 0.01 * cp);
}

TEST_CASE("Poincare constant: unit disk against the Bessel zero") {
    const double j01 = 2.404825557695773;
    auto mesh = std::make_shared<const Mesh>(build_disk_mesh(1.0, 3));
    const FemSpace space(mesh);
    const double cp = space.poincare_constant();
    CHECK(std::abs(cp - 1.0 / j01) < 0.01 * cp);
}

TEST_CASE("Poincare constant stabilizes under refinement") {
    auto coarse = std::make_shared<const Mesh>(build_rect_mesh({0, 1, 0, 1}, 24, 24));
    auto fine = std::make_shared<const Mesh>(build_rect_mesh({0, 1, 0, 1}, 48, 48));
    const double c1 = FemSpace(coarse).poincare_constant();
    const double c2 = FemSpace(fine).poincare_constant();
    CHECK(std::abs(c2 - c1) < 0.01 * c2);
}
