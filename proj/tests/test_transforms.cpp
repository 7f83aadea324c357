#include "widthlab/rng.hpp"
#include "widthlab/transforms.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace widthlab;

namespace {

Eigen::VectorXd vec1(double a) {
    Eigen::VectorXd v(1);
    v << a;
    return v;
}

Eigen::VectorXd vec2d(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

void check_transform_invariants(const Transform& t, const std::vector<Vec2>& pts) {
    for (const Vec2& p : pts) {
        REQUIRE((t.forward(t.inverse(p)) - p).norm() < 1e-10);
        REQUIRE(smallest_singular_value(t.jacobian(p)) >= 0.5 - 1e-12);
    }
}

}  // namespace

TEST_CASE("families evaluate to the identity at lambda = 0") {
    const Mesh disk = build_disk_mesh(1.0, 2);
    const Mesh square = build_rect_mesh({-M_PI, M_PI, -M_PI, M_PI}, 6, 6);
    const Mesh strip = build_rect_mesh({-M_PI, M_PI, 0, M_PI}, 8, 4);
    std::vector<double> w = {1.0, 0.25, 1.0 / 9.0};

    auto check_id = [](const TransformFamily& fam, const Eigen::VectorXd& zero, const Mesh& mesh) {
        const Transform t = fam.at(zero);
        for (const Vec2& p : transform_sample_points(mesh)) {
            REQUIRE((t.forward(p) - p).norm() < 1e-12);
            REQUIRE(spectral_norm(Mat2(t.jacobian(p) - Mat2::Identity())) < 1e-12);
        }
    };
    check_id(rotation_family(), vec1(0.0), disk);
    check_id(sine_stretch_family(), vec2d(0.0, 0.0), square);
    check_id(curve_stretch_family(w, 3), Eigen::VectorXd::Zero(6), strip);
}

TEST_CASE("transform invariants: inverse round-trip and singular-value floor") {
    const Mesh disk = build_disk_mesh(1.0, 2);
    const Mesh square = build_rect_mesh({-M_PI, M_PI, -M_PI, M_PI}, 6, 6);
    const Mesh strip = build_rect_mesh({-M_PI, M_PI, 0, M_PI}, 8, 4);
    std::vector<double> w = {1.0, 0.25};

    check_transform_invariants(rotation_family().at(vec1(2.1)), transform_sample_points(disk));
    check_transform_invariants(sine_stretch_family().at(vec2d(0.3, -0.2)),
                               transform_sample_points(square));
    Rng rng(8);
    const auto lam = curve_stretch_family(w, 2).param_set.sample(5, 44);
    for (const auto& l : lam)
        check_transform_invariants(curve_stretch_family(w, 2).at(l), transform_sample_points(strip));
}

TEST_CASE("delta_beta: zero at equal parameters") {
    const Mesh disk = build_disk_mesh(1.0, 2, Circle{{1.0 / 3.0, 0.0}, 1.0 / 3.0});
    const auto pts = transform_sample_points(disk);
    CHECK(delta_beta(rotation_family(), vec1(0.4), vec1(0.4), pts) < 1e-14);
}

TEST_CASE("delta_beta: rotation closed form 2 sin(dlambda/2)") {
    const Mesh disk = build_disk_mesh(1.0, 3);
    const auto pts = transform_sample_points(disk);
    const double measured = delta_beta(rotation_family(), vec1(0.25), vec1(0.35), pts);
    CHECK(std::abs(measured - 2.0 * std::sin(0.05)) < 1e-4);
}

TEST_CASE("delta_beta is bounded by twice the parameter distance") {
    const Mesh disk = build_disk_mesh(1.0, 2);
    const Mesh square = build_rect_mesh({-M_PI, M_PI, -M_PI, M_PI}, 8, 8);
    const Mesh strip = build_rect_mesh({-M_PI, M_PI, 0, M_PI}, 8, 4);
    std::vector<double> w = {1.0, 0.25};

    struct Case {
        TransformFamily family;
        const Mesh* mesh;
    };
    const std::vector<Case> cases = {{rotation_family(), &disk},
                                     {sine_stretch_family(), &square},
                                     {curve_stretch_family(w, 2), &strip}};
    for (const auto& c : cases) {
        const auto pts = transform_sample_points(*c.mesh);
        const auto lam = c.family.param_set.sample(8, 321);
        for (std::size_t i = 0; i + 1 < lam.size(); i += 2) {
            // keep the pair close enough that the chain rule bound applies
            const Eigen::VectorXd l1 = lam[i];
            const Eigen::VectorXd l2 = l1 + 0.02 * (lam[i + 1] - lam[i]);
            const double db = delta_beta(c.family, l1, l2, pts);
            CHECK(db <= 2.0 * (l1 - l2).norm() + 1e-10);
        }
    }
}

TEST_CASE("matrix determinant perturbation bounds hold for random 2x2 and 3x3") {
    Rng rng(2718);
    for (int rep = 0; rep < 10000; ++rep) {
        for (int d : {2, 3}) {
            Eigen::MatrixXd q(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) q(i, j) = rng.uniform(-1, 1);
            const double norm = spectral_norm(q);
            const double target = rng.uniform(0.0, 0.999);
            q *= target / norm;  // spectral norm = target < 1
            const double alpha = spectral_norm(q);
            const double det = (Eigen::MatrixXd::Identity(d, d) + q).determinant();
            const auto bounds = det_perturbation_bounds(alpha, d);
            REQUIRE(det >= bounds.lower - 1e-12);
            REQUIRE(det <= bounds.upper + 1e-12);
        }
    }
}
