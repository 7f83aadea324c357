#include "widthlab/convex_sets.hpp"
#include "widthlab/embeddings.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace widthlab;

TEST_CASE("grid field embed: centroid, corner, exact affine bound") {
    const int K = 3;
    const AffineEmbed e = grid_field_embed(K);
    CHECK((e.apply(Eigen::VectorXd::Zero(9)).array() == 1.5).all());
    const Eigen::VectorXd corner = e.apply(Eigen::VectorXd::Constant(9, 1.0 / K));
    CHECK((corner.array() - 2.0).abs().maxCoeff() < 1e-15);

    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd z1(9), z2(9);
        for (int i = 0; i < 9; ++i) {
            z1[i] = rng.uniform(-1, 1);
            z2[i] = rng.uniform(-1, 1);
        }
        const double lhs = (e.apply(z1) - e.apply(z2)).norm();
        CHECK(std::abs(lhs - e.lipschitz * (z1 - z2).norm()) <= 1e-12 * std::max(1.0, lhs));
    }
    // witness inverts the map on the image and lands inside the latent box
    const ConvexSet latent_box = ConvexSet::cube(9, -1.0 / K, 1.0 / K);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd lambda(9);
        for (int i = 0; i < 9; ++i) lambda[i] = rng.uniform(1, 2);
        const Eigen::VectorXd z = e.witness(lambda);
        CHECK(latent_box.contains(z, 1e-12));
        CHECK((e.apply(z) - lambda).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("basis expansion embed: constants and L1 Lipschitz bound by quadrature") {
    auto phi0 = [](double) { return 1.5; };
    std::vector<std::function<double(double)>> basis = {[](double) { return 1.0; }};
    Eigen::VectorXd mus(1);
    mus << 2.0;  // ||1||_{L1(-1,1)} = 2
    const FieldExpansionEmbed e = basis_expansion_embed(phi0, basis, mus, 1.0);
    CHECK(std::abs(e.lipschitz - 2.0) < 1e-15);

    Eigen::VectorXd z(1);
    z << 0.0;
    CHECK(e.field(z)(0.3) == 1.5);
    z << 0.5;
    CHECK(std::abs(e.field(z)(-0.7) - 2.0) < 1e-15);

    // two-function expansion: ||D1 z - D1 zbar||_L1 <= l ||z - zbar||_2
    std::vector<std::function<double(double)>> basis2 = {
        [](double x) { return std::cos(M_PI * x); }, [](double x) { return 0.5 - 0.25 * x; }};
    Eigen::VectorXd mus2(2);
    mus2 << 4.0 / M_PI, 1.0;  // exact L1 norms on [-1,1]
    const double scale = std::sqrt(2.0);
    const FieldExpansionEmbed e2 = basis_expansion_embed([](double) { return 0.0; }, basis2, mus2, scale);
    Rng rng(17);
    const int quad = 200000;
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXd z1(2), z2(2);
        for (int i = 0; i < 2; ++i) {
            z1[i] = rng.uniform(-1, 1);
            z2[i] = rng.uniform(-1, 1);
        }
        const auto f1 = e2.field(z1), f2 = e2.field(z2);
        double l1 = 0.0;
        for (int g = 0; g < quad; ++g) {
            const double x = -1.0 + 2.0 * (g + 0.5) / quad;
            l1 += std::abs(f1(x) - f2(x)) * (2.0 / quad);
        }
        CHECK(l1 <= e2.lipschitz * (z1 - z2).norm() + 1e-6);
    }
}

TEST_CASE("basis expansion embed rejects a zero-norm basis function") {
    Eigen::VectorXd mus(1);
    mus << 0.0;
    CHECK_THROWS_AS(
        basis_expansion_embed([](double) { return 0.0; }, {[](double) { return 0.0; }}, mus, 1.0),
        std::invalid_argument);
}

TEST_CASE("sequence truncation embed is an isometric inclusion with sqrt(w_n) tail bound") {
    const int block = 5, active = 3, total = 16;
    const AffineEmbed e = sequence_truncate_embed(block, active, total);
    CHECK((e.apply(Eigen::VectorXd::Zero(e.in_dim)).array() == 0.0).all());

    Rng rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        Eigen::VectorXd z(e.in_dim);
        for (int i = 0; i < z.size(); ++i) z[i] = rng.uniform(-1, 1);
        CHECK(std::abs(e.apply(z).norm() - z.norm()) < 1e-15);
    }

    // tail bound: lambda in Lambda_w (weights w_k = k^{-2} per block) has
    // ||lambda - embed(witness(lambda))||^2 = sum_{k>n} lambda_k^2 <= w_n.
    Eigen::VectorXd w(block * total);
    for (int k = 0; k < total; ++k)
        for (int b = 0; b < block; ++b) w[block * k + b] = 1.0 / ((k + 1.0) * (k + 1.0));
    const ConvexSet lambda_w = ConvexSet::weighted_ellipsoid(w, 1.0);
    const auto samples = lambda_w.sample(200, 91);
    const double w_n = 1.0 / (active * active);
    for (const auto& lambda : samples) {
        const Eigen::VectorXd truncated = e.apply(e.witness(lambda));
        const double tail = (lambda - truncated).norm();
        CHECK(tail * tail <= w_n + 1e-12);
    }
}
