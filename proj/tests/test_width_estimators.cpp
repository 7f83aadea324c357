#include "widthlab/rng.hpp"
#include "widthlab/width_estimators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace widthlab;

namespace {

SpMat identity_gram(int n) {
    SpMat g(n, n);
    g.setIdentity();
    return g;
}

}  // namespace

TEST_CASE("kolmogorov svd: exact rank-3 snapshot family") {
    Rng rng(8);
    const int dim = 40, m = 12;
    Eigen::MatrixXd basis(dim, 3);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < 3; ++j) basis(i, j) = rng.uniform(-1, 1);
    Eigen::MatrixXd snaps(dim, m);
    for (int j = 0; j < m; ++j) {
        Eigen::Vector3d c;
        for (int k = 0; k < 3; ++k) c[k] = rng.uniform(-1, 1);
        snaps.col(j) = basis * c;
    }
    const auto pod = kolmogorov_width_svd(snaps, identity_gram(dim), 6);
    for (int n = 3; n <= 6; ++n) {
        CHECK(pod.sigma_reports[n].value < 1e-10);
        CHECK(pod.residual_reports[n].value < 1e-10);
    }
    CHECK(pod.sigma_reports[0].semantics == "lower_estimate");
    // both reports are non-increasing in n
    for (int n = 0; n < 6; ++n) {
        CHECK(pod.sigma_reports[n + 1].value <= pod.sigma_reports[n].value + 1e-14);
        CHECK(pod.residual_reports[n + 1].value <= pod.residual_reports[n].value + 1e-14);
    }
}

TEST_CASE("kolmogorov svd: two orthonormal snapshots against the hand oracle") {
    // e1, e2 orthonormal: POD modes are (e1 +- e2)/sqrt(2), both sigma = 1,
    // and the n=1 residual of each snapshot is 1/sqrt(2).
    Eigen::MatrixXd snaps = Eigen::MatrixXd::Zero(5, 2);
    snaps(0, 0) = 1.0;
    snaps(1, 1) = 1.0;
    const auto pod = kolmogorov_width_svd(snaps, identity_gram(5), 2);
    CHECK(std::abs(pod.sigma_reports[1].value - 1.0) < 1e-12);
    CHECK(std::abs(pod.residual_reports[1].value - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(pod.residual_reports[2].value < 1e-12);
}

TEST_CASE("kolmogorov svd respects a non-trivial Gram matrix") {
    // norm weights double the second coordinate: ||e2||^2 = 4
    std::vector<Triplet> trips = {{0, 0, 1.0}, {1, 1, 4.0}};
    SpMat gram(2, 2);
    gram.setFromTriplets(trips.begin(), trips.end());
    Eigen::MatrixXd snaps = Eigen::MatrixXd::Identity(2, 2);
    const auto pod = kolmogorov_width_svd(snaps, gram, 1);
    CHECK(std::abs(pod.sigma_reports[0].value - 2.0) < 1e-12);  // largest sigma
    CHECK(std::abs(pod.sigma_reports[1].value - 1.0) < 1e-12);
}

TEST_CASE("entropy grid cover: the K=1 reference configuration") {
    Eigen::VectorXd mus(1);
    mus << 2.0;
    const auto cover = entropy_grid_cover(mus, 4);
    CHECK(cover.m_k == std::vector<int>{16});
    CHECK(cover.centers.size() == 16);
    CHECK(std::abs(cover.delta_n - 0.125) < 1e-15);
    CHECK(std::abs(cover.radius_bound - 0.125) < 1e-15);

    // dense verification: every lambda in [-1,1] is within 1/8 of a center in
    // the mu-weighted metric |lambda - center| * mu
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double lambda = -1.0 + 2.0 * i / 9999.0;
        double best = 1e300;
        for (const auto& c : cover.centers) best = std::min(best, std::abs(lambda - c[0]) * mus[0]);
        worst = std::max(worst, best);
    }
    CHECK(worst <= 0.125 + 1e-12);
}

TEST_CASE("entropy grid cover: center count stays within 2^n and bound <= 4 K delta_n") {
    Eigen::VectorXd mus(2);
    mus << 2.0, 1.0;
    for (int n = 6; n <= 16; ++n) {
        const auto cover = entropy_grid_cover(mus, n);
        CHECK(static_cast<double>(cover.centers.size()) <= std::exp2(n) + 1e-9);
        CHECK(cover.radius_bound <= 4.0 * 2 * cover.delta_n + 1e-15);
    }
}

TEST_CASE("entropy grid cover: halving rate under doubling n, floor wobble included") {
    Eigen::VectorXd mus(2);
    mus << 2.0, 1.0;
    for (int n = 6; n < 16; ++n) {
        const double b0 = entropy_grid_cover(mus, n).radius_bound;
        const double b1 = entropy_grid_cover(mus, n + 1).radius_bound;
        const double drop = std::log2(b0) - std::log2(b1);  // expected 1/K = 0.5
        CHECK(drop >= 0.5 - 1.0);
        CHECK(drop <= 0.5 + 1.0);
    }
}

TEST_CASE("entropy grid cover rejects too-small n with the minimal admissible value") {
    Eigen::VectorXd mus(1);
    mus << 2.0;
    // delta_n < mu/2 = 1 requires 2^{-n} * 2 < 1, so n >= 2 fails only for n <= 1
    CHECK_THROWS_WITH(entropy_grid_cover(mus, 1), Catch::Matchers::ContainsSubstring("need n >="));
    CHECK_NOTHROW(entropy_grid_cover(mus, 2));
}

TEST_CASE("entropy greedy: trivial covers and the 1D reference rate") {
    auto euclid = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); };

    // centers = the sample itself
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd p(1);
        p << i;
        pts.push_back(p);
    }
    CHECK(entropy_greedy(pts, euclid, 2).value == 0.0);

    // two antipodal points, a single center
    std::vector<Eigen::VectorXd> anti;
    Eigen::VectorXd a(2), b(2);
    a << 1, 0;
    b << -1, 0;
    anti = {a, b};
    CHECK(entropy_greedy(anti, euclid, 0).value == 2.0);

    // uniform sample of [0,1]: 2^3 centers cover within 1/8 + slack
    std::vector<Eigen::VectorXd> grid;
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXd p(1);
        p << rng.uniform();
        grid.push_back(p);
    }
    CHECK(entropy_greedy(grid, euclid, 3).value <= 0.125 + 0.01);

    // radius is non-increasing in n
    double prev = 1e300;
    for (int n = 0; n <= 12; ++n) {
        const double r = entropy_greedy(grid, euclid, n).value;
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
}

TEST_CASE("bound chain: zero-width examples and decaying bounds") {
    const ConstantsLedger ledger = theory_constants(1.0, 2.0, 1.0, 0.2250, 2);
    BoundChainData data;
    data.K = 3;

    const auto elliptic = bound_chain(ExampleId::elliptic_4_2, 9, ledger, data);
    CHECK(elliptic.value == 0.0);
    CHECK(std::abs(elliptic.l - 3.0 * ledger.C_P) < 1e-12);
    CHECK(std::isinf(bound_chain(ExampleId::elliptic_4_2, 8, ledger, data).value));

    data.K = 2;
    const auto parab5 = bound_chain(ExampleId::parabolic_4_5, 10, ledger, data);
    CHECK(parab5.value == 0.0);
    CHECK(std::abs(parab5.l - 5.0 * ledger.C_parabolic * ledger.R) < 1e-9);

    const auto parab6 = bound_chain(ExampleId::parabolic_4_6, 4, ledger, data);
    CHECK(parab6.n == 20);
    CHECK(std::abs(parab6.value - 5.0 * ledger.C_parabolic * ledger.R * 0.25) < 1e-9);

    const auto disk = bound_chain(ExampleId::movdisk_4_10, 1, ledger, data);
    CHECK(disk.value == 0.0);
    CHECK(std::abs(disk.l - ledger.C_vardom * M_PI) < 1e-12);

    Eigen::VectorXd mus(1);
    mus << 1.0;
    data.mus = mus;
    data.K = 1;
    const auto adv = bound_chain(ExampleId::adv_l2_4_22, 6, ledger, data);
    CHECK(adv.n == 26 * 6);
    CHECK(adv.l == 8.0);
    CHECK(std::abs(adv.value - 6.0 * std::exp2(-3.0)) < 1e-12);
}

TEST_CASE("holder transfer: values and the arithmetic identity with the entropy chain") {
    CHECK(holder_transfer(0.0, 1.0, 2.0) == 0.0);
    CHECK(std::abs(holder_transfer(0.04, 1.0, 2.0) - 0.2) < 1e-15);

    // 3 * w(C1 2^{-n/K}) reproduces the adv_l2 chain value exactly
    Eigen::VectorXd mus(2);
    mus << 0.5, 0.25;
    const ConstantsLedger ledger = theory_constants(1.5, 2.0, 1.0, 0.3, 2);
    BoundChainData data;
    data.mus = mus;
    for (int n : {4, 8, 16}) {
        const double c1 = grf_entropy_constant(mus);
        const double lhs = 3.0 * holder_transfer(c1 * std::exp2(-n / 2.0), ledger.r, 2.0);
        const double rhs = bound_chain(ExampleId::adv_l2_4_22, n, ledger, data).value;
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
    }
}

TEST_CASE("decay fits: slopes of synthetic sequences") {
    std::vector<double> xs, ys, ns;
    for (int n = 1; n <= 30; ++n) {
        xs.push_back(n);
        ns.push_back(n);
        ys.push_back(3.0 * std::pow(n, -0.5));
    }
    CHECK(std::abs(loglog_slope(xs, ys) + 0.5) < 1e-12);
    std::vector<double> es;
    for (int n = 1; n <= 30; ++n) es.push_back(5.0 * std::exp2(-0.5 * n));
    CHECK(std::abs(log2_slope(ns, es) + 0.5) < 1e-12);
}
