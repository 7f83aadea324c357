#pragma once

#include "widthlab/advection.hpp"
#include "widthlab/example_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace widthlab {

/// Result of an empirical Lipschitz (or Holder) sweep: the worst sampled
/// ratio against the theoretical constant, with degenerate pairs counted
/// rather than crashed on.
struct LipschitzReport {
    std::string model;
    int pairs = 0;
    int skipped = 0;  // pairs with zero parameter distance
    double max_ratio = 0.0;
    double constant = 0.0;
    double tolerance = 0.0;
    bool violated = false;

    double margin() const { return max_ratio > 0.0 ? constant / max_ratio : std::numeric_limits<double>::infinity(); }
};

/// Generic sweep over an example model: ratio = ||S(x) - S(y)|| / d_A(x, y).
inline LipschitzReport empirical_lipschitz(const ExampleModel& model, int pair_count,
                                           std::uint64_t seed, double tolerance) {
    LipschitzReport rep;
    rep.model = to_string(model.id);
    rep.constant = model.lipschitz_constant;
    rep.tolerance = tolerance;
    const auto params = model.sample_params(2 * pair_count, seed);
    for (int i = 0; i < pair_count; ++i) {
        const Eigen::VectorXd& x = params[2 * i];
        const Eigen::VectorXd& y = params[2 * i + 1];
        const double d = model.param_metric(x, y);
        if (d < 1e-14) {
            ++rep.skipped;
            continue;
        }
        const double num = model.decoder.distance(model.solve_param(x), model.solve_param(y));
        rep.max_ratio = std::max(rep.max_ratio, num / d);
        ++rep.pairs;
    }
    rep.violated = rep.max_ratio > rep.constant * (1.0 + tolerance);
    return rep;
}

/// Fixed-domain elliptic sweep (full parameter freedom: grid diffusion and
/// reaction cells, P1 interpolated loads). The ratio is taken against the
/// weighted metric R|da|_inf + R C_P^2 |dc|_inf + r |df|_L2, whose constant
/// is C_P / r^2; the bound holds verbatim in the discrete space.
struct EllipticSweepConfig {
    int mesh_n = 48;
    int grid_K = 6;
    double r = 1.0, R = 2.0;
    double c_max = 2.0;
    double solver_tol = 1e-10;
};

struct EllipticSweepResult {
    LipschitzReport lipschitz;
    double max_stability_ratio = 0.0;  // |u|_H10 / (C_P R / r)
    double poincare = 0.0;
};

inline EllipticSweepResult elliptic_lipschitz_sweep(const EllipticSweepConfig& cfg, int pair_count,
                                                    std::uint64_t seed, double tolerance) {
    auto mesh = std::make_shared<const Mesh>(build_rect_mesh({0, 1, 0, 1}, cfg.mesh_n, cfg.mesh_n));
    FemSpace space(mesh);
    const double cp = space.poincare_constant(1e-10);
    const int K = cfg.grid_K;
    const TriangleLocator locator(mesh);

    struct Params {
        std::vector<double> a, c;
        Eigen::VectorXd f;
    };
    auto draw = [&](Rng& rng) {
        Params p;
        p.a.resize(K * K);
        p.c.resize(K * K);
        for (auto& v : p.a) v = rng.uniform(cfg.r, cfg.R);
        for (auto& v : p.c) v = rng.uniform(0.0, cfg.c_max);
        p.f.resize(mesh->node_count());
        for (int i = 0; i < p.f.size(); ++i) p.f[i] = rng.uniform(-1, 1);
        p.f *= cfg.R * rng.uniform(0.2, 1.0) / space.l2_norm(p.f);
        return p;
    };
    auto solve = [&](const Params& p) {
        auto a = CoefficientField::isotropic(
            [g = grid_cell_field(0, 1, 0, 1, K, p.a)](const Vec2& q, double t) { return g.scalar(q, t); });
        a.ellipticity_bounds = {cfg.r, cfg.R};
        const CoefficientField c = grid_cell_field(0, 1, 0, 1, K, p.c);
        const CoefficientField f = CoefficientField::scalar_field(
            [fv = p.f, &locator](const Vec2& q, double) { return locator.interpolate(fv, q).value_or(0.0); });
        return solve_elliptic_fixed(a, &c, f, mesh, {NodeClass::OuterBoundary}, cfg.solver_tol);
    };

    EllipticSweepResult out;
    out.poincare = cp;
    out.lipschitz.model = "elliptic_fixed_domain";
    out.lipschitz.constant = cp / (cfg.r * cfg.r);
    out.lipschitz.tolerance = tolerance;
    const double stability_bound = cp * cfg.R / cfg.r;

    for (int i = 0; i < pair_count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const Params p1 = draw(rng), p2 = draw(rng);
        const Snapshot u1 = solve(p1), u2 = solve(p2);
        out.max_stability_ratio = std::max(
            {out.max_stability_ratio, space.h10_norm(u1.level(0)) / stability_bound,
             space.h10_norm(u2.level(0)) / stability_bound});
        double da = 0.0, dc = 0.0;
        for (int k = 0; k < K * K; ++k) {
            da = std::max(da, std::abs(p1.a[k] - p2.a[k]));
            dc = std::max(dc, std::abs(p1.c[k] - p2.c[k]));
        }
        const double d =
            cfg.R * da + cfg.R * cp * cp * dc + cfg.r * space.l2_norm(p1.f - p2.f);
        if (d < 1e-14) {
            ++out.lipschitz.skipped;
            continue;
        }
        out.lipschitz.max_ratio =
            std::max(out.lipschitz.max_ratio, space.h10_norm(u1.level(0) - u2.level(0)) / d);
        ++out.lipschitz.pairs;
    }
    out.lipschitz.violated = out.lipschitz.max_ratio > out.lipschitz.constant * (1.0 + tolerance);
    return out;
}

/// Moving-domain sweep: pairs restricted to delta_beta <= delta0 so the
/// two-domain theorem applies; checks both the delta_beta bound and the
/// Lipschitz-in-lambda bound with the same constant.
struct VardomainSweepResult {
    LipschitzReport lipschitz;       // ratio to |dlambda|
    double max_two_domain_ratio = 0; // l2 distance / (C delta_beta / 2)
    double max_delta_beta = 0.0;
};

inline VardomainSweepResult vardomain_two_domain_sweep(const ExampleModel& model,
                                                       const TransformFamily& family,
                                                       const Mesh& ref_mesh, int pair_count,
                                                       std::uint64_t seed, double tolerance) {
    VardomainSweepResult out;
    out.lipschitz.model = to_string(model.id) + "_two_domain";
    out.lipschitz.constant = model.lipschitz_constant;
    out.lipschitz.tolerance = tolerance;
    const double delta0 = model.ledger.delta0;
    const double C = model.ledger.C_vardom;
    const std::vector<Vec2> pts = transform_sample_points(ref_mesh);

    const auto base = model.sample_params(pair_count, seed);
    for (int i = 0; i < pair_count; ++i) {
        Rng rng(seed ^ 0x9e37ULL, static_cast<std::uint64_t>(i));
        // shrink into the set so a step of size delta0 stays admissible
        Eigen::VectorXd l1 = family.param_set.project(0.9 * base[i]);
        Eigen::VectorXd dir(l1.size());
        for (int k = 0; k < dir.size(); ++k) dir[k] = rng.uniform(-1.0, 1.0);
        if (dir.norm() < 1e-12) dir.setConstant(1.0);
        Eigen::VectorXd l2 =
            l1 + (rng.uniform(0.05, 1.0) * delta0 / dir.norm()) * dir;  // |dl| <= delta0
        l2 = family.param_set.project(l2);

        const Snapshot u1 = std::get<Snapshot>(model.solve_param(l1));
        const Snapshot u2 = std::get<Snapshot>(model.solve_param(l2));
        const double dist = l2_distance_crossmesh(u1, u2);
        const double dl = (l1 - l2).norm();
        if (dl < 1e-14) {
            ++out.lipschitz.skipped;
            continue;
        }
        out.lipschitz.max_ratio = std::max(out.lipschitz.max_ratio, dist / dl);
        ++out.lipschitz.pairs;

        const double db = delta_beta(family, l1, l2, pts);
        out.max_delta_beta = std::max(out.max_delta_beta, db);
        if (db > 1e-14 && db <= delta0 + 1e-12)
            out.max_two_domain_ratio = std::max(out.max_two_domain_ratio, dist / (C * db / 2.0));
    }
    out.lipschitz.violated = out.lipschitz.max_ratio > out.lipschitz.constant * (1.0 + tolerance);
    return out;
}

/// Advection Holder sweep over random piecewise-linear speeds in [r, R]:
/// ratio = |u - ubar|_p / |c - cbar|_1^{1/p} against r^{-2/p}; both sides
/// are semi-analytic.
inline LipschitzReport advection_holder_sweep(double r, double R, double p, int pair_count,
                                              std::uint64_t seed, double tolerance) {
    LipschitzReport rep;
    rep.model = "advection_holder_p" + std::to_string(static_cast<int>(p));
    rep.constant = std::pow(r, -2.0 / p);
    rep.tolerance = tolerance;
    for (int i = 0; i < pair_count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        auto draw = [&]() {
            PiecewiseLinear c;
            const int pieces = 3 + static_cast<int>(rng.below(6));
            c.xs.push_back(-1.0);
            for (int k = 1; k < pieces; ++k)
                c.xs.push_back(-1.0 + 2.0 * k / pieces + rng.uniform(-0.2, 0.2) / pieces);
            c.xs.push_back(1.0);
            for (std::size_t k = 0; k < c.xs.size(); ++k) c.ys.push_back(rng.uniform(r, R));
            return c;
        };
        const PiecewiseLinear c1 = draw(), c2 = draw();
        const double l1 = exact_l1_distance(c1, c2);
        if (l1 < 1e-14) {
            ++rep.skipped;
            continue;
        }
        const auto s1 = solve_advection_exact(c1.fn(), r, R);
        const auto s2 = solve_advection_exact(c2.fn(), r, R);
        rep.max_ratio =
            std::max(rep.max_ratio, advection_distance(s1, s2, p) / std::pow(l1, 1.0 / p));
        ++rep.pairs;
    }
    rep.violated = rep.max_ratio > rep.constant * (1.0 + tolerance);
    return rep;
}

}  // namespace widthlab
