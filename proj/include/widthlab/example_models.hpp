#pragma once

#include "widthlab/constants.hpp"
#include "widthlab/decoders.hpp"
#include "widthlab/example_id.hpp"
#include "widthlab/pde_models.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace widthlab {

/// Discretization and scale knobs shared by all example models.
struct ModelConfig {
    double r = 1.0, R = 2.0, T = 1.0;
    int K = 3;                 // expansion size where the example has one
    int mesh_n = 24;           // rectangle cells per side
    int disk_refinement = 3;
    int steps = 100;           // backward-Euler steps
    int K_max = 64;            // truncation cap for infinite parameter sequences
    int active_blocks = 2;     // retained blocks n for truncated decoders
    std::string weight_profile = "k^-2";
    double solver_tol = 1e-10;
};

/// A fully wired example: its decoder, constants, solution mapping over the
/// native parameter layout, latent witnesses, and the parameter metric the
/// Lipschitz statements refer to.
struct ExampleModel {
    ExampleId id{};
    Decoder decoder;
    ConstantsLedger ledger;
    int construction_dim = 0;  // latent dimension of the construction
    Eigen::VectorXd mus;       // basis norms where the bound chain needs them
    double truncation_error = 0.0;  // sqrt(w_{K_max}) for truncated sequence sets

    std::function<std::vector<Eigen::VectorXd>(int, std::uint64_t)> sample_params;
    std::function<DecoderValue(const Eigen::VectorXd&)> solve_param;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> witness_of;
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> param_metric;
    std::function<double(const DecoderValue&)> value_norm;
    double lipschitz_constant = 0.0;  // constant of S w.r.t. param_metric

    std::vector<ReconstructionCase> make_cases(int count, std::uint64_t seed) const {
        std::vector<ReconstructionCase> cases;
        for (const auto& p : sample_params(count, seed)) {
            ReconstructionCase c;
            c.witness = witness_of(p);
            c.target = solve_param(p);
            c.target_norm = std::max(value_norm(c.target), 1e-300);
            cases.push_back(std::move(c));
        }
        return cases;
    }
};

namespace detail {

/// Strip indicator chi_k on [lo, hi) split into S equal strips; k is 0-based.
inline std::function<double(double)> strip_indicator(double lo, double hi, int strips, int k) {
    const double w = (hi - lo) / strips;
    const double a = lo + k * w, b = lo + (k + 1) * w;
    return [a, b](double x) { return (x >= a && x < b) ? 1.0 : 0.0; };
}

/// Smooth disjoint bump: cos^2(pi (x-center)/width) on |x-center| < width/2.
inline std::function<double(double)> cos2_bump(double center, double width) {
    return [center, width](double x) {
        const double s = (x - center) / width;
        if (std::abs(s) >= 0.5) return 0.0;
        const double c = std::cos(M_PI * s);
        return c * c;
    };
}

struct ParabolicFamily {
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<FemSpace> space;
    double r, R, T;
    int strips, steps;
    double solver_tol;
    std::vector<Eigen::VectorXd> f_loads;   // normalized load vectors
    std::vector<Eigen::VectorXd> g_fields;  // normalized nodal initial fields
    SpMat mass;

    // lambda layout: blocks of 5 per strip: (a, b, c, f, g)
    int dim() const { return 5 * strips; }

    CoefficientField diffusion(const Eigen::VectorXd& lambda) const {
        const double mid = 0.5 * (R + r), half = 0.5 * (R - r);
        const int S = strips;
        const double lo = 0.0, hi = 1.0;
        return [&] {
            auto field = CoefficientField::sym_matrix2_field(
                [lambda, mid, half, S, lo, hi](const Vec2& p, double) {
                    double bump = 0.0;
                    const double w = (hi - lo) / S;
                    int k = static_cast<int>((p.x() - lo) / w);
                    k = std::clamp(k, 0, S - 1);
                    bump = lambda[5 * k + 0] * half;
                    Mat2 m = Mat2::Zero();
                    m(0, 0) = mid + bump;
                    m(1, 1) = mid;
                    return m;
                });
            field.ellipticity_bounds = {r, R};
            return field;
        }();
    }

    CoefficientField transport(const Eigen::VectorXd& lambda) const {
        const int S = strips;
        const double Rv = R;
        return CoefficientField::vector2_field([lambda, S, Rv](const Vec2& p, double) {
            int k = static_cast<int>(p.x() * S);
            k = std::clamp(k, 0, S - 1);
            return Vec2(lambda[5 * k + 1] * Rv, 0.0);
        });
    }

    CoefficientField reaction(const Eigen::VectorXd& lambda) const {
        const int S = strips;
        const double Rv = R;
        return CoefficientField::scalar_field([lambda, S, Rv](const Vec2& p, double) {
            int k = static_cast<int>(p.x() * S);
            k = std::clamp(k, 0, S - 1);
            return lambda[5 * k + 2] * Rv;
        });
    }

    Eigen::VectorXd load_vector(const Eigen::VectorXd& lambda) const {
        Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh->node_count());
        for (int k = 0; k < strips; ++k) F += lambda[5 * k + 3] * f_loads[k];
        return F;
    }

    Eigen::VectorXd initial_field(const Eigen::VectorXd& lambda) const {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh->node_count());
        for (int k = 0; k < strips; ++k) g += lambda[5 * k + 4] * g_fields[k];
        return g;
    }

    Snapshot solve(const Eigen::VectorXd& lambda) const {
        const Eigen::VectorXd F = load_vector(lambda);
        const Eigen::VectorXd g_load = mass * initial_field(lambda);
        return solve_parabolic_loads(diffusion(lambda), transport(lambda), reaction(lambda),
                                     [F](double) { return F; }, g_load, mesh, steps, T, solver_tol);
    }

    /// Metric of the Lipschitz statement:
    /// |da|_inf + |db|_inf + |dc|_inf + |df|_{L2(H^-1)} + |dg|_{L2}.
    double metric(const Eigen::VectorXd& l1, const Eigen::VectorXd& l2) const {
        const double half = 0.5 * (R - r);
        double da = 0.0, db = 0.0, dc = 0.0;
        for (int k = 0; k < strips; ++k) {
            da = std::max(da, half * std::abs(l1[5 * k] - l2[5 * k]));
            db = std::max(db, R * std::abs(l1[5 * k + 1] - l2[5 * k + 1]));
            dc = std::max(dc, R * std::abs(l1[5 * k + 2] - l2[5 * k + 2]));
        }
        const double df = std::sqrt(T) * space->h_minus1_norm(load_vector(l1) - load_vector(l2));
        const Eigen::VectorXd dg_field = initial_field(l1) - initial_field(l2);
        const double dg = std::sqrt(std::max(0.0, dg_field.dot(mass * dg_field)));
        return da + db + dc + df + dg;
    }
};

inline std::shared_ptr<ParabolicFamily> make_parabolic_family(const ModelConfig& cfg, int strips) {
    auto fam = std::make_shared<ParabolicFamily>();
    fam->mesh = std::make_shared<const Mesh>(build_rect_mesh({0, 1, 0, 1}, cfg.mesh_n, cfg.mesh_n));
    fam->space = std::make_shared<FemSpace>(fam->mesh);
    fam->r = cfg.r;
    fam->R = cfg.R;
    fam->T = cfg.T;
    fam->strips = strips;
    fam->steps = cfg.steps;
    fam->solver_tol = cfg.solver_tol;
    fam->mass = fam->space->mass();

    // Normalized load/initial families: ||phi_f_k||_{L2([0,T];H^-1)} = R 2^{-k/2}
    // (discrete dual norm) and ||phi_g_k||_{L2} = R 2^{-k/2} (discrete mass
    // norm), so the block sums stay below R^2 as the admissibility needs.
    for (int k = 0; k < strips; ++k) {
        const int mode = k % 6 + 1;
        const CoefficientField mode_field = CoefficientField::scalar_field([mode](const Vec2& p, double) {
            return std::sin(mode * M_PI * p.x()) * std::sin(M_PI * p.y());
        });
        Eigen::VectorXd F = assemble_load(*fam->mesh, mode_field);
        const double h1 = std::sqrt(fam->T) * fam->space->h_minus1_norm(F);
        fam->f_loads.push_back(F * (fam->R * std::pow(2.0, -0.5 * (k + 1)) / h1));

        Eigen::VectorXd g(fam->mesh->node_count());
        for (int i = 0; i < g.size(); ++i) {
            const Vec2 p = fam->mesh->nodes[i];
            g[i] = (fam->mesh->node_class[i] == NodeClass::OuterBoundary)
                       ? 0.0
                       : std::sin(M_PI * p.x()) * std::sin(mode * M_PI * p.y());
        }
        const double gn = std::sqrt(std::max(1e-300, g.dot(fam->mass * g)));
        fam->g_fields.push_back(g * (fam->R * std::pow(2.0, -0.5 * (k + 1)) / gn));
    }
    return fam;
}

struct VardomainFamily {
    std::shared_ptr<const Mesh> ref_mesh;
    std::shared_ptr<FemSpace> master_space;  // outer pinning only, for C_P
    TransformFamily transforms;
    CoefficientField a;
    CoefficientField f;
    double solver_tol;

    Snapshot solve(const Eigen::VectorXd& lambda) const {
        return solve_elliptic_vardomain(a, f, lambda, transforms, *ref_mesh, solver_tol);
    }
};

inline double crossmesh_distance_value(const DecoderValue& x, const DecoderValue& y) {
    return l2_distance_crossmesh(std::get<Snapshot>(x), std::get<Snapshot>(y));
}

}  // namespace detail

/// Builds the constructive decoder and solution mapping for an example id.
/// Throws for ids that have no decoder construction (adv_l2_4_22 is reached
/// through the entropy chain, table1_contrast is a report).
inline ExampleModel example_decoder(ExampleId id, const ModelConfig& cfg) {
    ExampleModel model;
    model.id = id;

    switch (id) {
        case ExampleId::circle_3_4: {
            model.decoder = circle_decoder();
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, 1.0, 2);
            model.construction_dim = 1;
            model.sample_params = [](int count, std::uint64_t seed) {
                const ConvexSet angles = ConvexSet::cube(1, -M_PI, M_PI);
                return angles.sample(count, seed);
            };
            model.solve_param = [](const Eigen::VectorXd& theta) -> DecoderValue {
                Eigen::VectorXd p(2);
                p << std::cos(theta[0]), std::sin(theta[0]);
                return p;
            };
            model.witness_of = [](const Eigen::VectorXd& theta) {
                return Eigen::VectorXd(theta / M_PI);
            };
            model.param_metric = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                return (x - y).norm();
            };
            model.value_norm = [](const DecoderValue& v) {
                return std::get<Eigen::VectorXd>(v).norm();
            };
            model.lipschitz_constant = 1.0;  // chord <= arc
            return model;
        }

        case ExampleId::elliptic_4_2: {
            const int K = cfg.K;
            auto mesh = std::make_shared<const Mesh>(build_rect_mesh({0, 1, 0, 1}, cfg.mesh_n, cfg.mesh_n));
            auto space = std::make_shared<FemSpace>(mesh);
            const double cp = space->poincare_constant(1e-10);
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, cp, 2);
            model.construction_dim = K * K;

            const CoefficientField f = CoefficientField::scalar_field([](const Vec2& p, double) {
                return 2.0 * std::sin(M_PI * p.x()) * std::sin(M_PI * p.y());
            });
            const double r = cfg.r, R = cfg.R, tol = cfg.solver_tol;
            auto solve_lambda = [mesh, f, K, r, R, tol](const Eigen::VectorXd& lambda) -> DecoderValue {
                std::vector<double> cells(lambda.data(), lambda.data() + lambda.size());
                auto a = CoefficientField::isotropic(
                    [g = grid_cell_field(0, 1, 0, 1, K, cells)](const Vec2& p, double t) {
                        return g.scalar(p, t);
                    });
                a.ellipticity_bounds = {r, R};
                return solve_elliptic_fixed(a, nullptr, f, mesh, {NodeClass::OuterBoundary}, tol);
            };

            const AffineEmbed embed = grid_field_embed(K);
            auto dist = [space](const DecoderValue& x, const DecoderValue& y) {
                return space->h10_norm(std::get<Snapshot>(x).level(0) - std::get<Snapshot>(y).level(0));
            };
            model.decoder = compose(
                {projection_stage(ConvexSet::cube(K * K, -1.0 / K, 1.0 / K)),
                 affine_stage(embed, "grid_coefficients"),
                 solution_stage("elliptic_solve", R * cp / (r * r), K * K, solve_lambda)},
                "snapshot-H10", dist);

            model.sample_params = [K](int count, std::uint64_t seed) {
                return ConvexSet::cube(K * K, 1.0, 2.0).sample(count, seed);
            };
            model.solve_param = solve_lambda;
            model.witness_of = [embed](const Eigen::VectorXd& lambda) { return embed.witness(lambda); };
            // metric of the fixed-domain elliptic statement with c, f frozen
            model.param_metric = [R](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                return R * (x - y).cwiseAbs().maxCoeff();
            };
            model.value_norm = [space](const DecoderValue& v) {
                return space->h10_norm(std::get<Snapshot>(v).level(0));
            };
            model.lipschitz_constant = cp / (r * r);
            return model;
        }

        case ExampleId::parabolic_4_5:
        case ExampleId::parabolic_4_6: {
            const bool truncated = (id == ExampleId::parabolic_4_6);
            const int strips = truncated ? cfg.K_max : cfg.K;
            auto fam = detail::make_parabolic_family(cfg, strips);
            const double cp = fam->space->poincare_constant(1e-10);
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, cp, 2);
            const double C = model.ledger.C_parabolic;
            const double R = cfg.R;

            auto space = fam->space;
            auto dist = [space](const DecoderValue& x, const DecoderValue& y) {
                Snapshot diff = std::get<Snapshot>(x);
                diff.values -= std::get<Snapshot>(y).values;
                return space->norm(diff, NormKind::L2T_H10);
            };
            auto solve_lambda = [fam](const Eigen::VectorXd& lambda) -> DecoderValue {
                return fam->solve(lambda);
            };
            model.value_norm = [space](const DecoderValue& v) {
                return space->norm(std::get<Snapshot>(v), NormKind::L2T_H10);
            };
            model.param_metric = [fam](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                return fam->metric(x, y);
            };
            model.solve_param = solve_lambda;
            model.lipschitz_constant = C;

            if (!truncated) {
                const int dim = fam->dim();
                model.construction_dim = dim;
                // The expansion stage passes lambda through numerically; its
                // declared 5R is the amplification into the coefficient
                // metric, the solve stage then carries C.
                model.decoder = compose(
                    {projection_stage(ConvexSet::unit_ball(dim)),
                     scaling_stage(5.0 * R, dim, "coefficient_expansion"),
                     solution_stage("parabolic_solve", C, dim,
                                    [solve_lambda, R](const Eigen::VectorXd& z) {
                                        return solve_lambda(Eigen::VectorXd(z / (5.0 * R)));
                                    })},
                    "snapshot-L2T_H10", dist);
                model.sample_params = [dim](int count, std::uint64_t seed) {
                    return ConvexSet::unit_ball(dim).sample(count, seed);
                };
                model.witness_of = [](const Eigen::VectorXd& lambda) { return lambda; };
            } else {
                const int n_active = cfg.active_blocks;
                const int full_dim = fam->dim();
                const int latent = 5 * n_active;
                if (latent > full_dim)
                    throw std::invalid_argument("parabolic_4_6: active blocks exceed the truncation cap");
                Eigen::VectorXd w_latent(latent), w_full(full_dim);
                for (int k = 0; k < strips; ++k)
                    for (int b = 0; b < 5; ++b) {
                        const double w = weight_profile(cfg.weight_profile, k + 1);
                        w_full[5 * k + b] = w;
                        if (5 * k + b < latent) w_latent[5 * k + b] = w;
                    }
                model.construction_dim = latent;
                model.truncation_error = std::sqrt(weight_profile(cfg.weight_profile, strips));
                const AffineEmbed incl = sequence_truncate_embed(5, n_active, strips);
                model.decoder = compose(
                    {projection_stage(ConvexSet::weighted_ellipsoid(w_latent, 1.0)),
                     affine_stage(incl, "sequence_inclusion"),
                     scaling_stage(5.0 * R, full_dim, "coefficient_expansion"),
                     solution_stage("parabolic_solve", C, full_dim,
                                    [solve_lambda, R](const Eigen::VectorXd& z) {
                                        return solve_lambda(Eigen::VectorXd(z / (5.0 * R)));
                                    })},
                    "snapshot-L2T_H10", dist);
                model.sample_params = [w_full](int count, std::uint64_t seed) {
                    return ConvexSet::weighted_ellipsoid(w_full, 1.0).sample(count, seed);
                };
                model.witness_of = [incl](const Eigen::VectorXd& lambda) {
                    return incl.witness(lambda);
                };
            }
            return model;
        }

        case ExampleId::movdisk_4_10:
        case ExampleId::movhole_4_11: {
            auto ref_mesh = std::make_shared<const Mesh>(
                build_disk_mesh(1.0, cfg.disk_refinement, Circle{{1.0 / 3.0, 0.0}, 1.0 / 3.0}));
            auto a = CoefficientField::isotropic([](const Vec2& p, double) {
                return 1.5 + 0.4 * std::sin(p.x()) * std::cos(p.y());
            });
            a.ellipticity_bounds = {cfg.r, cfg.R};
            a.lipschitz_hint = 0.4 * std::sqrt(2.0);
            auto fam = std::shared_ptr<detail::VardomainFamily>(new detail::VardomainFamily{
                ref_mesh, std::make_shared<FemSpace>(ref_mesh), rotation_family(), std::move(a),
                CoefficientField::constant(1.0) /* ||f||_{L2(disk)} = sqrt(pi) <= R */,
                cfg.solver_tol});

            const double cp = fam->master_space->poincare_constant(1e-10);
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, cp, 2);
            const double C = model.ledger.C_vardom;
            model.construction_dim = 1;

            auto solve_lambda = [fam](const Eigen::VectorXd& lambda) -> DecoderValue {
                return fam->solve(lambda);
            };
            model.decoder =
                compose({projection_stage(ConvexSet::cube(1, -1.0, 1.0)),
                         scaling_stage(M_PI, 1, "angle_scaling"),
                         solution_stage("vardomain_solve", C, 1, solve_lambda)},
                        "snapshot-L2-crossmesh", detail::crossmesh_distance_value);
            model.sample_params = [](int count, std::uint64_t seed) {
                return ConvexSet::cube(1, -M_PI, M_PI).sample(count, seed);
            };
            model.solve_param = solve_lambda;
            model.witness_of = [](const Eigen::VectorXd& lambda) {
                return Eigen::VectorXd(lambda / M_PI);
            };
            model.param_metric = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                return (x - y).norm();
            };
            model.value_norm = [](const DecoderValue& v) {
                const Snapshot& s = std::get<Snapshot>(v);
                const SpMat mass = assemble_mass(*s.mesh);
                return std::sqrt(std::max(0.0, s.level(0).dot(mass * s.level(0))));
            };
            model.lipschitz_constant = C;
            return model;
        }

        case ExampleId::defhole_4_13: {
            const double pi = M_PI;
            auto ref_mesh = std::make_shared<const Mesh>(
                build_rect_mesh({-pi, pi, -pi, pi}, cfg.mesh_n, cfg.mesh_n,
                                RectInterface::rectangle_edges({-pi / 2, pi / 2, -pi / 2, pi / 2})));
            auto a = CoefficientField::isotropic([](const Vec2& p, double) {
                return 1.5 + 0.4 * std::sin(p.x() / 2.0) * std::cos(p.y() / 2.0);
            });
            a.ellipticity_bounds = {cfg.r, cfg.R};
            auto f = CoefficientField::scalar_field([](const Vec2& p, double) {
                return 0.5 * std::cos(p.x() / 2.0) * std::cos(p.y() / 2.0);
            });
            auto fam = std::shared_ptr<detail::VardomainFamily>(new detail::VardomainFamily{
                ref_mesh, std::make_shared<FemSpace>(ref_mesh), sine_stretch_family(), std::move(a),
                std::move(f), cfg.solver_tol});

            const double cp = fam->master_space->poincare_constant(1e-10);
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, cp, 2);
            const double C = model.ledger.C_vardom;
            model.construction_dim = 2;

            auto solve_lambda = [fam](const Eigen::VectorXd& lambda) -> DecoderValue {
                return fam->solve(lambda);
            };
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            model.decoder =
                compose({projection_stage(ConvexSet::cube(2, -inv_sqrt2, inv_sqrt2)),
                         scaling_stage(inv_sqrt2, 2, "box_scaling"),
                         solution_stage("vardomain_solve", C, 2, solve_lambda)},
                        "snapshot-L2-crossmesh", detail::crossmesh_distance_value);
            model.sample_params = [](int count, std::uint64_t seed) {
                return ConvexSet::cube(2, -0.5, 0.5).sample(count, seed);
            };
            model.solve_param = solve_lambda;
            model.witness_of = [](const Eigen::VectorXd& lambda) {
                return Eigen::VectorXd(std::sqrt(2.0) * lambda);
            };
            model.param_metric = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                return (x - y).norm();
            };
            model.value_norm = [](const DecoderValue& v) {
                const Snapshot& s = std::get<Snapshot>(v);
                const SpMat mass = assemble_mass(*s.mesh);
                return std::sqrt(std::max(0.0, s.level(0).dot(mass * s.level(0))));
            };
            model.lipschitz_constant = C;
            return model;
        }

        case ExampleId::curve_4_14: {
            const double pi = M_PI;
            const int n_active = cfg.active_blocks;
            const int blocks = cfg.K_max;
            std::vector<double> w(blocks);
            for (int k = 0; k < blocks; ++k) w[k] = weight_profile(cfg.weight_profile, k + 1);

            auto fam = std::make_shared<detail::VardomainFamily>();
            // mesh_n cells across, half as many vertically; the interface line
            // x2 = pi/2 needs an even vertical count
            const int ny = std::max(4, cfg.mesh_n / 2 + (cfg.mesh_n / 2) % 2);
            fam->ref_mesh = std::make_shared<const Mesh>(build_rect_mesh(
                {-pi, pi, 0, pi}, cfg.mesh_n, ny, RectInterface::horizontal_line(pi / 2)));
            fam->master_space = std::make_shared<FemSpace>(fam->ref_mesh);
            fam->transforms = curve_stretch_family(w, blocks);
            fam->a = CoefficientField::isotropic([](const Vec2& p, double) {
                return 1.5 + 0.4 * std::sin(p.x() / 2.0) * std::sin(p.y());
            });
            fam->a.ellipticity_bounds = {cfg.r, cfg.R};
            fam->f = CoefficientField::scalar_field(
                [](const Vec2& p, double) { return 0.5 * std::sin(p.y()); });
            fam->solver_tol = cfg.solver_tol;

            const double cp = fam->master_space->poincare_constant(1e-10);
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, cp, 2);
            const double C = model.ledger.C_vardom;
            model.construction_dim = 2 * n_active;
            model.truncation_error = std::sqrt(w[blocks - 1]);

            Eigen::VectorXd w_latent(2 * n_active), w_full(2 * blocks);
            for (int k = 0; k < blocks; ++k)
                for (int b = 0; b < 2; ++b) {
                    w_full[2 * k + b] = w[k];
                    if (2 * k + b < 2 * n_active) w_latent[2 * k + b] = w[k];
                }

            auto solve_lambda = [fam](const Eigen::VectorXd& lambda) -> DecoderValue {
                return fam->solve(lambda);
            };
            const AffineEmbed incl = sequence_truncate_embed(2, n_active, blocks);
            model.decoder = compose(
                {projection_stage(ConvexSet::weighted_ellipsoid(w_latent, 1.0)),
                 scaling_stage(3.0 / 8.0, 2 * n_active, "coefficient_scaling"),
                 affine_stage(incl, "sequence_inclusion"),
                 solution_stage("vardomain_solve", C, 2 * blocks, solve_lambda)},
                "snapshot-L2-crossmesh", detail::crossmesh_distance_value);
            model.sample_params = [w_full](int count, std::uint64_t seed) {
                return ConvexSet::weighted_ellipsoid(w_full, 3.0 / 8.0).sample(count, seed);
            };
            model.solve_param = solve_lambda;
            model.witness_of = [n_active](const Eigen::VectorXd& lambda) {
                return Eigen::VectorXd((8.0 / 3.0) * lambda.head(2 * n_active));
            };
            model.param_metric = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                return (x - y).norm();
            };
            model.value_norm = [](const DecoderValue& v) {
                const Snapshot& s = std::get<Snapshot>(v);
                const SpMat mass = assemble_mass(*s.mesh);
                return std::sqrt(std::max(0.0, s.level(0).dot(mass * s.level(0))));
            };
            model.lipschitz_constant = C;
            return model;
        }

        case ExampleId::varparam_4_17: {
            const double pi = M_PI;
            const int K = cfg.K;
            auto fam = std::make_shared<detail::VardomainFamily>();
            fam->ref_mesh = std::make_shared<const Mesh>(
                build_rect_mesh({-pi, pi, -pi, pi}, cfg.mesh_n, cfg.mesh_n,
                                RectInterface::rectangle_edges({-pi / 2, pi / 2, -pi / 2, pi / 2})));
            fam->master_space = std::make_shared<FemSpace>(fam->ref_mesh);
            fam->transforms = sine_stretch_family();
            fam->solver_tol = cfg.solver_tol;

            const double cp = fam->master_space->poincare_constant(1e-10);
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, cp, 2);
            const double C1 = model.ledger.C1_varparam;
            model.construction_dim = 2 * K + 2;

            // 4-Lipschitz disjoint bumps for a, decaying sine modes for f.
            std::vector<std::function<double(double)>> bumps;
            const double strip_w = 2.0 * pi / K;
            for (int k = 0; k < K; ++k)
                bumps.push_back(detail::cos2_bump(-pi + (k + 0.5) * strip_w,
                                                  std::min(pi / 2, strip_w) * 0.9));
            struct ModeNorm {
                CoefficientField field;
                double scale;
            };
            auto f_modes = std::make_shared<std::vector<CoefficientField>>();
            for (int k = 0; k < K; ++k) {
                const int mode = k + 1;
                // ||sin(m s1/2) sin(s2/2)||_{L2((-pi,pi)^2)} = pi, normalized to 2^{-k/2}
                const double scale = std::pow(2.0, -0.5 * (k + 1)) / pi;
                f_modes->push_back(CoefficientField::scalar_field([mode, scale](const Vec2& p, double) {
                    return scale * std::sin(mode * (p.x() + M_PI) / 2.0) *
                           std::sin((p.y() + M_PI) / 2.0);
                }));
            }

            const double r = cfg.r, R = cfg.R, tol = cfg.solver_tol;
            auto ref_mesh = fam->ref_mesh;
            auto transforms = std::make_shared<TransformFamily>(fam->transforms);
            auto solve_full = [ref_mesh, transforms, bumps, f_modes, K, r, R,
                               tol](const Eigen::VectorXd& p) -> DecoderValue {
                const Eigen::VectorXd mu_a = p.head(K);
                const Eigen::VectorXd mu_f = p.segment(K, K);
                const Eigen::VectorXd lambda = p.tail(2);
                auto a = CoefficientField::isotropic([bumps, mu_a, K](const Vec2& q, double) {
                    double acc = 1.5;
                    for (int k = 0; k < K; ++k) acc += mu_a[k] * bumps[static_cast<std::size_t>(k)](q.x());
                    return acc;
                });
                a.ellipticity_bounds = {r, R};
                auto f = CoefficientField::scalar_field([f_modes, mu_f, K](const Vec2& q, double t) {
                    double acc = 0.0;
                    for (int k = 0; k < K; ++k) acc += mu_f[k] * (*f_modes)[k].scalar(q, t);
                    return acc;
                });
                return solve_elliptic_vardomain(a, f, lambda, *transforms, *ref_mesh, tol);
            };

            const ConvexSet param_set = ConvexSet::product(
                {ConvexSet::ball(Eigen::VectorXd::Zero(K), 0.5),
                 ConvexSet::ball(Eigen::VectorXd::Zero(K), 0.5), ConvexSet::cube(2, -0.5, 0.5)});
            model.decoder = compose(
                {projection_stage(param_set),
                 scaling_stage(3.0, 2 * K + 2, "coefficient_parametrization"),
                 solution_stage("vardomain_solve", C1, 2 * K + 2,
                                [solve_full](const Eigen::VectorXd& z) {
                                    return solve_full(Eigen::VectorXd(z / 3.0));
                                })},
                "snapshot-L2-crossmesh", detail::crossmesh_distance_value);
            model.sample_params = [param_set](int count, std::uint64_t seed) {
                return param_set.sample(count, seed);
            };
            model.solve_param = solve_full;
            model.witness_of = [](const Eigen::VectorXd& p) { return p; };
            // d_A0 = |da|_inf + |df|_L2 + |dlambda|; exact for disjoint unit
            // bumps and L2-orthonormal-scaled modes
            auto mass = std::make_shared<SpMat>(assemble_mass(*fam->ref_mesh));
            model.param_metric = [K](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                const double da = (x.head(K) - y.head(K)).cwiseAbs().maxCoeff();
                double df2 = 0.0;
                for (int k = 0; k < K; ++k) {
                    const double d = x[K + k] - y[K + k];
                    df2 += d * d * std::pow(2.0, -static_cast<double>(k + 1));
                }
                return da + std::sqrt(df2) + (x.tail(2) - y.tail(2)).norm();
            };
            model.value_norm = [](const DecoderValue& v) {
                const Snapshot& s = std::get<Snapshot>(v);
                const SpMat m = assemble_mass(*s.mesh);
                return std::sqrt(std::max(0.0, s.level(0).dot(m * s.level(0))));
            };
            model.lipschitz_constant = C1;
            return model;
        }

        case ExampleId::adv_l2_4_22:
            throw std::invalid_argument(
                "example_decoder: adv_l2_4_22 has no constructive decoder; its width bound comes "
                "from the entropy chain (use bound_chain / entropy_grid_cover)");

        case ExampleId::adv_l1_4_20: {
            const int K = cfg.K;
            // disjoint cos^2 bumps of height 1/2 keep c inside [1, 2]
            auto bumps = std::make_shared<std::vector<std::function<double(double)>>>();
            Eigen::VectorXd mus(K);
            const double strip_w = 2.0 / K;
            const double bump_w = strip_w * 0.8;
            for (int k = 0; k < K; ++k) {
                auto bump = detail::cos2_bump(-1.0 + (k + 0.5) * strip_w, bump_w);
                bumps->push_back([bump](double x) { return 0.5 * bump(x); });
                mus[k] = 0.5 * bump_w / 2.0;  // exact L1 norm of 0.5 cos^2
            }
            model.mus = mus;
            model.ledger = theory_constants(cfg.r, cfg.R, cfg.T, 1.0, 2);
            model.construction_dim = K;
            const double r = cfg.r, R = cfg.R, tol = cfg.solver_tol;
            const double l_A = grf_expansion_lipschitz(mus);

            auto speed_field = [bumps, K](const Eigen::VectorXd& lambda) {
                return [bumps, lambda, K](double x) {
                    double acc = 1.5;
                    for (int k = 0; k < K; ++k) acc += lambda[k] * (*bumps)[static_cast<std::size_t>(k)](x);
                    return acc;
                };
            };
            auto solve_lambda = [speed_field, r, R, tol](const Eigen::VectorXd& lambda) -> DecoderValue {
                return solve_advection_exact(speed_field(lambda), r, R, tol);
            };
            auto dist = [](const DecoderValue& x, const DecoderValue& y) {
                return advection_distance(std::get<AdvectionSolution>(x),
                                          std::get<AdvectionSolution>(y), 1.0);
            };
            const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(K));
            model.decoder = compose(
                {projection_stage(ConvexSet::cube(K, -inv_sqrt_k, inv_sqrt_k)),
                 scaling_stage(std::sqrt(static_cast<double>(K)), K, "coefficient_scaling"),
                 solution_stage("characteristic_solve", l_A / (r * r) / std::sqrt(static_cast<double>(K)),
                                K,
                                [solve_lambda](const Eigen::VectorXd& lambda) {
                                    return solve_lambda(lambda);
                                })},
                "advection-L1", dist);
            model.sample_params = [K](int count, std::uint64_t seed) {
                return ConvexSet::cube(K, -1.0, 1.0).sample(count, seed);
            };
            model.solve_param = solve_lambda;
            model.witness_of = [inv_sqrt_k](const Eigen::VectorXd& lambda) {
                return Eigen::VectorXd(inv_sqrt_k * lambda);
            };
            // exact L1 distance of disjoint-bump expansions
            model.param_metric = [mus, K](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                double acc = 0.0;
                for (int k = 0; k < K; ++k) acc += std::abs(x[k] - y[k]) * mus[k];
                return acc;
            };
            model.value_norm = [](const DecoderValue&) { return 1.0; };
            model.lipschitz_constant = 1.0 / (r * r);
            return model;
        }

        case ExampleId::table1_contrast:
            throw std::invalid_argument("example_decoder: table1_contrast is a report, not a decoder");
    }
    throw std::logic_error("example_decoder: unknown example id");
}

}  // namespace widthlab
