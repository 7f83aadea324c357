#pragma once

#include "widthlab/advection.hpp"
#include "widthlab/convex_sets.hpp"
#include "widthlab/embeddings.hpp"
#include "widthlab/fem_space.hpp"
#include "widthlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace widthlab {

/// A decoder output: a parameter vector, a discrete PDE solution, or an
/// advection breakthrough solution.
using DecoderValue = std::variant<Eigen::VectorXd, Snapshot, AdvectionSolution>;

struct DecoderStage {
    std::string name;
    double lipschitz = 1.0;
    int in_dim = -1;   // -1: not a plain vector input
    int out_dim = -1;  // -1: not a plain vector output
    std::function<DecoderValue(const DecoderValue&)> apply;
};

inline DecoderStage projection_stage(const ConvexSet& set, std::string name = "metric_projection") {
    DecoderStage s;
    s.name = std::move(name);
    s.lipschitz = 1.0;
    s.in_dim = s.out_dim = set.dim();
    s.apply = [set](const DecoderValue& v) -> DecoderValue {
        return set.project(std::get<Eigen::VectorXd>(v));
    };
    return s;
}

inline DecoderStage affine_stage(const AffineEmbed& embed, std::string name = "affine_embed") {
    DecoderStage s;
    s.name = std::move(name);
    s.lipschitz = embed.lipschitz;
    s.in_dim = embed.in_dim;
    s.out_dim = embed.out_dim;
    s.apply = [apply = embed.apply](const DecoderValue& v) -> DecoderValue {
        return apply(std::get<Eigen::VectorXd>(v));
    };
    return s;
}

inline DecoderStage scaling_stage(double factor, int dim, std::string name = "scaling") {
    DecoderStage s;
    s.name = std::move(name);
    s.lipschitz = std::abs(factor);
    s.in_dim = s.out_dim = dim;
    s.apply = [factor](const DecoderValue& v) -> DecoderValue {
        return Eigen::VectorXd(factor * std::get<Eigen::VectorXd>(v));
    };
    return s;
}

/// Final stage mapping a parameter vector into a solution object.
inline DecoderStage solution_stage(std::string name, double lipschitz, int in_dim,
                                   std::function<DecoderValue(const Eigen::VectorXd&)> solve) {
    DecoderStage s;
    s.name = std::move(name);
    s.lipschitz = lipschitz;
    s.in_dim = in_dim;
    s.out_dim = -1;
    s.apply = [solve = std::move(solve)](const DecoderValue& v) -> DecoderValue {
        return solve(std::get<Eigen::VectorXd>(v));
    };
    return s;
}

/// Composable Lipschitz decoder: latent unit ball -> target space, with the
/// declared bound equal to the product of the stage bounds.
struct Decoder {
    int latent_dim = 0;
    double lipschitz_bound = 1.0;
    std::vector<std::pair<std::string, double>> stage_bounds;
    std::string target_space;  // param | field | snapshot-L2 | snapshot-H10 |
                               // snapshot-L2T_H10 | snapshot-L2-crossmesh | advection-Lp
    std::function<DecoderValue(const Eigen::VectorXd&)> eval;
    std::function<double(const DecoderValue&, const DecoderValue&)> distance;

    DecoderValue operator()(const Eigen::VectorXd& z) const { return eval(z); }
};

inline Decoder compose(std::vector<DecoderStage> stages, std::string target_space,
                       std::function<double(const DecoderValue&, const DecoderValue&)> distance) {
    if (stages.empty()) throw std::invalid_argument("compose: no stages");
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
        if (stages[i].out_dim >= 0 && stages[i + 1].in_dim >= 0 &&
            stages[i].out_dim != stages[i + 1].in_dim)
            throw std::invalid_argument("compose: stage dimensions do not chain (" + stages[i].name +
                                        " -> " + stages[i + 1].name + ")");
    }
    Decoder d;
    d.latent_dim = stages.front().in_dim;
    d.lipschitz_bound = 1.0;
    for (const auto& s : stages) {
        d.lipschitz_bound *= s.lipschitz;
        d.stage_bounds.emplace_back(s.name, s.lipschitz);
    }
    d.target_space = std::move(target_space);
    d.distance = std::move(distance);
    d.eval = [stages = std::move(stages)](const Eigen::VectorXd& z) {
        DecoderValue v = z;
        for (const auto& s : stages) v = s.apply(v);
        return v;
    };
    return d;
}

inline double euclidean_value_distance(const DecoderValue& a, const DecoderValue& b) {
    return (std::get<Eigen::VectorXd>(a) - std::get<Eigen::VectorXd>(b)).norm();
}

/// z -> (cos pi z, sin pi z): the 1-dimensional pi-Lipschitz cover of the
/// unit circle; the latent interval [-1,1] wraps exactly once around it.
inline Decoder circle_decoder() {
    DecoderStage s;
    s.name = "circle_wrap";
    s.lipschitz = M_PI;
    s.in_dim = 1;
    s.out_dim = 2;
    s.apply = [](const DecoderValue& v) -> DecoderValue {
        const double z = std::get<Eigen::VectorXd>(v)[0];
        Eigen::VectorXd p(2);
        p << std::cos(M_PI * z), std::sin(M_PI * z);
        return p;
    };
    return compose({s}, "param", euclidean_value_distance);
}

/// z -> D(l * diam * z + e0): recenters a decoder around the encoding e0 and
/// rescales the latent ball; the wrapped bound is l^2 * diam.
inline Decoder shift_scale_wrap(const Decoder& decoder, const Eigen::VectorXd& shift_e0, double diam,
                                double l) {
    if (!(diam > 0.0)) throw std::invalid_argument("shift_scale_wrap: diam must be positive");
    if (shift_e0.size() != decoder.latent_dim)
        throw std::invalid_argument("shift_scale_wrap: shift dimension mismatch");
    Decoder d;
    d.latent_dim = decoder.latent_dim;
    d.lipschitz_bound = l * l * diam;
    d.stage_bounds = {{"shift_scale", l * diam}, {"wrapped_decoder", l}};
    d.target_space = decoder.target_space;
    d.distance = decoder.distance;
    d.eval = [inner = decoder.eval, shift_e0, diam, l](const Eigen::VectorXd& z) {
        return inner(l * diam * z + shift_e0);
    };
    return d;
}

/// One reconstruction test: the latent witness of a parameter and the target
/// solution it must reproduce.
struct ReconstructionCase {
    Eigen::VectorXd witness;
    DecoderValue target;
    double target_norm = 1.0;  // reference scale for relative errors
};

struct ReconstructionReport {
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    int argmax = -1;
    std::vector<double> errors;
};

inline ReconstructionReport eval_reconstruction(const Decoder& decoder,
                                                const std::vector<ReconstructionCase>& cases) {
    ReconstructionReport rep;
    rep.errors.reserve(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (cases[i].witness.norm() > 1.0 + 1e-10)
            throw std::invalid_argument("eval_reconstruction: witness lies outside the latent unit ball");
        const DecoderValue out = decoder(cases[i].witness);
        const double err = decoder.distance(out, cases[i].target);
        rep.errors.push_back(err);
        if (err > rep.max_abs_error) {
            rep.max_abs_error = err;
            rep.argmax = static_cast<int>(i);
        }
        rep.max_rel_error = std::max(rep.max_rel_error, err / std::max(cases[i].target_norm, 1e-300));
    }
    return rep;
}

/// Empirical Lipschitz ratio of a decoder over sampled latent pairs in the
/// unit ball; stays below the declared bound for a sound construction.
inline double empirical_decoder_lipschitz(const Decoder& decoder, int pairs, std::uint64_t seed) {
    const ConvexSet ball = ConvexSet::unit_ball(decoder.latent_dim);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const Eigen::VectorXd z1 = ball.sample_one(rng);
        const Eigen::VectorXd z2 = ball.sample_one(rng);
        const double dz = (z1 - z2).norm();
        if (dz < 1e-12) continue;
        worst = std::max(worst, decoder.distance(decoder(z1), decoder(z2)) / dz);
    }
    return worst;
}

struct WidthSearchBudget {
    int starts = 8;
    int iterations = 200;
    double step = 0.3;
};

struct WidthSearchResult {
    double estimate = 0.0;  // max over targets of the best found objective
    int argmax = -1;
    std::vector<double> per_target;
    std::vector<std::vector<double>> traces;  // best-so-far per iteration, worst target only
    std::string semantics = "upper bound of inf, lower bound of sup: heuristic estimate";
};

/// Projected Nelder-Mead search of inf_z ||target - D(z)|| over the latent
/// unit ball, multi-start and fully seeded. The paper-free part of the lab:
/// a heuristic whose one-sided semantics ride along in the result.
inline WidthSearchResult estimate_decoder_width(const Decoder& decoder,
                                                const std::vector<DecoderValue>& targets,
                                                const WidthSearchBudget& budget, std::uint64_t seed) {
    if (budget.starts < 1 || budget.iterations < 1)
        throw std::invalid_argument("estimate_decoder_width: search budget must be positive");
    const int n = decoder.latent_dim;
    const ConvexSet ball = ConvexSet::unit_ball(n);

    WidthSearchResult result;
    result.per_target.reserve(targets.size());
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        auto objective = [&](const Eigen::VectorXd& z) {
            return decoder.distance(decoder(z), targets[ti]);
        };
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> best_trace;
        for (int s = 0; s < budget.starts; ++s) {
            Rng rng(seed, ti * 1000003ULL + static_cast<std::uint64_t>(s));
            // simplex around a random interior start
            std::vector<Eigen::VectorXd> simplex(n + 1);
            std::vector<double> value(n + 1);
            simplex[0] = 0.9 * ball.sample_one(rng);
            for (int k = 1; k <= n; ++k) {
                simplex[k] = simplex[0];
                simplex[k][k - 1] += budget.step;
                simplex[k] = ball.project(simplex[k]);
            }
            for (int k = 0; k <= n; ++k) value[k] = objective(simplex[k]);
            std::vector<double> trace;
            trace.reserve(budget.iterations);
            for (int it = 0; it < budget.iterations; ++it) {
                // order
                std::vector<int> idx(n + 1);
                for (int k = 0; k <= n; ++k) idx[k] = k;
                std::sort(idx.begin(), idx.end(), [&](int a, int b) { return value[a] < value[b]; });
                std::vector<Eigen::VectorXd> sx(n + 1);
                std::vector<double> sv(n + 1);
                for (int k = 0; k <= n; ++k) {
                    sx[k] = simplex[idx[k]];
                    sv[k] = value[idx[k]];
                }
                simplex.swap(sx);
                value.swap(sv);
                trace.push_back(value[0]);

                Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
                for (int k = 0; k < n; ++k) centroid += simplex[k];
                centroid /= n;

                const Eigen::VectorXd reflected = ball.project(centroid + (centroid - simplex[n]));
                const double fr = objective(reflected);
                if (fr < value[0]) {
                    const Eigen::VectorXd expanded =
                        ball.project(centroid + 2.0 * (centroid - simplex[n]));
                    const double fe = objective(expanded);
                    if (fe < fr) {
                        simplex[n] = expanded;
                        value[n] = fe;
                    } else {
                        simplex[n] = reflected;
                        value[n] = fr;
                    }
                } else if (fr < value[n - 1]) {
                    simplex[n] = reflected;
                    value[n] = fr;
                } else {
                    const Eigen::VectorXd contracted =
                        ball.project(centroid + 0.5 * (simplex[n] - centroid));
                    const double fc = objective(contracted);
                    if (fc < value[n]) {
                        simplex[n] = contracted;
                        value[n] = fc;
                    } else {
                        for (int k = 1; k <= n; ++k) {
                            simplex[k] = ball.project(simplex[0] + 0.5 * (simplex[k] - simplex[0]));
                            value[k] = objective(simplex[k]);
                        }
                    }
                }
            }
            const double run_best = *std::min_element(value.begin(), value.end());
            if (run_best < best) {
                best = run_best;
                best_trace = std::move(trace);
            }
        }
        result.per_target.push_back(best);
        if (best > result.estimate) {
            result.estimate = best;
            result.argmax = static_cast<int>(ti);
            result.traces = {best_trace};
        }
    }
    return result;
}

}  // namespace widthlab
