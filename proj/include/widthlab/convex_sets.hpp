#pragma once

#include "widthlab/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

namespace widthlab {

class ConvexSet;

struct BoxSet {
    Eigen::VectorXd lo, hi;
};

struct BallSet {
    Eigen::VectorXd center;
    double radius;
};

/// { z : sum z_k^2 / w_k <= rho^2 }, centered at the origin; weights are
/// strictly positive and non-increasing.
struct EllipsoidSet {
    Eigen::VectorXd weights;
    double radius;
};

struct ProductSet {
    std::vector<ConvexSet> factors;
};

/// The inner set restricted to its first `active_dims` coordinates (the
/// remaining coordinates of an inner point are held at zero).
struct TruncationSet {
    std::shared_ptr<const ConvexSet> inner;
    int active_dims;
};

/// Closed convex parameter set with Euclidean metric projection, membership
/// and deterministic sampling. Immutable; safe to share across threads.
class ConvexSet {
public:
    using Variant = std::variant<BoxSet, BallSet, EllipsoidSet, ProductSet, TruncationSet>;

    static ConvexSet box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        if (lo.size() != hi.size()) throw std::invalid_argument("ConvexSet::box: size mismatch");
        for (int i = 0; i < lo.size(); ++i)
            if (lo[i] > hi[i]) throw std::invalid_argument("ConvexSet::box: lo > hi");
        return ConvexSet(BoxSet{lo, hi});
    }

    static ConvexSet cube(int dim, double lo, double hi) {
        return box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
    }

    static ConvexSet ball(const Eigen::VectorXd& center, double radius) {
        if (radius <= 0.0) throw std::invalid_argument("ConvexSet::ball: radius must be positive");
        return ConvexSet(BallSet{center, radius});
    }

    static ConvexSet unit_ball(int dim) { return ball(Eigen::VectorXd::Zero(dim), 1.0); }

    static ConvexSet weighted_ellipsoid(const Eigen::VectorXd& weights, double radius) {
        if (radius <= 0.0) throw std::invalid_argument("ConvexSet::weighted_ellipsoid: radius must be positive");
        for (int i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0)
                throw std::invalid_argument("ConvexSet::weighted_ellipsoid: weights must be positive");
            if (i > 0 && weights[i] > weights[i - 1] + 1e-15)
                throw std::invalid_argument("ConvexSet::weighted_ellipsoid: weights must be non-increasing");
        }
        return ConvexSet(EllipsoidSet{weights, radius});
    }

    static ConvexSet product(std::vector<ConvexSet> factors) {
        if (factors.empty()) throw std::invalid_argument("ConvexSet::product: no factors");
        return ConvexSet(ProductSet{std::move(factors)});
    }

    static ConvexSet truncation(ConvexSet inner, int active_dims) {
        if (active_dims < 1 || active_dims > inner.dim())
            throw std::invalid_argument("ConvexSet::truncation: bad active dimension count");
        return ConvexSet(TruncationSet{std::make_shared<const ConvexSet>(std::move(inner)), active_dims});
    }

    int dim() const {
        return std::visit(
            [](const auto& s) -> int {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BoxSet>) return static_cast<int>(s.lo.size());
                if constexpr (std::is_same_v<T, BallSet>) return static_cast<int>(s.center.size());
                if constexpr (std::is_same_v<T, EllipsoidSet>) return static_cast<int>(s.weights.size());
                if constexpr (std::is_same_v<T, ProductSet>) {
                    int d = 0;
                    for (const auto& f : s.factors) d += f.dim();
                    return d;
                }
                if constexpr (std::is_same_v<T, TruncationSet>) return s.active_dims;
            },
            v_);
    }

    /// Euclidean nearest point of the set. Total on inputs of matching size.
    Eigen::VectorXd project(const Eigen::VectorXd& y) const {
        check_dim(y);
        return std::visit([&](const auto& s) { return project_impl(s, y); }, v_);
    }

    bool contains(const Eigen::VectorXd& p, double tol = 1e-12) const {
        check_dim(p);
        return std::visit([&](const auto& s) { return contains_impl(s, p, tol); }, v_);
    }

    /// Deterministic sampler: identical output for identical (count, seed).
    std::vector<Eigen::VectorXd> sample(int count, std::uint64_t seed) const {
        if (count < 1) throw std::invalid_argument("ConvexSet::sample: count must be >= 1");
        std::vector<Eigen::VectorXd> out;
        out.reserve(count);
        for (int i = 0; i < count; ++i) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            out.push_back(sample_one(rng));
        }
        return out;
    }

    Eigen::VectorXd sample_one(Rng& rng) const {
        return std::visit([&](const auto& s) { return sample_impl(s, rng); }, v_);
    }

    const Variant& variant() const { return v_; }

private:
    explicit ConvexSet(Variant v) : v_(std::move(v)) {}

    void check_dim(const Eigen::VectorXd& p) const {
        if (p.size() != dim()) throw std::invalid_argument("ConvexSet: point dimension mismatch");
    }

    // --- projection ---------------------------------------------------------

    static Eigen::VectorXd project_impl(const BoxSet& s, const Eigen::VectorXd& y) {
        return y.cwiseMax(s.lo).cwiseMin(s.hi);
    }

    static Eigen::VectorXd project_impl(const BallSet& s, const Eigen::VectorXd& y) {
        const Eigen::VectorXd d = y - s.center;
        const double n = d.norm();
        if (n <= s.radius) return y;
        return s.center + (s.radius / n) * d;
    }

    /// Lagrange-multiplier root solve: z_k = y_k / (1 + mu / w_k) with mu the
    /// root of sum z_k^2/w_k = rho^2, found by safeguarded Newton/bisection.
    static Eigen::VectorXd project_impl(const EllipsoidSet& s, const Eigen::VectorXd& y) {
        const double rho2 = s.radius * s.radius;
        auto constraint = [&](double mu) {
            double acc = 0.0;
            for (int k = 0; k < y.size(); ++k) {
                const double zk = y[k] / (1.0 + mu / s.weights[k]);
                acc += zk * zk / s.weights[k];
            }
            return acc - rho2;
        };
        if (constraint(0.0) <= 0.0) return y;  // already inside

        double lo = 0.0, hi = 1.0;
        while (constraint(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e100) throw std::runtime_error("ellipsoid projection: bracketing failed");
        }
        double mu = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            double g = 0.0, dg = 0.0;
            for (int k = 0; k < y.size(); ++k) {
                const double denom = 1.0 + mu / s.weights[k];
                const double zk = y[k] / denom;
                g += zk * zk / s.weights[k];
                dg += -2.0 * zk * zk / (s.weights[k] * s.weights[k] * denom);
            }
            g -= rho2;
            if (g > 0.0)
                lo = mu;
            else
                hi = mu;
            if (std::abs(g) <= 1e-14 * std::max(1.0, rho2) || hi - lo <= 1e-15 * (1.0 + mu)) break;
            double step = (dg != 0.0) ? mu - g / dg : 0.5 * (lo + hi);
            if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);  // bisection safeguard
            mu = step;
        }
        Eigen::VectorXd z(y.size());
        for (int k = 0; k < y.size(); ++k) z[k] = y[k] / (1.0 + mu / s.weights[k]);
        return z;
    }

    static Eigen::VectorXd project_impl(const ProductSet& s, const Eigen::VectorXd& y) {
        Eigen::VectorXd out(y.size());
        int off = 0;
        for (const auto& f : s.factors) {
            const int d = f.dim();
            out.segment(off, d) = f.project(y.segment(off, d));
            off += d;
        }
        return out;
    }

    static Eigen::VectorXd project_impl(const TruncationSet& s, const Eigen::VectorXd& y) {
        return s.inner->sliced(s.active_dims).project(y);
    }

    // --- membership ----------------------------------------------------------

    static bool contains_impl(const BoxSet& s, const Eigen::VectorXd& p, double tol) {
        for (int i = 0; i < p.size(); ++i)
            if (p[i] < s.lo[i] - tol || p[i] > s.hi[i] + tol) return false;
        return true;
    }

    static bool contains_impl(const BallSet& s, const Eigen::VectorXd& p, double tol) {
        return (p - s.center).norm() <= s.radius + tol;
    }

    static bool contains_impl(const EllipsoidSet& s, const Eigen::VectorXd& p, double tol) {
        double acc = 0.0;
        for (int k = 0; k < p.size(); ++k) acc += p[k] * p[k] / s.weights[k];
        return std::sqrt(acc) <= s.radius + tol;
    }

    static bool contains_impl(const ProductSet& s, const Eigen::VectorXd& p, double tol) {
        int off = 0;
        for (const auto& f : s.factors) {
            const int d = f.dim();
            if (!f.contains(p.segment(off, d), tol)) return false;
            off += d;
        }
        return true;
    }

    static bool contains_impl(const TruncationSet& s, const Eigen::VectorXd& p, double tol) {
        return s.inner->sliced(s.active_dims).contains(p, tol);
    }

    // --- sampling ------------------------------------------------------------

    static Eigen::VectorXd sample_impl(const BoxSet& s, Rng& rng) {
        Eigen::VectorXd p(s.lo.size());
        for (int i = 0; i < p.size(); ++i) p[i] = rng.uniform(s.lo[i], s.hi[i]);
        return p;
    }

    static Eigen::VectorXd unit_ball_sample(int dim, Rng& rng) {
        Eigen::VectorXd dir(dim);
        double n = 0.0;
        do {
            for (int i = 0; i < dim; ++i) dir[i] = rng.normal();
            n = dir.norm();
        } while (n == 0.0);
        const double radius = std::pow(rng.uniform(), 1.0 / dim);
        return (radius / n) * dir;
    }

    static Eigen::VectorXd sample_impl(const BallSet& s, Rng& rng) {
        return s.center + s.radius * unit_ball_sample(static_cast<int>(s.center.size()), rng);
    }

    static Eigen::VectorXd sample_impl(const EllipsoidSet& s, Rng& rng) {
        Eigen::VectorXd z = unit_ball_sample(static_cast<int>(s.weights.size()), rng);
        for (int k = 0; k < z.size(); ++k) z[k] *= s.radius * std::sqrt(s.weights[k]);
        return z;
    }

    static Eigen::VectorXd sample_impl(const ProductSet& s, Rng& rng) {
        Eigen::VectorXd p(0);
        for (const auto& f : s.factors) {
            const Eigen::VectorXd q = f.sample_one(rng);
            Eigen::VectorXd merged(p.size() + q.size());
            merged << p, q;
            p.swap(merged);
        }
        return p;
    }

    static Eigen::VectorXd sample_impl(const TruncationSet& s, Rng& rng) {
        return s.inner->sliced(s.active_dims).sample_one(rng);
    }

    /// Restriction of a coordinate-decomposable set to its leading coords.
    ConvexSet sliced(int d) const {
        if (d == dim()) return *this;
        return std::visit(
            [&](const auto& s) -> ConvexSet {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BoxSet>)
                    return ConvexSet(BoxSet{s.lo.head(d), s.hi.head(d)});
                else if constexpr (std::is_same_v<T, BallSet>)
                    return ConvexSet(BallSet{s.center.head(d), s.radius});
                else if constexpr (std::is_same_v<T, EllipsoidSet>)
                    return ConvexSet(EllipsoidSet{s.weights.head(d), s.radius});
                else
                    throw std::invalid_argument("ConvexSet: truncation needs a coordinate-decomposable inner set");
            },
            v_);
    }

    Variant v_;
};

/// Metric on parameter vectors. The field variants measure the L^1 or L^inf
/// distance of coefficient expansions sum lambda_k phi_k over an interval,
/// on a fixed midpoint grid shared by all evaluations.
class ParamMetric {
public:
    struct Block {
        int offset, len;
        double weight;
        bool inf_norm;  // per-block l-inf instead of l2
    };

    static ParamMetric euclidean() { return ParamMetric(Kind::Euclidean); }

    static ParamMetric weighted_blocks(std::vector<Block> blocks) {
        ParamMetric m(Kind::WeightedBlocks);
        m.blocks_ = std::move(blocks);
        return m;
    }

    static ParamMetric field_l1(std::vector<std::function<double(double)>> basis, double lo, double hi,
                                int grid = 4096) {
        ParamMetric m(Kind::FieldL1);
        m.init_field(std::move(basis), lo, hi, grid);
        return m;
    }

    static ParamMetric field_linf(std::vector<std::function<double(double)>> basis, double lo, double hi,
                                  int grid = 4096) {
        ParamMetric m(Kind::FieldLinf);
        m.init_field(std::move(basis), lo, hi, grid);
        return m;
    }

    double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
        if (x.size() != y.size()) throw std::invalid_argument("ParamMetric: size mismatch");
        switch (kind_) {
            case Kind::Euclidean:
                return (x - y).norm();
            case Kind::WeightedBlocks: {
                double acc = 0.0;
                for (const auto& b : blocks_) {
                    const Eigen::VectorXd d = x.segment(b.offset, b.len) - y.segment(b.offset, b.len);
                    acc += b.weight * (b.inf_norm ? d.cwiseAbs().maxCoeff() : d.norm());
                }
                return acc;
            }
            case Kind::FieldL1:
            case Kind::FieldLinf: {
                const Eigen::VectorXd d = x - y;
                if (d.size() != static_cast<int>(basis_values_.size()))
                    throw std::invalid_argument("ParamMetric: coefficient count mismatch");
                double acc = 0.0, mx = 0.0;
                for (std::size_t g = 0; g < grid_x_.size(); ++g) {
                    double v = 0.0;
                    for (int k = 0; k < d.size(); ++k) v += d[k] * basis_values_[k][g];
                    acc += std::abs(v) * cell_;
                    mx = std::max(mx, std::abs(v));
                }
                return kind_ == Kind::FieldL1 ? acc : mx;
            }
        }
        throw std::logic_error("ParamMetric: unknown kind");
    }

private:
    enum class Kind { Euclidean, WeightedBlocks, FieldL1, FieldLinf };

    explicit ParamMetric(Kind k) : kind_(k) {}

    void init_field(std::vector<std::function<double(double)>> basis, double lo, double hi, int grid) {
        cell_ = (hi - lo) / grid;
        grid_x_.resize(grid);
        for (int g = 0; g < grid; ++g) grid_x_[g] = lo + (g + 0.5) * cell_;
        basis_values_.resize(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) {
            basis_values_[k].resize(grid);
            for (int g = 0; g < grid; ++g) basis_values_[k][g] = basis[k](grid_x_[g]);
        }
    }

    Kind kind_;
    std::vector<Block> blocks_;
    std::vector<double> grid_x_;
    std::vector<std::vector<double>> basis_values_;
    double cell_ = 0.0;
};

}  // namespace widthlab
