#pragma once

#include "widthlab/assembly.hpp"
#include "widthlab/constants.hpp"
#include "widthlab/example_id.hpp"
#include "widthlab/reports.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace widthlab {

struct PodWidths {
    Eigen::VectorXd singular_values;
    std::vector<WidthReport> sigma_reports;     // value = sigma_{n+1}
    std::vector<WidthReport> residual_reports;  // value = worst projection residual
};

/// Sample-based Kolmogorov width estimates: with the Gram matrix G = L L^T of
/// the chosen norm, the SVD of Y = L^T U (snapshots in the columns of U)
/// yields the POD spectrum. Both reports are lower estimates of the true
/// width: the sample is finite and the POD span is one particular subspace.
inline PodWidths kolmogorov_width_svd(const Eigen::MatrixXd& snapshots, const SpMat& gram, int max_n) {
    if (snapshots.cols() < 2)
        throw std::invalid_argument("kolmogorov_width_svd: need at least 2 snapshots");
    if (snapshots.rows() != gram.rows())
        throw std::invalid_argument("kolmogorov_width_svd: norm Gram matrix does not match snapshots");

    Eigen::SimplicialLLT<SpMat> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("kolmogorov_width_svd: Gram matrix is not SPD");
    // G = P^T L L^T P, so y = L^T (P u) preserves the norm inner product.
    Eigen::MatrixXd y(snapshots.rows(), snapshots.cols());
    for (int j = 0; j < snapshots.cols(); ++j)
        y.col(j) = llt.matrixL().transpose() *
                   (llt.permutationP() * Eigen::VectorXd(snapshots.col(j)));

    Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const Eigen::MatrixXd& v = svd.matrixV();
    const int m = static_cast<int>(snapshots.cols());

    PodWidths out;
    out.singular_values = sigma;
    for (int n = 0; n <= max_n; ++n) {
        WidthReport s;
        s.method = "kolmogorov_svd";
        s.n = n;
        s.l = std::numeric_limits<double>::quiet_NaN();
        s.value = (n < sigma.size()) ? sigma[n] : 0.0;
        s.semantics = "lower_estimate";
        out.sigma_reports.push_back(s);

        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int j = n; j < sigma.size(); ++j) {
                const double c = sigma[j] * v(i, j);
                acc += c * c;
            }
            worst = std::max(worst, std::sqrt(acc));
        }
        WidthReport rres = s;
        rres.value = worst;
        out.residual_reports.push_back(rres);
    }
    return out;
}

struct EntropyGridCover {
    std::vector<Eigen::VectorXd> centers;  // coefficient-space midpoint grid
    std::vector<int> m_k;
    double delta_n = 0.0;
    double radius_bound = 0.0;  // sum mu_k / m_k
    WidthReport report;
};

/// Midpoint-grid inner cover of the expansion set { phi_0 + sum l_k phi_k }:
/// delta_n = 2^{-n/K} (prod mu_k)^{1/K}, m_k = floor(mu_k / delta_n) cells per
/// coordinate, at most 2^n centers, covering radius at most sum mu_k/m_k.
/// Valid once delta_n < mu_k/2 for every k; smaller n is rejected with the
/// minimal admissible value.
inline EntropyGridCover entropy_grid_cover(const Eigen::VectorXd& mus, int n) {
    const int K = static_cast<int>(mus.size());
    if (K < 1) throw std::invalid_argument("entropy_grid_cover: empty basis");
    double log_prod = 0.0, mu_min = mus[0];
    for (int k = 0; k < K; ++k) {
        if (!(mus[k] > 0.0)) throw std::invalid_argument("entropy_grid_cover: norms must be positive");
        log_prod += std::log2(mus[k]);
        mu_min = std::min(mu_min, mus[k]);
    }
    const double delta_n = std::exp2(-static_cast<double>(n) / K + log_prod / K);
    if (!(delta_n < 0.5 * mu_min)) {
        const double n_min = K * (log_prod / K - std::log2(0.5 * mu_min));
        throw std::invalid_argument(
            "entropy_grid_cover: n too small for the midpoint-grid construction; need n >= " +
            std::to_string(static_cast<int>(std::floor(n_min)) + 1));
    }

    EntropyGridCover out;
    out.delta_n = delta_n;
    out.m_k.resize(K);
    double count = 1.0;
    for (int k = 0; k < K; ++k) {
        out.m_k[k] = static_cast<int>(std::floor(mus[k] / delta_n));
        out.radius_bound += mus[k] / out.m_k[k];
        count *= out.m_k[k];
    }
    if (count > std::exp2(n) * (1.0 + 1e-12))
        throw std::logic_error("entropy_grid_cover: center count exceeds 2^n");

    // Cartesian product of the per-coordinate midpoint grids.
    std::vector<Eigen::VectorXd> centers;
    centers.emplace_back(Eigen::VectorXd::Zero(K));
    std::vector<Eigen::VectorXd> next;
    for (int k = 0; k < K; ++k) {
        next.clear();
        for (const auto& base : centers) {
            for (int i = 1; i <= out.m_k[k]; ++i) {
                Eigen::VectorXd c = base;
                c[k] = 2.0 * i / out.m_k[k] - 1.0 - 1.0 / out.m_k[k];
                next.push_back(std::move(c));
            }
        }
        centers.swap(next);
    }
    out.centers = std::move(centers);

    out.report.method = "entropy_grid";
    out.report.n = n;
    out.report.l = std::numeric_limits<double>::quiet_NaN();
    out.report.value = out.radius_bound;
    out.report.semantics = "upper_bound";
    for (int k = 0; k < K; ++k) {
        out.report.constants_used["mu_" + std::to_string(k + 1)] = mus[k];
        out.report.constants_used["m_" + std::to_string(k + 1)] = out.m_k[k];
    }
    out.report.constants_used["delta_n"] = delta_n;
    return out;
}

/// Farthest-point (Gonzalez) selection of 2^n centers from a sample; the
/// radius read off the sample is a lower estimate of the inner entropy
/// number of the underlying set and an upper bound for the sample itself.
inline WidthReport entropy_greedy(const std::vector<Eigen::VectorXd>& points,
                                  const std::function<double(const Eigen::VectorXd&,
                                                             const Eigen::VectorXd&)>& dist,
                                  int n) {
    if (points.empty()) throw std::invalid_argument("entropy_greedy: empty sample");
    const std::size_t want =
        (n >= 60) ? points.size() : std::min<std::size_t>(points.size(), std::size_t{1} << n);
    std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
    std::size_t pick = 0;  // deterministic start
    std::vector<std::size_t> centers;
    for (std::size_t c = 0; c < want; ++c) {
        centers.push_back(pick);
        double worst = 0.0;
        std::size_t far = pick;
        for (std::size_t i = 0; i < points.size(); ++i) {
            nearest[i] = std::min(nearest[i], dist(points[i], points[pick]));
            if (nearest[i] > worst) {
                worst = nearest[i];
                far = i;
            }
        }
        pick = far;
    }
    double radius = 0.0;
    for (double d : nearest) radius = std::max(radius, d);

    WidthReport rep;
    rep.method = "entropy_greedy";
    rep.n = n;
    rep.l = std::numeric_limits<double>::quiet_NaN();
    rep.value = radius;
    rep.semantics = "lower_estimate";
    rep.constants_used["centers"] = static_cast<double>(centers.size());
    rep.constants_used["sample_size"] = static_cast<double>(points.size());
    return rep;
}

/// Least-squares slope of log(y) against log(x); the decay-exponent fit.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("loglog_slope: bad input");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("loglog_slope: fewer than 2 positive points");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Least-squares slope of log2(y) against n (bits per unit n).
inline double log2_slope(const std::vector<double>& ns, const std::vector<double>& ys) {
    if (ns.size() != ys.size() || ns.size() < 2) throw std::invalid_argument("log2_slope: bad input");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ys[i] > 0.0)) continue;
        const double ly = std::log2(ys[i]);
        sx += ns[i];
        sy += ly;
        sxx += ns[i] * ns[i];
        sxy += ns[i] * ly;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("log2_slope: fewer than 2 positive points");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Closed-form width bound of an example's theorem chain at index n (the
/// theorem's own index: expansion blocks or entropy exponent). The report
/// carries the latent dimension the theorem prescribes and every constant.
struct BoundChainData {
    int K = 1;
    std::string weight_profile = "k^-2";
    Eigen::VectorXd mus;  // basis norms for the advection chains
};

inline WidthReport bound_chain(ExampleId id, int n, const ConstantsLedger& ledger,
                               const BoundChainData& data = {}) {
    WidthReport rep;
    rep.method = "decoder_bound_chain";
    rep.semantics = "upper_bound";
    rep.constants_used = ledger.as_map();
    const double inf = std::numeric_limits<double>::infinity();

    auto zero_at = [&](int dim, double l) {
        rep.n = std::max(n, 0);
        rep.l = l;
        rep.value = (n >= dim) ? 0.0 : inf;
        rep.constants_used["construction_dim"] = dim;
    };

    switch (id) {
        case ExampleId::circle_3_4:
            zero_at(1, M_PI);
            return rep;
        case ExampleId::elliptic_4_2:
            zero_at(data.K * data.K,
                    (ledger.C_P / (ledger.r * ledger.r)) * ledger.R * (data.K / 2.0));
            return rep;
        case ExampleId::parabolic_4_5:
            zero_at(5 * data.K, 5.0 * ledger.C_parabolic * ledger.R);
            return rep;
        case ExampleId::parabolic_4_6: {
            rep.n = 5 * n;
            rep.l = 5.0 * ledger.C_parabolic * ledger.R;
            const double w_n = weight_profile(data.weight_profile, n);
            rep.value = rep.l * std::sqrt(w_n);
            rep.constants_used["w_n"] = w_n;
            return rep;
        }
        case ExampleId::movdisk_4_10:
        case ExampleId::movhole_4_11:
            zero_at(1, ledger.C_vardom * M_PI);
            return rep;
        case ExampleId::defhole_4_13:
            zero_at(2, ledger.C_vardom / std::sqrt(2.0));
            return rep;
        case ExampleId::curve_4_14: {
            rep.n = 2 * n;
            rep.l = 3.0 * ledger.C_vardom / 8.0;
            const double w_n = weight_profile(data.weight_profile, n);
            rep.value = rep.l * std::sqrt(w_n);
            rep.constants_used["w_n"] = w_n;
            return rep;
        }
        case ExampleId::varparam_4_17:
            zero_at(2 * data.K + 2, 3.0 * ledger.C1_varparam);
            return rep;
        case ExampleId::adv_l1_4_20:
            zero_at(data.K, grf_expansion_lipschitz(data.mus) / (ledger.r * ledger.r));
            rep.constants_used["l_A"] = grf_expansion_lipschitz(data.mus);
            return rep;
        case ExampleId::adv_l2_4_22: {
            const int K = static_cast<int>(data.mus.size());
            rep.n = 26 * n;
            rep.l = 8.0;
            const double C = advection_l2_width_constant(ledger.r, data.mus);
            rep.value = C * std::exp2(-0.5 * n / K);
            rep.constants_used["C_ex_adv_l2"] = C;
            rep.constants_used["entropy_C1"] = grf_entropy_constant(data.mus);
            return rep;
        }
        case ExampleId::table1_contrast:
            break;
    }
    throw std::invalid_argument("bound_chain: no closed-form chain for this id");
}

}  // namespace widthlab
