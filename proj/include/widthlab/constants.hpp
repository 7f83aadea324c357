#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace widthlab {

/// Every named constant of the bound chains, with the closed forms spelled
/// out where they are closed-form and the Poincare constant supplied from a
/// spectral solve (or by the caller).
struct ConstantsLedger {
    double r = 0.0, R = 0.0, T = 0.0;
    int dim = 2;
    double C_P = 0.0;           // Poincare constant of the (master) domain
    double C_B = 0.0;           // R + R^2/(2r)
    double C1_parabolic = 0.0;  // Gronwall trace, see theory_constants()
    double C_parabolic = 0.0;   // max(2 R C1^2, 2 R C1^2 C_P^2, C1)
    double delta0 = 0.0;        // min(1 - (8/9)^{2/d}, 1/9)
    double C_J = 0.0;           // (9 + 1/delta0) / 8
    double C_vardom = 0.0;      // (4 R C_P / r^2) (3r + (3/8 (9 + 1/delta0) + 1) R C_P)
    double C1_varparam = 0.0;   // max(C_P^2 R / r^2, C_vardom)

    std::map<std::string, double> as_map() const {
        return {{"r", r},
                {"R", R},
                {"T", T},
                {"d", static_cast<double>(dim)},
                {"C_P", C_P},
                {"C_B", C_B},
                {"C1_parabolic", C1_parabolic},
                {"C_parabolic", C_parabolic},
                {"delta0", delta0},
                {"C_J", C_J},
                {"C_vardom", C_vardom},
                {"C1_varparam", C1_varparam}};
    }

    void print(std::ostream& os) const {
        os << "r = " << r << "\n"
           << "R = " << R << "\n"
           << "T = " << T << "\n"
           << "d = " << dim << "\n"
           << "C_P = " << C_P << "   (Poincare constant, lambda_min^{-1/2} of the Dirichlet Laplacian)\n"
           << "C_B = R + R^2/(2r) = " << C_B << "\n"
           << "C1_parabolic = sqrt((2/r) max(1, 2/r) (1 + 2 C_B T exp(2 C_B T))) = " << C1_parabolic
           << "   (derived Gronwall trace)\n"
           << "C_parabolic = max(2 R C1^2, 2 R C1^2 C_P^2, C1) = " << C_parabolic << "\n"
           << "delta0 = min(1 - (8/9)^{2/d}, 1/9) = " << delta0 << "\n"
           << "C_J = (9 + 1/delta0)/8 = " << C_J << "\n"
           << "C_vardom = (4 R C_P/r^2)(3r + (3/8 (9 + 1/delta0) + 1) R C_P) = " << C_vardom << "\n"
           << "C1_varparam = max(C_P^2 R/r^2, C_vardom) = " << C1_varparam << "\n";
    }
};

/// Populates the ledger from (r, R, T, d) and a Poincare constant.
inline ConstantsLedger theory_constants(double r, double R, double T, double C_P, int d = 2) {
    if (!(0.0 < r && r < R)) throw std::invalid_argument("theory_constants: need 0 < r < R");
    if (!(T > 0.0)) throw std::invalid_argument("theory_constants: need T > 0");
    if (!(C_P > 0.0)) throw std::invalid_argument("theory_constants: need C_P > 0");
    if (d < 1) throw std::invalid_argument("theory_constants: need d >= 1");
    ConstantsLedger c;
    c.r = r;
    c.R = R;
    c.T = T;
    c.dim = d;
    c.C_P = C_P;
    c.C_B = R + R * R / (2.0 * r);
    c.C1_parabolic =
        std::sqrt((2.0 / r) * std::max(1.0, 2.0 / r) * (1.0 + 2.0 * c.C_B * T * std::exp(2.0 * c.C_B * T)));
    c.C_parabolic = std::max({2.0 * R * c.C1_parabolic * c.C1_parabolic,
                              2.0 * R * c.C1_parabolic * c.C1_parabolic * C_P * C_P, c.C1_parabolic});
    c.delta0 = std::min(1.0 - std::pow(8.0 / 9.0, 2.0 / d), 1.0 / 9.0);
    c.C_J = (9.0 + 1.0 / c.delta0) / 8.0;
    c.C_vardom = (4.0 * R * C_P / (r * r)) *
                 (3.0 * r + (3.0 / 8.0 * (9.0 + 1.0 / c.delta0) + 1.0) * R * C_P);
    c.C1_varparam = std::max(C_P * C_P * R / (r * r), c.C_vardom);
    for (double v : {c.C_B, c.C1_parabolic, c.C_parabolic, c.delta0, c.C_J, c.C_vardom, c.C1_varparam})
        if (!(v > 0.0)) throw std::logic_error("theory_constants: non-positive constant");
    return c;
}

/// Lipschitz constant of the expansion z -> phi_0 + sqrt(K) sum z_k phi_k:
/// l = sqrt(K sum mu_k^2), mu_k the basis norms.
inline double grf_expansion_lipschitz(const Eigen::VectorXd& mus) {
    const int K = static_cast<int>(mus.size());
    if (K < 1) throw std::invalid_argument("grf_expansion_lipschitz: empty basis");
    return std::sqrt(K * mus.squaredNorm());
}

/// Entropy constant of the midpoint-grid cover: C1 = 4K (prod mu_k)^{1/K}.
inline double grf_entropy_constant(const Eigen::VectorXd& mus) {
    const int K = static_cast<int>(mus.size());
    if (K < 1) throw std::invalid_argument("grf_entropy_constant: empty basis");
    double log_prod = 0.0;
    for (int k = 0; k < K; ++k) {
        if (!(mus[k] > 0.0)) throw std::invalid_argument("grf_entropy_constant: norms must be positive");
        log_prod += std::log(mus[k]);
    }
    return 4.0 * K * std::exp(log_prod / K);
}

/// Width constant of the L2 advection chain: 6 r^{-1} sqrt(K) (prod mu_k)^{1/2K}.
inline double advection_l2_width_constant(double r, const Eigen::VectorXd& mus) {
    const int K = static_cast<int>(mus.size());
    double log_prod = 0.0;
    for (int k = 0; k < K; ++k) log_prod += std::log(mus[k]);
    return 6.0 / r * std::sqrt(static_cast<double>(K)) * std::exp(log_prod / (2.0 * K));
}

/// Modulus transfer of the Holder solution mapping: w(eps) = r^{-2/p} eps^{1/p}.
inline double holder_transfer(double entropy_radius, double r, double p) {
    if (!(entropy_radius >= 0.0) || !(r > 0.0) || !(p > 0.0))
        throw std::invalid_argument("holder_transfer: inputs must be positive");
    return std::pow(r, -2.0 / p) * std::pow(entropy_radius, 1.0 / p);
}

/// Weight profiles for the truncated sequence sets; k is 1-based.
inline double weight_profile(const std::string& name, int k) {
    if (name == "k^-2") return 1.0 / (static_cast<double>(k) * k);
    if (name == "2^{1-k}") return std::pow(2.0, 1.0 - k);
    throw std::invalid_argument("weight_profile: unknown profile " + name);
}

}  // namespace widthlab
