#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace widthlab {

/// Affine latent-to-parameter map with a declared Lipschitz constant and,
/// where the construction is invertible on its image, the witness map that
/// recovers the latent point of a given parameter.
struct AffineEmbed {
    int in_dim = 0;
    int out_dim = 0;
    double lipschitz = 0.0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> witness;
};

/// z in R^{K^2} -> lambda in [1,2]^{KxK} (flattened row-major, lambda_ij at
/// index K*i + j): lambda = 3/2 + (K/2) z. The image of the box
/// [-1/K, 1/K]^{K^2} is exactly the full parameter square.
inline AffineEmbed grid_field_embed(int K) {
    if (K < 1) throw std::invalid_argument("grid_field_embed: K must be >= 1");
    AffineEmbed e;
    e.in_dim = e.out_dim = K * K;
    e.lipschitz = K / 2.0;
    e.apply = [K](const Eigen::VectorXd& z) {
        return Eigen::VectorXd(Eigen::VectorXd::Constant(z.size(), 1.5) + (K / 2.0) * z);
    };
    e.witness = [K](const Eigen::VectorXd& lambda) {
        return Eigen::VectorXd((lambda.array() - 1.5).matrix() * (2.0 / K));
    };
    return e;
}

/// Inclusion of the first `active` blocks of a block-structured sequence
/// space: z in R^{block*active} -> lambda in R^{block*total} padded with
/// zeros. Isometric onto its image.
inline AffineEmbed sequence_truncate_embed(int block, int active, int total) {
    if (block < 1 || active < 1 || active > total)
        throw std::invalid_argument("sequence_truncate_embed: bad block structure");
    AffineEmbed e;
    e.in_dim = block * active;
    e.out_dim = block * total;
    e.lipschitz = 1.0;
    e.apply = [n = e.in_dim, m = e.out_dim](const Eigen::VectorXd& z) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
        out.head(n) = z;
        return out;
    };
    e.witness = [n = e.in_dim](const Eigen::VectorXd& lambda) {
        return Eigen::VectorXd(lambda.head(n));
    };
    return e;
}

/// Latent-to-field map z -> phi_0 + scale * sum_k z_k phi_k over 1D functions,
/// with Lipschitz constant scale * sqrt(sum ||phi_k||^2) in the function-space
/// norm whose values `mus` carry.
struct FieldExpansionEmbed {
    std::function<double(double)> phi0;
    std::vector<std::function<double(double)>> basis;
    Eigen::VectorXd mus;
    double scale = 1.0;
    double lipschitz = 0.0;

    int latent_dim() const { return static_cast<int>(basis.size()); }

    Eigen::VectorXd coefficients(const Eigen::VectorXd& z) const { return scale * z; }

    std::function<double(double)> field(const Eigen::VectorXd& z) const {
        if (z.size() != latent_dim()) throw std::invalid_argument("FieldExpansionEmbed: dim mismatch");
        const Eigen::VectorXd coeff = coefficients(z);
        return [phi0 = phi0, basis = basis, coeff](double x) {
            double acc = phi0(x);
            for (int k = 0; k < coeff.size(); ++k) acc += coeff[k] * basis[static_cast<std::size_t>(k)](x);
            return acc;
        };
    }
};

inline FieldExpansionEmbed basis_expansion_embed(std::function<double(double)> phi0,
                                                 std::vector<std::function<double(double)>> basis,
                                                 const Eigen::VectorXd& mus, double scale) {
    if (static_cast<int>(basis.size()) != mus.size())
        throw std::invalid_argument("basis_expansion_embed: need one norm per basis function");
    for (int k = 0; k < mus.size(); ++k)
        if (mus[k] <= 0.0)
            throw std::invalid_argument("basis_expansion_embed: basis norms must be positive");
    FieldExpansionEmbed e;
    e.phi0 = std::move(phi0);
    e.basis = std::move(basis);
    e.mus = mus;
    e.scale = scale;
    e.lipschitz = scale * std::sqrt(mus.squaredNorm());
    return e;
}

}  // namespace widthlab
