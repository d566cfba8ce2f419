#include "polarec/reconstruct.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "polarec/errors.hpp"
#include "polarec/polar.hpp"
#include "polarec/symplectic.hpp"

namespace polarec {

namespace {

// Relative width of the saturated-vs-strict band on delta_x delta_p vs hbar.
constexpr double k_saturation_band = 1e-12;

// Symplecticity filter for pure candidates.
constexpr double k_pure_tol = 1e-9;

struct SpdFactors {
    Eigen::MatrixXd sqrt;
    Eigen::MatrixXd inv_sqrt;
    Eigen::MatrixXd inv;
};

SpdFactors spd_factors(const Eigen::MatrixXd& M, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw numerical_error(std::string("eigendecomposition failed in ") + what);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error(std::string(what) + ": matrix is not positive definite");
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::VectorXd& w = es.eigenvalues();
    SpdFactors f;
    f.sqrt = V * w.cwiseSqrt().asDiagonal() * V.transpose();
    f.inv_sqrt = V * w.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    f.inv = V * w.cwiseInverse().asDiagonal() * V.transpose();
    return f;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) {
    return (M + M.transpose()) / 2.0;
}

void require_region_pair(const Ellipsoid& X, const Ellipsoid& P) {
    if (X.space() != Space::position)
        throw validation_error("reconstruction: first region must be tagged position");
    if (P.space() != Space::momentum)
        throw validation_error("reconstruction: second region must be tagged momentum");
    if (X.dim() != P.dim())
        throw dimension_error("reconstruction: region dimensions do not match");
    if (X.hbar() != P.hbar())
        throw validation_error("reconstruction: region hbar values do not match");
}

Eigen::VectorXd stacked_mean(const Ellipsoid& X, const Ellipsoid& P) {
    Eigen::VectorXd mean(2 * X.dim());
    mean << X.center(), P.center();
    return mean;
}

bool signature_greater(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) > b(i);
    }
    return false;
}

} // namespace

PauliPartnerSet reconstruct_1d(const ReconstructionInput1D& in) {
    if (!(in.delta_x > 0.0) || !(in.delta_p > 0.0))
        throw validation_error("reconstruct_1d: interval half-widths must be positive");
    if (!(in.hbar > 0.0))
        throw validation_error("reconstruct_1d: hbar must be positive");

    const double product = in.delta_x * in.delta_p;
    if (product < in.hbar * (1.0 - k_saturation_band))
        throw polarity_error("polarity violated: delta_x * delta_p < hbar, no admissible pure state");

    const double sxx = in.delta_x * in.delta_x / 2.0;
    const double spp = in.delta_p * in.delta_p / 2.0;
    Eigen::VectorXd mean(2);
    mean << in.x0, in.p0;

    PauliPartnerSet set;
    const bool saturated = std::abs(product - in.hbar) <= k_saturation_band * in.hbar;
    auto push = [&](double sxp, int sign) {
        Eigen::MatrixXd sigma(2, 2);
        sigma << sxx, sxp, sxp, spp;
        Eigen::VectorXi sig(1);
        sig << sign;
        set.states.push_back({CovarianceMatrix(1, in.hbar, std::move(sigma), mean), sig});
    };
    if (saturated) {
        push(0.0, 0);
    } else {
        const double sxp = std::sqrt(sxx * spp - in.hbar * in.hbar / 4.0);
        push(sxp, +1);
        push(-sxp, -1);
    }
    return set;
}

PauliPartnerSet reconstruct_pure(const Ellipsoid& X, const Ellipsoid& P) {
    require_region_pair(X, P);
    const int n = X.dim();
    const double hbar = X.hbar();
    const double quarter = hbar * hbar / 4.0;

    const Eigen::MatrixXd Sxx = symmetrized((hbar / 2.0) * spd_factors(X.shape(), "reconstruct_pure").inv);
    const Eigen::MatrixXd Spp = symmetrized((hbar / 2.0) * spd_factors(P.shape(), "reconstruct_pure").inv);
    const SpdFactors W = spd_factors(Sxx, "reconstruct_pure");

    // G = Sxx^{1/2} Spp Sxx^{1/2} - (hbar^2/4) I >= 0  <=>  AB <= I.
    Eigen::MatrixXd G = W.sqrt * Spp * W.sqrt - quarter * Eigen::MatrixXd::Identity(n, n);
    G = symmetrized(G);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success)
        throw numerical_error("reconstruct_pure: eigendecomposition of saturation matrix failed");
    Eigen::VectorXd d = es.eigenvalues();
    const Eigen::MatrixXd& U = es.eigenvectors();

    const double scale = std::max(quarter, d.cwiseAbs().maxCoeff());
    if (d.minCoeff() < -1e-9 * scale)
        throw polarity_error("polarity violated: X^hbar is not contained in P (AB <= I fails)");

    // Branches indistinguishable from saturated collapse to the single
    // sigma_xp = 0 solution; the threshold mirrors the 1D band on
    // delta_x delta_p (d ~ (hbar^2/2) * relative product excess).
    const double d_zero = std::max(k_saturation_band * hbar * hbar / 2.0,
                                   1e-14 * d.cwiseAbs().maxCoeff());
    std::vector<int> free_branch;
    Eigen::VectorXd sqrt_d = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (d(i) > d_zero) {
            free_branch.push_back(i);
            sqrt_d(i) = std::sqrt(d(i));
        }
    }
    const int k = static_cast<int>(free_branch.size());
    if (k > 12)
        throw validation_error(
            "reconstruct_pure: more than 2^12 sign branches; use mixed reconstruction");

    const Eigen::VectorXd mean = stacked_mean(X, P);
    PauliPartnerSet set;

    for (long mask = 0; mask < (1L << k); ++mask) {
        Eigen::VectorXi signature = Eigen::VectorXi::Zero(n);
        Eigen::VectorXd signed_sqrt = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < k; ++j) {
            const int branch = free_branch[j];
            const int sign = (mask >> j) & 1 ? -1 : +1;
            signature(branch) = sign;
            signed_sqrt(branch) = sign * sqrt_d(branch);
        }

        // Sigma_XP = Sxx^{1/2} R Sxx^{-1/2} with R the chosen symmetric square
        // root of G; this side of the conjugation makes the assembled Sigma
        // satisfy all symplectic block conditions (see the symplecticity
        // filter below, which every branch passes).
        const Eigen::MatrixXd R = U * signed_sqrt.asDiagonal() * U.transpose();
        const Eigen::MatrixXd Sxp = W.sqrt * R * W.inv_sqrt;

        Eigen::MatrixXd sigma(2 * n, 2 * n);
        sigma.topLeftCorner(n, n) = Sxx;
        sigma.topRightCorner(n, n) = Sxp;
        sigma.bottomLeftCorner(n, n) = Sxp.transpose();
        sigma.bottomRightCorner(n, n) = Spp;

        if (!is_symplectic((2.0 / hbar) * sigma, k_pure_tol)) {
            set.rejected_signatures.push_back(signature);
            continue;
        }
        set.states.push_back({CovarianceMatrix(n, hbar, std::move(sigma), mean), signature});
    }

    std::sort(set.states.begin(), set.states.end(),
              [](const PauliPartner& a, const PauliPartner& b) {
                  return signature_greater(a.signature, b.signature);
              });
    if (set.states.empty())
        throw numerical_error("reconstruct_pure: no sign branch produced a symplectic covariance");
    return set;
}

CovarianceMatrix reconstruct_mixed(const Ellipsoid& X, const Ellipsoid& P) {
    require_region_pair(X, P);
    const int n = X.dim();
    const double hbar = X.hbar();

    // Polarity X^hbar in P  <=>  A^{1/2} B A^{1/2} <= I.
    {
        const SpdFactors A = spd_factors(X.shape(), "reconstruct_mixed");
        Eigen::MatrixXd M = symmetrized(A.sqrt * P.shape() * A.sqrt);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw numerical_error("reconstruct_mixed: eigenvalue computation failed");
        if (es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
            throw polarity_error("polarity violated: X^hbar is not contained in P (AB <= I fails)");
    }

    const Ellipsoid Xc(Space::position, X.shape(), Eigen::VectorXd::Zero(n), hbar);
    const Ellipsoid Pc(Space::momentum, P.shape(), Eigen::VectorXd::Zero(n), hbar);
    const Ellipsoid john = john_of_product(Xc, Pc);

    // Omega_John : z^T Q z <= hbar  ==  (1/2) z^T Sigma^{-1} z <= 1
    // with Sigma = (hbar/2) Q^{-1}.
    const Eigen::MatrixXd sigma =
        symmetrized((hbar / 2.0) * spd_factors(john.shape(), "reconstruct_mixed").inv);
    CovarianceMatrix cov(n, hbar, sigma, stacked_mean(X, P));

    if (!satisfies_quantum_condition(cov))
        throw numerical_error("reconstruct_mixed: output failed the quantum condition");
    return cov;
}

Ellipsoid project_covariance(const CovarianceMatrix& Sigma, Space subspace) {
    if (subspace != Space::position && subspace != Space::momentum)
        throw validation_error("project_covariance: subspace must be position or momentum");
    const int n = Sigma.modes();
    const double hbar = Sigma.hbar();

    // Schur complement of Sigma^{-1}: valid for mixed states as well.
    const Eigen::MatrixXd M = spd_factors(Sigma.sigma(), "project_covariance").inv;
    const auto Mxx = M.topLeftCorner(n, n);
    const auto Mxp = M.topRightCorner(n, n);
    const auto Mpx = M.bottomLeftCorner(n, n);
    const auto Mpp = M.bottomRightCorner(n, n);

    Eigen::MatrixXd schur;
    Eigen::VectorXd center;
    if (subspace == Space::position) {
        schur = Mxx - Mxp * spd_factors(Mpp, "project_covariance").inv * Mpx;
        center = Sigma.mean().head(n);
    } else {
        schur = Mpp - Mpx * spd_factors(Mxx, "project_covariance").inv * Mxp;
        center = Sigma.mean().tail(n);
    }
    Eigen::MatrixXd shape = symmetrized((hbar / 2.0) * schur);

    // Pure states admit the direct block shortcut; the two routes must agree.
    if (is_symplectic((2.0 / hbar) * Sigma.sigma(), k_pure_tol)) {
        const Eigen::MatrixXd block = subspace == Space::position ? Sigma.xx() : Sigma.pp();
        const Eigen::MatrixXd direct =
            symmetrized((hbar / 2.0) * spd_factors(block, "project_covariance").inv);
        if ((shape - direct).norm() > 1e-8 * std::max(1.0, direct.norm()))
            throw numerical_error("project_covariance: Schur and block routes disagree");
    }
    return Ellipsoid(subspace, std::move(shape), std::move(center), hbar);
}

Eigen::MatrixXd invert_pure_covariance(const CovarianceMatrix& Sigma, double tol) {
    const int n = Sigma.modes();
    const double hbar = Sigma.hbar();
    if (!is_symplectic((2.0 / hbar) * Sigma.sigma(), tol))
        throw validation_error(
            "invert_pure_covariance: covariance is not pure; use general inversion");
    Eigen::MatrixXd inv(2 * n, 2 * n);
    inv.topLeftCorner(n, n) = Sigma.pp();
    inv.topRightCorner(n, n) = -Sigma.px();
    inv.bottomLeftCorner(n, n) = -Sigma.xp();
    inv.bottomRightCorner(n, n) = Sigma.xx();
    return (4.0 / (hbar * hbar)) * inv;
}

Ellipsoid covariance_ellipsoid(const CovarianceMatrix& Sigma) {
    const Eigen::MatrixXd Q =
        symmetrized((Sigma.hbar() / 2.0) * spd_factors(Sigma.sigma(), "covariance_ellipsoid").inv);
    return Ellipsoid(Space::phase, Q, Sigma.mean(), Sigma.hbar());
}

} // namespace polarec
