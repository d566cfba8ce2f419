#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polarec/covariance.hpp"
#include "polarec/ellipsoid.hpp"

namespace polarec {

struct ReconstructionInput1D {
    double delta_x = 0.0; // half-width of the position interval
    double delta_p = 0.0; // half-width of the postulated momentum interval
    double x0 = 0.0;
    double p0 = 0.0;
    double hbar = 1.0;
};

/// One covariance candidate together with the sign pattern of its
/// Sigma_XP branch; entries are +1/-1, or 0 for a saturated direction
/// where both signs collapse.
struct PauliPartner {
    CovarianceMatrix covariance;
    Eigen::VectorXi signature;
};

/// The admissible pure-state covariances sharing given position and momentum
/// marginals, ordered lexicographically by signature (all-plus first).
/// Candidates failing the symplecticity filter are reported, not returned.
struct PauliPartnerSet {
    std::vector<PauliPartner> states;
    std::vector<Eigen::VectorXi> rejected_signatures;

    std::size_t multiplicity() const { return states.size(); }
};

/// 1D reconstruction from interval half-widths (delta_x, delta_p):
/// sigma_xx = delta_x^2 / 2, sigma_pp = delta_p^2 / 2,
/// sigma_xp = +-sqrt(sigma_xx sigma_pp - hbar^2/4). Exactly one state (with
/// sigma_xp = 0) when delta_x delta_p = hbar within a 1e-12 relative band;
/// polarity_error when delta_x delta_p < hbar.
PauliPartnerSet reconstruct_1d(const ReconstructionInput1D& in);

/// Multidimensional pure reconstruction from a position ellipsoid
/// X : x^T A x <= hbar and a momentum ellipsoid P : p^T B p <= hbar with
/// X^hbar inside P (AB <= I in the Loewner order):
///   Sigma_XX = (hbar/2) A^{-1},  Sigma_PP = (hbar/2) B^{-1},
///   Sigma_XP^2 = Sigma_PP Sigma_XX - (hbar^2/4) I, one branch per sign
/// pattern of the square root. Every returned state has (2/hbar) Sigma
/// symplectic; candidates failing that test are dropped. The ellipsoid
/// centers become the state mean.
PauliPartnerSet reconstruct_pure(const Ellipsoid& X, const Ellipsoid& P);

/// Mixed reconstruction via the John ellipsoid of X x P: the unique SPD
/// Sigma with Omega_John : (1/2) z^T Sigma^{-1} z <= 1, i.e.
/// Sigma = (hbar/2) blockdiag(A^{-1}, B^{-1}) with Sigma_XP = 0. The output
/// always satisfies the quantum condition.
CovarianceMatrix reconstruct_mixed(const Ellipsoid& X, const Ellipsoid& P);

/// Orthogonal projection of the covariance ellipsoid
/// Omega : (1/2)(z - z0)^T Sigma^{-1} (z - z0) <= 1 onto configuration or
/// momentum space, computed by the Schur complement of Sigma^{-1} (valid for
/// mixed states) and cross-checked against the direct block shortcut
/// Q = (hbar/2) Sigma_XX^{-1} (resp. Sigma_PP^{-1}) when the state is pure.
Ellipsoid project_covariance(const CovarianceMatrix& Sigma, Space subspace);

/// For pure covariances ((2/hbar) Sigma symplectic within tol):
/// Sigma^{-1} = (4/hbar^2) [[Sigma_PP, -Sigma_PX], [-Sigma_XP, Sigma_XX]].
Eigen::MatrixXd invert_pure_covariance(const CovarianceMatrix& Sigma, double tol = 1e-9);

/// The covariance ellipsoid itself, as a phase-space Ellipsoid:
/// shape (hbar/2) Sigma^{-1} at level hbar.
Ellipsoid covariance_ellipsoid(const CovarianceMatrix& Sigma);

} // namespace polarec
