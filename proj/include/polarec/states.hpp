#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <vector>

#include "polarec/covariance.hpp"

namespace polarec {

/// Parameters of the general pure Gaussian wavefunction
///
///   psi(x) = (2 pi)^{-n/4} det(Sigma_XX)^{-1/4}
///            exp[ -(x - x0)^T ( (1/4) Sigma_XX^{-1}
///                               - (i/2hbar) Sigma_XX^{-1} Sigma_XP ) (x - x0) ]
///
/// whose Wigner transform is the Gaussian with covariance Sigma. The
/// imaginary part of the quadratic form is symmetric whenever Sigma is a
/// valid pure covariance.
struct PureGaussianWavefunction {
    int n = 0;
    double hbar = 1.0;
    Eigen::VectorXd x0;
    Eigen::MatrixXd sigma_xx;
    Eigen::MatrixXd sigma_xp;
    double normalization = 0.0;        // (2 pi)^{-n/4} det(Sigma_XX)^{-1/4}
    Eigen::MatrixXcd quadratic_form;   // (1/4) Sxx^{-1} - (i/2hbar) Sxx^{-1} Sxp

    std::complex<double> operator()(const Eigen::VectorXd& x) const;
};

struct GaussianState {
    CovarianceMatrix covariance;
    double purity = 0.0;
    bool pure = false;
};

/// (hbar/2)^n det(Sigma)^{-1/2}; equals the product of (hbar / 2 nu_j).
double purity(const CovarianceMatrix& Sigma);

/// Classify by purity: pure iff purity = 1 within 1e-9.
GaussianState make_gaussian_state(const CovarianceMatrix& Sigma);

/// Extract wavefunction parameters from a pure covariance;
/// validation_error if (2/hbar) Sigma is not symplectic within tol.
PureGaussianWavefunction wavefunction_from_covariance(const CovarianceMatrix& Sigma,
                                                      double tol = 1e-9);

/// Wigner distribution
/// W(z) = (2 pi)^{-n} det(Sigma)^{-1/2} exp(-(1/2)(z - z0)^T Sigma^{-1} (z - z0)).
double wigner(const GaussianState& state, const Eigen::VectorXd& z);

struct RobertsonSchroedingerReport {
    Eigen::VectorXd per_mode_product;  // sigma_xjxj sigma_pjpj - sigma_xjpj^2
    Eigen::VectorXd margins;           // product - hbar^2/4
    std::vector<bool> saturated;       // |margin| <= 1e-9 * hbar^2/4
    double matrix_residual = 0.0;      // || Sxx Spp - Sxp^2 - (hbar^2/4) I ||_F
    bool all_satisfied = false;        // every margin >= -1e-9 * hbar^2/4
};

RobertsonSchroedingerReport rs_report(const CovarianceMatrix& Sigma);

struct WignerGridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0; // number of grid points, inclusive of both ends
};

struct WignerGridSummary {
    double integral_estimate = 0.0; // trapezoidal estimate over the grid
    Eigen::VectorXd max_at;         // grid point with the largest W
};

/// Sweep W over the tensor grid and stream CSV rows (z_1..z_2n, W) to out,
/// preceded by a metadata comment line and a column header.
WignerGridSummary wigner_grid_to_csv(const GaussianState& state,
                                     const std::vector<WignerGridAxis>& axes,
                                     std::ostream& out);

} // namespace polarec
