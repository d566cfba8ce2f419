#pragma once

#include <Eigen/Dense>

namespace polarec {

/// Second moments of a state over n modes, in block order (x_1..x_n, p_1..p_n):
///
///   sigma = [ Sigma_XX  Sigma_XP ]      mean = (x_0, p_0)
///           [ Sigma_PX  Sigma_PP ]
///
/// Construction validates symmetry and positive definiteness only; whether the
/// matrix is an admissible quantum covariance (all symplectic eigenvalues
/// >= hbar/2) is a separate check, so that inadmissible inputs can still be
/// loaded and diagnosed.
class CovarianceMatrix {
public:
    CovarianceMatrix(int n, double hbar, Eigen::MatrixXd sigma, Eigen::VectorXd mean);

    int modes() const { return n_; }
    double hbar() const { return hbar_; }
    const Eigen::MatrixXd& sigma() const { return sigma_; }
    const Eigen::VectorXd& mean() const { return mean_; }

    Eigen::MatrixXd xx() const { return sigma_.topLeftCorner(n_, n_); }
    Eigen::MatrixXd xp() const { return sigma_.topRightCorner(n_, n_); }
    Eigen::MatrixXd px() const { return sigma_.bottomLeftCorner(n_, n_); }
    Eigen::MatrixXd pp() const { return sigma_.bottomRightCorner(n_, n_); }

private:
    int n_;
    double hbar_;
    Eigen::MatrixXd sigma_; // 2n x 2n
    Eigen::VectorXd mean_;  // 2n
};

} // namespace polarec
