#include "polarec/covariance.hpp"

#include <cmath>

#include "polarec/errors.hpp"

namespace polarec {

CovarianceMatrix::CovarianceMatrix(int n, double hbar, Eigen::MatrixXd sigma,
                                   Eigen::VectorXd mean)
    : n_(n), hbar_(hbar), sigma_(std::move(sigma)), mean_(std::move(mean)) {
    if (n_ < 1) throw dimension_error("covariance needs at least one mode");
    if (sigma_.rows() != 2 * n_ || sigma_.cols() != 2 * n_)
        throw dimension_error("covariance matrix must be 2n x 2n");
    if (mean_.size() != 2 * n_)
        throw dimension_error("mean vector must have length 2n");
    if (!sigma_.allFinite() || !mean_.allFinite())
        throw validation_error("covariance entries must be finite");
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_))
        throw validation_error("hbar must be positive and finite");

    const double asym = (sigma_ - sigma_.transpose()).norm();
    if (asym > 1e-12 * std::max(1.0, sigma_.norm()))
        throw validation_error("covariance matrix is not symmetric");
    sigma_ = ((sigma_ + sigma_.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigenvalue computation failed for covariance matrix");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("covariance matrix is not positive definite");
}

} // namespace polarec
