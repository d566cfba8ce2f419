#include "polarec/ellipsoid.hpp"

#include <cmath>
#include <numbers>

#include "polarec/errors.hpp"

namespace polarec {

const char* to_string(Space s) {
    switch (s) {
        case Space::position: return "position";
        case Space::momentum: return "momentum";
        case Space::phase: return "phase";
    }
    return "?";
}

Space space_from_string(const std::string& s) {
    if (s == "position") return Space::position;
    if (s == "momentum") return Space::momentum;
    if (s == "phase") return Space::phase;
    throw validation_error("unknown space tag '" + s + "'");
}

Space dual_space(Space s) {
    switch (s) {
        case Space::position: return Space::momentum;
        case Space::momentum: return Space::position;
        case Space::phase: return Space::phase;
    }
    return s;
}

Ellipsoid::Ellipsoid(Space space, Eigen::MatrixXd shape, Eigen::VectorXd center, double hbar)
    : space_(space), shape_(std::move(shape)), center_(std::move(center)), hbar_(hbar) {
    if (shape_.rows() == 0 || shape_.rows() != shape_.cols())
        throw dimension_error("ellipsoid shape matrix must be square and non-empty");
    if (center_.size() != shape_.rows())
        throw dimension_error("ellipsoid center length does not match shape dimension");
    if (!shape_.allFinite() || !center_.allFinite())
        throw validation_error("ellipsoid entries must be finite");
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_))
        throw validation_error("hbar must be positive and finite");

    const double asym = (shape_ - shape_.transpose()).norm();
    if (asym > 1e-12 * std::max(1.0, shape_.norm()))
        throw validation_error("ellipsoid shape matrix is not symmetric");
    shape_ = ((shape_ + shape_.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigenvalue computation failed for ellipsoid shape");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("ellipsoid shape matrix is not positive definite");
}

Ellipsoid Ellipsoid::ball(Space space, int dim, double radius, double hbar) {
    if (dim < 1) throw dimension_error("ball dimension must be >= 1");
    if (!(radius > 0.0)) throw validation_error("ball radius must be positive");
    Eigen::MatrixXd shape = (hbar / (radius * radius)) * Eigen::MatrixXd::Identity(dim, dim);
    return Ellipsoid(space, std::move(shape), Eigen::VectorXd::Zero(dim), hbar);
}

bool Ellipsoid::is_centered() const {
    return (center_.array() == 0.0).all();
}

double Ellipsoid::quadratic_form(const Eigen::VectorXd& u) const {
    if (u.size() != center_.size())
        throw dimension_error("point dimension does not match ellipsoid");
    const Eigen::VectorXd d = u - center_;
    return d.dot(shape_ * d);
}

bool Ellipsoid::contains(const Eigen::VectorXd& u, double tol) const {
    return quadratic_form(u) <= hbar_ * (1.0 + tol);
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double Ellipsoid::volume() const {
    // { u : u^T (A/hbar) u <= 1 } has volume kappa_d det(A/hbar)^{-1/2}
    const int d = dim();
    const double det = (shape_ / hbar_).determinant();
    return unit_ball_volume(d) / std::sqrt(det);
}

} // namespace polarec
