#pragma once

#include <Eigen/Dense>
#include <string>

namespace polarec {

enum class Space { position, momentum, phase };

const char* to_string(Space s);
Space space_from_string(const std::string& s);

// position <-> momentum; phase is self-dual.
Space dual_space(Space s);

/// Centered-or-shifted ellipsoid { u : (u - center)^T shape (u - center) <= hbar }.
///
/// The quadratic form is always stored at level hbar, never normalized to 1;
/// the shape matrix is symmetric positive definite.
class Ellipsoid {
public:
    Ellipsoid(Space space, Eigen::MatrixXd shape, Eigen::VectorXd center, double hbar);

    /// Ball { |u| <= radius }, i.e. shape = (hbar / radius^2) I.
    static Ellipsoid ball(Space space, int dim, double radius, double hbar);

    Space space() const { return space_; }
    int dim() const { return static_cast<int>(shape_.rows()); }
    const Eigen::MatrixXd& shape() const { return shape_; }
    const Eigen::VectorXd& center() const { return center_; }
    double hbar() const { return hbar_; }

    bool is_centered() const;

    /// (u - center)^T shape (u - center)
    double quadratic_form(const Eigen::VectorXd& u) const;

    /// quadratic_form(u) <= hbar * (1 + tol)
    bool contains(const Eigen::VectorXd& u, double tol = 0.0) const;

    /// Lebesgue volume of the set.
    double volume() const;

private:
    Space space_;
    Eigen::MatrixXd shape_;
    Eigen::VectorXd center_;
    double hbar_;
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Raw position samples, one row per measurement.
struct MeasurementCloud {
    Eigen::MatrixXd points; // N x n
    std::string label;

    int dim() const { return static_cast<int>(points.cols()); }
    long count() const { return points.rows(); }
};

} // namespace polarec
