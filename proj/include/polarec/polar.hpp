#pragma once

#include <Eigen/Dense>

#include "polarec/ellipsoid.hpp"

namespace polarec {

namespace defaults {
inline constexpr double mvee_eps = 1e-7;
inline constexpr long mvee_max_iterations = 200000;
inline constexpr double inclusion_tol = 1e-10;
} // namespace defaults

/// hbar-polar dual { x : x^T A x <= hbar }^hbar = { p : p^T A^{-1} p <= hbar }.
/// The input must be centered at the origin (polarity is center-sensitive);
/// translate first. centered_check = false skips the check and dualizes the
/// centered body, discarding the center.
Ellipsoid polar_dual(const Ellipsoid& E, bool centered_check = true);

/// E1 subset of E2, both centered at the same point with the same hbar:
/// true iff shape2 <= shape1 + tol I in the Loewner order.
bool is_subset(const Ellipsoid& E1, const Ellipsoid& E2, double tol = defaults::inclusion_tol);

/// John (maximal-volume inscribed) ellipsoid of the Cartesian product
/// X x P: the phase-space ellipsoid { (x, p) : x^T A x + p^T B p <= hbar },
/// the image of B^{2n}(sqrt(hbar)) under blockdiag(A^{-1/2}, B^{-1/2}).
Ellipsoid john_of_product(const Ellipsoid& X, const Ellipsoid& P);

Ellipsoid translate(const Ellipsoid& E, const Eigen::VectorXd& delta);

/// Image of E under the invertible linear map u -> T u
/// (shape A -> T^{-T} A T^{-1}, center c -> T c).
Ellipsoid linear_map(const Ellipsoid& E, const Eigen::MatrixXd& T);

/// Minimum-volume enclosing ellipsoid of a point cloud (free center), via
/// Khachiyan's barycentric ascent with Wolfe-Atwood away steps. On return
/// every input point x satisfies (x - c)^T shape (x - c) <= hbar * (1 + eps);
/// numerical_error reporting the duality gap if the iteration budget runs out.
Ellipsoid mvee(const MeasurementCloud& cloud, double eps = defaults::mvee_eps,
               double hbar = 1.0, Space space = Space::position,
               long max_iterations = defaults::mvee_max_iterations);

/// Same, with the center constrained to the origin.
Ellipsoid mvee_centered(const MeasurementCloud& cloud, double eps = defaults::mvee_eps,
                        double hbar = 1.0, Space space = Space::position,
                        long max_iterations = defaults::mvee_max_iterations);

/// Maximal-volume ellipsoid centered at the hull-vertex centroid and
/// inscribed in the convex hull of the cloud, computed by polarity:
/// normalize the hull's supporting halfspaces, take the centered MVEE of the
/// dual vertices, dualize back. Hull facet enumeration is implemented for
/// n <= 2; higher dimensions are rejected.
Ellipsoid john_of_cloud(const MeasurementCloud& cloud, double eps = defaults::mvee_eps,
                        double hbar = 1.0);

/// Facets of the convex hull of 1D or 2D points, as rows (a, b) with the
/// halfspace a . x <= b. Throws dimension_error for n > 2 and
/// validation_error for degenerate clouds.
Eigen::MatrixXd hull_halfspaces(const Eigen::MatrixXd& points);

namespace detail {
/// john_of_cloud with the center pinned at the origin, which must be strictly
/// interior to the hull of the (already centered) points.
Ellipsoid john_inscribed_centered(const Eigen::MatrixXd& centered_points, double eps,
                                  double hbar);
} // namespace detail

} // namespace polarec
