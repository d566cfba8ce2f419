#include "polarec/polar.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "polarec/errors.hpp"

namespace polarec {

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigendecomposition failed while inverting SPD matrix");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("matrix is not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

void require_compatible(const Ellipsoid& E1, const Ellipsoid& E2) {
    if (E1.dim() != E2.dim())
        throw dimension_error("ellipsoid dimensions do not match");
    if (E1.hbar() != E2.hbar())
        throw validation_error("ellipsoid hbar values do not match");
}

} // namespace

Ellipsoid polar_dual(const Ellipsoid& E, bool centered_check) {
    if (centered_check && !E.is_centered())
        throw validation_error(
            "polar duality requires a centered ellipsoid; translate to the origin first");
    return Ellipsoid(dual_space(E.space()), spd_inverse(E.shape()),
                     Eigen::VectorXd::Zero(E.dim()), E.hbar());
}

bool is_subset(const Ellipsoid& E1, const Ellipsoid& E2, double tol) {
    require_compatible(E1, E2);
    if (!((E1.center().array() == E2.center().array()).all()))
        throw validation_error("is_subset requires ellipsoids centered at the same point");
    // E1 in E2  <=>  shape2 <= shape1 (Loewner)
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E1.shape() - E2.shape(),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigenvalue computation failed in is_subset");
    return es.eigenvalues().minCoeff() >= -tol;
}

Ellipsoid john_of_product(const Ellipsoid& X, const Ellipsoid& P) {
    require_compatible(X, P);
    if (X.space() != Space::position || P.space() != Space::momentum)
        throw validation_error("john_of_product expects a position and a momentum ellipsoid");
    if (!X.is_centered() || !P.is_centered())
        throw validation_error("john_of_product requires centered ellipsoids");
    const int n = X.dim();
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Q.topLeftCorner(n, n) = X.shape();
    Q.bottomRightCorner(n, n) = P.shape();
    return Ellipsoid(Space::phase, std::move(Q), Eigen::VectorXd::Zero(2 * n), X.hbar());
}

Ellipsoid translate(const Ellipsoid& E, const Eigen::VectorXd& delta) {
    if (delta.size() != E.dim())
        throw dimension_error("translation vector dimension does not match ellipsoid");
    return Ellipsoid(E.space(), E.shape(), E.center() + delta, E.hbar());
}

Ellipsoid linear_map(const Ellipsoid& E, const Eigen::MatrixXd& T) {
    if (T.rows() != T.cols() || T.rows() != E.dim())
        throw dimension_error("linear map must be square with the ellipsoid's dimension");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
    if (!lu.isInvertible())
        throw validation_error("linear map must be invertible");
    const Eigen::MatrixXd Tinv = lu.inverse();
    Eigen::MatrixXd shape = Tinv.transpose() * E.shape() * Tinv;
    shape = ((shape + shape.transpose()) / 2.0).eval();
    return Ellipsoid(E.space(), std::move(shape), T * E.center(), E.hbar());
}

// ---------------------------------------------------------------------------
// Khachiyan barycentric ascent with Wolfe-Atwood away steps, shared by the
// free-center (lifted) and centered MVEE variants. Q holds one (lifted)
// point per column.
namespace {

struct KhachiyanWeights {
    Eigen::VectorXd u;
    double gap = 0.0;
    long iterations = 0;
};

KhachiyanWeights khachiyan_weights(const Eigen::MatrixXd& Q, double eps_eff, long max_iter) {
    const int d = static_cast<int>(Q.rows());
    const long N = Q.cols();
    Eigen::VectorXd u = Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N));

    {
        const Eigen::MatrixXd Lam0 = Q * u.asDiagonal() * Q.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lam0, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw numerical_error("mvee: eigenvalue computation failed");
        if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1e-300, es.eigenvalues().maxCoeff()))
            throw validation_error("mvee: degenerate cloud (points are affinely dependent)");
    }

    double gap = 0.0;
    for (long iter = 0; iter < max_iter; ++iter) {
        const Eigen::MatrixXd Lam = Q * u.asDiagonal() * Q.transpose();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Lam);
        if (ldlt.info() != Eigen::Success)
            throw numerical_error("mvee: weight matrix factorization failed");
        const Eigen::MatrixXd W = ldlt.solve(Q);
        const Eigen::VectorXd kappa = (Q.array() * W.array()).colwise().sum();

        long jmax = 0;
        double kmax = kappa.maxCoeff(&jmax);
        long jmin = -1;
        double kmin = std::numeric_limits<double>::infinity();
        for (long i = 0; i < N; ++i) {
            if (u(i) > 0.0 && kappa(i) < kmin) {
                kmin = kappa(i);
                jmin = i;
            }
        }

        gap = kmax / d - 1.0;
        if (gap <= eps_eff)
            return {u, gap, iter};

        const double add_violation = kmax - d;
        const double away_violation = d - kmin;
        if (add_violation >= away_violation || jmin < 0 || u(jmin) >= 1.0 - 1e-15) {
            const double t = (kmax - d) / (d * (kmax - 1.0));
            u *= (1.0 - t);
            u(jmax) += t;
        } else {
            const double cap = u(jmin) / (1.0 - u(jmin));
            double t = cap;
            if (kmin > 1.0)
                t = std::min(t, (d - kmin) / (d * (kmin - 1.0)));
            u *= (1.0 + t);
            u(jmin) -= t;
            if (u(jmin) < 1e-18) u(jmin) = 0.0;
        }
        u /= u.sum();
    }
    std::ostringstream msg;
    msg << "mvee: no convergence within " << max_iter << " iterations (duality gap " << gap
        << ", target " << eps_eff << ")";
    throw numerical_error(msg.str());
}

void check_cloud_for_fit(const MeasurementCloud& cloud, double eps) {
    if (!(eps > 0.0)) throw validation_error("mvee eps must be positive");
    if (cloud.dim() < 1) throw dimension_error("cloud has no coordinates");
    if (!cloud.points.allFinite()) throw validation_error("cloud contains non-finite samples");
    if (cloud.count() < cloud.dim() + 1)
        throw validation_error("mvee: need at least n+1 points");
}

} // namespace

Ellipsoid mvee(const MeasurementCloud& cloud, double eps, double hbar, Space space,
               long max_iterations) {
    check_cloud_for_fit(cloud, eps);
    const int n = cloud.dim();
    const long N = cloud.count();

    Eigen::MatrixXd Q(n + 1, N);
    Q.topRows(n) = cloud.points.transpose();
    Q.row(n).setOnes();

    // kappa_max <= (n+1)(1 + eps n/(n+1)) makes every point's quadratic form
    // <= hbar (1 + eps) after the 1/n shape normalization below.
    const double eps_eff = eps * n / (n + 1.0);
    const auto w = khachiyan_weights(Q, eps_eff, max_iterations);

    const Eigen::VectorXd c = cloud.points.transpose() * w.u;
    Eigen::MatrixXd Mxx =
        cloud.points.transpose() * w.u.asDiagonal() * cloud.points - c * c.transpose();
    Mxx = ((Mxx + Mxx.transpose()) / 2.0).eval();
    const Eigen::MatrixXd H = spd_inverse(Mxx);
    return Ellipsoid(space, (hbar / n) * H, c, hbar);
}

Ellipsoid mvee_centered(const MeasurementCloud& cloud, double eps, double hbar, Space space,
                        long max_iterations) {
    check_cloud_for_fit(cloud, eps);
    const int n = cloud.dim();
    const Eigen::MatrixXd Q = cloud.points.transpose();
    const auto w = khachiyan_weights(Q, eps, max_iterations);

    Eigen::MatrixXd Mxx = cloud.points.transpose() * w.u.asDiagonal() * cloud.points;
    Mxx = ((Mxx + Mxx.transpose()) / 2.0).eval();
    const Eigen::MatrixXd H = spd_inverse(Mxx);
    return Ellipsoid(space, (hbar / n) * H, Eigen::VectorXd::Zero(n), hbar);
}

// ---------------------------------------------------------------------------
// Convex hulls for n <= 2.
namespace {

struct Hull {
    Eigen::MatrixXd vertices;   // V x n
    Eigen::MatrixXd halfspaces; // F x (n+1), rows (a, b) with a . x <= b
};

Hull hull_1d(const Eigen::MatrixXd& pts) {
    const double lo = pts.col(0).minCoeff();
    const double hi = pts.col(0).maxCoeff();
    if (!(hi > lo))
        throw validation_error("hull: all points coincide");
    Hull h;
    h.vertices.resize(2, 1);
    h.vertices << lo, hi;
    h.halfspaces.resize(2, 2);
    h.halfspaces << 1.0, hi, -1.0, -lo;
    return h;
}

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Hull hull_2d(const Eigen::MatrixXd& pts) {
    std::vector<Eigen::Vector2d> p(pts.rows());
    for (long i = 0; i < pts.rows(); ++i) p[i] = pts.row(i).transpose();
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    p.erase(std::unique(p.begin(), p.end(),
                        [](const auto& a, const auto& b) { return a == b; }),
            p.end());
    const long m = static_cast<long>(p.size());
    if (m < 3) throw validation_error("hull: fewer than three distinct points");

    // Andrew monotone chain, counterclockwise output.
    std::vector<Eigen::Vector2d> hull(2 * m);
    long k = 0;
    for (long i = 0; i < m; ++i) {
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
        hull[k++] = p[i];
    }
    const long lower = k + 1;
    for (long i = m - 2; i >= 0; --i) {
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw validation_error("hull: points are collinear");

    Hull h;
    h.vertices.resize(static_cast<long>(hull.size()), 2);
    for (std::size_t i = 0; i < hull.size(); ++i) h.vertices.row(static_cast<long>(i)) = hull[i];
    h.halfspaces.resize(static_cast<long>(hull.size()), 3);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Eigen::Vector2d v = hull[i];
        const Eigen::Vector2d w = hull[(i + 1) % hull.size()];
        const Eigen::Vector2d e = w - v;
        const Eigen::Vector2d a(e.y(), -e.x()); // outward for CCW order
        h.halfspaces.row(static_cast<long>(i)) << a.x(), a.y(), a.dot(v);
    }
    return h;
}

Hull hull_of(const Eigen::MatrixXd& pts) {
    if (pts.cols() == 1) return hull_1d(pts);
    if (pts.cols() == 2) return hull_2d(pts);
    throw dimension_error("convex hull facets are implemented for n <= 2 only");
}

} // namespace

Eigen::MatrixXd hull_halfspaces(const Eigen::MatrixXd& points) {
    if (points.rows() < 2) throw validation_error("hull: need at least two points");
    return hull_of(points).halfspaces;
}

namespace {

// Maximal-volume inscribed ellipsoid of conv(points) centered at the origin,
// which must be strictly interior. Polarity route: normalized facet normals
// are the vertices of the hbar-polar dual; the centered MVEE there dualizes
// back to an inscribed ellipsoid. The (1 + eps) MVEE certificate is folded
// into the returned shape so that inscription is guaranteed.
Eigen::MatrixXd john_shape_centered(const Eigen::MatrixXd& points, double eps, double hbar) {
    const Hull h = hull_of(points);
    const int n = static_cast<int>(points.cols());
    const long F = h.halfspaces.rows();

    Eigen::MatrixXd dual_vertices(F, n);
    for (long f = 0; f < F; ++f) {
        const Eigen::VectorXd a = h.halfspaces.row(f).head(n);
        const double b = h.halfspaces(f, n);
        if (!(b > 1e-12 * a.norm()))
            throw validation_error("john estimator: center is not strictly interior to the hull");
        dual_vertices.row(f) = (hbar / b) * a.transpose();
    }

    MeasurementCloud dual{dual_vertices, "polar dual vertices"};
    const Ellipsoid Ed = mvee_centered(dual, eps, hbar, Space::momentum);
    Eigen::MatrixXd shape = (1.0 + eps) * spd_inverse(Ed.shape());
    return ((shape + shape.transpose()) / 2.0).eval();
}

} // namespace

Ellipsoid john_of_cloud(const MeasurementCloud& cloud, double eps, double hbar) {
    check_cloud_for_fit(cloud, eps);
    if (cloud.dim() > 2)
        throw dimension_error("john_of_cloud supports n <= 2 (hull facet enumeration)");

    const Hull h = hull_of(cloud.points);
    const Eigen::VectorXd centroid = h.vertices.colwise().mean();
    const Eigen::MatrixXd shifted = cloud.points.rowwise() - centroid.transpose();
    Eigen::MatrixXd shape = john_shape_centered(shifted, eps, hbar);
    return Ellipsoid(Space::position, std::move(shape), centroid, hbar);
}

namespace detail {

// Centered variant used by ingest, where the center is pinned beforehand.
Ellipsoid john_inscribed_centered(const Eigen::MatrixXd& centered_points, double eps,
                                  double hbar) {
    if (centered_points.cols() > 2)
        throw dimension_error("john estimator supports n <= 2 (hull facet enumeration)");
    Eigen::MatrixXd shape = john_shape_centered(centered_points, eps, hbar);
    return Ellipsoid(Space::position, std::move(shape),
                     Eigen::VectorXd::Zero(centered_points.cols()), hbar);
}

} // namespace detail

} // namespace polarec
