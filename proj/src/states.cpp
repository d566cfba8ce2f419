#include "polarec/states.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <ostream>

#include "polarec/errors.hpp"
#include "polarec/symplectic.hpp"

namespace polarec {

namespace {

constexpr double k_pure_band = 1e-9;

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& M, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw numerical_error(std::string("eigendecomposition failed in ") + what);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error(std::string(what) + ": matrix is not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

} // namespace

std::complex<double> PureGaussianWavefunction::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != n) throw dimension_error("wavefunction argument has wrong dimension");
    const Eigen::VectorXcd d = (x - x0).cast<std::complex<double>>();
    const std::complex<double> exponent = d.dot(quadratic_form * d); // d^H Q d == d^T Q d (d real)
    return normalization * std::exp(-exponent);
}

double purity(const CovarianceMatrix& Sigma) {
    const double det = Sigma.sigma().determinant();
    if (!(det > 0.0))
        throw numerical_error("purity: covariance determinant is not positive");
    return std::pow(Sigma.hbar() / 2.0, Sigma.modes()) / std::sqrt(det);
}

GaussianState make_gaussian_state(const CovarianceMatrix& Sigma) {
    GaussianState st{Sigma, purity(Sigma), false};
    st.pure = std::abs(st.purity - 1.0) <= k_pure_band;
    return st;
}

PureGaussianWavefunction wavefunction_from_covariance(const CovarianceMatrix& Sigma,
                                                      double tol) {
    const int n = Sigma.modes();
    const double hbar = Sigma.hbar();
    if (!is_symplectic((2.0 / hbar) * Sigma.sigma(), tol))
        throw validation_error("wavefunction_from_covariance: covariance is not pure");

    PureGaussianWavefunction psi;
    psi.n = n;
    psi.hbar = hbar;
    psi.x0 = Sigma.mean().head(n);
    psi.sigma_xx = Sigma.xx();
    psi.sigma_xp = Sigma.xp();

    const Eigen::MatrixXd sxx_inv = spd_inverse(psi.sigma_xx, "wavefunction_from_covariance");
    psi.normalization = std::pow(2.0 * std::numbers::pi, -n / 4.0) *
                        std::pow(psi.sigma_xx.determinant(), -0.25);

    // Real part (1/4) Sxx^{-1}; imaginary part -(1/2 hbar) Sxx^{-1} Sxp, which
    // is symmetric for pure covariances and carries the Pauli-branch phase:
    // for n = 1 the amplitude is psi ~ exp(-x^2/4sxx) exp(+i sxp x^2 / 2 hbar sxx),
    // whose Wigner transform reproduces sigma_xp with its sign.
    const Eigen::MatrixXd imag_part = -(sxx_inv * psi.sigma_xp) / (2.0 * hbar);
    psi.quadratic_form = (0.25 * sxx_inv).cast<std::complex<double>>() +
                         std::complex<double>(0.0, 1.0) *
                             ((imag_part + imag_part.transpose()) / 2.0)
                                 .cast<std::complex<double>>();
    return psi;
}

double wigner(const GaussianState& state, const Eigen::VectorXd& z) {
    const CovarianceMatrix& cov = state.covariance;
    const int n = cov.modes();
    if (z.size() != 2 * n) throw dimension_error("wigner argument must be a 2n phase-space point");
    if (!z.allFinite()) throw validation_error("wigner argument must be finite");

    const Eigen::VectorXd d = z - cov.mean();
    const Eigen::MatrixXd inv = spd_inverse(cov.sigma(), "wigner");
    const double quad = d.dot(inv * d);
    const double det = cov.sigma().determinant();
    return std::pow(2.0 * std::numbers::pi, -n) / std::sqrt(det) * std::exp(-0.5 * quad);
}

RobertsonSchroedingerReport rs_report(const CovarianceMatrix& Sigma) {
    const int n = Sigma.modes();
    const double quarter = Sigma.hbar() * Sigma.hbar() / 4.0;
    RobertsonSchroedingerReport rep;
    rep.per_mode_product.resize(n);
    rep.margins.resize(n);
    rep.saturated.resize(n);
    for (int j = 0; j < n; ++j) {
        const double sxx = Sigma.sigma()(j, j);
        const double spp = Sigma.sigma()(n + j, n + j);
        const double sxp = Sigma.sigma()(j, n + j);
        rep.per_mode_product(j) = sxx * spp - sxp * sxp;
        rep.margins(j) = rep.per_mode_product(j) - quarter;
        rep.saturated[j] = std::abs(rep.margins(j)) <= 1e-9 * quarter;
    }
    const Eigen::MatrixXd res = Sigma.xx() * Sigma.pp() - Sigma.xp() * Sigma.xp() -
                                quarter * Eigen::MatrixXd::Identity(n, n);
    rep.matrix_residual = res.norm();
    rep.all_satisfied = (rep.margins.array() >= -1e-9 * quarter).all();
    return rep;
}

WignerGridSummary wigner_grid_to_csv(const GaussianState& state,
                                     const std::vector<WignerGridAxis>& axes,
                                     std::ostream& out) {
    const int n = state.covariance.modes();
    const int d = 2 * n;
    if (static_cast<int>(axes.size()) != d)
        throw validation_error("wigner grid needs one axis spec per phase-space coordinate");
    for (const auto& ax : axes) {
        if (ax.steps < 2 || !(ax.hi > ax.lo))
            throw validation_error("wigner grid axes need hi > lo and at least 2 steps");
    }

    const Eigen::MatrixXd inv = spd_inverse(state.covariance.sigma(), "wigner_grid");
    const double prefactor = std::pow(2.0 * std::numbers::pi, -n) /
                             std::sqrt(state.covariance.sigma().determinant());

    const int old_precision = static_cast<int>(out.precision());
    out.precision(17);
    out << "# n=" << n << " hbar=" << state.covariance.hbar() << " grid=";
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (a) out << ";";
        out << axes[a].lo << "," << axes[a].hi << "," << axes[a].steps;
    }
    out << "\n";
    for (int a = 0; a < d; ++a) out << "z" << (a + 1) << ",";
    out << "W\n";

    std::vector<int> idx(d, 0);
    Eigen::VectorXd z(d);
    double best = -1.0;
    Eigen::VectorXd best_z = Eigen::VectorXd::Zero(d);
    double integral = 0.0;

    const auto axis_value = [&](int a, int i) {
        return axes[a].lo + (axes[a].hi - axes[a].lo) * i / (axes[a].steps - 1);
    };

    bool done = false;
    while (!done) {
        double weight = 1.0;
        for (int a = 0; a < d; ++a) {
            z(a) = axis_value(a, idx[a]);
            const double h = (axes[a].hi - axes[a].lo) / (axes[a].steps - 1);
            weight *= (idx[a] == 0 || idx[a] == axes[a].steps - 1) ? h / 2.0 : h;
        }
        const Eigen::VectorXd dz = z - state.covariance.mean();
        const double w = prefactor * std::exp(-0.5 * dz.dot(inv * dz));
        integral += weight * w;
        if (w > best) {
            best = w;
            best_z = z;
        }
        for (int a = 0; a < d; ++a) out << z(a) << ",";
        out << w << "\n";

        // odometer over the tensor grid, last axis fastest
        done = true;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < axes[a].steps) {
                done = false;
                break;
            }
            idx[a] = 0;
        }
    }
    out.precision(old_precision);

    WignerGridSummary summary;
    summary.integral_estimate = integral;
    summary.max_at = best_z;
    return summary;
}

} // namespace polarec
