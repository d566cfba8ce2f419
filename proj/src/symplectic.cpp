#include "polarec/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "polarec/errors.hpp"

namespace polarec {

namespace {

int half_dim_checked(const Eigen::MatrixXd& S) {
    if (S.rows() != S.cols())
        throw dimension_error("matrix must be square");
    if (S.rows() < 2 || S.rows() % 2 != 0)
        throw dimension_error("matrix must have even dimension 2n >= 2");
    return static_cast<int>(S.rows()) / 2;
}

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& M, double exponent, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw numerical_error(std::string("eigendecomposition failed in ") + what);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error(std::string(what) + ": matrix is not positive definite");
    Eigen::VectorXd pow = es.eigenvalues().array().pow(exponent);
    return es.eigenvectors() * pow.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

Eigen::MatrixXd symplectic_form(int n) {
    if (n < 1) throw dimension_error("symplectic form needs n >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return J;
}

bool is_symplectic(const Eigen::MatrixXd& S, double tol) {
    const int n = half_dim_checked(S);
    if (!(tol > 0.0)) throw validation_error("tolerance must be positive");
    const Eigen::MatrixXd J = symplectic_form(n);
    const double residual = (S.transpose() * J * S - J).norm();
    return residual <= tol * J.norm();
}

BlockConditionReport check_block_conditions(const Eigen::MatrixXd& S, double tol) {
    const int n = half_dim_checked(S);
    const auto A = S.topLeftCorner(n, n);
    const auto B = S.topRightCorner(n, n);
    const auto C = S.bottomLeftCorner(n, n);
    const auto D = S.bottomRightCorner(n, n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const double scale = std::sqrt(2.0 * n); // ||J||_F

    BlockConditionReport rep;
    // The three parts of each condition set are exactly the blocks of
    // S^T J S - J (resp. S J S^T - J), so the residual is normalized the same
    // way as is_symplectic and the predicates agree by construction.
    const Eigen::MatrixXd s1a = A.transpose() * C - C.transpose() * A;
    const Eigen::MatrixXd s1b = B.transpose() * D - D.transpose() * B;
    const Eigen::MatrixXd s1c = A.transpose() * D - C.transpose() * B - I;
    rep.cond1_residual =
        std::sqrt(s1a.squaredNorm() + s1b.squaredNorm() + 2.0 * s1c.squaredNorm()) / scale;
    rep.cond1_ok = rep.cond1_residual <= tol;

    const Eigen::MatrixXd s2a = A * B.transpose() - B * A.transpose();
    const Eigen::MatrixXd s2b = C * D.transpose() - D * C.transpose();
    const Eigen::MatrixXd s2c = A * D.transpose() - B * C.transpose() - I;
    rep.cond2_residual =
        std::sqrt(s2a.squaredNorm() + s2b.squaredNorm() + 2.0 * s2c.squaredNorm()) / scale;
    rep.cond2_ok = rep.cond2_residual <= tol;
    return rep;
}

Eigen::MatrixXd symplectic_inverse(const Eigen::MatrixXd& S, bool assume_symplectic) {
    const int n = half_dim_checked(S);
    if (!assume_symplectic && !is_symplectic(S))
        throw validation_error("symplectic_inverse: input is not symplectic");
    Eigen::MatrixXd inv(2 * n, 2 * n);
    inv.topLeftCorner(n, n) = S.bottomRightCorner(n, n).transpose();
    inv.topRightCorner(n, n) = -S.topRightCorner(n, n).transpose();
    inv.bottomLeftCorner(n, n) = -S.bottomLeftCorner(n, n).transpose();
    inv.bottomRightCorner(n, n) = S.topLeftCorner(n, n).transpose();
    return inv;
}

Eigen::MatrixXd embed_unitary(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw dimension_error("embed_unitary: A and B must be square with equal dimension");
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd U(2 * n, 2 * n);
    U.topLeftCorner(n, n) = A;
    U.topRightCorner(n, n) = B;
    U.bottomLeftCorner(n, n) = -B;
    U.bottomRightCorner(n, n) = A;
    return U;
}

bool is_unitary_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw dimension_error("is_unitary_pair: A and B must be square with equal dimension");
    const int n = static_cast<int>(A.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    // both equivalent condition sets, like check_block_conditions
    const double r1a = (A.transpose() * B - B.transpose() * A).norm();
    const double r1b = (A.transpose() * A + B.transpose() * B - I).norm();
    const double r2a = (A * B.transpose() - B * A.transpose()).norm();
    const double r2b = (A * A.transpose() + B * B.transpose() - I).norm();
    const double scale = std::max(1.0, std::sqrt(static_cast<double>(n)));
    return r1a <= tol * scale && r1b <= tol * scale && r2a <= tol * scale && r2b <= tol * scale;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& M) {
    const int n = half_dim_checked(M);
    const Eigen::MatrixXd JM = symplectic_form(n) * M;
    Eigen::EigenSolver<Eigen::MatrixXd> es(JM, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigenvalue computation failed for J M");
    std::vector<double> nus;
    nus.reserve(n);
    for (int i = 0; i < 2 * n; ++i) {
        const double im = es.eigenvalues()[i].imag();
        if (im > 0.0) nus.push_back(im);
    }
    if (static_cast<int>(nus.size()) != n)
        throw numerical_error("symplectic spectrum extraction failed (matrix not SPD?)");
    std::sort(nus.begin(), nus.end(), std::greater<>());
    return Eigen::Map<Eigen::VectorXd>(nus.data(), n);
}

WilliamsonDecomposition williamson(const Eigen::MatrixXd& M) {
    const int n = half_dim_checked(M);
    if ((M - M.transpose()).norm() > 1e-10 * std::max(1.0, M.norm()))
        throw validation_error("williamson: matrix is not symmetric");
    const Eigen::MatrixXd Msym = (M + M.transpose()) / 2.0;

    const Eigen::MatrixXd Mih = spd_power(Msym, -0.5, "williamson");
    const Eigen::MatrixXd J = symplectic_form(n);
    Eigen::MatrixXd K = Mih * J * Mih;
    K = ((K - K.transpose()) / 2.0).eval(); // exactly antisymmetric

    Eigen::RealSchur<Eigen::MatrixXd> schur(K);
    if (schur.info() != Eigen::Success)
        throw numerical_error("williamson: Schur decomposition failed");
    const Eigen::MatrixXd& T = schur.matrixT();
    const Eigen::MatrixXd& U = schur.matrixU();

    // The Schur form of an invertible antisymmetric matrix is block diagonal
    // with 2x2 blocks [[0, b], [-b, 0]]; pair the columns so that b > 0.
    struct Pair {
        Eigen::VectorXd x, y;
        double b;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n);
    for (int i = 0; i + 1 < 2 * n;) {
        if (T(i + 1, i) == 0.0)
            throw numerical_error("williamson: unexpected 1x1 Schur block");
        Pair p;
        if (T(i, i + 1) > 0.0) {
            p.x = U.col(i);
            p.y = U.col(i + 1);
        } else {
            p.x = U.col(i + 1);
            p.y = U.col(i);
        }
        p.b = p.x.dot(K * p.y);
        if (!(p.b > 0.0))
            throw numerical_error("williamson: nonpositive Schur block entry");
        pairs.push_back(std::move(p));
        i += 2;
    }
    if (static_cast<int>(pairs.size()) != n)
        throw numerical_error("williamson: wrong Schur block count");

    // nu_j = 1/b_j, descending order.
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.b < b.b; });

    Eigen::MatrixXd R(2 * n, 2 * n);
    Eigen::VectorXd nu(n);
    for (int j = 0; j < n; ++j) {
        R.col(j) = pairs[j].x;
        R.col(n + j) = pairs[j].y;
        nu(j) = 1.0 / pairs[j].b;
    }

    Eigen::VectorXd sqrt_nu2(2 * n);
    sqrt_nu2 << nu.cwiseSqrt(), nu.cwiseSqrt();

    WilliamsonDecomposition dec;
    dec.S = Mih * R * sqrt_nu2.asDiagonal();
    dec.nu = nu;
    return dec;
}

bool is_quantum_blob(const Ellipsoid& E, double tol) {
    if (E.dim() % 2 != 0)
        throw dimension_error("quantum blob test needs an even-dimensional (phase-space) ellipsoid");
    const Eigen::VectorXd nu = symplectic_eigenvalues(E.shape());
    return ((nu.array() - 1.0).abs() <= tol).all();
}

QuantumConditionReport check_quantum_condition(const CovarianceMatrix& Sigma, double tol) {
    const int n = Sigma.modes();
    QuantumConditionReport rep;
    rep.min_symplectic_eigenvalue = symplectic_eigenvalues(Sigma.sigma()).minCoeff();
    rep.williamson_ok = rep.min_symplectic_eigenvalue >= Sigma.hbar() / 2.0 - tol;

    Eigen::MatrixXcd H = Sigma.sigma().cast<std::complex<double>>();
    H += std::complex<double>(0.0, Sigma.hbar() / 2.0) * symplectic_form(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_error("quantum condition: Hermitian eigenvalue computation failed");
    rep.min_hermitian_eigenvalue = es.eigenvalues().minCoeff();
    rep.hermitian_ok = rep.min_hermitian_eigenvalue >= -tol;
    return rep;
}

bool satisfies_quantum_condition(const CovarianceMatrix& Sigma, double tol) {
    return check_quantum_condition(Sigma, tol).ok();
}

namespace {

// Portable gaussian sampler (Box-Muller over mt19937_64), so that fixed seeds
// reproduce across standard libraries.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform01() { // in (0, 1]
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

Eigen::MatrixXd random_rotation(int n, GaussianSampler& g) {
    // QR of a complex Ginibre matrix, phases fixed so R has positive diagonal.
    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = std::complex<double>(g.gaussian(), g.gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const std::complex<double> d = R(j, j);
        const double a = std::abs(d);
        if (a > 0.0) Q.col(j) *= d / a;
    }
    return embed_unitary(Q.real(), Q.imag());
}

} // namespace

Eigen::MatrixXd random_symplectic(int n, std::uint64_t seed) {
    if (n < 1) throw dimension_error("random_symplectic needs n >= 1");
    GaussianSampler g(seed);

    const Eigen::MatrixXd U1 = random_rotation(n, g);
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = std::exp(g.uniform(-1.0, 1.0));
    Eigen::VectorXd d(2 * n);
    d << lam, lam.cwiseInverse();
    const Eigen::MatrixXd U2 = random_rotation(n, g);

    return U1 * d.asDiagonal() * U2;
}

} // namespace polarec
