#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "polarec/covariance.hpp"
#include "polarec/ellipsoid.hpp"

namespace polarec {

namespace defaults {
inline constexpr double predicate_tol = 1e-10;
inline constexpr double quantum_tol = 1e-9;
} // namespace defaults

/// Standard symplectic matrix J = [[0, I], [-I, 0]] in n x n blocks.
Eigen::MatrixXd symplectic_form(int n);

/// || S^T J S - J ||_F <= tol * ||J||_F
bool is_symplectic(const Eigen::MatrixXd& S, double tol = defaults::predicate_tol);

struct BlockConditionReport {
    bool cond1_ok = false; // A^T C, B^T D symmetric and A^T D - C^T B = I
    bool cond2_ok = false; // A B^T, C D^T symmetric and A D^T - B C^T = I
    double cond1_residual = 0.0;
    double cond2_residual = 0.0;
};

BlockConditionReport check_block_conditions(const Eigen::MatrixXd& S,
                                            double tol = defaults::predicate_tol);

/// For S = [[A, B], [C, D]] symplectic, S^{-1} = [[D^T, -B^T], [-C^T, A^T]].
/// Unless assume_symplectic is set, S is validated first.
Eigen::MatrixXd symplectic_inverse(const Eigen::MatrixXd& S, bool assume_symplectic = false);

/// Image of A + iB under the embedding U(n, C) -> Sp(n): [[A, B], [-B, A]].
Eigen::MatrixXd embed_unitary(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// True iff A + iB is unitary, i.e. A^T B symmetric and A^T A + B^T B = I
/// (equivalently A B^T symmetric and A A^T + B B^T = I), so that
/// embed_unitary(A, B) is a symplectic rotation.
bool is_unitary_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     double tol = defaults::predicate_tol);

struct WilliamsonDecomposition {
    Eigen::MatrixXd S; // symplectic, S^T M S = diag(nu, nu)
    Eigen::VectorXd nu; // symplectic eigenvalues, descending
};

/// Williamson normal form of a symmetric positive definite 2n x 2n matrix:
/// S symplectic with S^T M S = diag(nu_1..nu_n, nu_1..nu_n), nu_1 >= ... >= nu_n.
///
/// Computed from the real Schur form of the antisymmetric matrix
/// K = M^{-1/2} J M^{-1/2}; the nu_j are the reciprocals of the positive Schur
/// block entries of K, which equal the moduli of the imaginary parts of the
/// eigenvalues of J M. Any valid S is accepted for degenerate spectra.
WilliamsonDecomposition williamson(const Eigen::MatrixXd& M);

/// Symplectic spectrum of an SPD matrix (positive imaginary parts of the
/// eigenvalues of J M), sorted descending.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& M);

/// True iff E is the image of the ball B^{2n}(sqrt(hbar)) under a linear
/// symplectic map, i.e. all symplectic eigenvalues of its shape matrix are 1.
bool is_quantum_blob(const Ellipsoid& E, double tol = defaults::predicate_tol);

struct QuantumConditionReport {
    bool williamson_ok = false; // min nu >= hbar/2 - tol
    bool hermitian_ok = false;  // min eig(Sigma + i hbar/2 J) >= -tol
    double min_symplectic_eigenvalue = 0.0;
    double min_hermitian_eigenvalue = 0.0;

    bool agree() const { return williamson_ok == hermitian_ok; }
    bool ok() const { return williamson_ok && hermitian_ok; }
};

/// Evaluates the quantum condition Sigma + (i hbar / 2) J >= 0 along both
/// routes: the symplectic spectrum of Sigma and the Hermitian eigenvalues.
QuantumConditionReport check_quantum_condition(const CovarianceMatrix& Sigma,
                                               double tol = defaults::quantum_tol);

bool satisfies_quantum_condition(const CovarianceMatrix& Sigma,
                                 double tol = defaults::quantum_tol);

/// Deterministic random element of Sp(n): product of symplectic rotations
/// (embedded random unitaries) and a positive diagonal dilation
/// diag(L, L^{-1}). Same (n, seed) always yields the same matrix.
Eigen::MatrixXd random_symplectic(int n, std::uint64_t seed);

} // namespace polarec
