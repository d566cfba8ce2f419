#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "polarec/errors.hpp"
#include "polarec/polar.hpp"
#include "polarec/symplectic.hpp"

using namespace polarec;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("symplectic form basics") {
    for (int n : {1, 2, 3}) {
        const MatrixXd J = symplectic_form(n);
        CHECK((J * J + MatrixXd::Identity(2 * n, 2 * n)).norm() == doctest::Approx(0.0));
        CHECK((J.transpose() + J).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("is_symplectic fixtures") {
    const MatrixXd J = symplectic_form(1);
    CHECK(is_symplectic(J));
    CHECK(is_symplectic(MatrixXd::Identity(4, 4)));
    // S^T J S = 4J for diag(2, 2)
    CHECK_FALSE(is_symplectic(2.0 * MatrixXd::Identity(2, 2)));
    CHECK_THROWS_AS(is_symplectic(MatrixXd::Identity(3, 3)), dimension_error);
}

TEST_CASE("block conditions fixtures and agreement with is_symplectic") {
    auto rep = check_block_conditions(symplectic_form(2));
    CHECK(rep.cond1_ok);
    CHECK(rep.cond2_ok);

    // dilation blockdiag(L, (L^T)^{-1}) with L = [[2]]
    MatrixXd D(2, 2);
    D << 2.0, 0.0, 0.0, 0.5;
    rep = check_block_conditions(D);
    CHECK(rep.cond1_ok);
    CHECK(rep.cond2_ok);

    oracles::Rng rng(101);
    MatrixXd bad = rng.gaussian_matrix(4, 4);
    rep = check_block_conditions(bad);
    CHECK_FALSE(rep.cond1_ok);
    CHECK_FALSE(rep.cond2_ok);

    // 1000 random inputs, half symplectic, half perturbed
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 3;
        MatrixXd S = random_symplectic(n, 5000 + trial);
        if (trial % 2 == 1) S += 1e-4 * rng.gaussian_matrix(2 * n, 2 * n);
        const auto r = check_block_conditions(S);
        const bool direct = is_symplectic(S);
        CHECK(r.cond1_ok == direct);
        CHECK(r.cond2_ok == direct);
    }
}

TEST_CASE("symplectic inverse") {
    const MatrixXd J = symplectic_form(2);
    CHECK((symplectic_inverse(J) + J).norm() == doctest::Approx(0.0));
    CHECK((symplectic_inverse(MatrixXd::Identity(6, 6)) - MatrixXd::Identity(6, 6)).norm() ==
          doctest::Approx(0.0));

    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 4;
        const MatrixXd S = random_symplectic(n, 900 + trial);
        const MatrixXd SI = symplectic_inverse(S);
        CHECK((S * SI - MatrixXd::Identity(2 * n, 2 * n)).norm() <= 1e-10 * S.norm());
    }

    CHECK_THROWS_AS(symplectic_inverse(2.0 * MatrixXd::Identity(2, 2)), validation_error);
    CHECK_NOTHROW(symplectic_inverse(2.0 * MatrixXd::Identity(2, 2), true));
}

TEST_CASE("embed_unitary and the rotation conditions") {
    const int n = 2;
    const MatrixXd I = MatrixXd::Identity(n, n);
    const MatrixXd Z = MatrixXd::Zero(n, n);
    CHECK((embed_unitary(I, Z) - MatrixXd::Identity(2 * n, 2 * n)).norm() == doctest::Approx(0.0));
    CHECK(is_unitary_pair(I, Z));

    const double theta = std::numbers::pi / 3.0;
    MatrixXd A1(1, 1), B1(1, 1);
    A1 << std::cos(theta);
    B1 << std::sin(theta);
    const MatrixXd R = embed_unitary(A1, B1);
    CHECK(is_unitary_pair(A1, B1));
    CHECK(is_symplectic(R));
    MatrixXd expected(2, 2);
    expected << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    CHECK((R - expected).norm() == doctest::Approx(0.0));

    // A = B = I violates A^T A + B^T B = I
    CHECK_FALSE(is_unitary_pair(I, I));
    CHECK_FALSE(is_symplectic(embed_unitary(I, I)));

    CHECK_THROWS_AS(embed_unitary(I, MatrixXd::Zero(3, 3)), dimension_error);

    // validity of the pair <=> embedded matrix is a symplectic rotation
    oracles::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + trial % 3;
        MatrixXd A = rng.gaussian_matrix(m, m), B = rng.gaussian_matrix(m, m);
        const MatrixXd U = embed_unitary(A, B);
        const bool valid = is_unitary_pair(A, B, 1e-9);
        const bool rotation =
            is_symplectic(U, 1e-9) &&
            (U.transpose() * U - MatrixXd::Identity(2 * m, 2 * m)).norm() <=
                1e-9 * std::sqrt(2.0 * m);
        CHECK(valid == rotation);
    }
}

TEST_CASE("williamson fixtures") {
    SUBCASE("identity") {
        const auto dec = williamson(MatrixXd::Identity(6, 6));
        CHECK((dec.nu.array() - 1.0).abs().maxCoeff() <= 1e-12);
        CHECK(is_symplectic(dec.S, 1e-10));
    }
    SUBCASE("diag(2, 8) has nu = 4") {
        MatrixXd M(2, 2);
        M << 2.0, 0.0, 0.0, 8.0;
        const auto dec = williamson(M);
        CHECK(dec.nu(0) == doctest::Approx(4.0).epsilon(1e-12));
        MatrixXd D = dec.S.transpose() * M * dec.S;
        CHECK(D(0, 0) == doctest::Approx(4.0).epsilon(1e-10));
        CHECK(D(1, 1) == doctest::Approx(4.0).epsilon(1e-10));
        CHECK(std::abs(D(0, 1)) <= 1e-10);
    }
    SUBCASE("symplectic invariance of nu, n = 1") {
        for (int trial = 0; trial < 20; ++trial) {
            const MatrixXd S = random_symplectic(1, 40 + trial);
            const MatrixXd M = S.transpose() * (3.0 * MatrixXd::Identity(2, 2)) * S;
            const auto dec = williamson(M);
            CHECK(dec.nu(0) == doctest::Approx(3.0).epsilon(1e-9));
        }
    }
    SUBCASE("errors") {
        MatrixXd notsym(2, 2);
        notsym << 1.0, 0.5, 0.0, 1.0;
        CHECK_THROWS_AS(williamson(notsym), validation_error);
        MatrixXd notpd(2, 2);
        notpd << 1.0, 0.0, 0.0, -1.0;
        CHECK_THROWS_AS(williamson(notpd), validation_error);
    }
    SUBCASE("degenerate spectrum still yields a valid decomposition") {
        const MatrixXd M = 2.0 * MatrixXd::Identity(4, 4);
        const auto dec = williamson(M);
        CHECK(is_symplectic(dec.S, 1e-10));
        Eigen::VectorXd nu2(4);
        nu2 << dec.nu, dec.nu;
        CHECK((dec.S.transpose() * M * dec.S - MatrixXd(nu2.asDiagonal())).norm() <=
              1e-10 * M.norm());
    }
}

TEST_CASE("williamson properties on random SPD matrices") {
    oracles::Rng rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        const MatrixXd M = rng.spd(2 * n, 0.2, 5.0);
        const auto dec = williamson(M);

        CHECK(is_symplectic(dec.S, 1e-9));
        CHECK((dec.nu.array() > 0.0).all());
        for (int i = 0; i + 1 < n; ++i) CHECK(dec.nu(i) >= dec.nu(i + 1));

        Eigen::VectorXd nu2(2 * n);
        nu2 << dec.nu, dec.nu;
        const double resid = (dec.S.transpose() * M * dec.S - MatrixXd(nu2.asDiagonal())).norm();
        CHECK(resid <= 1e-8 * M.norm());

        const VectorXd nu_jm = symplectic_eigenvalues(M);
        CHECK((dec.nu - nu_jm).cwiseAbs().maxCoeff() <= 1e-8 * nu_jm.maxCoeff());

        // invariance under symplectic congruence
        const MatrixXd T = random_symplectic(n, 7000 + trial);
        const auto dec2 = williamson(T.transpose() * M * T);
        CHECK((dec2.nu - dec.nu).cwiseAbs().maxCoeff() <= 1e-8 * dec.nu.maxCoeff());
    }
}

TEST_CASE("quantum blob predicate") {
    SUBCASE("fixtures") {
        CHECK(is_quantum_blob(Ellipsoid::ball(Space::phase, 2, 1.0, 1.0)));
        MatrixXd Q(2, 2);
        Q << 4.0, 0.0, 0.0, 0.25;
        CHECK(is_quantum_blob(Ellipsoid(Space::phase, Q, VectorXd::Zero(2), 1.0)));
        CHECK_FALSE(is_quantum_blob(
            Ellipsoid(Space::phase, 2.0 * MatrixXd::Identity(2, 2), VectorXd::Zero(2), 1.0)));
    }
    SUBCASE("invariance under symplectic maps") {
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + trial % 3;
            const MatrixXd S = random_symplectic(n, 11 + trial);
            const Ellipsoid blob = Ellipsoid::ball(Space::phase, 2 * n, 1.0, 1.0);
            CHECK(is_quantum_blob(linear_map(blob, S), 1e-8));
            const Ellipsoid fat = Ellipsoid::ball(Space::phase, 2 * n, 2.0, 1.0);
            CHECK_FALSE(is_quantum_blob(linear_map(fat, S), 1e-6));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(is_quantum_blob(Ellipsoid::ball(Space::phase, 3, 1.0, 1.0)),
                        dimension_error);
    }
}

namespace {
CovarianceMatrix cov_from_sigma(const MatrixXd& sigma, double hbar) {
    const int n = static_cast<int>(sigma.rows()) / 2;
    return CovarianceMatrix(n, hbar, sigma, VectorXd::Zero(2 * n));
}
} // namespace

TEST_CASE("quantum condition fixtures") {
    CHECK(satisfies_quantum_condition(cov_from_sigma(0.5 * MatrixXd::Identity(2, 2), 1.0)));
    CHECK(satisfies_quantum_condition(cov_from_sigma(0.5 * MatrixXd::Identity(6, 6), 1.0)));

    MatrixXd S1(2, 2);
    S1 << 0.5, 0.0, 0.0, 2.0;
    CHECK(satisfies_quantum_condition(cov_from_sigma(S1, 1.0)));

    MatrixXd S2 = 0.1 * MatrixXd::Identity(2, 2);
    CHECK_FALSE(satisfies_quantum_condition(cov_from_sigma(S2, 1.0)));
    const auto rep = check_quantum_condition(cov_from_sigma(S2, 1.0));
    CHECK(rep.min_symplectic_eigenvalue == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(rep.agree());
}

TEST_CASE("quantum condition: both routes agree on random SPD matrices") {
    oracles::Rng rng(4242);
    int quantum_count = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 3;
        // spectrum straddles hbar/2 so both verdicts occur
        const MatrixXd M = rng.spd(2 * n, 0.1, 2.0);
        const auto rep = check_quantum_condition(cov_from_sigma(M, 1.0));
        CHECK(rep.agree());
        quantum_count += rep.ok() ? 1 : 0;
    }
    CHECK(quantum_count > 50);
    CHECK(quantum_count < 950);
}

TEST_CASE("random_symplectic") {
    SUBCASE("n = 1 has unit determinant") {
        for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
            const MatrixXd S = random_symplectic(1, seed);
            CHECK(std::abs(S.determinant() - 1.0) <= 1e-10);
        }
    }
    SUBCASE("n = 2 seed 7 passes block conditions") {
        const auto rep = check_block_conditions(random_symplectic(2, 7));
        CHECK(rep.cond1_ok);
        CHECK(rep.cond2_ok);
    }
    SUBCASE("deterministic per (n, seed)") {
        const MatrixXd a = random_symplectic(3, 123);
        const MatrixXd b = random_symplectic(3, 123);
        CHECK((a - b).norm() == 0.0);
        const MatrixXd c = random_symplectic(3, 124);
        CHECK((a - c).norm() > 0.0);
    }
    SUBCASE("always symplectic at 1e-10") {
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + trial % 4;
            CHECK(is_symplectic(random_symplectic(n, trial), 1e-10));
        }
    }
}
