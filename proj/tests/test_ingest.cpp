#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "oracles.hpp"
#include "polarec/errors.hpp"
#include "polarec/ingest.hpp"
#include "polarec/polar.hpp"

using namespace polarec;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("polarec_ingest_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

// Uniform samples from { u : u^T Q u <= 1 }.
MatrixXd uniform_ellipse_sample(oracles::Rng& rng, const MatrixXd& Q, long N) {
    const int n = static_cast<int>(Q.rows());
    const MatrixXd T = oracles::spd_power(Q, -0.5);
    MatrixXd pts(N, n);
    for (long i = 0; i < N; ++i) {
        // uniform in the unit ball by radius inversion
        const VectorXd dir = rng.direction(n);
        const double r = std::pow(rng.uniform01(), 1.0 / n);
        pts.row(i) = (T * (r * dir)).transpose();
    }
    return pts;
}

} // namespace

TEST_CASE("load_cloud") {
    TempDir tmp;
    SUBCASE("3-column CSV") {
        std::string csv = "x1,x2,x3\n";
        for (int i = 0; i < 100; ++i)
            csv += std::to_string(0.1 * i) + "," + std::to_string(-0.2 * i) + ",1.5\n";
        write_file(tmp.file("c.csv"), csv);
        const auto cloud = load_cloud(tmp.file("c.csv"));
        CHECK(cloud.dim() == 3);
        CHECK(cloud.count() == 100);
        CHECK(cloud.points(3, 0) == doctest::Approx(0.3));
    }
    SUBCASE("expected_n mismatch") {
        write_file(tmp.file("d.csv"), "x1,x2\n1.0,2.0\n");
        CHECK_THROWS_AS(load_cloud(tmp.file("d.csv"), 3), dimension_error);
        CHECK_NOTHROW(load_cloud(tmp.file("d.csv"), 2));
    }
    SUBCASE("non-numeric token names the line") {
        write_file(tmp.file("e.csv"), "x1\n1.0\nbogus\n2.0\n");
        try {
            load_cloud(tmp.file("e.csv"));
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("empty file") {
        write_file(tmp.file("f.csv"), "");
        CHECK_THROWS_AS(load_cloud(tmp.file("f.csv")), io_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_cloud(tmp.file("nope.csv")), io_error);
    }
    SUBCASE("bad header") {
        write_file(tmp.file("g.csv"), "a,b\n1.0,2.0\n");
        CHECK_THROWS_AS(load_cloud(tmp.file("g.csv")), parse_error);
    }
    SUBCASE("wrong field count names the line") {
        write_file(tmp.file("h.csv"), "x1,x2\n1.0,2.0\n3.0\n");
        CHECK_THROWS_AS(load_cloud(tmp.file("h.csv")), parse_error);
    }
    SUBCASE("crlf and blank lines tolerated") {
        write_file(tmp.file("i.csv"), "x1,x2\r\n1.0,2.0\r\n\r\n3.0,4.0\r\n");
        const auto cloud = load_cloud(tmp.file("i.csv"));
        CHECK(cloud.count() == 2);
    }
}

TEST_CASE("estimate_region with the loewner estimator") {
    oracles::Rng rng(71);
    MatrixXd Q(2, 2);
    Q << 1.4, 0.35, 0.35, 0.7;

    SUBCASE("uniform sample recovers the region within 5%") {
        const MatrixXd pts = uniform_ellipse_sample(rng, Q, 10000);
        IngestConfig cfg;
        cfg.eps = 1e-7;
        const auto est = estimate_region({pts, "sample"}, cfg);
        CHECK(est.retained == 10000);
        CHECK(est.dropped == 0);
        CHECK(est.region.is_centered());
        CHECK(est.center.norm() <= 0.05);
        CHECK((est.region.shape() - Q).norm() <= 0.05 * Q.norm());
        // containment certificate for retained (all) points about the center
        for (long i = 0; i < pts.rows(); ++i) {
            const VectorXd u = pts.row(i).transpose() - est.center;
            CHECK(u.dot(est.region.shape() * u) <= est.region.hbar() * (1.0 + cfg.eps));
        }
    }
    SUBCASE("outliers wreck the untrimmed fit; trimming recovers") {
        const long N = 10000, n_out = 100;
        MatrixXd pts = uniform_ellipse_sample(rng, Q, N);
        for (long i = 0; i < n_out; ++i) {
            pts.row(rng.uniform_int(0, static_cast<int>(N - 1))) =
                (8.0 * rng.direction(2)).transpose();
        }
        IngestConfig plain;
        const auto raw = estimate_region({pts, "dirty"}, plain);
        CHECK((raw.region.shape() - Q).norm() > 0.3 * Q.norm());

        IngestConfig trimmed;
        trimmed.trim_fraction = 0.02;
        const auto est = estimate_region({pts, "dirty"}, trimmed);
        CHECK(est.dropped > 0);
        CHECK((est.region.shape() - Q).norm() <= 0.10 * Q.norm());
    }
    SUBCASE("degenerate: N = n points") {
        MatrixXd pts(2, 2);
        pts << 0, 0, 1, 0;
        CHECK_THROWS_AS(estimate_region({pts, "toofew"}, IngestConfig{}), validation_error);
    }
    SUBCASE("fixed center mode") {
        const MatrixXd pts = uniform_ellipse_sample(rng, Q, 500);
        IngestConfig cfg;
        cfg.center_mode = CenterMode::fixed;
        cfg.fixed_center = VectorXd::Zero(2);
        const auto est = estimate_region({pts, "sample"}, cfg);
        CHECK(est.center.norm() == 0.0);
    }
    SUBCASE("deterministic: identical inputs give identical outputs") {
        const MatrixXd pts = uniform_ellipse_sample(rng, Q, 800);
        IngestConfig cfg;
        cfg.trim_fraction = 0.01;
        const auto a = estimate_region({pts, "x"}, cfg);
        const auto b = estimate_region({pts, "x"}, cfg);
        CHECK((a.region.shape() - b.region.shape()).norm() == 0.0);
        CHECK((a.center - b.center).norm() == 0.0);
        CHECK(a.retained == b.retained);
    }
    SUBCASE("config validation") {
        const MatrixXd pts = uniform_ellipse_sample(rng, Q, 50);
        IngestConfig cfg;
        cfg.trim_fraction = 0.3;
        CHECK_THROWS_AS(estimate_region({pts, "x"}, cfg), validation_error);
        cfg = IngestConfig{};
        cfg.eps = 0.0;
        CHECK_THROWS_AS(estimate_region({pts, "x"}, cfg), validation_error);
        cfg = IngestConfig{};
        cfg.center_mode = CenterMode::fixed; // missing fixed_center
        CHECK_THROWS_AS(estimate_region({pts, "x"}, cfg), dimension_error);
    }
}

TEST_CASE("estimate_region with the john estimator is inscribed in the hull") {
    oracles::Rng rng(72);
    MatrixXd pts = rng.gaussian_matrix(400, 2);
    IngestConfig cfg;
    cfg.estimator = RegionEstimator::john;
    const auto est = estimate_region({pts, "gauss"}, cfg);
    CHECK(est.region.is_centered());

    const MatrixXd shifted = pts.rowwise() - est.center.transpose();
    const MatrixXd hs = hull_halfspaces(shifted);
    for (int i = 0; i < 10000; ++i) {
        const VectorXd z =
            oracles::boundary_point(est.region.shape(), est.region.hbar(), rng.direction(2));
        for (long f = 0; f < hs.rows(); ++f)
            CHECK(hs.row(f).head(2).dot(z) <= hs(f, 2) + 1e-9);
    }
}

TEST_CASE("postulate_momentum_region") {
    SUBCASE("slack 1 gives the exact dual") {
        const Ellipsoid X = Ellipsoid::ball(Space::position, 2, 2.0, 1.0);
        const Ellipsoid P = postulate_momentum_region(X, 1.0);
        const Ellipsoid dual = polar_dual(X);
        CHECK((P.shape() - dual.shape()).norm() == 0.0);
        CHECK(P.space() == Space::momentum);
    }
    SUBCASE("1D interval with slack 4 doubles the half-width") {
        MatrixXd A(1, 1);
        A << 1.0; // unit interval at hbar = 1
        const Ellipsoid X(Space::position, A, VectorXd::Zero(1), 1.0);
        const Ellipsoid P = postulate_momentum_region(X, 4.0);
        CHECK(P.shape()(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
        // half-width sqrt(hbar / B) = 2
        CHECK(std::sqrt(P.hbar() / P.shape()(0, 0)) == doctest::Approx(2.0));
    }
    SUBCASE("slack below one is a polarity violation") {
        const Ellipsoid X = Ellipsoid::ball(Space::position, 1, 1.0, 1.0);
        CHECK_THROWS_AS(postulate_momentum_region(X, 0.5), polarity_error);
    }
    SUBCASE("non-centered region rejected") {
        const Ellipsoid X = translate(Ellipsoid::ball(Space::position, 2, 1.0, 1.0),
                                      VectorXd::Ones(2));
        CHECK_THROWS_AS(postulate_momentum_region(X, 2.0), validation_error);
    }
    SUBCASE("inclusion invariant on random regions and slacks") {
        oracles::Rng rng(73);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + trial % 4;
            const Ellipsoid X(Space::position, rng.spd(n, 0.3, 3.0), VectorXd::Zero(n), 1.0);
            const Ellipsoid P = postulate_momentum_region(X, 1.0 + 3.0 * rng.uniform01());
            CHECK(is_subset(polar_dual(X), P));
        }
    }
    SUBCASE("matrix slack") {
        const Ellipsoid X = Ellipsoid::ball(Space::position, 2, 1.0, 1.0);
        MatrixXd S(2, 2);
        S << 4.0, 0.0, 0.0, 1.0;
        const Ellipsoid P = postulate_momentum_region(X, S);
        CHECK(is_subset(polar_dual(X), P));
        MatrixXd expected(2, 2);
        expected << 0.25, 0.0, 0.0, 1.0;
        CHECK((P.shape() - expected).norm() <= 1e-12);

        MatrixXd bad(2, 2);
        bad << 0.25, 0.0, 0.0, 1.0; // shrinks one axis
        CHECK_THROWS_AS(postulate_momentum_region(X, bad), polarity_error);
        CHECK_THROWS_AS(postulate_momentum_region(X, MatrixXd::Identity(3, 3)), dimension_error);
    }
}
