#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>

#include "polarec/ellipsoid.hpp"
#include "polarec/polar.hpp"

namespace polarec {

enum class RegionEstimator { loewner, john };
enum class CenterMode { mean, fixed };

struct IngestConfig {
    RegionEstimator estimator = RegionEstimator::loewner;
    double trim_fraction = 0.0; // symmetric per-coordinate quantile trim, in [0, 0.2]
    CenterMode center_mode = CenterMode::mean;
    Eigen::VectorXd fixed_center; // used when center_mode == fixed
    double eps = defaults::mvee_eps;
    double hbar = 1.0;
    long max_iterations = defaults::mvee_max_iterations;
};

/// Parse the cloud CSV schema: header row "x1,...,xn", one sample per row,
/// decimal point, UTF-8. parse_error carries the offending line number.
MeasurementCloud load_cloud(const std::filesystem::path& path,
                            std::optional<int> expected_n = std::nullopt);

struct RegionEstimate {
    Ellipsoid region;        // centered at the origin
    Eigen::VectorXd center;  // extracted x0
    long retained = 0;
    long dropped = 0;
};

/// Trim per-coordinate quantiles, extract the center per cfg.center_mode,
/// and fit the configured estimator to the centered points. The returned
/// ellipsoid is exactly centered; the translation is reported separately so
/// polarity stays applicable downstream.
RegionEstimate estimate_region(const MeasurementCloud& cloud, const IngestConfig& cfg);

/// Momentum region postulate P >= X^hbar: with scalar slack s >= 1 the dual
/// shape A^{-1} is scaled to B = A^{-1} / s (half-widths grow by sqrt(s));
/// s = 1 gives P = X^hbar exactly. polarity_error when s < 1.
Ellipsoid postulate_momentum_region(const Ellipsoid& X, double slack);

/// Per-axis variant: B = S^{-1/2} A^{-1} S^{-1/2} for SPD slack S, validated
/// to keep X^hbar inside P.
Ellipsoid postulate_momentum_region(const Ellipsoid& X, const Eigen::MatrixXd& slack);

} // namespace polarec
