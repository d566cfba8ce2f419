#pragma once

#include <json.hpp>

#include "polarec/covariance.hpp"
#include "polarec/ellipsoid.hpp"
#include "polarec/ingest.hpp"
#include "polarec/reconstruct.hpp"
#include "polarec/states.hpp"

namespace polarec {

// Ellipsoid <-> {"space": "position"|"momentum"|"phase", "hbar": number,
//                "center": [..], "shape": [[..]]}
nlohmann::json to_json(const Ellipsoid& E);
Ellipsoid ellipsoid_from_json(const nlohmann::json& j, double default_hbar = 1.0);

// CovarianceMatrix <-> {"n": int, "hbar": number, "mean": [2n], "sigma": [[2n x 2n]],
//                       "purity_class": "pure"|"mixed"}  (purity_class optional on input)
nlohmann::json to_json(const CovarianceMatrix& Sigma);
CovarianceMatrix covariance_from_json(const nlohmann::json& j);

// GaussianState -> {"covariance": {..}, "purity": number,
//                   "classification": "pure"|"mixed",
//                   "wavefunction": {..}}   (wavefunction present only when pure;
//                   carries sigma_xx, sigma_xp, x0 and optionally the sign branch)
nlohmann::json to_json(const GaussianState& state,
                       const Eigen::VectorXi* signature = nullptr);
GaussianState state_from_json(const nlohmann::json& j);

IngestConfig ingest_config_from_json(const nlohmann::json& j);

// Shared helpers for matrix/vector payloads.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& M);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* field);
Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* field);

} // namespace polarec
