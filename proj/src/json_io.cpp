#include "polarec/json_io.hpp"

#include "polarec/errors.hpp"

namespace polarec {

using nlohmann::json;

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (long i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.empty())
        throw parse_error(std::string("field '") + field + "' must be a non-empty array of rows");
    const long rows = static_cast<long>(j.size());
    long cols = -1;
    Eigen::MatrixXd M;
    for (long i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array())
            throw parse_error(std::string("field '") + field + "' rows must be arrays");
        if (cols < 0) {
            cols = static_cast<long>(row.size());
            M.resize(rows, cols);
        }
        if (static_cast<long>(row.size()) != cols)
            throw parse_error(std::string("field '") + field + "' rows have unequal lengths");
        for (long k = 0; k < cols; ++k) {
            const json& cell = row[static_cast<std::size_t>(k)];
            if (!cell.is_number())
                throw parse_error(std::string("field '") + field + "' must contain numbers");
            M(i, k) = cell.get<double>();
        }
    }
    return M;
}

Eigen::VectorXd vector_from_json(const json& j, const char* field) {
    if (!j.is_array())
        throw parse_error(std::string("field '") + field + "' must be an array of numbers");
    Eigen::VectorXd v(static_cast<long>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw parse_error(std::string("field '") + field + "' must contain numbers");
        v(static_cast<long>(i)) = j[i].get<double>();
    }
    return v;
}

namespace {

const json& require(const json& j, const char* field) {
    const auto it = j.find(field);
    if (it == j.end())
        throw parse_error(std::string("missing required field '") + field + "'");
    return *it;
}

double number_field(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number()) throw parse_error(std::string("field '") + field + "' must be a number");
    return v.get<double>();
}

} // namespace

nlohmann::json to_json(const Ellipsoid& E) {
    return json{{"space", to_string(E.space())},
                {"hbar", E.hbar()},
                {"center", vector_to_json(E.center())},
                {"shape", matrix_to_json(E.shape())}};
}

Ellipsoid ellipsoid_from_json(const json& j, double default_hbar) {
    if (!j.is_object()) throw parse_error("ellipsoid JSON must be an object");
    const std::string space = require(j, "space").get<std::string>();
    const double hbar = j.contains("hbar") ? number_field(j, "hbar") : default_hbar;
    Eigen::VectorXd center = vector_from_json(require(j, "center"), "center");
    Eigen::MatrixXd shape = matrix_from_json(require(j, "shape"), "shape");
    return Ellipsoid(space_from_string(space), std::move(shape), std::move(center), hbar);
}

nlohmann::json to_json(const CovarianceMatrix& Sigma) {
    const GaussianState st = make_gaussian_state(Sigma);
    return json{{"n", Sigma.modes()},
                {"hbar", Sigma.hbar()},
                {"mean", vector_to_json(Sigma.mean())},
                {"sigma", matrix_to_json(Sigma.sigma())},
                {"purity_class", st.pure ? "pure" : "mixed"}};
}

CovarianceMatrix covariance_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("covariance JSON must be an object");
    const json& nj = require(j, "n");
    if (!nj.is_number_integer()) throw parse_error("field 'n' must be an integer");
    const int n = nj.get<int>();
    const double hbar = number_field(j, "hbar");
    Eigen::VectorXd mean = vector_from_json(require(j, "mean"), "mean");
    Eigen::MatrixXd sigma = matrix_from_json(require(j, "sigma"), "sigma");
    return CovarianceMatrix(n, hbar, std::move(sigma), std::move(mean));
}

nlohmann::json to_json(const GaussianState& state, const Eigen::VectorXi* signature) {
    json j{{"covariance", to_json(state.covariance)},
           {"purity", state.purity},
           {"classification", state.pure ? "pure" : "mixed"}};
    if (state.pure) {
        // classification already vetted purity; keep the parameter extraction
        // from tripping on the last digit of the symplecticity residual
        const PureGaussianWavefunction psi = wavefunction_from_covariance(state.covariance, 1e-6);
        json wf{{"x0", vector_to_json(psi.x0)},
                {"sigma_xx", matrix_to_json(psi.sigma_xx)},
                {"sigma_xp", matrix_to_json(psi.sigma_xp)}};
        if (signature) {
            json branch = json::array();
            for (long i = 0; i < signature->size(); ++i) branch.push_back((*signature)(i));
            wf["branch"] = std::move(branch);
        }
        j["wavefunction"] = std::move(wf);
    }
    return j;
}

GaussianState state_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("state JSON must be an object");
    // Accept either a full GaussianState document or a bare covariance.
    const json& cov = j.contains("covariance") ? j["covariance"] : j;
    return make_gaussian_state(covariance_from_json(cov));
}

IngestConfig ingest_config_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("ingest config JSON must be an object");
    IngestConfig cfg;
    if (j.contains("estimator")) {
        const std::string est = j["estimator"].get<std::string>();
        if (est == "loewner")
            cfg.estimator = RegionEstimator::loewner;
        else if (est == "john")
            cfg.estimator = RegionEstimator::john;
        else
            throw parse_error("estimator must be 'loewner' or 'john'");
    }
    if (j.contains("trim_fraction")) cfg.trim_fraction = number_field(j, "trim_fraction");
    if (j.contains("center_mode")) {
        const std::string mode = j["center_mode"].get<std::string>();
        if (mode == "mean")
            cfg.center_mode = CenterMode::mean;
        else if (mode == "fixed")
            cfg.center_mode = CenterMode::fixed;
        else
            throw parse_error("center_mode must be 'mean' or 'fixed'");
    }
    if (j.contains("fixed_center"))
        cfg.fixed_center = vector_from_json(j["fixed_center"], "fixed_center");
    if (cfg.center_mode == CenterMode::fixed && cfg.fixed_center.size() == 0)
        throw parse_error("center_mode 'fixed' requires a 'fixed_center' array");
    if (j.contains("eps")) cfg.eps = number_field(j, "eps");
    if (j.contains("hbar")) cfg.hbar = number_field(j, "hbar");
    if (j.contains("max_iterations")) {
        if (!j["max_iterations"].is_number_integer())
            throw parse_error("field 'max_iterations' must be an integer");
        cfg.max_iterations = j["max_iterations"].get<long>();
    }
    return cfg;
}

} // namespace polarec
