#include "polarec/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polarec/errors.hpp"

namespace polarec {

namespace {

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    return s.substr(i);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& tok, long line_no) {
    double value = 0.0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        std::ostringstream msg;
        msg << "cloud CSV line " << line_no << ": cannot parse '" << tok << "' as a number";
        throw parse_error(msg.str());
    }
    return value;
}

} // namespace

MeasurementCloud load_cloud(const std::filesystem::path& path, std::optional<int> expected_n) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open cloud CSV '" + path.string() + "'");

    std::string line;
    long line_no = 0;
    // header: x1,...,xn
    if (!std::getline(in, line))
        throw io_error("cloud CSV '" + path.string() + "' is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    const int n = static_cast<int>(header.size());
    if (n < 1) throw parse_error("cloud CSV line 1: empty header");
    for (int j = 0; j < n; ++j) {
        const std::string want = "x" + std::to_string(j + 1);
        if (header[j] != want)
            throw parse_error("cloud CSV line 1: expected header column '" + want + "', got '" +
                              header[j] + "'");
    }
    if (expected_n && *expected_n != n) {
        std::ostringstream msg;
        msg << "cloud CSV has dimension " << n << ", expected " << *expected_n;
        throw dimension_error(msg.str());
    }

    std::vector<Eigen::VectorXd> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != n) {
            std::ostringstream msg;
            msg << "cloud CSV line " << line_no << ": expected " << n << " fields, got "
                << fields.size();
            throw parse_error(msg.str());
        }
        Eigen::VectorXd row(n);
        for (int j = 0; j < n; ++j) row(j) = parse_double(fields[j], line_no);
        rows.push_back(std::move(row));
    }

    MeasurementCloud cloud;
    cloud.points.resize(static_cast<long>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        cloud.points.row(static_cast<long>(i)) = rows[i].transpose();
    cloud.label = path.filename().string();
    return cloud;
}

RegionEstimate estimate_region(const MeasurementCloud& cloud, const IngestConfig& cfg) {
    const int n = cloud.dim();
    const long N = cloud.count();
    if (n < 1) throw dimension_error("cloud has no coordinates");
    if (!(cfg.trim_fraction >= 0.0 && cfg.trim_fraction <= 0.2))
        throw validation_error("trim_fraction must lie in [0, 0.2]");
    if (!(cfg.eps > 0.0)) throw validation_error("eps must be positive");
    if (!(cfg.hbar > 0.0)) throw validation_error("hbar must be positive");
    if (cfg.center_mode == CenterMode::fixed && cfg.fixed_center.size() != n)
        throw dimension_error("fixed center dimension does not match the cloud");

    // Symmetric per-coordinate quantile trim: drop any sample falling outside
    // the trimmed range of any coordinate.
    std::vector<bool> keep(static_cast<std::size_t>(N), true);
    if (cfg.trim_fraction > 0.0) {
        const long k = static_cast<long>(std::floor(cfg.trim_fraction * static_cast<double>(N)));
        if (k > 0) {
            for (int j = 0; j < n; ++j) {
                std::vector<double> col(static_cast<std::size_t>(N));
                for (long i = 0; i < N; ++i) col[static_cast<std::size_t>(i)] = cloud.points(i, j);
                std::sort(col.begin(), col.end());
                const double lo = col[static_cast<std::size_t>(k)];
                const double hi = col[static_cast<std::size_t>(N - 1 - k)];
                for (long i = 0; i < N; ++i) {
                    if (cloud.points(i, j) < lo || cloud.points(i, j) > hi)
                        keep[static_cast<std::size_t>(i)] = false;
                }
            }
        }
    }

    long retained = 0;
    for (bool b : keep) retained += b ? 1 : 0;
    if (retained < n + 1)
        throw validation_error("estimate_region: fewer than n+1 points after trimming");

    Eigen::MatrixXd pts(retained, n);
    long r = 0;
    for (long i = 0; i < N; ++i) {
        if (keep[static_cast<std::size_t>(i)]) pts.row(r++) = cloud.points.row(i);
    }

    const Eigen::VectorXd center = cfg.center_mode == CenterMode::mean
                                       ? Eigen::VectorXd(pts.colwise().mean())
                                       : cfg.fixed_center;
    const Eigen::MatrixXd centered = pts.rowwise() - center.transpose();

    if (cfg.max_iterations < 1) throw validation_error("max_iterations must be positive");
    MeasurementCloud centered_cloud{centered, cloud.label};
    Ellipsoid region =
        cfg.estimator == RegionEstimator::loewner
            ? mvee_centered(centered_cloud, cfg.eps, cfg.hbar, Space::position,
                            cfg.max_iterations)
            : detail::john_inscribed_centered(centered, cfg.eps, cfg.hbar);

    return RegionEstimate{std::move(region), center, retained, N - retained};
}

Ellipsoid postulate_momentum_region(const Ellipsoid& X, double slack) {
    if (!X.is_centered())
        throw validation_error("postulate_momentum_region requires a centered position region");
    if (!(slack >= 1.0))
        throw polarity_error("momentum slack must be >= 1 to keep X^hbar inside P");
    const Ellipsoid dual = polar_dual(X);
    return Ellipsoid(Space::momentum, dual.shape() / slack, Eigen::VectorXd::Zero(X.dim()),
                     X.hbar());
}

Ellipsoid postulate_momentum_region(const Ellipsoid& X, const Eigen::MatrixXd& slack) {
    if (!X.is_centered())
        throw validation_error("postulate_momentum_region requires a centered position region");
    if (slack.rows() != X.dim() || slack.cols() != X.dim())
        throw dimension_error("matrix slack dimension does not match the region");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((slack + slack.transpose()) / 2.0);
    if (es.info() != Eigen::Success)
        throw numerical_error("postulate_momentum_region: eigendecomposition failed");
    if ((slack - slack.transpose()).norm() > 1e-12 * std::max(1.0, slack.norm()) ||
        es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("matrix slack must be symmetric positive definite");
    const Eigen::MatrixXd inv_sqrt = es.eigenvectors() *
                                     es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                     es.eigenvectors().transpose();

    const Ellipsoid dual = polar_dual(X);
    Eigen::MatrixXd B = inv_sqrt * dual.shape() * inv_sqrt;
    B = ((B + B.transpose()) / 2.0).eval();
    Ellipsoid P(Space::momentum, std::move(B), Eigen::VectorXd::Zero(X.dim()), X.hbar());
    if (!is_subset(dual, P))
        throw polarity_error("matrix slack does not keep X^hbar inside P");
    return P;
}

} // namespace polarec
