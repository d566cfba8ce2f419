// polarec: reconstruct Gaussian quantum states from position-measurement
// localization regions via hbar-polar duality and John/Loewner ellipsoids.
//
// Exit codes: 0 success, 1 validation/polarity error, 2 I/O or parse error,
// 3 numerical failure. Standard output carries nothing but JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "polarec/errors.hpp"
#include "polarec/ingest.hpp"
#include "polarec/json_io.hpp"
#include "polarec/polar.hpp"
#include "polarec/reconstruct.hpp"
#include "polarec/states.hpp"
#include "polarec/symplectic.hpp"

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw polarec::io_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw polarec::parse_error("cannot parse '" + path + "': " + e.what());
    }
}

// Piped artifacts may wrap the payload (e.g. ingest output holds the region
// under "ellipsoid"); descend so pipelines need no reshaping.
json unwrap(const json& j, const char* key) {
    if (j.is_object() && j.contains(key)) return j[key];
    return j;
}

double effective_hbar(const json& j, const std::optional<double>& flag) {
    const bool has_field = j.is_object() && j.contains("hbar") && j["hbar"].is_number();
    if (has_field && flag && j["hbar"].get<double>() != *flag)
        throw polarec::validation_error("hbar mismatch between input file and --hbar flag");
    if (has_field) return j["hbar"].get<double>();
    return flag.value_or(1.0);
}

polarec::Ellipsoid load_ellipsoid(const std::string& path, const std::optional<double>& hbar_flag) {
    const json j = unwrap(load_json_file(path), "ellipsoid");
    return polarec::ellipsoid_from_json(j, effective_hbar(j, hbar_flag));
}

polarec::CovarianceMatrix load_covariance(const std::string& path) {
    const json j = unwrap(load_json_file(path), "covariance");
    return polarec::covariance_from_json(j);
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

struct GridAxisSpec {
    std::vector<polarec::WignerGridAxis> axes;
};

GridAxisSpec parse_grid(const std::string& spec) {
    GridAxisSpec out;
    std::istringstream all(spec);
    std::string axis;
    while (std::getline(all, axis, ';')) {
        std::istringstream parts(axis);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(parts, tok, ',')) toks.push_back(tok);
        if (toks.size() != 3)
            throw polarec::validation_error("grid axis must be 'min,max,steps': '" + axis + "'");
        try {
            polarec::WignerGridAxis a;
            a.lo = std::stod(toks[0]);
            a.hi = std::stod(toks[1]);
            a.steps = std::stoi(toks[2]);
            out.axes.push_back(a);
        } catch (const std::exception&) {
            throw polarec::validation_error("cannot parse grid axis '" + axis + "'");
        }
    }
    if (out.axes.empty()) throw polarec::validation_error("empty grid spec");
    return out;
}

int cmd_dual(const std::string& input, const std::optional<double>& hbar_flag) {
    const polarec::Ellipsoid E = load_ellipsoid(input, hbar_flag);
    emit(polarec::to_json(polarec::polar_dual(E)));
    return 0;
}

int cmd_reconstruct(const std::string& x_path, const std::optional<std::string>& p_path,
                    const std::optional<double>& slack, const std::string& mode,
                    const std::optional<double>& hbar_flag) {
    const polarec::Ellipsoid X = load_ellipsoid(x_path, hbar_flag);
    if (p_path && slack)
        throw polarec::validation_error("give either --p or --slack, not both");
    if (!p_path && !slack)
        throw polarec::validation_error("momentum data required: --p <ellipsoid.json> or --slack s");

    polarec::Ellipsoid P = p_path ? load_ellipsoid(*p_path, hbar_flag)
                                  : polarec::postulate_momentum_region(X, *slack);

    if (mode == "pure") {
        const polarec::PauliPartnerSet set = polarec::reconstruct_pure(X, P);
        for (const auto& sig : set.rejected_signatures) {
            std::cerr << "rejected sign pattern (not symplectic):";
            for (long i = 0; i < sig.size(); ++i) std::cerr << " " << sig(i);
            std::cerr << "\n";
        }
        json arr = json::array();
        for (const auto& partner : set.states) {
            arr.push_back(polarec::to_json(polarec::make_gaussian_state(partner.covariance),
                                           &partner.signature));
        }
        emit(arr);
    } else if (mode == "mixed") {
        const polarec::CovarianceMatrix cov = polarec::reconstruct_mixed(X, P);
        emit(polarec::to_json(polarec::make_gaussian_state(cov)));
    } else {
        throw polarec::validation_error("--mode must be 'pure' or 'mixed'");
    }
    return 0;
}

int cmd_ingest(const std::string& csv_path, const std::optional<std::string>& config_path) {
    polarec::IngestConfig cfg;
    if (config_path) cfg = polarec::ingest_config_from_json(load_json_file(*config_path));
    const polarec::MeasurementCloud cloud = polarec::load_cloud(csv_path);
    const polarec::RegionEstimate est = polarec::estimate_region(cloud, cfg);
    emit(json{{"ellipsoid", polarec::to_json(est.region)},
              {"center", polarec::vector_to_json(est.center)},
              {"retained", est.retained},
              {"dropped", est.dropped}});
    return 0;
}

int cmd_check(const std::string& sigma_path) {
    const polarec::CovarianceMatrix cov = load_covariance(sigma_path);
    const auto rep = polarec::check_quantum_condition(cov);
    const auto rs = polarec::rs_report(cov);
    const polarec::GaussianState st = polarec::make_gaussian_state(cov);
    emit(json{{"quantum_ok", rep.ok()},
              {"symplectic_eigenvalues",
               polarec::vector_to_json(polarec::symplectic_eigenvalues(cov.sigma()))},
              {"rs_margins", polarec::vector_to_json(rs.margins)},
              {"purity", st.purity},
              {"pure", st.pure}});
    return 0;
}

int cmd_project(const std::string& sigma_path, const std::string& onto) {
    const polarec::CovarianceMatrix cov = load_covariance(sigma_path);
    polarec::Space subspace;
    if (onto == "position")
        subspace = polarec::Space::position;
    else if (onto == "momentum")
        subspace = polarec::Space::momentum;
    else
        throw polarec::validation_error("--onto must be 'position' or 'momentum'");
    emit(polarec::to_json(polarec::project_covariance(cov, subspace)));
    return 0;
}

int cmd_wigner(const std::string& state_path, const std::string& grid, const std::string& out) {
    const json j = load_json_file(state_path);
    const polarec::GaussianState state = polarec::state_from_json(j);
    if (state.covariance.modes() > 2)
        throw polarec::validation_error("wigner grids are limited to n <= 2 modes");
    const GridAxisSpec spec = parse_grid(grid);
    if (static_cast<int>(spec.axes.size()) != 2 * state.covariance.modes())
        throw polarec::validation_error("grid spec must provide one axis per phase-space coordinate");

    std::ofstream csv(out);
    if (!csv) throw polarec::io_error("cannot open '" + out + "' for writing");
    const polarec::WignerGridSummary summary = polarec::wigner_grid_to_csv(state, spec.axes, csv);
    if (!csv.good()) throw polarec::io_error("failed while writing '" + out + "'");
    csv.close();

    emit(json{{"integral_estimate", summary.integral_estimate},
              {"max_at", polarec::vector_to_json(summary.max_at)}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian quantum state reconstruction from position localization "
                 "via hbar-polar duality"};
    app.require_subcommand(1);

    // dual
    auto* dual = app.add_subcommand("dual", "hbar-polar dual of a centered ellipsoid");
    std::string dual_input;
    std::optional<double> dual_hbar;
    dual->add_option("--input", dual_input, "ellipsoid JSON file")->required();
    dual->add_option("--hbar", dual_hbar, "hbar override (must match the file when both given)");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "reconstruct covariance/state from regions");
    std::string rec_x, rec_mode;
    std::optional<std::string> rec_p;
    std::optional<double> rec_slack, rec_hbar;
    rec->add_option("--x", rec_x, "position ellipsoid JSON")->required();
    rec->add_option("--p", rec_p, "momentum ellipsoid JSON");
    rec->add_option("--slack", rec_slack, "momentum slack s >= 1 (P = X^hbar widened by s)");
    rec->add_option("--mode", rec_mode, "pure | mixed")->required();
    rec->add_option("--hbar", rec_hbar, "hbar override");

    // ingest
    auto* ing = app.add_subcommand("ingest", "estimate a localization region from a cloud CSV");
    std::string ing_csv;
    std::optional<std::string> ing_cfg;
    ing->add_option("--csv", ing_csv, "measurement cloud CSV")->required();
    ing->add_option("--config", ing_cfg, "ingest config JSON");

    // check
    auto* chk = app.add_subcommand("check", "quantum-condition and RS diagnostics");
    std::string chk_sigma;
    chk->add_option("--sigma", chk_sigma, "covariance JSON")->required();

    // project
    auto* prj = app.add_subcommand("project", "project the covariance ellipsoid");
    std::string prj_sigma, prj_onto;
    prj->add_option("--sigma", prj_sigma, "covariance JSON")->required();
    prj->add_option("--onto", prj_onto, "position | momentum")->required();

    // wigner
    auto* wig = app.add_subcommand("wigner", "evaluate the Wigner distribution on a grid");
    std::string wig_state, wig_grid, wig_out;
    wig->add_option("--state", wig_state, "state JSON")->required();
    wig->add_option("--grid", wig_grid, "per-axis 'min,max,steps' joined by ';'")->required();
    wig->add_option("--out", wig_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(dual)) return cmd_dual(dual_input, dual_hbar);
        if (app.got_subcommand(rec))
            return cmd_reconstruct(rec_x, rec_p, rec_slack, rec_mode, rec_hbar);
        if (app.got_subcommand(ing)) return cmd_ingest(ing_csv, ing_cfg);
        if (app.got_subcommand(chk)) return cmd_check(chk_sigma);
        if (app.got_subcommand(prj)) return cmd_project(prj_sigma, prj_onto);
        if (app.got_subcommand(wig)) return cmd_wigner(wig_state, wig_grid, wig_out);
    } catch (const polarec::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const polarec::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const polarec::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
