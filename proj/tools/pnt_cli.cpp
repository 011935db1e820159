// Command-line pipeline: phantom -> forward -> noise -> rebin -> recon, plus
// diagnostics. Every subcommand prints one JSON report on stdout; failures
// print {"error": ...} on stderr and exit nonzero.

#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnt/config.hpp"
#include "pnt/data_ops.hpp"
#include "pnt/forward.hpp"
#include "pnt/io.hpp"
#include "pnt/phantom.hpp"
#include "pnt/recon.hpp"
#include "pnt/render.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

pnt::RunConfig config_or_default(const std::string& path) {
    return path.empty() ? pnt::parse_run_config("{}") : pnt::load_run_config(path);
}

json errors_json(const std::array<double, 4>& e) {
    return {{"B1", e[0]}, {"B2", e[1]}, {"B3", e[2]}, {"magnitude", e[3]}};
}

json geometry_json(const pnt::ScanGeometry& g) {
    return {{"n_angles", g.n_angles},
            {"n_detectors", g.n_detectors},
            {"angle_start_deg", g.angle_start * kRadToDeg},
            {"angle_step_deg", g.angle_step * kRadToDeg},
            {"detector_pitch_m", g.detector_pitch}};
}

// "a:b:n" -> n evenly spaced values from a to b inclusive
std::vector<double> parse_range(const std::string& text) {
    double a = 0.0, b = 0.0;
    int n = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &a, &b, &n, &tail) != 3 || n < 1) {
        throw UsageError("--alphas expects start:stop:count, got '" + text + "'");
    }
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) out[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
    return out;
}

fs::path sibling(const fs::path& report, const std::string& suffix) {
    fs::path stem = report;
    if (stem.extension() == ".json") stem.replace_extension();
    stem += suffix;
    return stem;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarimetric neutron tomography of magnetic fields"};
    app.require_subcommand(1);
    json report;

    std::string config_path, out, in, field_path, truth_path, est_path, alphas = "0:300:61";
    std::string model = "absolute";
    double level = 0.05;
    std::uint64_t seed = 1;
    int factor = 3;

    auto* phantom = app.add_subcommand("phantom", "Sample the configured coil on the simulation grid");
    phantom->add_option("--config", config_path, "Run configuration (JSON)");
    phantom->add_option("--out", out, "Output field")->required();

    auto* forward = app.add_subcommand("forward", "Simulate polarimetric data for a field");
    forward->add_option("--field", field_path, "Input field")->required();
    forward->add_option("--config", config_path, "Run configuration (JSON)");
    forward->add_option("--out", out, "Output sinogram set")->required();

    auto* noise = app.add_subcommand("noise", "Add Gaussian noise to every matrix entry");
    noise->add_option("--in", in, "Input sinogram set")->required();
    noise->add_option("--level", level, "Noise standard deviation (absolute) or fraction (relative)")
        ->check(CLI::NonNegativeNumber);
    noise->add_option("--seed", seed, "RNG seed");
    noise->add_option("--model", model, "absolute | relative")->check(CLI::IsMember({"absolute", "relative"}));
    noise->add_option("--out", out, "Output sinogram set")->required();

    auto* rebin = app.add_subcommand("rebin", "Average factor x factor blocks of (angle, detector)");
    rebin->add_option("--in", in, "Input sinogram set")->required();
    rebin->add_option("--factor", factor, "Block size")->check(CLI::PositiveNumber);
    rebin->add_option("--out", out, "Output sinogram set")->required();

    auto* recon_linear = app.add_subcommand("recon-linear", "Weak-field reconstruction by filtered backprojection");
    recon_linear->add_option("--in", in, "Input sinogram set")->required();
    recon_linear->add_option("--config", config_path, "Run configuration (JSON)");
    recon_linear->add_option("--truth", truth_path, "Field to compare against");
    recon_linear->add_option("--out", out, "Output field")->required();

    auto* recon_mnkm = app.add_subcommand("recon-mnkm", "Iterative strong-field reconstruction");
    recon_mnkm->add_option("--in", in, "Input sinogram set")->required();
    recon_mnkm->add_option("--config", config_path, "Run configuration (JSON)");
    recon_mnkm->add_option("--truth", truth_path, "Field to compare against");
    recon_mnkm->add_option("--out", out,
                           "Report path; the field and the iteration CSV are written next to it")
        ->required();

    auto* diagnose = app.add_subcommand("diagnose-nonconvex", "Residual between S(alpha B) and S(B) over alpha");
    diagnose->add_option("--field", field_path, "Input field")->required();
    diagnose->add_option("--config", config_path, "Run configuration (JSON), for the scan geometry");
    diagnose->add_option("--alphas", alphas, "start:stop:count");
    diagnose->add_option("--out", out, "Output CSV")->required();

    auto* metrics = app.add_subcommand("metrics", "Relative L2 errors of an estimate");
    metrics->add_option("--est", est_path, "Estimated field")->required();
    metrics->add_option("--truth", truth_path, "Reference field, resampled onto the estimate's grid")->required();

    auto* render = app.add_subcommand("render", "Grayscale PNG of a field or sinogram set");
    render->add_option("--in", in, "Input field or sinogram set")->required();
    render->add_option("--out", out, "Output PNG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
        return 2;
    }

    try {
        if (*phantom) {
            const pnt::RunConfig cfg = config_or_default(config_path);
            const pnt::VectorField2D field = pnt::build_phantom(cfg);
            pnt::write_field(out, field);
            report = {{"command", "phantom"},
                      {"out", pnt::artifact_paths(out).header.string()},
                      {"nx", field.spec.nx},
                      {"ny", field.spec.ny},
                      {"voxel_size_m", field.spec.voxel_size},
                      {"peak_tesla", field.max_magnitude()}};
        } else if (*forward) {
            const pnt::RunConfig cfg = config_or_default(config_path);
            const pnt::VectorField2D field = pnt::read_field(field_path);
            const pnt::ForwardScanResult r = pnt::forward_scan(field, cfg.scan, cfg.physics);
            pnt::write_sinogram_set(out, r.data);
            report = {{"command", "forward"},
                      {"out", pnt::artifact_paths(out).header.string()},
                      {"geometry", geometry_json(r.data.geometry)},
                      {"max_precession_deg", r.max_accumulated_angle * kRadToDeg}};
        } else if (*noise) {
            const pnt::SinogramSet data = pnt::read_sinogram_set(in);
            const auto m = model == "relative" ? pnt::NoiseModel::relative : pnt::NoiseModel::absolute;
            pnt::write_sinogram_set(out, pnt::add_noise(data, level, seed, m));
            report = {{"command", "noise"},
                      {"out", pnt::artifact_paths(out).header.string()},
                      {"level", level},
                      {"model", model},
                      {"seed", seed}};
        } else if (*rebin) {
            const pnt::SinogramSet binned = pnt::rebin(pnt::read_sinogram_set(in), factor);
            pnt::write_sinogram_set(out, binned);
            report = {{"command", "rebin"},
                      {"out", pnt::artifact_paths(out).header.string()},
                      {"geometry", geometry_json(binned.geometry)}};
        } else if (*recon_linear) {
            const pnt::RunConfig cfg = config_or_default(config_path);
            const pnt::SinogramSet data = pnt::read_sinogram_set(in);
            const pnt::VectorField2D est = pnt::linear_reconstruct(data, cfg.physics, cfg.recon_grid.spec());
            pnt::write_field(out, est);
            report = {{"command", "recon-linear"}, {"out", pnt::artifact_paths(out).header.string()}};
            if (!truth_path.empty()) {
                const auto truth = pnt::resample_bilinear(pnt::read_field(truth_path), est.spec);
                report["relative_error"] = errors_json(pnt::relative_error(est, truth));
            }
        } else if (*recon_mnkm) {
            const pnt::RunConfig cfg = config_or_default(config_path);
            const pnt::SinogramSet data = pnt::read_sinogram_set(in);
            pnt::VectorField2D truth;
            if (!truth_path.empty()) truth = pnt::read_field(truth_path);
            const pnt::ReconReport r = pnt::mnkm_reconstruct(data, cfg.physics, cfg.recon_grid.spec(), cfg.mnkm,
                                                             truth_path.empty() ? nullptr : &truth);
            const fs::path field_out = sibling(out, ".field");
            const fs::path csv_out = sibling(out, ".iterations.csv");
            pnt::write_field(field_out, r.field_estimate);
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < r.iterations.size(); ++k) {
                const auto& it = r.iterations[k];
                rows.push_back({static_cast<double>(k + 1), it.residual_before, it.residual, it.alpha,
                                it.update_norm, it.accepted ? 1.0 : 0.0});
            }
            pnt::write_csv(csv_out, {"iteration", "residual_before", "residual", "alpha", "update_norm", "accepted"},
                           rows);
            report = {{"command", "recon-mnkm"},
                      {"iterations", r.iterations.size()},
                      {"converged", r.converged},
                      {"stagnated", r.stagnated},
                      {"final_residual", r.iterations.empty() ? 0.0 : r.iterations.back().residual},
                      {"field", pnt::artifact_paths(field_out).header.string()},
                      {"iterations_csv", csv_out.string()}};
            if (r.per_component_relative_error) {
                report["relative_error"] = errors_json(*r.per_component_relative_error);
            }
            pnt::write_text_atomic(sibling(out, ".json"), report.dump(2) + "\n");
            report["out"] = sibling(out, ".json").string();
        } else if (*diagnose) {
            const pnt::RunConfig cfg = config_or_default(config_path);
            const pnt::VectorField2D field = pnt::read_field(field_path);
            const auto curve = pnt::residual_curve(field, parse_range(alphas), cfg.scan, cfg.physics);
            std::vector<std::vector<double>> rows;
            for (const auto& s : curve) rows.push_back({s.alpha, s.residual});
            pnt::write_csv(out, {"alpha", "residual"}, rows);
            int concave = 0;
            for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
                const double second = curve[k - 1].residual - 2.0 * curve[k].residual + curve[k + 1].residual;
                concave += second < 0.0;
            }
            report = {{"command", "diagnose-nonconvex"},
                      {"out", out},
                      {"samples", curve.size()},
                      {"concave_interior_samples", concave}};
        } else if (*metrics) {
            const pnt::VectorField2D est = pnt::read_field(est_path);
            const auto truth = pnt::resample_bilinear(pnt::read_field(truth_path), est.spec);
            report = {{"command", "metrics"}, {"relative_error", errors_json(pnt::relative_error(est, truth))}};
        } else if (*render) {
            const std::string kind = pnt::artifact_kind(in);
            const pnt::GrayImage img = kind == "field" ? pnt::render_field(pnt::read_field(in))
                                                       : pnt::render_sinogram_set(pnt::read_sinogram_set(in));
            pnt::write_png(out, img);
            report = {{"command", "render"}, {"out", out}, {"kind", kind}, {"width", img.width}, {"height", img.height}};
        }
    } catch (const UsageError& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
        return 2;
    } catch (const pnt::FormatError& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "format"}}.dump() << '\n';
        return 1;
    } catch (const pnt::ConfigError& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "config"}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "runtime"}}.dump() << '\n';
        return 1;
    }
    std::cout << report.dump() << '\n';
    return 0;
}
