#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "pnt/data_ops.hpp"
#include "pnt/forward.hpp"
#include "pnt/grid.hpp"
#include "pnt/phantom.hpp"
#include "pnt/recon.hpp"

namespace pnt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhantomConfig {
    SolenoidSpec coil;
    double plane_height = 0.0;  // meters
    double peak_field = 5.8e-6; // Tesla, before `scale`
    double scale = 1.0;
};

/// Square grid of n x n voxels spanning `fov` meters, centered on the origin.
struct SquareGridConfig {
    int n = 180;
    double fov = 0.04;

    GridSpec spec() const { return GridSpec::centered(n, fov); }
};

/// Every run setting in one place. Missing JSON keys keep these defaults.
struct RunConfig {
    PhantomConfig phantom;
    SquareGridConfig simulation_grid{180, 0.04};
    ScanGeometry scan = default_scan();
    PhysicsConstants physics;
    double noise_level = 0.05;
    NoiseModel noise_model = NoiseModel::absolute;
    std::uint64_t seed = 1;
    int rebin_factor = 3;
    SquareGridConfig recon_grid{67, 0.04};
    MnkmConfig mnkm;

    /// 360 one-degree views, 270 detectors at the simulation voxel pitch.
    static ScanGeometry default_scan();
    void validate() const;
};

/// Coil field on the simulation grid, normalized to peak_field, then scaled.
VectorField2D build_phantom(const RunConfig& cfg);

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Complete configuration, angles in degrees.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace pnt
