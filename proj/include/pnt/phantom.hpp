#pragma once

#include <stdexcept>
#include <vector>

#include "pnt/grid.hpp"

namespace pnt {

inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;  // T m / A

/// Raised when a field point lies on a current-carrying segment.
class FieldSingularity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Piecewise-linear current path.
struct WirePath {
    std::vector<Vec3> vertices;  // meters
    double current = 1.0;        // amperes

    void validate() const;
};

/// Helical coil. The helix starts at angle `phase` measured from the
/// reference direction perpendicular to `axis` (see solenoid_wire).
/// The defaults put a tilted coil 15 mm above the z = 0 plane, so the slice
/// samples its smooth end field instead of cutting through the windings.
struct SolenoidSpec {
    double radius = 0.008;  // meters
    double pitch = 0.002;   // meters per turn
    int n_turns = 10;
    int segments_per_turn = 64;
    Vec3 axis = Vec3(0.5, 0.3, 1.0).normalized();
    Vec3 center = Vec3(0.0, 0.0, 0.015);
    double current = 1.0;  // amperes
    double phase = 0.0;    // radians

    void validate() const;
};

/// Minimum distance from a field point to the wire (meters).
inline constexpr double kWireClearance = 1e-9;

/// Magnetic field of `wire` at `point`, summing the closed-form field of
/// each straight segment. Throws FieldSingularity within kWireClearance.
Vec3 biot_savart(const WirePath& wire, const Vec3& point);

/// Helix discretized into segments_per_turn * n_turns straight pieces.
WirePath solenoid_wire(const SolenoidSpec& spec);

/// Field at every voxel center (x1, x2, plane_height) of the grid.
VectorField2D sample_field(const WirePath& wire, const GridSpec& spec, double plane_height);

/// Pointwise alpha * field.
VectorField2D scale_field(const VectorField2D& field, double alpha);

/// Rescale so the largest voxel magnitude equals `peak` (Tesla).
/// Throws std::invalid_argument on an all-zero field.
VectorField2D normalize_peak(const VectorField2D& field, double peak);

}  // namespace pnt
