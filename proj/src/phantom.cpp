#include "pnt/phantom.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pnt {

void WirePath::validate() const {
    if (vertices.size() < 2) throw std::invalid_argument("wire: at least two vertices required");
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        if (!vertices[k].allFinite()) throw std::invalid_argument("wire: non-finite vertex");
        if (k > 0 && vertices[k] == vertices[k - 1]) {
            throw std::invalid_argument("wire: consecutive vertices must be distinct");
        }
    }
    if (!std::isfinite(current)) throw std::invalid_argument("wire: current must be finite");
}

void SolenoidSpec::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("solenoid: radius must be positive");
    if (!(pitch > 0.0)) throw std::invalid_argument("solenoid: pitch must be positive");
    if (n_turns < 1) throw std::invalid_argument("solenoid: n_turns must be >= 1");
    if (segments_per_turn < 8) throw std::invalid_argument("solenoid: segments_per_turn must be >= 8");
    if (!(axis.norm() > 0.0) || !axis.allFinite()) throw std::invalid_argument("solenoid: axis must be nonzero");
    if (!center.allFinite()) throw std::invalid_argument("solenoid: center must be finite");
}

namespace {

// Field of the straight segment a -> b:
// B = mu0 I / (4 pi) * (r1 x r2) (|r1| + |r2|) / (|r1| |r2| (|r1| |r2| + r1 . r2))
Vec3 segment_field(const Vec3& a, const Vec3& b, double current, const Vec3& p) {
    const Vec3 r1 = p - a;
    const Vec3 r2 = p - b;
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = std::clamp(r1.dot(ab) / len2, 0.0, 1.0);
    if ((r1 - t * ab).norm() <= kWireClearance) {
        throw FieldSingularity("biot_savart: field point lies on the wire");
    }
    const double n1 = r1.norm();
    const double n2 = r2.norm();
    const double denom = n1 * n2 * (n1 * n2 + r1.dot(r2));
    // Colinear point beyond the segment end: cross product vanishes.
    if (denom <= 0.0) return Vec3::Zero();
    return (kMu0 * current / (4.0 * std::numbers::pi)) * (n1 + n2) / denom * r1.cross(r2);
}

}  // namespace

Vec3 biot_savart(const WirePath& wire, const Vec3& point) {
    Vec3 b = Vec3::Zero();
    for (std::size_t k = 0; k + 1 < wire.vertices.size(); ++k) {
        b += segment_field(wire.vertices[k], wire.vertices[k + 1], wire.current, point);
    }
    return b;
}

WirePath solenoid_wire(const SolenoidSpec& spec) {
    spec.validate();
    const Vec3 axis = spec.axis.normalized();
    // reference direction: the coordinate axis least aligned with the coil axis
    Vec3 ref = Vec3::UnitZ();
    if (std::abs(axis.z()) > std::abs(axis.x()) || std::abs(axis.z()) > std::abs(axis.y())) {
        ref = std::abs(axis.x()) < std::abs(axis.y()) ? Vec3::UnitX() : Vec3::UnitY();
    }
    const Vec3 u = (ref - ref.dot(axis) * axis).normalized();
    const Vec3 w = axis.cross(u);

    const int n_seg = spec.segments_per_turn * spec.n_turns;
    const double half_length = 0.5 * spec.pitch * spec.n_turns;
    WirePath wire;
    wire.current = spec.current;
    wire.vertices.reserve(static_cast<std::size_t>(n_seg) + 1);
    for (int k = 0; k <= n_seg; ++k) {
        const double turns = static_cast<double>(k) / spec.segments_per_turn;
        const double angle = spec.phase + 2.0 * std::numbers::pi * turns;
        wire.vertices.push_back(spec.center + (turns * spec.pitch - half_length) * axis +
                                spec.radius * (std::cos(angle) * u + std::sin(angle) * w));
    }
    return wire;
}

VectorField2D sample_field(const WirePath& wire, const GridSpec& spec, double plane_height) {
    wire.validate();
    spec.validate();
    VectorField2D field(spec);
    detail::parallel_for(static_cast<std::ptrdiff_t>(spec.size()), [&](std::ptrdiff_t k) {
        const int i = static_cast<int>(k % spec.nx);
        const int j = static_cast<int>(k / spec.nx);
        const Vec2 c = spec.voxel_center(i, j);
        field.values[static_cast<std::size_t>(k)] = biot_savart(wire, Vec3(c.x(), c.y(), plane_height));
    });
    return field;
}

VectorField2D scale_field(const VectorField2D& field, double alpha) { return alpha * field; }

VectorField2D normalize_peak(const VectorField2D& field, double peak) {
    const double m = field.max_magnitude();
    if (!(m > 0.0)) throw std::invalid_argument("normalize_peak: field is identically zero");
    return scale_field(field, peak / m);
}

}  // namespace pnt
