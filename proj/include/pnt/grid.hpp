#pragma once

#include <cstddef>
#include <vector>

#include "pnt/so3.hpp"

namespace pnt {

/// Uniform nx-by-ny voxel grid lying in one plane. Voxel (i, j) covers
/// [origin.x + i*h, origin.x + (i+1)*h] x [origin.y + j*h, origin.y + (j+1)*h].
struct GridSpec {
    int nx = 1;
    int ny = 1;
    double voxel_size = 1.0;  // meters
    Vec2 origin = Vec2::Zero();  // lower-left corner, meters

    /// Square grid of n x n voxels spanning `fov` meters, centered on (0,0).
    static GridSpec centered(int n, double fov);

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    Vec2 voxel_center(int i, int j) const {
        return origin + voxel_size * Vec2(i + 0.5, j + 0.5);
    }
    Vec2 center() const { return origin + 0.5 * voxel_size * Vec2(nx, ny); }
    Vec2 upper() const { return origin + voxel_size * Vec2(nx, ny); }

    /// Throws std::invalid_argument when nx, ny < 1 or voxel_size <= 0.
    void validate() const;
};

bool operator==(const GridSpec& a, const GridSpec& b);

/// 3-component field (Tesla) sampled on a planar grid, row-major in (j, i).
struct VectorField2D {
    GridSpec spec;
    std::vector<Vec3> values;

    VectorField2D() = default;
    explicit VectorField2D(const GridSpec& s);

    Vec3& at(int i, int j) { return values[spec.index(i, j)]; }
    const Vec3& at(int i, int j) const { return values[spec.index(i, j)]; }

    /// Frobenius norm over all voxels and components.
    double norm() const;
    double max_magnitude() const;
    /// Throws std::invalid_argument on shape mismatch or non-finite entries.
    void validate() const;
};

VectorField2D operator+(const VectorField2D& a, const VectorField2D& b);
VectorField2D operator-(const VectorField2D& a, const VectorField2D& b);
VectorField2D operator*(double alpha, const VectorField2D& f);

/// Bilinear interpolation of `field` at the pixel centers of `target`.
/// Points outside the sampled lattice use clamped edge values; points
/// outside the grid bounding box get zero.
VectorField2D resample_bilinear(const VectorField2D& field, const GridSpec& target);

struct Ray {
    Vec2 origin = Vec2::Zero();
    Vec2 direction = Vec2::UnitX();  // unit
};

struct TraversalSegment {
    int i = 0;
    int j = 0;
    double chord = 0.0;  // meters
};

/// Parallel-beam acquisition. Ray d at angle a has direction
/// (cos t_a, sin t_a), t_a = angle_start + a * angle_step, and passes the
/// grid center at signed offset s_d = (d - (n_detectors - 1)/2) * pitch
/// along the normal (-sin t_a, cos t_a).
struct ScanGeometry {
    int n_angles = 1;
    double angle_start = 0.0;  // radians
    double angle_step = 0.0;   // radians
    int n_detectors = 1;
    double detector_pitch = 1.0;   // meters
    double neutron_speed = 790.0;  // m/s

    double angle(int a) const { return angle_start + a * angle_step; }
    double detector_offset(int d) const { return (d - 0.5 * (n_detectors - 1)) * detector_pitch; }
    std::size_t n_rays() const {
        return static_cast<std::size_t>(n_angles) * static_cast<std::size_t>(n_detectors);
    }
    void validate() const;
};

bool operator==(const ScanGeometry& a, const ScanGeometry& b);

/// Segments dropped as grazing when shorter than this (meters).
inline constexpr double kGrazingChord = 1e-12;

/// Voxels crossed by `ray`, in the order the ray meets them, with chord
/// lengths. Empty when the ray misses the grid. Rays lying exactly on the
/// outer boundary do not intersect.
std::vector<TraversalSegment> traverse(const GridSpec& spec, const Ray& ray);

/// Parametric interval [t_in, t_out] of the ray inside the grid box
/// (slab clipping). Returns false on a miss.
bool clip_to_grid(const GridSpec& spec, const Ray& ray, double& t_in, double& t_out);

struct ScanRay {
    int angle_index = 0;
    int detector_index = 0;
    Ray ray;
};

/// All rays of the scan, angle-major. Origins sit outside the grid.
std::vector<ScanRay> rays_for_scan(const GridSpec& spec, const ScanGeometry& geom);

/// The single ray (a, d) of a scan.
Ray scan_ray(const GridSpec& spec, const ScanGeometry& geom, int a, int d);

}  // namespace pnt
