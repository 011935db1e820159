#pragma once

#include "pnt/grid.hpp"
#include "pnt/sinogram.hpp"
#include "pnt/so3.hpp"

namespace pnt {

/// Neutron gyromagnetic ratio, rad s^-1 T^-1.
inline constexpr double kGammaNeutron = -1.8324e8;

struct PhysicsConstants {
    double gamma_n = kGammaNeutron;  // rad s^-1 T^-1
    double neutron_speed = 790.0;    // m/s

    double gamma_over_v() const { return gamma_n / neutron_speed; }
    void validate() const;
};

/// Fields weaker than this (Tesla) are treated as zero inside a voxel.
inline constexpr double kNullField = 1e-15;

struct RaySpinResult {
    int angle_index = 0;
    int detector_index = 0;
    Mat3 spin = Mat3::Identity();
    double accumulated_angle = 0.0;  // radians, sum of |gamma_N| |B| ds / v
};

/// Spin matrix of one ray: the ordered product of per-voxel rotations
/// R(B/|B|, gamma_N |B| ds / v), later voxels multiplied on the left.
RaySpinResult propagate_ray(const VectorField2D& field, const Ray& ray, const PhysicsConstants& consts);

/// Classical RK4 integration of dS/ds = (gamma_N / v) H(B) S with B held
/// constant per voxel; each voxel chord is split into ceil(chord / step)
/// equal substeps. Reference solution for testing the product formula.
Mat3 ode_oracle(const VectorField2D& field, const Ray& ray, const PhysicsConstants& consts, double step);

struct ForwardScanResult {
    SinogramSet data;
    double max_accumulated_angle = 0.0;  // radians
};

/// Spin matrix of every ray of the scan, stored entrywise into nine sinograms.
ForwardScanResult forward_scan(const VectorField2D& field, const ScanGeometry& geom,
                               const PhysicsConstants& consts);

/// Gateaux derivative of the forward map at `field` in direction
/// `perturbation`: per ray (gamma_N / v) S(B) H(int S(s)^T dB ds). B is
/// constant inside a voxel, so each voxel's share of the integral is taken
/// in closed form; the result is the exact derivative of forward_scan.
SinogramSet derivative_dS(const VectorField2D& field, const VectorField2D& perturbation,
                          const ScanGeometry& geom, const PhysicsConstants& consts);

}  // namespace pnt
