#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pnt/grid.hpp"

namespace pnt {

/// One scalar sinogram, angle-major: value(a, d) = values[a * n_detectors + d].
struct Sinogram {
    ScanGeometry geometry;
    std::vector<double> values;

    Sinogram() = default;
    explicit Sinogram(const ScanGeometry& g) : geometry(g), values(g.n_rays(), 0.0) {}

    double& at(int a, int d) { return values[static_cast<std::size_t>(a) * geometry.n_detectors + d]; }
    double at(int a, int d) const { return values[static_cast<std::size_t>(a) * geometry.n_detectors + d]; }
};

/// The nine entry sinograms of the per-ray spin matrices. Plane p holds
/// matrix entry (p / 3, p % 3), zero-based.
struct SinogramSet {
    ScanGeometry geometry;
    std::array<std::vector<double>, 9> planes;

    SinogramSet() = default;
    explicit SinogramSet(const ScanGeometry& g);

    /// Every ray carries the identity matrix (the data of a zero field).
    static SinogramSet identity(const ScanGeometry& g);

    static constexpr int plane_index(int row, int col) { return 3 * row + col; }

    /// Entry (row, col) as a standalone sinogram; zero-based indices.
    Sinogram entry(int row, int col) const;

    Mat3 matrix(std::size_t ray) const;
    void set_matrix(std::size_t ray, const Mat3& m);

    /// Throws std::invalid_argument when plane sizes do not match the geometry.
    void validate() const;
};

SinogramSet operator-(const SinogramSet& a, const SinogramSet& b);
SinogramSet operator+(const SinogramSet& a, const SinogramSet& b);
SinogramSet operator*(double alpha, const SinogramSet& s);

/// Sum over all rays and all nine entries of squared differences.
double residual(const SinogramSet& a, const SinogramSet& b);

}  // namespace pnt
