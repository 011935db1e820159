#pragma once

#include <cstddef>
#include <vector>

#include "pnt/grid.hpp"
#include "pnt/sinogram.hpp"

namespace pnt {

struct ScalarImage {
    GridSpec spec;
    std::vector<double> values;  // row-major in (j, i)

    ScalarImage() = default;
    explicit ScalarImage(const GridSpec& s) : spec(s), values(s.size(), 0.0) {}

    double& at(int i, int j) { return values[spec.index(i, j)]; }
    double at(int i, int j) const { return values[spec.index(i, j)]; }
};

/// Line integrals of `img` along every scan ray, using traverse() chords.
Sinogram radon_transform(const ScalarImage& img, const ScanGeometry& geom);

/// DFT length used by fbp: the smallest power of two >= 2 * n_detectors.
std::size_t fbp_padded_length(int n_detectors);

/// Frequency response (length padded/2 + 1) of the apodized ramp: the DFT of
/// the band-limited ramp kernel times the Hamming window
/// 0.54 + 0.46 cos(pi w / w_nyquist). Includes the detector pitch factor.
std::vector<double> hamming_ramp_response(int n_detectors, double pitch);

/// Filtered backprojection onto the pixel centers of `out_spec`, whose center
/// is taken as the rotation axis. Uses linear interpolation in the detector
/// coordinate and pi / n_angles angular weight, which is exact for angle sets
/// uniformly covering a multiple of 180 degrees.
/// Throws std::invalid_argument when the sinogram does not match its geometry.
ScalarImage fbp(const Sinogram& sino, const GridSpec& out_spec);

}  // namespace pnt
