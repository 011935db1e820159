#pragma once

#include <array>
#include <cstdint>

#include "pnt/grid.hpp"
#include "pnt/sinogram.hpp"

namespace pnt {

enum class NoiseModel {
    absolute,  // sigma = level, in entry units
    relative,  // sigma = level * |entry|
};

/// Adds independent zero-mean Gaussian noise to every entry of every
/// sinogram. Deterministic for a given seed. Throws std::invalid_argument if
/// level < 0.
SinogramSet add_noise(const SinogramSet& data, double level, std::uint64_t seed,
                      NoiseModel model = NoiseModel::absolute);

/// Non-overlapping factor x factor block means over (angle, detector).
/// The new geometry has pitch and angle step multiplied by `factor`, and the
/// first angle moved to the center of the first block.
/// Throws std::invalid_argument unless factor divides both dimensions.
SinogramSet rebin(const SinogramSet& data, int factor);

/// Relative L2 errors (B1, B2, B3, |B|) of `estimate` against `truth` on the
/// same grid. Throws std::invalid_argument on grid mismatch.
std::array<double, 4> relative_error(const VectorField2D& estimate, const VectorField2D& truth);

}  // namespace pnt
