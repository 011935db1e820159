#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pnt/grid.hpp"
#include "pnt/sinogram.hpp"

namespace pnt {

/// 8-bit grayscale image, row 0 at the top.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

/// B1, B2, B3 and |B| side by side. Signed components map zero to mid-gray
/// and their own largest magnitude to black/white; |B| maps 0..max to
/// black..white. x2 increases upwards.
GrayImage render_field(const VectorField2D& field);

/// The nine planes in a 3 x 3 mosaic (row-major by matrix entry), each
/// stretched over its own range; detectors run left to right, angles down.
GrayImage render_sinogram_set(const SinogramSet& data);

void write_png(const std::filesystem::path& path, const GrayImage& image);

}  // namespace pnt
