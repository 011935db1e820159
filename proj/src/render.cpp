#include "pnt/render.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <stdexcept>

#include <png.h>
#include <unistd.h>

namespace pnt {

namespace {

constexpr int kGap = 2;  // pixels between panels
constexpr std::uint8_t kGapShade = 255;

std::uint8_t to_byte(double t) {
    return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
}

// Copies a w x h panel given by `shade(col, row)` into the mosaic.
template <class Shade>
void blit(GrayImage& img, int x0, int y0, int w, int h, Shade shade) {
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            img.pixels[static_cast<std::size_t>(y0 + r) * img.width + (x0 + c)] = shade(c, r);
        }
    }
}

GrayImage blank(int width, int height) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, kGapShade);
    return img;
}

bool encode_png(FILE* fp, const GrayImage& image) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        return false;
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < image.height; ++r) {
        png_write_row(png, image.pixels.data() + static_cast<std::size_t>(r) * image.width);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace

GrayImage render_field(const VectorField2D& field) {
    field.validate();
    const int nx = field.spec.nx;
    const int ny = field.spec.ny;
    GrayImage img = blank(4 * nx + 3 * kGap, ny);
    for (int panel = 0; panel < 4; ++panel) {
        auto value = [&](int i, int j) {
            const Vec3& b = field.at(i, j);
            return panel < 3 ? b[panel] : b.norm();
        };
        double peak = 0.0;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) peak = std::max(peak, std::abs(value(i, j)));
        }
        const double inv = peak > 0.0 ? 1.0 / peak : 0.0;
        blit(img, panel * (nx + kGap), 0, nx, ny, [&](int c, int r) {
            const double v = value(c, ny - 1 - r) * inv;
            return to_byte(panel < 3 ? 0.5 + 0.5 * v : v);
        });
    }
    return img;
}

GrayImage render_sinogram_set(const SinogramSet& data) {
    data.validate();
    const int w = data.geometry.n_detectors;
    const int h = data.geometry.n_angles;
    GrayImage img = blank(3 * w + 2 * kGap, 3 * h + 2 * kGap);
    for (int q = 0; q < 9; ++q) {
        const auto& plane = data.planes[q];
        const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
        const double span = *hi - *lo;
        blit(img, (q % 3) * (w + kGap), (q / 3) * (h + kGap), w, h, [&](int c, int r) {
            const double v = plane[static_cast<std::size_t>(r) * w + c];
            return span > 0.0 ? to_byte((v - *lo) / span) : std::uint8_t{128};
        });
    }
    return img;
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw std::invalid_argument("png: image size does not match its pixels");
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + tmp.string() + " for writing");

    bool ok = encode_png(fp, image);
    ok = (std::fclose(fp) == 0) && ok;

    std::error_code ec;
    if (ok) std::filesystem::rename(tmp, path, ec);
    if (!ok || ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot write png " + path.string());
    }
}

}  // namespace pnt
