#include "pnt/radon.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "parallel.hpp"

namespace pnt {

Sinogram radon_transform(const ScalarImage& img, const ScanGeometry& geom) {
    img.spec.validate();
    geom.validate();
    if (img.values.size() != img.spec.size()) throw std::invalid_argument("radon: image size does not match grid");
    Sinogram out(geom);
    detail::parallel_for(static_cast<std::ptrdiff_t>(geom.n_rays()), [&](std::ptrdiff_t k) {
        const int a = static_cast<int>(k / geom.n_detectors);
        const int d = static_cast<int>(k % geom.n_detectors);
        double sum = 0.0;
        for (const auto& seg : traverse(img.spec, scan_ray(img.spec, geom, a, d))) {
            sum += seg.chord * img.at(seg.i, seg.j);
        }
        out.values[static_cast<std::size_t>(k)] = sum;
    });
    return out;
}

std::size_t fbp_padded_length(int n_detectors) {
    std::size_t n = 1;
    while (n < 2 * static_cast<std::size_t>(n_detectors)) n <<= 1;
    return n;
}

namespace {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
    void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

RealBuffer real_buffer(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer complex_buffer(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

}  // namespace

std::vector<double> hamming_ramp_response(int n_detectors, double pitch) {
    const std::size_t n = fbp_padded_length(n_detectors);
    const std::size_t n_freq = n / 2 + 1;
    auto kernel = real_buffer(n);
    auto spectrum = complex_buffer(n_freq);
    Plan plan(fftw_plan_dft_r2c_1d(static_cast<int>(n), kernel.get(), spectrum.get(), FFTW_ESTIMATE));

    // Band-limited ramp sampled at the detector pitch:
    // h(0) = 1/(4 tau^2), h(k odd) = -1/(k pi tau)^2, h(k even) = 0.
    const double tau = pitch;
    for (std::size_t k = 0; k < n; ++k) {
        const long m = k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        double h = 0.0;
        if (m == 0) {
            h = 1.0 / (4.0 * tau * tau);
        } else if (m % 2 != 0) {
            const double x = std::numbers::pi * static_cast<double>(m) * tau;
            h = -1.0 / (x * x);
        }
        kernel[k] = h;
    }
    fftw_execute(plan.get());

    std::vector<double> response(n_freq);
    for (std::size_t f = 0; f < n_freq; ++f) {
        const double window = 0.54 + 0.46 * std::cos(std::numbers::pi * static_cast<double>(f) / (n_freq - 1));
        // kernel is even, so its DFT is real; tau converts the sum into an integral
        response[f] = tau * spectrum[f][0] * window;
    }
    return response;
}

ScalarImage fbp(const Sinogram& sino, const GridSpec& out_spec) {
    const ScanGeometry& geom = sino.geometry;
    geom.validate();
    out_spec.validate();
    if (sino.values.size() != geom.n_rays()) throw std::invalid_argument("fbp: sinogram shape does not match geometry");

    const int n_det = geom.n_detectors;
    const std::size_t n = fbp_padded_length(n_det);
    const std::size_t n_freq = n / 2 + 1;
    const std::vector<double> response = hamming_ramp_response(n_det, geom.detector_pitch);

    auto line = real_buffer(n);
    auto spectrum = complex_buffer(n_freq);
    Plan forward(fftw_plan_dft_r2c_1d(static_cast<int>(n), line.get(), spectrum.get(), FFTW_ESTIMATE));
    Plan inverse(fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.get(), line.get(), FFTW_ESTIMATE));

    std::vector<double> filtered(geom.n_rays());
    for (int a = 0; a < geom.n_angles; ++a) {
        for (std::size_t k = 0; k < n; ++k) line[k] = k < static_cast<std::size_t>(n_det) ? sino.at(a, static_cast<int>(k)) : 0.0;
        fftw_execute(forward.get());
        for (std::size_t f = 0; f < n_freq; ++f) {
            spectrum[f][0] *= response[f];
            spectrum[f][1] *= response[f];
        }
        fftw_execute(inverse.get());
        for (int d = 0; d < n_det; ++d) filtered[static_cast<std::size_t>(a) * n_det + d] = line[d] / static_cast<double>(n);
    }

    std::vector<double> cos_a(geom.n_angles);
    std::vector<double> sin_a(geom.n_angles);
    for (int a = 0; a < geom.n_angles; ++a) {
        cos_a[a] = std::cos(geom.angle(a));
        sin_a[a] = std::sin(geom.angle(a));
    }

    ScalarImage out(out_spec);
    const Vec2 axis = out_spec.center();
    const double half = 0.5 * (n_det - 1);
    const double weight = std::numbers::pi / geom.n_angles;
    detail::parallel_for(static_cast<std::ptrdiff_t>(out_spec.size()), [&](std::ptrdiff_t k) {
        const int i = static_cast<int>(k % out_spec.nx);
        const int j = static_cast<int>(k / out_spec.nx);
        const Vec2 p = out_spec.voxel_center(i, j) - axis;
        double sum = 0.0;
        for (int a = 0; a < geom.n_angles; ++a) {
            const double s = -p.x() * sin_a[a] + p.y() * cos_a[a];
            const double u = s / geom.detector_pitch + half;
            const int d0 = static_cast<int>(std::floor(u));
            const double frac = u - d0;
            const double* row = &filtered[static_cast<std::size_t>(a) * n_det];
            if (d0 >= 0 && d0 < n_det) sum += (1.0 - frac) * row[d0];
            if (d0 + 1 >= 0 && d0 + 1 < n_det) sum += frac * row[d0 + 1];
        }
        out.values[static_cast<std::size_t>(k)] = weight * sum;
    });
    return out;
}

}  // namespace pnt
