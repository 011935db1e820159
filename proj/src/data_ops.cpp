#include "pnt/data_ops.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pnt {

SinogramSet add_noise(const SinogramSet& data, double level, std::uint64_t seed, NoiseModel model) {
    if (!(level >= 0.0)) throw std::invalid_argument("add_noise: level must be >= 0");
    data.validate();
    SinogramSet out = data;
    if (level == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& plane : out.planes) {
        for (auto& v : plane) {
            const double sigma = model == NoiseModel::absolute ? level : level * std::abs(v);
            v += sigma * gauss(rng);
        }
    }
    return out;
}

SinogramSet rebin(const SinogramSet& data, int factor) {
    data.validate();
    const ScanGeometry& g = data.geometry;
    if (factor < 1 || g.n_angles % factor != 0 || g.n_detectors % factor != 0) {
        throw std::invalid_argument("rebin: factor must divide both n_angles and n_detectors");
    }
    ScanGeometry r = g;
    r.n_angles = g.n_angles / factor;
    r.n_detectors = g.n_detectors / factor;
    r.detector_pitch = g.detector_pitch * factor;
    r.angle_step = g.angle_step * factor;
    r.angle_start = g.angle_start + 0.5 * (factor - 1) * g.angle_step;

    SinogramSet out(r);
    const double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int p = 0; p < 9; ++p) {
        const auto& src = data.planes[p];
        auto& dst = out.planes[p];
        for (int a = 0; a < r.n_angles; ++a) {
            for (int d = 0; d < r.n_detectors; ++d) {
                double sum = 0.0;
                for (int da = 0; da < factor; ++da)
                    for (int dd = 0; dd < factor; ++dd)
                        sum += src[static_cast<std::size_t>(a * factor + da) * g.n_detectors + d * factor + dd];
                dst[static_cast<std::size_t>(a) * r.n_detectors + d] = sum * inv;
            }
        }
    }
    return out;
}

std::array<double, 4> relative_error(const VectorField2D& estimate, const VectorField2D& truth) {
    if (!(estimate.spec == truth.spec) || estimate.values.size() != truth.values.size()) {
        throw std::invalid_argument("relative_error: grids differ");
    }
    std::array<double, 4> num{};
    std::array<double, 4> den{};
    for (std::size_t k = 0; k < truth.values.size(); ++k) {
        const Vec3& e = estimate.values[k];
        const Vec3& t = truth.values[k];
        for (int c = 0; c < 3; ++c) {
            num[c] += (e[c] - t[c]) * (e[c] - t[c]);
            den[c] += t[c] * t[c];
        }
        const double dm = e.norm() - t.norm();
        num[3] += dm * dm;
        den[3] += t.squaredNorm();
    }
    std::array<double, 4> out{};
    for (int c = 0; c < 4; ++c) {
        if (den[c] > 0.0) {
            out[c] = std::sqrt(num[c] / den[c]);
        } else {
            out[c] = num[c] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

}  // namespace pnt
