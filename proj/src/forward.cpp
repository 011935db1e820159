#include "pnt/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace pnt {

void PhysicsConstants::validate() const {
    if (!(neutron_speed > 0.0)) throw std::invalid_argument("physics: neutron_speed must be positive");
    if (!std::isfinite(gamma_n)) throw std::invalid_argument("physics: gamma_n must be finite");
}

namespace {

// Rotation over one voxel chord; identity for a null field.
Mat3 segment_rotation(const Vec3& b, double chord, double gamma_over_v, double* angle) {
    const double magnitude = b.norm();
    if (magnitude < kNullField) {
        if (angle) *angle = 0.0;
        return Mat3::Identity();
    }
    const double phi = gamma_over_v * magnitude * chord;
    if (angle) *angle = std::abs(phi);
    return rodrigues_unchecked(b / magnitude, phi);
}

// Integral of R(k, -c t) over t in [0, chord], where b = |b| k and
// c = gamma_over_v |b|: the exact average orientation of a voxel.
Mat3 segment_rotation_integral(const Vec3& b, double chord, double gamma_over_v) {
    const double magnitude = b.norm();
    if (magnitude < kNullField) return chord * Mat3::Identity();
    const Mat3 h = hodge_star(b / magnitude);
    const double x = gamma_over_v * magnitude * chord;
    // (1 - cos x) / x and 1 - sin(x) / x, by series where they cancel
    double one_minus_cos, one_minus_sinc;
    if (std::abs(x) < 1e-2) {
        const double x2 = x * x;
        one_minus_cos = x / 2 * (1 - x2 / 12 * (1 - x2 / 30));
        one_minus_sinc = x2 / 6 * (1 - x2 / 20 * (1 - x2 / 42));
    } else {
        one_minus_cos = (1 - std::cos(x)) / x;
        one_minus_sinc = 1 - std::sin(x) / x;
    }
    return chord * (Mat3::Identity() - one_minus_cos * h + one_minus_sinc * h * h);
}

}  // namespace

RaySpinResult propagate_ray(const VectorField2D& field, const Ray& ray, const PhysicsConstants& consts) {
    RaySpinResult out;
    const double g = consts.gamma_over_v();
    for (const auto& seg : traverse(field.spec, ray)) {
        double angle = 0.0;
        out.spin = segment_rotation(field.at(seg.i, seg.j), seg.chord, g, &angle) * out.spin;
        out.accumulated_angle += angle;
    }
    return out;
}

Mat3 ode_oracle(const VectorField2D& field, const Ray& ray, const PhysicsConstants& consts, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("ode_oracle: step must be positive");
    const double g = consts.gamma_over_v();
    Mat3 s = Mat3::Identity();
    for (const auto& seg : traverse(field.spec, ray)) {
        const Mat3 a = g * hodge_star(field.at(seg.i, seg.j));
        const int n = std::max(1, static_cast<int>(std::ceil(seg.chord / step)));
        const double h = seg.chord / n;
        for (int k = 0; k < n; ++k) {
            const Mat3 k1 = a * s;
            const Mat3 k2 = a * (s + 0.5 * h * k1);
            const Mat3 k3 = a * (s + 0.5 * h * k2);
            const Mat3 k4 = a * (s + h * k3);
            s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return s;
}

ForwardScanResult forward_scan(const VectorField2D& field, const ScanGeometry& geom,
                               const PhysicsConstants& consts) {
    field.validate();
    geom.validate();
    consts.validate();
    ForwardScanResult out;
    ScanGeometry g = geom;
    g.neutron_speed = consts.neutron_speed;
    out.data = SinogramSet(g);
    std::vector<double> angles(geom.n_rays(), 0.0);
    const auto n_rays = static_cast<std::ptrdiff_t>(geom.n_rays());
    detail::parallel_for(n_rays, [&](std::ptrdiff_t k) {
        const int a = static_cast<int>(k / geom.n_detectors);
        const int d = static_cast<int>(k % geom.n_detectors);
        const RaySpinResult r = propagate_ray(field, scan_ray(field.spec, geom, a, d), consts);
        out.data.set_matrix(static_cast<std::size_t>(k), r.spin);
        angles[static_cast<std::size_t>(k)] = r.accumulated_angle;
    });
    out.max_accumulated_angle = angles.empty() ? 0.0 : *std::max_element(angles.begin(), angles.end());
    return out;
}

SinogramSet derivative_dS(const VectorField2D& field, const VectorField2D& perturbation,
                          const ScanGeometry& geom, const PhysicsConstants& consts) {
    field.validate();
    perturbation.validate();
    if (!(field.spec == perturbation.spec)) throw std::invalid_argument("derivative_dS: grid mismatch");
    geom.validate();
    consts.validate();
    ScanGeometry g = geom;
    g.neutron_speed = consts.neutron_speed;
    SinogramSet out(g);
    const double gv = consts.gamma_over_v();
    detail::parallel_for(static_cast<std::ptrdiff_t>(geom.n_rays()), [&](std::ptrdiff_t k) {
        const int a = static_cast<int>(k / geom.n_detectors);
        const int d = static_cast<int>(k % geom.n_detectors);
        Mat3 s = Mat3::Identity();
        Vec3 integral = Vec3::Zero();
        for (const auto& seg : traverse(field.spec, scan_ray(field.spec, geom, a, d))) {
            const Vec3& b = field.at(seg.i, seg.j);
            integral += s.transpose() * (segment_rotation_integral(b, seg.chord, gv) * perturbation.at(seg.i, seg.j));
            s = segment_rotation(b, seg.chord, gv, nullptr) * s;
        }
        out.set_matrix(static_cast<std::size_t>(k), gv * s * hodge_star(integral));
    });
    return out;
}

}  // namespace pnt
