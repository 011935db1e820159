#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "pnt/grid.hpp"
#include "pnt/so3.hpp"

namespace testing {

constexpr double kPi = std::numbers::pi;

inline pnt::Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    pnt::Vec3 v;
    do {
        v = pnt::Vec3(n(rng), n(rng), n(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Field with every voxel drawn uniformly from [-scale, scale]^3.
inline pnt::VectorField2D random_field(const pnt::GridSpec& spec, double scale, std::mt19937_64& rng) {
    pnt::VectorField2D f(spec);
    for (auto& v : f.values) v = pnt::Vec3(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
    return f;
}

/// Ray that starts outside `spec` and heads somewhere across it.
inline pnt::Ray random_ray(const pnt::GridSpec& spec, std::mt19937_64& rng) {
    const pnt::Vec2 c = spec.center();
    const double reach = 0.5 * spec.voxel_size * std::hypot(spec.nx, spec.ny);
    const double t = uniform(rng, 0.0, 2.0 * kPi);
    const pnt::Vec2 dir(std::cos(t), std::sin(t));
    const pnt::Vec2 normal(-dir.y(), dir.x());
    pnt::Ray r;
    r.direction = dir;
    r.origin = c + uniform(rng, -1.1 * reach, 1.1 * reach) * normal - 2.0 * reach * dir;
    return r;
}

}  // namespace testing
