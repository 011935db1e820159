#include "pnt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnt {

GridSpec GridSpec::centered(int n, double fov) {
    GridSpec s;
    s.nx = n;
    s.ny = n;
    s.voxel_size = fov / n;
    s.origin = Vec2(-0.5 * fov, -0.5 * fov);
    s.validate();
    return s;
}

void GridSpec::validate() const {
    if (nx < 1 || ny < 1) throw std::invalid_argument("grid: nx and ny must be >= 1");
    if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
        throw std::invalid_argument("grid: voxel_size must be positive");
    }
    if (!origin.allFinite()) throw std::invalid_argument("grid: origin must be finite");
}

bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.nx == b.nx && a.ny == b.ny && a.voxel_size == b.voxel_size && a.origin == b.origin;
}

VectorField2D::VectorField2D(const GridSpec& s) : spec(s), values(s.size(), Vec3::Zero()) {}

double VectorField2D::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += v.squaredNorm();
    return std::sqrt(acc);
}

double VectorField2D::max_magnitude() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, v.norm());
    return m;
}

void VectorField2D::validate() const {
    spec.validate();
    if (values.size() != spec.size()) throw std::invalid_argument("field: value count does not match grid");
    for (const auto& v : values) {
        if (!v.allFinite()) throw std::invalid_argument("field: non-finite entry");
    }
}

namespace {

void require_same_grid(const VectorField2D& a, const VectorField2D& b) {
    if (!(a.spec == b.spec) || a.values.size() != b.values.size()) {
        throw std::invalid_argument("field: grid mismatch");
    }
}

}  // namespace

VectorField2D operator+(const VectorField2D& a, const VectorField2D& b) {
    require_same_grid(a, b);
    VectorField2D out(a.spec);
    for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] = a.values[k] + b.values[k];
    return out;
}

VectorField2D operator-(const VectorField2D& a, const VectorField2D& b) {
    require_same_grid(a, b);
    VectorField2D out(a.spec);
    for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] = a.values[k] - b.values[k];
    return out;
}

VectorField2D operator*(double alpha, const VectorField2D& f) {
    VectorField2D out(f.spec);
    for (std::size_t k = 0; k < f.values.size(); ++k) out.values[k] = alpha * f.values[k];
    return out;
}

VectorField2D resample_bilinear(const VectorField2D& field, const GridSpec& target) {
    const GridSpec& src = field.spec;
    const Vec2 lo = src.origin;
    const Vec2 hi = src.upper();
    VectorField2D out(target);
    for (int j = 0; j < target.ny; ++j) {
        for (int i = 0; i < target.nx; ++i) {
            const Vec2 p = target.voxel_center(i, j);
            if (p.x() < lo.x() || p.x() > hi.x() || p.y() < lo.y() || p.y() > hi.y()) continue;
            const double u = std::clamp((p.x() - lo.x()) / src.voxel_size - 0.5, 0.0, src.nx - 1.0);
            const double w = std::clamp((p.y() - lo.y()) / src.voxel_size - 0.5, 0.0, src.ny - 1.0);
            const int i0 = std::min(static_cast<int>(u), src.nx - 1);
            const int j0 = std::min(static_cast<int>(w), src.ny - 1);
            const int i1 = std::min(i0 + 1, src.nx - 1);
            const int j1 = std::min(j0 + 1, src.ny - 1);
            const double fu = u - i0;
            const double fw = w - j0;
            out.at(i, j) = (1 - fu) * (1 - fw) * field.at(i0, j0) + fu * (1 - fw) * field.at(i1, j0) +
                           (1 - fu) * fw * field.at(i0, j1) + fu * fw * field.at(i1, j1);
        }
    }
    return out;
}

void ScanGeometry::validate() const {
    if (n_angles < 1 || n_detectors < 1) throw std::invalid_argument("geometry: n_angles and n_detectors must be >= 1");
    if (!(detector_pitch > 0.0)) throw std::invalid_argument("geometry: detector_pitch must be positive");
    if (!(neutron_speed > 0.0)) throw std::invalid_argument("geometry: neutron_speed must be positive");
    if (!std::isfinite(angle_start) || !std::isfinite(angle_step)) {
        throw std::invalid_argument("geometry: angles must be finite");
    }
}

bool operator==(const ScanGeometry& a, const ScanGeometry& b) {
    return a.n_angles == b.n_angles && a.angle_start == b.angle_start && a.angle_step == b.angle_step &&
           a.n_detectors == b.n_detectors && a.detector_pitch == b.detector_pitch &&
           a.neutron_speed == b.neutron_speed;
}

bool clip_to_grid(const GridSpec& spec, const Ray& ray, double& t_in, double& t_out) {
    const Vec2 lo = spec.origin;
    const Vec2 hi = spec.upper();
    t_in = 0.0;
    t_out = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 2; ++axis) {
        const double o = ray.origin[axis];
        const double d = ray.direction[axis];
        if (d == 0.0) {
            // parallel to this slab: must lie strictly between its planes
            if (!(o > lo[axis] && o < hi[axis])) return false;
            continue;
        }
        double t1 = (lo[axis] - o) / d;
        double t2 = (hi[axis] - o) / d;
        if (t1 > t2) std::swap(t1, t2);
        t_in = std::max(t_in, t1);
        t_out = std::min(t_out, t2);
    }
    return t_out - t_in > kGrazingChord;
}

std::vector<TraversalSegment> traverse(const GridSpec& spec, const Ray& ray) {
    std::vector<TraversalSegment> segments;
    double t_in = 0.0;
    double t_out = 0.0;
    if (!clip_to_grid(spec, ray, t_in, t_out)) return segments;

    const double h = spec.voxel_size;
    const Vec2& o = ray.origin;
    const Vec2& dir = ray.direction;
    const int n[2] = {spec.nx, spec.ny};

    // Next grid-plane crossing per axis (Jacobs-style incremental alphas).
    int plane[2] = {0, 0};
    int step[2] = {0, 0};
    double t_next[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const Vec2 entry = o + t_in * dir;
    for (int axis = 0; axis < 2; ++axis) {
        const double d = dir[axis];
        if (d == 0.0) continue;
        const double u = (entry[axis] - spec.origin[axis]) / h;
        step[axis] = d > 0.0 ? 1 : -1;
        plane[axis] = d > 0.0 ? static_cast<int>(std::floor(u)) + 1 : static_cast<int>(std::ceil(u)) - 1;
        t_next[axis] = (spec.origin[axis] + plane[axis] * h - o[axis]) / d;
    }

    segments.reserve(static_cast<std::size_t>(spec.nx + spec.ny + 2));
    double t = t_in;
    while (t < t_out) {
        const double t_end = std::min({t_next[0], t_next[1], t_out});
        if (t_end - t > kGrazingChord) {
            const Vec2 mid = o + (0.5 * (t + t_end)) * dir;
            int idx[2];
            for (int axis = 0; axis < 2; ++axis) {
                const int k = static_cast<int>(std::floor((mid[axis] - spec.origin[axis]) / h));
                idx[axis] = std::clamp(k, 0, n[axis] - 1);
            }
            if (!segments.empty() && segments.back().i == idx[0] && segments.back().j == idx[1]) {
                segments.back().chord += t_end - t;
            } else {
                segments.push_back({idx[0], idx[1], t_end - t});
            }
        }
        if (t_end >= t_out) break;
        for (int axis = 0; axis < 2; ++axis) {
            if (t_next[axis] <= t_end) {
                plane[axis] += step[axis];
                t_next[axis] = (spec.origin[axis] + plane[axis] * h - o[axis]) / dir[axis];
            }
        }
        t = std::max(t, t_end);
    }
    return segments;
}

Ray scan_ray(const GridSpec& spec, const ScanGeometry& geom, int a, int d) {
    const double theta = geom.angle(a);
    const Vec2 dir(std::cos(theta), std::sin(theta));
    const Vec2 normal(-dir.y(), dir.x());
    const double reach = (spec.upper() - spec.origin).norm() + spec.voxel_size;
    const double s = geom.detector_offset(d);
    return Ray{spec.center() + s * normal - reach * dir, dir};
}

std::vector<ScanRay> rays_for_scan(const GridSpec& spec, const ScanGeometry& geom) {
    std::vector<ScanRay> rays;
    rays.reserve(geom.n_rays());
    for (int a = 0; a < geom.n_angles; ++a) {
        for (int d = 0; d < geom.n_detectors; ++d) {
            rays.push_back({a, d, scan_ray(spec, geom, a, d)});
        }
    }
    return rays;
}

}  // namespace pnt
