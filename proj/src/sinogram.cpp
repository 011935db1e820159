#include "pnt/sinogram.hpp"

#include <stdexcept>

namespace pnt {

SinogramSet::SinogramSet(const ScanGeometry& g) : geometry(g) {
    for (auto& p : planes) p.assign(g.n_rays(), 0.0);
}

SinogramSet SinogramSet::identity(const ScanGeometry& g) {
    SinogramSet s(g);
    for (int k = 0; k < 3; ++k) s.planes[plane_index(k, k)].assign(g.n_rays(), 1.0);
    return s;
}

Sinogram SinogramSet::entry(int row, int col) const {
    Sinogram s;
    s.geometry = geometry;
    s.values = planes[plane_index(row, col)];
    return s;
}

Mat3 SinogramSet::matrix(std::size_t ray) const {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = planes[plane_index(r, c)][ray];
    return m;
}

void SinogramSet::set_matrix(std::size_t ray, const Mat3& m) {
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) planes[plane_index(r, c)][ray] = m(r, c);
}

void SinogramSet::validate() const {
    geometry.validate();
    for (const auto& p : planes) {
        if (p.size() != geometry.n_rays()) throw std::invalid_argument("sinogram set: plane size does not match geometry");
    }
}

namespace {

void require_same_shape(const SinogramSet& a, const SinogramSet& b) {
    if (a.geometry.n_angles != b.geometry.n_angles || a.geometry.n_detectors != b.geometry.n_detectors) {
        throw std::invalid_argument("sinogram set: shape mismatch");
    }
    for (int p = 0; p < 9; ++p) {
        if (a.planes[p].size() != b.planes[p].size()) throw std::invalid_argument("sinogram set: shape mismatch");
    }
}

template <typename Op>
SinogramSet combine(const SinogramSet& a, const SinogramSet& b, Op op) {
    require_same_shape(a, b);
    SinogramSet out(a.geometry);
    for (int p = 0; p < 9; ++p) {
        for (std::size_t k = 0; k < a.planes[p].size(); ++k) out.planes[p][k] = op(a.planes[p][k], b.planes[p][k]);
    }
    return out;
}

}  // namespace

SinogramSet operator-(const SinogramSet& a, const SinogramSet& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}

SinogramSet operator+(const SinogramSet& a, const SinogramSet& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}

SinogramSet operator*(double alpha, const SinogramSet& s) {
    SinogramSet out = s;
    for (auto& p : out.planes)
        for (auto& v : p) v *= alpha;
    return out;
}

double residual(const SinogramSet& a, const SinogramSet& b) {
    require_same_shape(a, b);
    double acc = 0.0;
    for (int p = 0; p < 9; ++p) {
        for (std::size_t k = 0; k < a.planes[p].size(); ++k) {
            const double d = a.planes[p][k] - b.planes[p][k];
            acc += d * d;
        }
    }
    return acc;
}

}  // namespace pnt
