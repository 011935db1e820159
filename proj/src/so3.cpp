#include "pnt/so3.hpp"

#include <cmath>

namespace pnt {

Mat3 hodge_star(const Vec3& b) {
    Mat3 h;
    h << 0.0, b.z(), -b.y(),
        -b.z(), 0.0, b.x(),
        b.y(), -b.x(), 0.0;
    return h;
}

Mat3 rodrigues_unchecked(const Vec3& k, double phi) {
    const Mat3 h = hodge_star(k);
    return Mat3::Identity() + std::sin(phi) * h + (1.0 - std::cos(phi)) * (h * h);
}

Mat3 rodrigues(const Vec3& k, double phi) {
    if (!(std::abs(k.norm() - 1.0) <= 1e-12)) {
        throw InvalidAxis("rodrigues: rotation axis must be a unit vector");
    }
    return rodrigues_unchecked(k, phi);
}

EigenStructure eig_structure(const Vec3& b, double gamma_over_v) {
    EigenStructure out;
    const double norm = b.norm();
    if (norm == 0.0) {
        out.degenerate = true;
        return out;
    }
    const double w = gamma_over_v * norm;
    out.lambda = {std::complex<double>(0.0, 0.0), std::complex<double>(0.0, w),
                  std::complex<double>(0.0, -w)};
    return out;
}

double orthogonality_defect(const Mat3& m) {
    return (m.transpose() * m - Mat3::Identity()).norm();
}

bool is_spin_matrix(const Mat3& m, double tol) {
    return orthogonality_defect(m) < tol && std::abs(m.determinant() - 1.0) < tol;
}

}  // namespace pnt
