#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace pnt {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Thrown when a rotation axis is not a unit vector.
class InvalidAxis : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tolerance used to accept a matrix as an element of SO(3).
inline constexpr double kSpinMatrixTolerance = 1e-10;

/// Skew-symmetric matrix H(B) with H(B) * sigma == sigma x B.
Mat3 hodge_star(const Vec3& b);

/// R(k, phi) = I + sin(phi) H(k) + (1 - cos(phi)) H(k)^2 = exp(phi H(k)).
///
/// Since H(k) v == v x k, this is the right-handed rotation about k by -phi,
/// so (1,0,0) maps to (0,-1,0) for k = (0,0,1), phi = pi/2. With the signed
/// Larmor angle gamma_N |B| ds / v it is the exact solution of
/// d(sigma)/ds = (gamma_N / v) H(B) sigma over a constant-field segment.
/// Throws InvalidAxis if |k| differs from 1 by more than 1e-12.
Mat3 rodrigues(const Vec3& k, double phi);

/// Same formula without the axis check. Callers guarantee |k| == 1.
Mat3 rodrigues_unchecked(const Vec3& k, double phi);

struct EigenStructure {
    std::array<std::complex<double>, 3> lambda{};
    bool degenerate = false;  // B == 0, all eigenvalues vanish
};

/// Eigenvalues of gamma_over_v * H(B): (0, +i g|B|, -i g|B|).
EigenStructure eig_structure(const Vec3& b, double gamma_over_v);

/// Frobenius norm of M^T M - I.
double orthogonality_defect(const Mat3& m);

/// True when M is orthogonal with determinant +1 within `tol`.
bool is_spin_matrix(const Mat3& m, double tol = kSpinMatrixTolerance);

}  // namespace pnt
