#include <doctest.h>

#include "pnt/forward.hpp"
#include "pnt/phantom.hpp"
#include "pnt/radon.hpp"
#include "support.hpp"

using namespace pnt;
using testing::kPi;

namespace {

const PhysicsConstants kConsts{};

GridSpec small_grid() { return GridSpec::centered(8, 0.008); }

ScanGeometry small_scan(const GridSpec& g, int n_angles = 12, int n_det = 12) {
    ScanGeometry geom;
    geom.n_angles = n_angles;
    geom.angle_step = kPi / n_angles;
    geom.n_detectors = n_det;
    geom.detector_pitch = g.voxel_size * 1.2;
    return geom;
}

double chord_length(const GridSpec& g, const Ray& r) {
    double a = 0, b = 0;
    return clip_to_grid(g, r, a, b) ? b - a : 0.0;
}

VectorField2D solenoid_slice(int n, double peak) {
    const GridSpec g = GridSpec::centered(n, 0.04);
    return normalize_peak(sample_field(solenoid_wire(SolenoidSpec{}), g, 0.0), peak);
}

}  // namespace

TEST_CASE("zero field leaves the spin untouched") {
    const GridSpec g = small_grid();
    const VectorField2D f(g);
    std::mt19937_64 rng(1);
    const Ray r = testing::random_ray(g, rng);
    const RaySpinResult res = propagate_ray(f, r, kConsts);
    CHECK(res.spin == Mat3::Identity());
    CHECK(res.accumulated_angle == 0.0);
    CHECK((ode_oracle(f, r, kConsts, 1e-4) - Mat3::Identity()).norm() == 0.0);

    const ForwardScanResult scan = forward_scan(f, small_scan(g), kConsts);
    CHECK(scan.max_accumulated_angle == 0.0);
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
            for (double v : scan.data.entry(row, col).values) CHECK(v == (row == col ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("uniform field matches the closed-form rotation") {
    const GridSpec g = small_grid();
    VectorField2D f(g);
    const double b3 = 3e-4;
    for (auto& v : f.values) v = Vec3(0, 0, b3);
    std::mt19937_64 rng(2);
    for (int n = 0; n < 20; ++n) {
        const Ray r = testing::random_ray(g, rng);
        const double len = chord_length(g, r);
        const RaySpinResult res = propagate_ray(f, r, kConsts);
        const Mat3 expected = rodrigues(Vec3::UnitZ(), kConsts.gamma_over_v() * b3 * len);
        CHECK((res.spin - expected).norm() < 1e-12);
        CHECK(res.accumulated_angle == doctest::Approx(std::abs(kConsts.gamma_over_v()) * b3 * len).epsilon(1e-12));
        // the spin component along B is conserved
        CHECK((res.spin * Vec3::UnitZ() - Vec3::UnitZ()).norm() < 1e-14);
    }
}

TEST_CASE("product order: later voxels multiply on the left") {
    GridSpec g;
    g.nx = 2;
    g.ny = 1;
    g.voxel_size = 1e-3;
    VectorField2D f(g);
    f.at(0, 0) = Vec3(2e-3, 0, 0);
    f.at(1, 0) = Vec3(0, 1e-3, 1e-3);
    const Ray r{Vec2(-1e-3, 0.5e-3), Vec2(1, 0)};
    auto rot = [&](const Vec3& b) { return rodrigues(b.normalized(), kConsts.gamma_over_v() * b.norm() * 1e-3); };
    const Mat3 expected = rot(f.at(1, 0)) * rot(f.at(0, 0));
    CHECK((propagate_ray(f, r, kConsts).spin - expected).norm() < 1e-14);
    // two non-parallel voxels agree with the ODE integration
    CHECK((ode_oracle(f, r, kConsts, 1e-6) - expected).norm() < 1e-8);
}

TEST_CASE("RK4 oracle converges at fourth order") {
    const GridSpec g = small_grid();
    VectorField2D f(g);
    for (auto& v : f.values) v = Vec3(1e-3, -2e-3, 5e-4);
    // along a row every chord is one voxel, so halving the step halves every substep
    const Ray r{Vec2(-0.01, 0.0013), Vec2(1, 0)};
    const double len = chord_length(g, r);
    const Vec3 b = f.values[0];
    const Mat3 exact = rodrigues(b.normalized(), kConsts.gamma_over_v() * b.norm() * len);
    const double e1 = (ode_oracle(f, r, kConsts, g.voxel_size / 4) - exact).norm();
    const double e2 = (ode_oracle(f, r, kConsts, g.voxel_size / 8) - exact).norm();
    CHECK(e1 > 1e-9);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
    CHECK_THROWS_AS(ode_oracle(f, r, kConsts, 0.0), std::invalid_argument);
}

TEST_CASE("product formula agrees with RK4 on the solenoid slice") {
    const VectorField2D f = solenoid_slice(60, 50 * 5.8e-6);
    std::mt19937_64 rng(3);
    for (int n = 0; n < 10; ++n) {
        const Ray r = testing::random_ray(f.spec, rng);
        const Mat3 product = propagate_ray(f, r, kConsts).spin;
        const Mat3 ode = ode_oracle(f, r, kConsts, f.spec.voxel_size / 100);
        CHECK((product - ode).norm() < 1e-8);
    }
}

TEST_CASE("spin matrices stay in SO(3) and spin length is conserved") {
    const GridSpec g = GridSpec::centered(20, 0.02);
    std::mt19937_64 rng(4);
    const VectorField2D f = testing::random_field(g, 5e-3, rng);  // many full turns per ray
    for (int n = 0; n < 500; ++n) {
        const RaySpinResult res = propagate_ray(f, testing::random_ray(g, rng), kConsts);
        CHECK(orthogonality_defect(res.spin) < 1e-10);
        CHECK(std::abs(res.spin.determinant() - 1.0) < 1e-10);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(res.spin.col(c).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("forward scan layout") {
    const GridSpec g = small_grid();
    std::mt19937_64 rng(5);
    const VectorField2D f = testing::random_field(g, 1e-3, rng);
    const ScanGeometry geom = small_scan(g, 5, 7);
    const ForwardScanResult scan = forward_scan(f, geom, kConsts);
    CHECK(scan.data.geometry == geom);
    double max_angle = 0.0;
    for (int a = 0; a < geom.n_angles; ++a) {
        for (int d = 0; d < geom.n_detectors; ++d) {
            const RaySpinResult res = propagate_ray(f, scan_ray(g, geom, a, d), kConsts);
            CHECK((scan.data.matrix(static_cast<std::size_t>(a) * geom.n_detectors + d) - res.spin).norm() == 0.0);
            max_angle = std::max(max_angle, res.accumulated_angle);
        }
    }
    CHECK(scan.max_accumulated_angle == max_angle);
}

TEST_CASE("derivative at zero is the scaled ray transform") {
    const GridSpec g = small_grid();
    const ScanGeometry geom = small_scan(g);
    std::mt19937_64 rng(6);
    const VectorField2D db = testing::random_field(g, 1e-4, rng);
    const SinogramSet d = derivative_dS(VectorField2D(g), db, geom, kConsts);

    ScalarImage comp[3] = {ScalarImage(g), ScalarImage(g), ScalarImage(g)};
    for (std::size_t k = 0; k < db.values.size(); ++k) {
        for (int c = 0; c < 3; ++c) comp[c].values[k] = db.values[k][c];
    }
    const double gv = kConsts.gamma_over_v();
    // entry (1,2) one-based carries B3, (2,3) carries B1, (3,1) carries B2
    const Sinogram x3 = radon_transform(comp[2], geom);
    const Sinogram x1 = radon_transform(comp[0], geom);
    const Sinogram x2 = radon_transform(comp[1], geom);
    for (std::size_t k = 0; k < x3.values.size(); ++k) {
        CHECK(d.entry(0, 1).values[k] == doctest::Approx(gv * x3.values[k]).epsilon(1e-12).scale(1e-20));
        CHECK(d.entry(1, 2).values[k] == doctest::Approx(gv * x1.values[k]).epsilon(1e-12).scale(1e-20));
        CHECK(d.entry(2, 0).values[k] == doctest::Approx(gv * x2.values[k]).epsilon(1e-12).scale(1e-20));
        CHECK(d.entry(1, 0).values[k] == doctest::Approx(-gv * x3.values[k]).epsilon(1e-12).scale(1e-20));
        for (int c = 0; c < 3; ++c) CHECK(d.entry(c, c).values[k] == 0.0);
    }

    const SinogramSet zero = derivative_dS(db, VectorField2D(g), geom, kConsts);
    for (const auto& plane : zero.planes) {
        for (double v : plane) CHECK(v == 0.0);
    }
}

TEST_CASE("derivative matches finite differences") {
    const GridSpec g = GridSpec::centered(10, 0.01);
    const ScanGeometry geom = small_scan(g, 8, 14);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        const VectorField2D b = testing::random_field(g, 4e-3, rng);  // strongly nonlinear regime
        const VectorField2D db = testing::random_field(g, 4e-3, rng);
        const SinogramSet exact = derivative_dS(b, db, geom, kConsts);
        double norm = 0.0;
        for (const auto& p : exact.planes) {
            for (double v : p) norm += v * v;
        }
        norm = std::sqrt(norm);
        const SinogramSet base = forward_scan(b, geom, kConsts).data;

        double previous = 0.0;
        for (double eps : {1e-3, 1e-4, 1e-5}) {
            const SinogramSet plus = forward_scan(b + eps * db, geom, kConsts).data;
            const SinogramSet minus = forward_scan(b - eps * db, geom, kConsts).data;
            const double one_sided = std::sqrt(residual((1.0 / eps) * (plus - base), exact)) / norm;
            const double central = std::sqrt(residual((0.5 / eps) * (plus - minus), exact)) / norm;
            if (eps <= 1e-4) CHECK(central < 1e-4);
            if (previous > 0.0) CHECK(previous / one_sided == doctest::Approx(10.0).epsilon(0.2));
            previous = one_sided;
        }
    }
}

TEST_CASE("superposition fails for strong fields") {
    const VectorField2D weak = solenoid_slice(45, 5.8e-6);
    const GridSpec& g = weak.spec;
    ScanGeometry geom = small_scan(g, 30, 60);
    geom.detector_pitch = 1.5 * g.voxel_size;
    auto deviation = [&](double scale) {
        // distance of S(scale B) - I from scale (S(B) - I), relative to the latter
        const VectorField2D f = scale * weak;
        const SinogramSet id = SinogramSet::identity(geom);
        const SinogramSet linear = scale * (forward_scan(weak, geom, kConsts).data - id);
        const SinogramSet actual = forward_scan(f, geom, kConsts).data - id;
        return std::sqrt(residual(actual, linear) / residual(linear, SinogramSet(geom)));
    };
    const double d1 = deviation(1.0), d10 = deviation(10.0), d200 = deviation(200.0);
    CHECK(d1 == 0.0);
    CHECK(d10 > 1e-3);
    CHECK(d200 > d10);
    CHECK(d200 > 0.5);

    // S(B1 + B2) differs from the sum of the individual deviations from I
    VectorField2D left = 200.0 * weak, right = 200.0 * weak;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) (i < g.nx / 2 ? right : left).at(i, j) = Vec3::Zero();
    }
    const SinogramSet id = SinogramSet::identity(geom);
    const SinogramSet joint = forward_scan(left + right, geom, kConsts).data - id;
    const SinogramSet split =
        (forward_scan(left, geom, kConsts).data - id) + (forward_scan(right, geom, kConsts).data - id);
    CHECK(std::sqrt(residual(joint, split) / residual(joint, SinogramSet(geom))) > 0.1);
}

TEST_CASE("physics constants validation") {
    PhysicsConstants c;
    CHECK(c.gamma_n == -1.8324e8);
    CHECK(c.gamma_over_v() == doctest::Approx(-1.8324e8 / 790.0));
    c.neutron_speed = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
