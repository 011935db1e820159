#include <doctest.h>

#include "pnt/data_ops.hpp"
#include "pnt/phantom.hpp"
#include "pnt/recon.hpp"
#include "support.hpp"

using namespace pnt;
using testing::kPi;

namespace {

const PhysicsConstants kConsts{};

// Smooth off-center blob with all three components, zero at the border.
VectorField2D blob(const GridSpec& g, double peak) {
    VectorField2D f(g);
    const double w = 0.18 * g.nx * g.voxel_size;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 p = g.voxel_center(i, j) - g.center();
            const double e1 = std::exp(-(p - Vec2(0.15, 0.1) * g.nx * g.voxel_size).squaredNorm() / (w * w));
            const double e2 = std::exp(-(p + Vec2(0.1, 0.12) * g.nx * g.voxel_size).squaredNorm() / (w * w));
            f.at(i, j) = Vec3(e1 - 0.5 * e2, 0.8 * e2, 0.6 * e1 + 0.4 * e2);
        }
    }
    return normalize_peak(f, peak);
}

ScanGeometry scan_for(const GridSpec& g, int n_angles) {
    ScanGeometry geom;
    geom.n_angles = n_angles;
    geom.angle_step = 2 * kPi / n_angles;
    geom.n_detectors = static_cast<int>(std::ceil(g.nx * std::sqrt(2.0))) + 2;
    geom.detector_pitch = g.voxel_size;
    return geom;
}

double field_error(const VectorField2D& est, const VectorField2D& truth) { return (est - truth).norm() / truth.norm(); }

}  // namespace

TEST_CASE("identity data reconstructs to zero") {
    const GridSpec g = GridSpec::centered(16, 0.04);
    const SinogramSet id = SinogramSet::identity(scan_for(g, 24));
    CHECK(linear_reconstruct(id, kConsts, g).norm() == 0.0);
    const ReconReport r = mnkm_reconstruct(id, kConsts, g, MnkmConfig{});
    CHECK(r.field_estimate.norm() == 0.0);
    CHECK(r.converged);
    CHECK(r.iterations.size() == 1u);
}

TEST_CASE("linear reconstruction recovers a weak field") {
    const GridSpec g = GridSpec::centered(40, 0.04);
    const VectorField2D truth = blob(g, 1e-6);
    const SinogramSet data = forward_scan(truth, scan_for(g, 90), kConsts).data;
    const VectorField2D est = linear_reconstruct(data, kConsts, g);
    const double err = field_error(est, truth);
    MESSAGE("weak-field linear error " << err);
    CHECK(err < 0.05);
    for (double e : relative_error(est, truth)) CHECK(e < 0.08);
}

TEST_CASE("linear reconstruction is linear in the off-diagonal data") {
    const GridSpec g = GridSpec::centered(20, 0.04);
    const ScanGeometry geom = scan_for(g, 36);
    const SinogramSet id = SinogramSet::identity(geom);
    const SinogramSet d = forward_scan(blob(g, 3e-5), geom, kConsts).data - id;
    const VectorField2D one = linear_reconstruct(id + d, kConsts, g);
    const VectorField2D two = linear_reconstruct(id + 2.0 * d, kConsts, g);
    CHECK((two - 2.0 * one).norm() < 1e-12 * one.norm());
    // diagonal entries do not contribute
    SinogramSet diag = id + d;
    for (int c = 0; c < 3; ++c) {
        for (auto& v : diag.planes[SinogramSet::plane_index(c, c)]) v += 0.3;
    }
    CHECK((linear_reconstruct(diag, kConsts, g) - one).norm() == 0.0);
}

TEST_CASE("first unit step equals the linear reconstruction") {
    const GridSpec g = GridSpec::centered(20, 0.04);
    const SinogramSet data = forward_scan(blob(g, 5e-5), scan_for(g, 36), kConsts).data;
    MnkmConfig cfg;
    cfg.fixed_alpha = 1.0;
    cfg.max_iters = 1;
    const ReconReport r = mnkm_reconstruct(data, kConsts, g, cfg);
    const VectorField2D lin = linear_reconstruct(data, kConsts, g);
    CHECK((r.field_estimate - lin).norm() <= 1e-12 * lin.norm());
    CHECK((r.first_update - lin).norm() <= 1e-12 * lin.norm());
    REQUIRE(r.iterations.size() == 1u);
    CHECK(r.iterations[0].alpha == 1.0);
}

TEST_CASE("noiseless moderate field: the iteration reduces the residual and the error") {
    const GridSpec g = GridSpec::centered(32, 0.04);
    const VectorField2D truth = blob(g, 2e-4);
    const SinogramSet data = forward_scan(truth, scan_for(g, 72), kConsts).data;
    MnkmConfig cfg;
    cfg.max_iters = 30;
    const ReconReport r = mnkm_reconstruct(data, kConsts, g, cfg, &truth);
    REQUIRE(!r.iterations.empty());
    for (const auto& it : r.iterations) {
        if (it.accepted) {
            CHECK(it.residual < it.residual_before);
        } else {
            CHECK(it.residual >= it.residual_before);
            CHECK(it.update_norm == 0.0);
        }
    }
    double last = r.iterations.front().residual_before;
    for (const auto& it : r.iterations) {
        if (it.accepted) last = it.residual;
    }
    const double initial = r.iterations.front().residual_before;
    MESSAGE("residual " << initial << " -> " << last << " in " << r.iterations.size() << " iterations");
    CHECK(last < 0.1 * initial);

    const double lin_err = field_error(r.first_update, truth);
    const double mnkm_err = field_error(r.field_estimate, truth);
    MESSAGE("linear error " << lin_err << " mnkm error " << mnkm_err);
    CHECK(mnkm_err < lin_err);
    REQUIRE(r.per_component_relative_error.has_value());
    CHECK((*r.per_component_relative_error)[3] < 1.0);
}

TEST_CASE("weak noiseless data converge") {
    const GridSpec g = GridSpec::centered(24, 0.04);
    const VectorField2D truth = blob(g, 1e-5);
    const SinogramSet data = forward_scan(truth, scan_for(g, 48), kConsts).data;
    MnkmConfig cfg;
    cfg.tol = 1e-3;
    cfg.max_iters = 40;
    const ReconReport r = mnkm_reconstruct(data, kConsts, g, cfg);
    CHECK(r.converged);
    CHECK_FALSE(r.stagnated);
    CHECK(r.iterations.back().update_norm < cfg.tol);
}

TEST_CASE("residual curve") {
    const GridSpec g = GridSpec::centered(16, 0.04);
    const ScanGeometry geom = scan_for(g, 24);
    const VectorField2D f = blob(g, 1e-4);
    const auto curve = residual_curve(f, {0.0, 0.5, 1.0, 1.5}, geom, kConsts);
    REQUIRE(curve.size() == 4u);
    CHECK(curve[2].alpha == 1.0);
    CHECK(curve[2].residual == 0.0);
    const SinogramSet s = forward_scan(f, geom, kConsts).data;
    CHECK(curve[0].residual == doctest::Approx(residual(SinogramSet::identity(geom), s)).epsilon(1e-12));
    CHECK(curve[1].residual > 0.0);
    CHECK(curve[3].residual > 0.0);
}

TEST_CASE("mnkm config validation") {
    MnkmConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tol = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = MnkmConfig{};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = MnkmConfig{};
    cfg.line_search_alphas = {0.1, 0.1, 1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = MnkmConfig{};
    cfg.line_search_alphas = {-0.1, 0.5, 1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = MnkmConfig{};
    cfg.backtrack = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = MnkmConfig{};
    cfg.fixed_alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = MnkmConfig{};
    cfg.alpha_max = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
