#include "pnt/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnt/data_ops.hpp"
#include "pnt/radon.hpp"

namespace pnt {

VectorField2D linear_reconstruct(const SinogramSet& data, const PhysicsConstants& consts,
                                 const GridSpec& out_spec) {
    data.validate();
    consts.validate();
    out_spec.validate();
    const double scale = 1.0 / consts.gamma_over_v();
    // component c is recovered from entry (c+1, c+2) cyclically, zero-based
    const ScalarImage b1 = fbp(data.entry(1, 2), out_spec);
    const ScalarImage b2 = fbp(data.entry(2, 0), out_spec);
    const ScalarImage b3 = fbp(data.entry(0, 1), out_spec);
    VectorField2D out(out_spec);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = scale * Vec3(b1.values[k], b2.values[k], b3.values[k]);
    }
    return out;
}

void MnkmConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("mnkm: tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("mnkm: max_iters must be >= 1");
    for (std::size_t k = 0; k < line_search_alphas.size(); ++k) {
        if (!(line_search_alphas[k] > 0.0)) throw std::invalid_argument("mnkm: line search alphas must be positive");
        for (std::size_t m = 0; m < k; ++m) {
            if (line_search_alphas[k] == line_search_alphas[m]) {
                throw std::invalid_argument("mnkm: line search alphas must be distinct");
            }
        }
    }
    if (!(alpha_max > 0.0)) throw std::invalid_argument("mnkm: alpha_max must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("mnkm: backtrack must lie in (0, 1)");
    if (fixed_alpha && !(*fixed_alpha > 0.0)) throw std::invalid_argument("mnkm: fixed_alpha must be positive");
}

namespace {

// Vertex of the parabola through three samples, if it opens upwards.
std::optional<double> parabola_minimizer(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    // divided differences
    const double d01 = (y[1] - y[0]) / (x[1] - x[0]);
    const double d12 = (y[2] - y[1]) / (x[2] - x[1]);
    const double curvature = (d12 - d01) / (x[2] - x[0]);
    if (!(curvature > 0.0)) return std::nullopt;
    // y = y0 + d01 (a - x0) + c (a - x0)(a - x1)
    return 0.5 * (x[0] + x[1]) - d01 / (2.0 * curvature);
}

}  // namespace

ReconReport mnkm_reconstruct(const SinogramSet& data, const PhysicsConstants& consts, const GridSpec& out_spec,
                             const MnkmConfig& cfg, const VectorField2D* truth) {
    data.validate();
    consts.validate();
    out_spec.validate();
    cfg.validate();
    const ScanGeometry& geom = data.geometry;
    constexpr double kNormFloor = 1e-30;

    ReconReport report;
    VectorField2D current(out_spec);
    SinogramSet simulated = SinogramSet::identity(geom);
    double current_residual = residual(data, simulated);

    double bracket = 1.0;  // shrinks after every rejected line search
    for (int n = 0; n < cfg.max_iters; ++n) {
        const VectorField2D update = linear_reconstruct(data - simulated, consts, out_spec);
        if (n == 0) report.first_update = update;
        const double step_scale = update.norm() / std::max(current.norm(), kNormFloor);
        if (update.norm() == 0.0) {
            // the data carry nothing the linear map can see: a fixed point
            report.iterations.push_back({current_residual, current_residual, 0.0, 0.0, true});
            report.converged = true;
            break;
        }

        struct Candidate {
            double alpha;
            double residual;
            SinogramSet simulated;
        };
        auto evaluate = [&](double alpha) {
            ForwardScanResult r = forward_scan(current + alpha * update, geom, consts);
            const double res = residual(data, r.data);
            return Candidate{alpha, res, std::move(r.data)};
        };

        Candidate best;
        double largest_trial = 0.0;
        if (cfg.fixed_alpha) {
            best = evaluate(*cfg.fixed_alpha);
            largest_trial = *cfg.fixed_alpha;
        } else {
            std::array<double, 3> xs = cfg.line_search_alphas;
            std::sort(xs.begin(), xs.end());
            for (double& x : xs) x *= bracket;
            largest_trial = xs[2];
            std::vector<Candidate> trials;
            std::array<double, 3> ys{};
            for (int k = 0; k < 3; ++k) {
                trials.push_back(evaluate(xs[k]));
                ys[k] = trials.back().residual;
            }
            if (auto vertex = parabola_minimizer(xs, ys); vertex && *vertex > 0.0) {
                const double alpha = std::min(*vertex, bracket * cfg.alpha_max);
                if (std::none_of(trials.begin(), trials.end(), [&](const Candidate& c) { return c.alpha == alpha; })) {
                    trials.push_back(evaluate(alpha));
                }
            }
            best = std::move(*std::min_element(trials.begin(), trials.end(), [](const Candidate& a, const Candidate& b) {
                return a.residual < b.residual;
            }));
        }

        MnkmIteration it;
        it.residual_before = current_residual;
        it.alpha = best.alpha;

        if (!cfg.fixed_alpha && !(best.residual < current_residual)) {
            // no trial lowers the residual: stay put and look closer next time
            it.residual = current_residual;
            it.update_norm = 0.0;
            it.accepted = false;
            report.iterations.push_back(it);
            report.stagnated = true;
            if (largest_trial * step_scale < cfg.tol) break;  // nothing left to try
            bracket *= cfg.backtrack;
            continue;
        }

        it.update_norm = best.alpha * step_scale;
        it.residual = best.residual;
        report.iterations.push_back(it);
        report.stagnated = false;
        current = current + best.alpha * update;
        simulated = std::move(best.simulated);
        current_residual = best.residual;
        if (it.update_norm < cfg.tol) {
            report.converged = true;
            break;
        }
    }

    report.field_estimate = current;
    if (truth) {
        report.per_component_relative_error = relative_error(current, resample_bilinear(*truth, out_spec));
    }
    return report;
}

std::vector<ResidualSample> residual_curve(const VectorField2D& field, const std::vector<double>& alphas,
                                           const ScanGeometry& geom, const PhysicsConstants& consts) {
    const SinogramSet reference = forward_scan(field, geom, consts).data;
    std::vector<ResidualSample> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        out.push_back({alpha, residual(forward_scan(alpha * field, geom, consts).data, reference)});
    }
    return out;
}

}  // namespace pnt
