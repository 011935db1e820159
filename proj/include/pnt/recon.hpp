#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pnt/forward.hpp"
#include "pnt/grid.hpp"
#include "pnt/sinogram.hpp"

namespace pnt {

/// Linearized inversion about B = 0. The off-diagonal entries of the spin
/// data are, to first order, scaled ray transforms of single components:
/// entry(1,2) -> B3, entry(2,3) -> B1, entry(3,1) -> B2 (one-based), each
/// inverted by fbp and multiplied by v / gamma_N.
VectorField2D linear_reconstruct(const SinogramSet& data, const PhysicsConstants& consts,
                                 const GridSpec& out_spec);

struct MnkmConfig {
    double tol = 1e-5;
    int max_iters = 100;
    std::array<double, 3> line_search_alphas{0.1, 0.55, 1.0};
    double alpha_max = 2.0;  // step lengths are clamped to (0, alpha_max]
    /// After a line search finds no lower residual, the trial lengths and
    /// alpha_max of the next iteration are multiplied by this factor.
    double backtrack = 0.5;
    /// Skip the line search and always step by this amount.
    std::optional<double> fixed_alpha;

    void validate() const;
};

struct MnkmIteration {
    double residual_before = 0.0;  // residual of the iterate the step started from
    double residual = 0.0;         // residual after the step
    double alpha = 0.0;
    double update_norm = 0.0;  // ||B_{n+1} - B_n|| / max(||B_n||, eps), 0 when rejected
    bool accepted = true;
};

struct ReconReport {
    VectorField2D field_estimate;
    VectorField2D first_update;  // linear reconstruction of the initial data
    std::vector<MnkmIteration> iterations;
    bool converged = false;
    bool stagnated = false;  // the last line search found no step that lowers the residual
    /// (B1, B2, B3, |B|) relative L2 errors when a ground truth is supplied.
    std::optional<std::array<double, 4>> per_component_relative_error;
};

/// Damped modified Newton-Kantorovich iteration with the derivative fixed at
/// B = 0. Starting from B = 0, each step linearly reconstructs the residual
/// data, chooses a step length by fitting a quadratic to the residual at the
/// configured trial lengths, and stops once the relative update falls below
/// `tol`. When no trial lowers the residual the iterate is kept and the trial
/// lengths shrink by `backtrack`. Once even the largest trial step is below
/// `tol` without lowering the residual the run ends with converged = false
/// and stagnated = true.
/// The forward model is evaluated on `out_spec` with
/// the data's geometry. `truth`, when given, is resampled bilinearly onto
/// `out_spec` for the error report.
ReconReport mnkm_reconstruct(const SinogramSet& data, const PhysicsConstants& consts, const GridSpec& out_spec,
                             const MnkmConfig& cfg, const VectorField2D* truth = nullptr);

struct ResidualSample {
    double alpha = 0.0;
    double residual = 0.0;
};

/// residual(S(alpha * field), S(field)) for every alpha.
std::vector<ResidualSample> residual_curve(const VectorField2D& field, const std::vector<double>& alphas,
                                           const ScanGeometry& geom, const PhysicsConstants& consts);

}  // namespace pnt
