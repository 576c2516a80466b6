#pragma once

#include <array>
#include <cstdint>

#include "squelp/frozen_solver.hpp"

namespace squelp {

struct FixedPointOptions {
    double tol_fp = 1e-8;  // on the discrete-C1 distance between outer iterates
    double tol_res = 0.0;  // unfrozen residual bound; 0 = auto 1e-6*(1+rhs_sup)
    int max_outer = 200;
    NewtonOptions inner;
    double grad_cap = 0.0; // M for the trapping monitor; 0 = unmonitored
    std::uint64_t seed = 1;
    int n_starts = 3;      // minimal-selection probe starts
};

enum class FixedPointStatus { Converged, NoConvergence, TrappingExit };

struct TraceRow {
    int iter = 0;
    double sup_dist = 0.0;
    double c1_dist = 0.0;           // max of value and nodal-gradient sup distances
    double unfrozen_residual = 0.0; // pointwise residual of the iterate in the unfrozen problem
    double grad_sup = 0.0;          // max over components of ||grad u||_inf
    double margin_sub = NAN;        // min(u - sub)
    double margin_super = NAN;      // min(super - u)
    double margin_cap = NAN;        // M - grad_sup
    bool clamped = false;
    double energy = 0.0; // final inner energy
    int inner_iterations = 0;
};

struct FixedPointTrace {
    std::vector<TraceRow> rows;
    FixedPointStatus status = FixedPointStatus::NoConvergence;
    bool converged = false;
    bool residual_ok = false;
    double final_residual = HUGE_VAL;
    double tol_res_used = 0.0;
    int outer_iterations = 0;

    /// successive sup-distance ratios over the last k+1 recorded rows
    std::vector<double> last_ratios(std::size_t k = 5) const;
};

struct ScalarFixedPointResult {
    Field solution;
    FixedPointTrace trace;
};

/// Picard loop on w: each outer step re-freezes the gradient at w, solves the
/// truncated problem from init = sub, and measures the discrete-C1 distance
/// to the previous iterate.
ScalarFixedPointResult iterate_scalar(const ScalarProblem& prob, const Bracket& bracket,
                                      const Field& w0, const FixedPointOptions& opts = {});

struct SystemFixedPointResult {
    Field u, v;
    FixedPointTrace trace;
};

/// Two-level unfreezing for the system: both values and gradients re-frozen
/// each outer step, iterates clamped into the brackets (trapping projection),
/// gradient cap monitored with a 3-strike exit.
SystemFixedPointResult iterate_system(const SystemProblem& prob, const Bracket& bu, const Bracket& bv,
                                      const SystemState& start, const FixedPointOptions& opts = {});

struct GradientBoundProbe {
    double c_cal = 0.0;
    double rhs_sup = 0.0;
    double grad_sup = 0.0; // ||grad u_1||_inf at scale 1
    double margin = 0.0;   // c_cal * rhs_sup^{1/(p-1)} - grad_sup
    std::array<double, 2> scale_ratio{}; // ||grad u_t|| / ||grad u_1|| for t = 2, 4
    std::array<double, 2> scale_bound{}; // 1.25 * t^{1/(p-1)}
    bool probe_ok = true;
};

/// Pilot solve against the unit ramp rhs; returns ||grad u||_inf, the
/// calibration constant for gradient_bound_check.
double calibrate_gradient_constant(GridPtr grid, const OperatorSpec& spec,
                                   const NewtonOptions& opts = {});

/// A priori gradient-bound margin plus the t in {2,4} scaling probe, all
/// against the tabulated per-cell rhs.
GradientBoundProbe gradient_bound_check(GridPtr grid, const OperatorSpec& spec,
                                        const std::vector<double>& rhs_cells, double c_cal,
                                        const NewtonOptions& opts = {});

struct SelectionProbe {
    std::vector<Field> candidates; // deduplicated
    std::size_t min_index = 0;
    bool incomparable = false;
};

/// Multi-start frozen solves (sub, sub+1, seeded random fields in the
/// bracket) deduplicated at sup-distance 1e-6; min_index points at the
/// candidate with the smallest mean, flagged Incomparable unless it is
/// nodewise below every other candidate.
SelectionProbe minimal_selection_probe(const ScalarProblem& prob, const Bracket& bracket,
                                       const Field& w, const FixedPointOptions& opts = {});

} // namespace squelp
