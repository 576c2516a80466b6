#pragma once

#include "squelp/bracket.hpp"
#include "squelp/frozen_env.hpp"
#include "squelp/problem.hpp"

namespace squelp {

struct NewtonOptions {
    double tol = 1e-9; // on the pointwise residual max-norm
    int max_iters = 500;
    int max_backtracks = 60;
    double armijo_c = 1e-4;
};

struct SolveReport {
    Field solution;
    double residual_inf = HUGE_VAL; // pointwise residual max-norm at exit
    double grad_inf = HUGE_VAL;     // plain energy-gradient max-norm
    std::vector<double> energy_trajectory;
    int iterations = 0;
    bool converged = false;
    bool max_iters_exceeded = false;

    double bracket_margin = NAN; // min(u - sub) when checked
    bool bracket_violation = false;

    int total_backtracks = 0;
    int worst_backtracks = 0;
};

/// Damped Newton on the energy gradient: LDLT factorization with diagonal
/// regularization escalated until the step is a descent direction, then
/// Armijo backtracking on the energy itself.  Returns with
/// max_iters_exceeded set (rather than throwing) when the iteration budget
/// runs out.
SolveReport minimize_energy(const EnergyModel& model, const Field& init,
                            const NewtonOptions& opts = {});

/// Minimize the frozen scalar energy and run the comparison step against the
/// bracket (min(u - sub) >= -1e-8 ||sub||_inf).
SolveReport solve_frozen_scalar(const ScalarProblem& prob, const RhsEnv& rhs, const Bracket* bracket,
                                const Field& init, const NewtonOptions& opts = {});

/// The two decoupled component solves of the frozen system, each from its own
/// subsolution.
std::pair<SolveReport, SolveReport> solve_frozen_system(const SystemProblem& prob,
                                                        const SystemState& state, const Bracket& bu,
                                                        const Bracket& bv,
                                                        const NewtonOptions& opts = {});

} // namespace squelp
