#include "squelp/frozen_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace squelp {

namespace {

double pointwise_inf(const EnergyModel& model, const Field& grad) {
    const Grid& g = model.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (model.eliminated(i)) continue;
        m = std::max(m, std::abs(grad[i]) / g.node_volume[i]);
    }
    return m;
}

double plain_inf(const Field& grad) {
    double m = 0.0;
    for (double v : grad.values()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

SolveReport minimize_energy(const EnergyModel& model, const Field& init, const NewtonOptions& opts) {
    const std::size_t n = model.grid().node_count();
    SolveReport rep;
    Field u = init;
    if (model.spec().bc == BoundaryKind::Dirichlet)
        for (std::size_t id : model.grid().boundary_node) u[id] = 0.0;

    double E = model.energy(u);
    if (!std::isfinite(E))
        throw NonFiniteEnergy("energy not finite at the initial iterate");
    rep.energy_trajectory.push_back(E);

    std::vector<Triplet> trip;
    Eigen::SparseMatrix<double> H{long(n), long(n)};
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(n));
    Eigen::VectorXd d = rhs;

    for (int it = 0;; ++it) {
        const Field grad = model.gradient(u);
        rep.residual_inf = pointwise_inf(model, grad);
        rep.grad_inf = plain_inf(grad);
        if (!std::isfinite(rep.grad_inf))
            throw NonFiniteEnergy("energy gradient not finite at an accepted iterate");
        if (rep.residual_inf <= opts.tol) {
            rep.converged = true;
            break;
        }
        if (it >= opts.max_iters) {
            rep.max_iters_exceeded = true;
            break;
        }

        model.hessian(u, trip);
        std::vector<Eigen::Triplet<double>> et;
        et.reserve(trip.size());
        for (const auto& t : trip) et.emplace_back(int(t.row), int(t.col), t.val);
        H.setFromTriplets(et.begin(), et.end());
        double diag_scale = 1.0;
        for (const auto& t : trip)
            if (t.row == t.col) diag_scale = std::max(diag_scale, std::abs(t.val));
        for (std::size_t i = 0; i < n; ++i) rhs[long(i)] = -grad[i];

        // escalate diagonal regularization until the factorization succeeds
        // and produces a descent direction
        double mu = 0.0;
        bool have_dir = false;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
        for (int reg = 0; reg < 40 && !have_dir; ++reg) {
            Eigen::SparseMatrix<double> Hm = H;
            if (mu > 0.0) {
                Eigen::SparseMatrix<double> eye{long(n), long(n)};
                eye.setIdentity();
                Hm = H + mu * eye;
            }
            ldlt.compute(Hm);
            if (ldlt.info() == Eigen::Success) {
                d = ldlt.solve(rhs);
                double gd = 0.0;
                bool finite = true;
                for (std::size_t i = 0; i < n; ++i) {
                    if (!std::isfinite(d[long(i)])) finite = false;
                    gd += grad[i] * d[long(i)];
                }
                if (finite && gd < 0.0) {
                    have_dir = true;
                    break;
                }
            }
            mu = mu == 0.0 ? 1e-12 * diag_scale : mu * 10.0;
        }
        if (!have_dir) throw LineSearchStall("no descent direction after regularization escalation");

        double gd = 0.0;
        for (std::size_t i = 0; i < n; ++i) gd += grad[i] * d[long(i)];

        double t = 1.0;
        bool accepted = false;
        Field trial = u;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + t * d[long(i)];
            const double Et = model.energy(trial);
            if (std::isfinite(Et) && Et <= E + opts.armijo_c * t * gd) {
                accepted = true;
                E = Et;
                rep.total_backtracks += bt;
                rep.worst_backtracks = std::max(rep.worst_backtracks, bt);
                break;
            }
            t /= 2.0;
        }
        if (!accepted)
            throw LineSearchStall("no decreasing step within " +
                                  std::to_string(opts.max_backtracks) + " backtracks");
        u = trial;
        rep.energy_trajectory.push_back(E);
        rep.iterations = it + 1;
    }
    rep.solution = std::move(u);
    return rep;
}

SolveReport solve_frozen_scalar(const ScalarProblem& prob, const RhsEnv& rhs, const Bracket* bracket,
                                const Field& init, const NewtonOptions& opts) {
    const EnergyModel model(prob.grid, prob.op, &rhs, prob.boundary_values());
    SolveReport rep = minimize_energy(model, init, opts);
    if (bracket) {
        double margin = HUGE_VAL;
        for (std::size_t i = 0; i < rep.solution.size(); ++i) {
            if (model.eliminated(i)) continue;
            margin = std::min(margin, rep.solution[i] - bracket->sub[i]);
        }
        rep.bracket_margin = margin;
        rep.bracket_violation = margin < -1e-8 * inf_norm(bracket->sub);
    }
    return rep;
}

std::pair<SolveReport, SolveReport> solve_frozen_system(const SystemProblem& prob,
                                                        const SystemState& state, const Bracket& bu,
                                                        const Bracket& bv, const NewtonOptions& opts) {
    const FrozenSystemRhs rhs_u(prob, state, 0), rhs_v(prob, state, 1);
    ScalarProblem pu{prob.grid, prob.op_u, {}, nullptr, nullptr};
    ScalarProblem pv{prob.grid, prob.op_v, {}, nullptr, nullptr};
    SolveReport ru = solve_frozen_scalar(pu, rhs_u, &bu, bu.sub, opts);
    SolveReport rv = solve_frozen_scalar(pv, rhs_v, &bv, bv.sub, opts);
    return {std::move(ru), std::move(rv)};
}

} // namespace squelp
