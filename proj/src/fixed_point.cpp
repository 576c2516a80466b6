#include "squelp/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace squelp {

namespace {

// sup over nodes of the value and one-sided-gradient differences
double c1_distance(const Field& a, const Field& b) {
    const VectorField ga = discrete_gradient(a), gb = discrete_gradient(b);
    double m = inf_dist(a, b);
    for (std::size_t i = 0; i < ga.v.size(); ++i) m = std::max(m, norm(ga.v[i] - gb.v[i]));
    return m;
}

double residual_sup(const EnergyModel& model, const Field& u) {
    const Field r = model.pointwise_residual(u);
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!model.eliminated(i)) m = std::max(m, std::abs(r[i]));
    return m;
}

double min_diff(const Field& a, const Field& b) {
    double m = HUGE_VAL;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, a[i] - b[i]);
    return m;
}

} // namespace

std::vector<double> FixedPointTrace::last_ratios(std::size_t k) const {
    std::vector<double> out;
    if (rows.size() < 2) return out;
    const std::size_t first = rows.size() > k + 1 ? rows.size() - (k + 1) : 0;
    for (std::size_t i = first + 1; i < rows.size(); ++i) {
        const double prev = rows[i - 1].sup_dist;
        out.push_back(prev > 0.0 ? rows[i].sup_dist / prev : 0.0);
    }
    return out;
}

ScalarFixedPointResult iterate_scalar(const ScalarProblem& prob, const Bracket& bracket,
                                      const Field& w0, const FixedPointOptions& opts) {
    FixedPointTrace tr;
    Field w = w0;
    Field u = w0;
    // A Shifted bracket carries the zero floor of the pure-shift variant, not
    // an actual subsolution; the comparison step is vacuous there.
    const bool compare = bracket.tag != BracketTag::Shifted;
    for (int k = 1; k <= opts.max_outer; ++k) {
        const FrozenScalarRhs env(prob, w, &bracket.sub);
        const SolveReport rep =
            solve_frozen_scalar(prob, env, compare ? &bracket : nullptr, bracket.sub, opts.inner);
        u = rep.solution;

        const FrozenScalarRhs env_u(prob, u, &bracket.sub);
        const EnergyModel unfrozen(prob.grid, prob.op, &env_u, prob.boundary_values());

        TraceRow row;
        row.iter = k;
        row.sup_dist = inf_dist(u, w);
        row.c1_dist = c1_distance(u, w);
        row.unfrozen_residual = residual_sup(unfrozen, u);
        row.grad_sup = grad_inf_norm(u);
        row.margin_sub = compare ? rep.bracket_margin : min_diff(u, bracket.sub);
        if (bracket.super) row.margin_super = min_diff(*bracket.super, u);
        if (opts.grad_cap > 0.0) row.margin_cap = opts.grad_cap - row.grad_sup;
        row.energy = rep.energy_trajectory.back();
        row.inner_iterations = rep.iterations;
        tr.rows.push_back(row);
        tr.outer_iterations = k;
        tr.final_residual = row.unfrozen_residual;
        tr.tol_res_used = opts.tol_res > 0.0 ? opts.tol_res : 1e-6 * (1.0 + env_u.sup_at(u));

        if (!rep.converged || rep.bracket_violation) break; // NoConvergence
        if (row.c1_dist <= opts.tol_fp) {
            tr.status = FixedPointStatus::Converged;
            tr.converged = true;
            tr.residual_ok = row.unfrozen_residual <= tr.tol_res_used;
            break;
        }
        w = u;
    }
    return {std::move(u), std::move(tr)};
}

SystemFixedPointResult iterate_system(const SystemProblem& prob, const Bracket& bu, const Bracket& bv,
                                      const SystemState& start, const FixedPointOptions& opts) {
    if (!(prob.grad_cap > 0.0)) throw ValidationError("system runs need a positive gradient cap");
    FixedPointTrace tr;
    SystemState st = start;
    Field u = start.z1, v = start.z2;
    int cap_strikes = 0;
    for (int k = 1; k <= opts.max_outer; ++k) {
        const auto [ru, rv] = solve_frozen_system(prob, st, bu, bv, opts.inner);
        u = ru.solution;
        v = rv.solution;

        const SystemState at_uv{u, v, u, v};
        const FrozenSystemRhs env_u(prob, at_uv, 0), env_v(prob, at_uv, 1);
        const EnergyModel mu(prob.grid, prob.op_u, &env_u), mv(prob.grid, prob.op_v, &env_v);

        TraceRow row;
        row.iter = k;
        row.sup_dist = std::max(inf_dist(u, st.z1), inf_dist(v, st.z2));
        row.c1_dist = std::max(c1_distance(u, st.w1), c1_distance(v, st.w2));
        row.unfrozen_residual = std::max(residual_sup(mu, u), residual_sup(mv, v));
        row.grad_sup = std::max(grad_inf_norm(u), grad_inf_norm(v));
        row.margin_sub = std::min(min_diff(u, bu.sub), min_diff(v, bv.sub));
        row.margin_super = std::min(min_diff(*bu.super, u), min_diff(*bv.super, v));
        row.margin_cap = prob.grad_cap - row.grad_sup;
        row.energy = ru.energy_trajectory.back() + rv.energy_trajectory.back();
        row.inner_iterations = ru.iterations + rv.iterations;

        // trapping projection
        Field cu = u, cv = v;
        bool clamped = false;
        for (std::size_t i = 0; i < cu.size(); ++i) {
            const double a = std::clamp(cu[i], bu.sub[i], (*bu.super)[i]);
            const double b = std::clamp(cv[i], bv.sub[i], (*bv.super)[i]);
            if (a != cu[i] || b != cv[i]) clamped = true;
            cu[i] = a;
            cv[i] = b;
        }
        row.clamped = clamped;
        tr.rows.push_back(row);
        tr.outer_iterations = k;
        tr.final_residual = row.unfrozen_residual;
        tr.tol_res_used =
            opts.tol_res > 0.0 ? opts.tol_res : 1e-6 * (1.0 + std::max(env_u.sup(), env_v.sup()));

        if (!ru.converged || !rv.converged) break; // NoConvergence
        if (row.margin_cap < 0.0) {
            if (++cap_strikes >= 3) {
                tr.status = FixedPointStatus::TrappingExit;
                break;
            }
        } else {
            cap_strikes = 0;
        }
        if (row.c1_dist <= opts.tol_fp) {
            tr.status = FixedPointStatus::Converged;
            tr.converged = true;
            tr.residual_ok = row.unfrozen_residual <= tr.tol_res_used;
            break;
        }
        st = {cu, cv, cu, cv};
    }
    return {std::move(u), std::move(v), std::move(tr)};
}

double calibrate_gradient_constant(GridPtr grid, const OperatorSpec& spec,
                                   const NewtonOptions& opts) {
    std::vector<double> ramp(grid->cell.size());
    for (std::size_t c = 0; c < ramp.size(); ++c)
        ramp[c] = (grid->cell[c].center.x - grid->lo.x) / (grid->hi.x - grid->lo.x);
    const ScaledCellRhs env(ramp, 1.0);
    const EnergyModel model(grid, spec, &env);
    const SolveReport rep = minimize_energy(model, Field(grid, 0.0), opts);
    return grad_inf_norm(rep.solution);
}

GradientBoundProbe gradient_bound_check(GridPtr grid, const OperatorSpec& spec,
                                        const std::vector<double>& rhs_cells, double c_cal,
                                        const NewtonOptions& opts) {
    GradientBoundProbe pr;
    pr.c_cal = c_cal;
    for (double v : rhs_cells) pr.rhs_sup = std::max(pr.rhs_sup, std::abs(v));

    const double scales[3] = {1.0, 2.0, 4.0};
    double gsup[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        const ScaledCellRhs env(rhs_cells, scales[i]);
        const EnergyModel model(grid, spec, &env);
        gsup[i] = grad_inf_norm(minimize_energy(model, Field(grid, 0.0), opts).solution);
    }
    pr.grad_sup = gsup[0];
    pr.margin = c_cal * std::pow(pr.rhs_sup, 1.0 / (spec.p - 1.0)) - gsup[0];
    for (int i = 0; i < 2; ++i) {
        pr.scale_ratio[i] = gsup[0] > 0.0 ? gsup[i + 1] / gsup[0] : 0.0;
        pr.scale_bound[i] = 1.25 * std::pow(scales[i + 1], 1.0 / (spec.p - 1.0));
        if (pr.scale_ratio[i] > pr.scale_bound[i] + 1e-12) pr.probe_ok = false;
    }
    return pr;
}

SelectionProbe minimal_selection_probe(const ScalarProblem& prob, const Bracket& bracket,
                                       const Field& w, const FixedPointOptions& opts) {
    const FrozenScalarRhs env(prob, w, &bracket.sub);
    std::vector<Field> starts;
    starts.push_back(bracket.sub);
    if (opts.n_starts >= 2) {
        Field s1 = bracket.sub;
        for (std::size_t i = 0; i < s1.size(); ++i) s1[i] += 1.0;
        starts.push_back(std::move(s1));
    }
    std::mt19937_64 rng(opts.seed);
    for (int s = 2; s < opts.n_starts; ++s) {
        Field r = bracket.sub;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double hi = bracket.super ? (*bracket.super)[i] : bracket.sub[i] + 2.0;
            std::uniform_real_distribution<double> dist(bracket.sub[i], hi);
            r[i] = dist(rng);
        }
        starts.push_back(std::move(r));
    }

    SelectionProbe probe;
    for (const Field& init : starts) {
        const SolveReport rep = solve_frozen_scalar(prob, env, &bracket, init, opts.inner);
        if (!rep.converged) continue;
        bool fresh = true;
        for (const Field& c : probe.candidates)
            if (inf_dist(c, rep.solution) <= 1e-6) {
                fresh = false;
                break;
            }
        if (fresh) probe.candidates.push_back(rep.solution);
    }
    if (probe.candidates.empty()) return probe;

    auto mean = [](const Field& f) {
        double s = 0.0;
        for (double v : f.values()) s += v;
        return s / double(f.size());
    };
    for (std::size_t j = 1; j < probe.candidates.size(); ++j)
        if (mean(probe.candidates[j]) < mean(probe.candidates[probe.min_index])) probe.min_index = j;
    for (std::size_t j = 0; j < probe.candidates.size(); ++j) {
        if (j == probe.min_index) continue;
        for (std::size_t i = 0; i < probe.candidates[j].size(); ++i)
            if (probe.candidates[probe.min_index][i] > probe.candidates[j][i] + 1e-9) {
                probe.incomparable = true;
                break;
            }
    }
    return probe;
}

} // namespace squelp
