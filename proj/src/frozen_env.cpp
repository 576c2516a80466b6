#include "squelp/frozen_env.hpp"

#include <algorithm>
#include <cmath>

namespace squelp {

namespace {

// interpolate a nodal field to each quadrature cell
std::vector<double> to_cells(const Field& u) {
    const Grid& g = u.grid();
    std::vector<double> out(g.cell.size());
    for (std::size_t c = 0; c < g.cell.size(); ++c) {
        double v = 0.0;
        for (int k = 0; k < g.cell[c].n_node; ++k)
            v += g.cell[c].interp[k] * u[g.cell[c].node[k]];
        out[c] = v;
    }
    return out;
}

// |grad w| per cell, from the interpolated nodal gradient
std::vector<double> grad_mag_cells(const Field& w) {
    const Grid& g = w.grid();
    const VectorField gw = discrete_gradient(w);
    std::vector<double> out(g.cell.size());
    for (std::size_t c = 0; c < g.cell.size(); ++c) {
        Vec v{0.0, 0.0};
        for (int k = 0; k < g.cell[c].n_node; ++k)
            v = v + g.cell[c].interp[k] * gw.v[g.cell[c].node[k]];
        out[c] = norm(v);
    }
    return out;
}

} // namespace

FrozenScalarRhs::FrozenScalarRhs(const ScalarProblem& prob, const Field& w, const Field* floor) {
    const Grid& g = *prob.grid;
    shift_ = prob.reaction.shift;
    const std::vector<double> n1 = grad_mag_cells(w);

    for (const Term& t : prob.reaction.terms) {
        TermCache tc;
        tc.term = t;
        tc.c0.resize(g.cell.size());
        for (std::size_t c = 0; c < g.cell.size(); ++c) {
            double c0 = t.coeff * profile_value(t.profile, g.cell[c].center);
            if (t.xi1_exp != 0.0) c0 *= std::pow(n1[c], t.xi1_exp);
            tc.c0[c] = c0;
        }
        (t.singular_s() ? singular_ : regular_).push_back(std::move(tc));
    }

    floor_.assign(g.cell.size(), 0.0);
    if (floor) floor_ = to_cells(*floor);
    forcing_.assign(g.cell.size(), 0.0);
    if (prob.forcing)
        for (std::size_t c = 0; c < g.cell.size(); ++c) forcing_[c] = prob.forcing(g.cell[c].center);
}

double FrozenScalarRhs::value(std::size_t c, double s) const {
    double v = forcing_[c];
    for (const auto& tc : regular_)
        if (tc.c0[c] != 0.0) v += tc.c0[c] * term_sfactor(tc.term, s);
    for (const auto& tc : singular_)
        if (tc.c0[c] != 0.0) v += tc.c0[c] * term_sfactor(tc.term, std::max(s, floor_[c]) + shift_);
    return v;
}

double FrozenScalarRhs::value_ds(std::size_t c, double s) const {
    double v = 0.0;
    for (const auto& tc : regular_)
        if (tc.c0[c] != 0.0) v += tc.c0[c] * term_sfactor_deriv(tc.term, s);
    for (const auto& tc : singular_)
        if (tc.c0[c] != 0.0 && s > floor_[c]) v += tc.c0[c] * term_sfactor_deriv(tc.term, s + shift_);
    return v;
}

double FrozenScalarRhs::antiderivative(std::size_t c, double s) const {
    double A = forcing_[c] * s;
    for (const auto& tc : regular_)
        if (tc.c0[c] != 0.0) A += tc.c0[c] * term_sfactor_antiderivative(tc.term, 0.0, s);
    for (const auto& tc : singular_) {
        if (tc.c0[c] == 0.0) continue;
        const double fl = floor_[c];
        if (s >= fl)
            A += tc.c0[c] * term_sfactor_antiderivative(tc.term, fl + shift_, s + shift_);
        else
            A += tc.c0[c] * term_sfactor(tc.term, fl + shift_) * (s - fl);
    }
    return A;
}

double FrozenScalarRhs::sup_at(const Field& u) const {
    const std::vector<double> um = to_cells(u);
    double m = 0.0;
    for (std::size_t c = 0; c < um.size(); ++c) {
        const double v = value(c, um[c]);
        if (std::isfinite(v)) m = std::max(m, std::abs(v));
    }
    return m;
}

FrozenSystemRhs::FrozenSystemRhs(const SystemProblem& prob, const SystemState& state, int component) {
    const Grid& g = *prob.grid;
    const std::vector<double> z1 = to_cells(state.z1), z2 = to_cells(state.z2);
    const std::vector<double> n1 = grad_mag_cells(state.w1), n2 = grad_mag_cells(state.w2);
    const double own_exp = (component == 0 ? prob.op_u.p : prob.op_v.p) - 1.0;

    r_.resize(g.cell.size());
    for (std::size_t c = 0; c < g.cell.size(); ++c) {
        const Vec x = g.cell[c].center;
        const auto fg = eval_reaction_system(prob.reaction, x, z1[c], z2[c], {n1[c], 0.0}, {n2[c], 0.0});
        const double own = component == 0 ? z1[c] : z2[c];
        r_[c] = (component == 0 ? fg.first : fg.second) + sgn_pow(own, own_exp);
    }
}

double FrozenSystemRhs::sup() const {
    double m = 0.0;
    for (double v : r_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> freeze_rhs_values(const RhsEnv& env, const Field& u) {
    const std::vector<double> um = to_cells(u);
    std::vector<double> out(um.size());
    for (std::size_t c = 0; c < um.size(); ++c) out[c] = env.value(c, um[c]);
    return out;
}

} // namespace squelp
