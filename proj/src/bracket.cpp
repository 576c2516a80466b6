#include "squelp/bracket.hpp"

#include <algorithm>
#include <cmath>

namespace squelp {

namespace {

// sub: worst node maximizes the residual, accepted iff max <= tol.
// super: worst node minimizes it, accepted iff min >= -tol.
ResidualCheck scan_nodes(const Field& res, double tol, bool as_super,
                         const EnergyModel* model = nullptr) {
    ResidualCheck out;
    out.tol = tol;
    bool first = true;
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (model && model->eliminated(i)) continue;
        const bool worse = as_super ? res[i] < out.margin : res[i] > out.margin;
        if (first || worse) {
            out.margin = res[i];
            out.worst_node = i;
            first = false;
        }
    }
    out.ok = as_super ? out.margin >= -tol : out.margin <= tol;
    return out;
}

ResidualCheck residual_scan(const ScalarProblem& prob, const Field& cand, bool as_super) {
    const FrozenScalarRhs env(prob, cand, nullptr);
    const EnergyModel model(prob.grid, prob.op, &env, prob.boundary_values());
    const Field res = model.pointwise_residual(cand);
    return scan_nodes(res, 1e-8 * std::max(1.0, env.sup_at(cand)), as_super, &model);
}

} // namespace

ResidualCheck subsolution_check(const ScalarProblem& prob, const Field& cand) {
    return residual_scan(prob, cand, false);
}

ResidualCheck supersolution_check(const ScalarProblem& prob, const Field& cand) {
    return residual_scan(prob, cand, true);
}

Bracket constant_subsolution(const ScalarProblem& prob, double c) {
    if (prob.op.bc != BoundaryKind::Neumann)
        throw ValidationError("constant subsolutions require a Neumann boundary");
    if (!(c > 0.0)) throw ValidationError("constant subsolution level must be positive");
    Field cand(prob.grid, c);
    const ResidualCheck rc = subsolution_check(prob, cand);
    if (!rc.ok)
        throw NotASubsolution("constant level " + std::to_string(c) +
                                  " fails the subsolution residual check",
                              rc.worst_node, rc.margin);
    Bracket b;
    b.sub = std::move(cand);
    b.tag = BracketTag::Constant;
    b.level = c;
    return b;
}

Bracket distance_subsolution(const ScalarProblem& prob, double k) {
    if (prob.op.bc == BoundaryKind::Neumann)
        throw ValidationError("distance subsolutions require a Robin or Dirichlet boundary");
    if (!(k > 0.0)) throw ValidationError("distance subsolution slope must be positive");
    const Grid& g = *prob.grid;
    ResidualCheck last;
    double kk = k;
    for (int halving = 0; halving <= 20; ++halving, kk /= 2.0) {
        Field cand(prob.grid);
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = kk * g.dist_boundary[i];
        last = subsolution_check(prob, cand);
        if (last.ok) {
            Bracket b;
            b.sub = std::move(cand);
            b.tag = BracketTag::DistanceBased;
            b.k = kk;
            return b;
        }
    }
    throw NotASubsolution("no accepted slope after 20 halvings of k = " + std::to_string(k),
                          last.worst_node, last.margin);
}

double constant_supersolution_level(const ScalarProblem& prob, double start, int max_doublings) {
    double M = start;
    for (int d = 0; d <= max_doublings; ++d, M *= 2.0) {
        if (supersolution_check(prob, Field(prob.grid, M)).ok) return M;
    }
    throw NoSupersolution("no constant supersolution up to " + std::to_string(M / 2.0));
}

ResidualCheck system_constant_check(const SystemProblem& prob, int component, double c,
                                    double companion, bool as_super) {
    SystemState st{Field(prob.grid, component == 0 ? c : companion),
                   Field(prob.grid, component == 0 ? companion : c),
                   Field(prob.grid, component == 0 ? c : companion),
                   Field(prob.grid, component == 0 ? companion : c)};
    const FrozenSystemRhs env(prob, st, component);
    const OperatorSpec& op = component == 0 ? prob.op_u : prob.op_v;
    const EnergyModel model(prob.grid, op, &env);
    const Field res = model.pointwise_residual(Field(prob.grid, c));
    return scan_nodes(res, 1e-8 * std::max(1.0, env.sup()), as_super);
}

std::pair<Bracket, Bracket> system_constant_brackets(const SystemProblem& prob, double level_u,
                                                     double level_v, double super_start) {
    if (!(level_u > 0.0 && level_v > 0.0))
        throw ValidationError("system bracket levels must be positive");
    auto require = [&](int comp, double c, double comp_level, bool super, const char* what) {
        const ResidualCheck rc = system_constant_check(prob, comp, c, comp_level, super);
        if (!rc.ok)
            throw NotASubsolution(std::string(what) + " residual check failed at level " +
                                      std::to_string(c),
                                  rc.worst_node, rc.margin);
    };
    require(0, level_u, level_v, false, "first-component subsolution");
    require(1, level_v, level_u, false, "second-component subsolution");

    auto find_super = [&](int comp, double companion) {
        double M = super_start;
        for (int d = 0; d <= 40; ++d, M *= 2.0) {
            if (!(M > (comp == 0 ? level_u : level_v))) continue;
            if (system_constant_check(prob, comp, M, companion, true).ok) return M;
        }
        throw NoSupersolution("no constant supersolution for system component " +
                              std::to_string(comp + 1));
    };
    const double Mu = find_super(0, level_v);
    const double Mv = find_super(1, level_u);

    // the sign conditions must hold across the whole companion range; sample
    // both ends now that all four levels are known
    require(0, level_u, Mv, false, "first-component subsolution (companion at super)");
    require(1, level_v, Mu, false, "second-component subsolution (companion at super)");
    require(0, Mu, Mv, true, "first-component supersolution (companion at super)");
    require(1, Mv, Mu, true, "second-component supersolution (companion at super)");

    auto mk = [&](double lo, double hi) {
        Bracket b;
        b.sub = Field(prob.grid, lo);
        b.super = Field(prob.grid, hi);
        b.tag = BracketTag::Constant;
        b.level = lo;
        return b;
    };
    return {mk(level_u, Mu), mk(level_v, Mv)};
}

Field truncate(const Field& u, const Bracket& bracket) {
    if (u.grid_ptr() != bracket.sub.grid_ptr())
        throw Error("truncate: field and bracket live on different grids");
    Field out = u;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], bracket.sub[i]);
    return out;
}

HardyCertificate hardy_sobolev_check(const Field& u, double gamma, double p,
                                     const std::vector<Field>& phi_set, double k_lower) {
    const Grid& g = u.grid();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < k_lower * g.dist_boundary[i] - 1e-12 * std::max(1.0, k_lower))
            throw Error("hardy_sobolev_check: field violates the k*dist lower bound at node " +
                        std::to_string(i));

    HardyCertificate cert;
    for (const Field& phi : phi_set) {
        for (std::size_t id : g.boundary_node)
            if (std::abs(phi[id]) > 1e-13)
                throw ValidationError("hardy_sobolev_check test functions must vanish on the boundary");

        HardyCertificate::Entry e;
        for (const auto& c : g.cell) {
            Vec grad{0.0, 0.0};
            for (int k = 0; k < c.n_node; ++k) grad = grad + phi[c.node[k]] * c.grad_coeff[k];
            e.denominator += c.weight * std::pow(norm(grad), p);
        }
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (g.on_boundary[i]) continue; // phi vanishes there
            e.numerator += g.node_volume[i] * std::pow(u[i], -gamma) * std::abs(phi[i]);
        }
        if (e.denominator <= 1e-300) {
            e.skipped = true; // 0/0 for an identically zero test function
        } else {
            e.ratio = e.numerator / e.denominator;
            cert.max_ratio = std::max(cert.max_ratio, e.ratio);
            if (!std::isfinite(e.ratio)) cert.all_finite = false;
        }
        cert.entries.push_back(e);
    }
    return cert;
}

} // namespace squelp
