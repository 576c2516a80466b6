#include "squelp/operators.hpp"

#include <algorithm>
#include <cmath>

namespace squelp {

namespace {

constexpr double eps_grad = 1e-10; // regularization scale for exponents < 2

double mag_pow(double m, double r) {
    // |xi|^(r-2) with the r < 2 blowup at 0 smoothed on the eps_grad scale
    if (r < 2.0) return std::pow(m * m + eps_grad * eps_grad, (r - 2.0) / 2.0);
    if (r == 2.0) return 1.0;
    return std::pow(m, r - 2.0);
}

} // namespace

std::vector<std::string> OperatorSpec::validate() const {
    std::vector<std::string> bad;
    if (!(p > 1.0)) bad.push_back("operator exponent p must exceed 1");
    if (kind == OperatorKind::PQSum && !(q > 1.0 && q < p))
        bad.push_back("pq operator needs 1 < q < p");
    if (lambda < 0.0) bad.push_back("lambda must be nonnegative");
    if (beta < 0.0) bad.push_back("beta must be nonnegative");
    if (bc == BoundaryKind::Robin && !(lambda + beta > 0.0))
        bad.push_back("Robin boundary needs lambda + beta > 0");
    if (bc != BoundaryKind::Robin && beta != 0.0)
        bad.push_back("beta is only meaningful with a Robin boundary");
    return bad;
}

void OperatorSpec::require_valid() const {
    auto bad = validate();
    if (!bad.empty()) throw ValidationError(bad);
}

double sgn_pow(double s, double e) {
    if (s == 0.0) return 0.0;
    const double m = std::pow(std::abs(s), e);
    return s > 0.0 ? m : -m;
}

Vec a_map(Vec xi, const OperatorSpec& spec) {
    const double m = norm(xi);
    if (m == 0.0) return {0.0, 0.0};
    double f = mag_pow(m, spec.p);
    if (spec.kind == OperatorKind::PQSum) f += mag_pow(m, spec.q);
    return f * xi;
}

double potential_G(Vec xi, const OperatorSpec& spec) {
    const double m = norm(xi);
    double G = std::pow(m, spec.p) / spec.p;
    if (spec.kind == OperatorKind::PQSum) G += std::pow(m, spec.q) / spec.q;
    return G;
}

std::array<double, 4> a_jacobian(Vec xi, const OperatorSpec& spec) {
    const double m2 = dot(xi, xi);
    auto one_term = [&](double r) -> std::array<double, 4> {
        // d/dxi [ m^(r-2) xi ] = m^(r-2) I + (r-2) m^(r-4) xi xi^T
        const double f = mag_pow(m2 == 0.0 ? 0.0 : std::sqrt(m2), r);
        double g;
        if (r < 2.0)
            g = (r - 2.0) * std::pow(m2 + eps_grad * eps_grad, (r - 4.0) / 2.0);
        else if (r == 2.0)
            g = 0.0;
        else
            g = m2 == 0.0 ? 0.0 : (r - 2.0) * std::pow(m2, (r - 4.0) / 2.0);
        return {f + g * xi.x * xi.x, g * xi.x * xi.y, g * xi.x * xi.y, f + g * xi.y * xi.y};
    };
    auto J = one_term(spec.p);
    if (spec.kind == OperatorKind::PQSum) {
        auto Jq = one_term(spec.q);
        for (int k = 0; k < 4; ++k) J[k] += Jq[k];
    }
    return J;
}

double custom_norm(const Field& u, const OperatorSpec& spec) {
    const Grid& g = u.grid();
    const double p = spec.p;
    double acc = 0.0;
    for (const auto& c : g.cell) {
        Vec grad{0.0, 0.0};
        double um = 0.0;
        for (int k = 0; k < c.n_node; ++k) {
            grad = grad + u[c.node[k]] * c.grad_coeff[k];
            um += c.interp[k] * u[c.node[k]];
        }
        switch (spec.bc) {
        case BoundaryKind::Robin:
        case BoundaryKind::Dirichlet:
            acc += c.weight * p * potential_G(grad, spec);
            break;
        case BoundaryKind::Neumann:
            acc += c.weight * (std::pow(norm(grad), p) + std::pow(std::abs(um), p));
            break;
        }
    }
    if (spec.bc == BoundaryKind::Robin)
        for (std::size_t b = 0; b < g.boundary_node.size(); ++b)
            acc += spec.beta * g.surface_weight[b] * std::pow(std::abs(u[g.boundary_node[b]]), p);
    return std::pow(acc, 1.0 / p);
}

double ScaledCellRhs::sup() const {
    double m = 0.0;
    for (double v : r_) m = std::max(m, std::abs(t_ * v));
    return m;
}

EnergyModel::EnergyModel(GridPtr grid, OperatorSpec spec, const RhsEnv* rhs,
                         std::vector<double> boundary_data)
    : grid_(std::move(grid)), spec_(spec), rhs_(rhs), bdata_(std::move(boundary_data)) {
    spec_.require_valid();
    if (!bdata_.empty() && bdata_.size() != grid_->boundary_node.size())
        throw ValidationError("boundary data size does not match the boundary node count");
}

bool EnergyModel::eliminated(std::size_t node) const {
    return spec_.bc == BoundaryKind::Dirichlet && grid_->on_boundary[node];
}

double EnergyModel::node_value(const Field& u, std::size_t i) const {
    return eliminated(i) ? 0.0 : u[i];
}

double EnergyModel::energy(const Field& u) const {
    const Grid& g = *grid_;
    const double p = spec_.p;
    double E = 0.0;
    for (std::size_t ci = 0; ci < g.cell.size(); ++ci) {
        const auto& c = g.cell[ci];
        Vec grad{0.0, 0.0};
        double um = 0.0;
        for (int k = 0; k < c.n_node; ++k) {
            const double uk = node_value(u, c.node[k]);
            grad = grad + uk * c.grad_coeff[k];
            um += c.interp[k] * uk;
        }
        E += c.weight * (potential_G(grad, spec_) + (spec_.lambda / p) * std::pow(std::abs(um), p) -
                         rhs_->antiderivative(ci, um));
    }
    if (spec_.bc == BoundaryKind::Robin) {
        for (std::size_t b = 0; b < g.boundary_node.size(); ++b) {
            const double ub = u[g.boundary_node[b]];
            E += g.surface_weight[b] * (spec_.beta / p) * std::pow(std::abs(ub), p);
        }
    }
    if (!bdata_.empty() && spec_.bc != BoundaryKind::Dirichlet)
        for (std::size_t b = 0; b < g.boundary_node.size(); ++b)
            E -= g.surface_weight[b] * bdata_[b] * u[g.boundary_node[b]];
    return E;
}

Field EnergyModel::gradient(const Field& u) const {
    const Grid& g = *grid_;
    Field out(grid_, 0.0);
    for (std::size_t ci = 0; ci < g.cell.size(); ++ci) {
        const auto& c = g.cell[ci];
        Vec grad{0.0, 0.0};
        double um = 0.0;
        for (int k = 0; k < c.n_node; ++k) {
            const double uk = node_value(u, c.node[k]);
            grad = grad + uk * c.grad_coeff[k];
            um += c.interp[k] * uk;
        }
        const Vec a = a_map(grad, spec_);
        const double zo = c.weight * (spec_.lambda * sgn_pow(um, spec_.p - 1.0) - rhs_->value(ci, um));
        for (int k = 0; k < c.n_node; ++k)
            out[c.node[k]] += c.weight * dot(a, c.grad_coeff[k]) + zo * c.interp[k];
    }
    if (spec_.bc == BoundaryKind::Robin)
        for (std::size_t b = 0; b < g.boundary_node.size(); ++b) {
            const std::size_t id = g.boundary_node[b];
            out[id] += g.surface_weight[b] * spec_.beta * sgn_pow(u[id], spec_.p - 1.0);
        }
    if (!bdata_.empty() && spec_.bc != BoundaryKind::Dirichlet)
        for (std::size_t b = 0; b < g.boundary_node.size(); ++b)
            out[g.boundary_node[b]] -= g.surface_weight[b] * bdata_[b];
    if (spec_.bc == BoundaryKind::Dirichlet)
        for (std::size_t id : g.boundary_node) out[id] = 0.0;
    return out;
}

Field EnergyModel::pointwise_residual(const Field& u) const {
    Field g = gradient(u);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = eliminated(i) ? 0.0 : g[i] / grid_->node_volume[i];
    return g;
}

void EnergyModel::hessian(const Field& u, std::vector<Triplet>& out) const {
    const Grid& g = *grid_;
    out.clear();
    const double p = spec_.p;
    auto curvature = [&](double s) {
        // d/ds |s|^(p-2) s, regularized below p = 2
        if (p < 2.0) return (p - 1.0) * std::pow(s * s + eps_grad * eps_grad, (p - 2.0) / 2.0);
        return (p - 1.0) * std::pow(std::abs(s), p - 2.0);
    };
    for (std::size_t ci = 0; ci < g.cell.size(); ++ci) {
        const auto& c = g.cell[ci];
        Vec grad{0.0, 0.0};
        double um = 0.0;
        for (int k = 0; k < c.n_node; ++k) {
            const double uk = node_value(u, c.node[k]);
            grad = grad + uk * c.grad_coeff[k];
            um += c.interp[k] * uk;
        }
        const auto J = a_jacobian(grad, spec_);
        const double zo = c.weight * (spec_.lambda * curvature(um) - rhs_->value_ds(ci, um));
        for (int k = 0; k < c.n_node; ++k) {
            if (eliminated(c.node[k])) continue;
            for (int l = 0; l < c.n_node; ++l) {
                if (eliminated(c.node[l])) continue;
                const Vec& gk = c.grad_coeff[k];
                const Vec& gl = c.grad_coeff[l];
                const double JkJl = gk.x * (J[0] * gl.x + J[1] * gl.y) + gk.y * (J[2] * gl.x + J[3] * gl.y);
                out.push_back({c.node[k], c.node[l], c.weight * JkJl + zo * c.interp[k] * c.interp[l]});
            }
        }
    }
    if (spec_.bc == BoundaryKind::Robin)
        for (std::size_t b = 0; b < g.boundary_node.size(); ++b) {
            const std::size_t id = g.boundary_node[b];
            out.push_back({id, id, g.surface_weight[b] * spec_.beta * curvature(u[id])});
        }
    if (spec_.bc == BoundaryKind::Dirichlet)
        for (std::size_t id : g.boundary_node) out.push_back({id, id, 1.0});
}

double frozen_energy(const Field& u, const RhsEnv& rhs, const OperatorSpec& spec,
                     const std::vector<double>& boundary_data) {
    const double E = EnergyModel(u.grid_ptr(), spec, &rhs, boundary_data).energy(u);
    if (!std::isfinite(E)) throw NonFiniteEnergy("frozen energy is not finite at this iterate");
    return E;
}

Field energy_gradient(const Field& u, const RhsEnv& rhs, const OperatorSpec& spec,
                      const std::vector<double>& boundary_data) {
    Field g = EnergyModel(u.grid_ptr(), spec, &rhs, boundary_data).gradient(u);
    for (double v : g.values())
        if (!std::isfinite(v)) throw NonFiniteEnergy("energy gradient is not finite at this iterate");
    return g;
}

} // namespace squelp
