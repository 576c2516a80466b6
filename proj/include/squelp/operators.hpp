#pragma once

#include <array>
#include <string>
#include <vector>

#include "squelp/grid.hpp"

namespace squelp {

enum class OperatorKind { PureR, PQSum };
enum class BoundaryKind { Robin, Neumann, Dirichlet };

/// Leading quasilinear operator plus the lower-order data that enters the
/// energy: -div a(grad u) + lambda |u|^(p-2) u with the boundary condition
/// attached.  PureR: a(xi) = |xi|^(p-2) xi.  PQSum: the p- and q-fluxes added,
/// 1 < q < p.
struct OperatorSpec {
    OperatorKind kind = OperatorKind::PureR;
    double p = 2.0;
    double q = 0.0; // PQSum only
    double lambda = 0.0;
    double beta = 0.0; // Robin boundary weight
    BoundaryKind bc = BoundaryKind::Robin;

    std::vector<std::string> validate() const;
    void require_valid() const; // throws ValidationError
};

/// sign(s) |s|^e, with 0^e = 0 for e > 0 and 0^0 = 0 (odd extension).
double sgn_pow(double s, double e);

Vec a_map(Vec xi, const OperatorSpec& spec);
double potential_G(Vec xi, const OperatorSpec& spec);

/// 2x2 Jacobian of a at xi, row-major.  Exponents below 2 are regularized
/// near xi = 0 so Newton assembly stays finite.
std::array<double, 4> a_jacobian(Vec xi, const OperatorSpec& spec);

/// The norm the existence machinery works in.  Robin:
/// (p int G(grad u) + beta int_bdy |u|^p)^{1/p}; Neumann-with-potential:
/// (int |grad u|^p + int |u|^p)^{1/p}; Dirichlet: (p int G(grad u))^{1/p}.
double custom_norm(const Field& u, const OperatorSpec& spec);

/// Reaction data sampled at the grid's quadrature cells.  `antiderivative` is
/// the integral of `value` in s from the natural base point (0 for regular
/// parts, the truncation floor for singular parts), so d/ds antiderivative ==
/// value wherever value is continuous.
class RhsEnv {
  public:
    virtual ~RhsEnv() = default;
    virtual double value(std::size_t cell, double s) const = 0;
    virtual double value_ds(std::size_t cell, double s) const = 0;
    virtual double antiderivative(std::size_t cell, double s) const = 0;
};

class ZeroRhs final : public RhsEnv {
  public:
    double value(std::size_t, double) const override { return 0.0; }
    double value_ds(std::size_t, double) const override { return 0.0; }
    double antiderivative(std::size_t, double) const override { return 0.0; }
};

/// Fixed per-cell values scaled by a constant (used by the gradient-bound
/// probes, which re-solve against t * rhs).
class ScaledCellRhs final : public RhsEnv {
  public:
    ScaledCellRhs(std::vector<double> cell_values, double scale = 1.0)
        : r_(std::move(cell_values)), t_(scale) {}
    double value(std::size_t c, double) const override { return t_ * r_[c]; }
    double value_ds(std::size_t, double) const override { return 0.0; }
    double antiderivative(std::size_t c, double s) const override { return t_ * r_[c] * s; }
    double sup() const;

  private:
    std::vector<double> r_;
    double t_;
};

struct Triplet {
    std::size_t row, col;
    double val;
};

/// Discrete energy of a frozen problem,
///   J(u) = int G(grad u) + (lambda/p) int |u|^p - int H(x, u)
///          + (beta/p) int_bdy |u|^p - int_bdy b u,
/// where H is the rhs antiderivative.  Gradient/potential terms are assembled
/// per quadrature cell; the zero-order terms are sampled at cell centers.
/// Dirichlet eliminates boundary nodes against a zero trace: their values are
/// read as 0 and their gradient rows are cleared.
class EnergyModel {
  public:
    EnergyModel(GridPtr grid, OperatorSpec spec, const RhsEnv* rhs,
                std::vector<double> boundary_data = {});

    /// May return +-inf on a bad iterate; use frozen_energy for throwing behavior.
    double energy(const Field& u) const;
    Field gradient(const Field& u) const;
    /// gradient divided by the nodal volume weight; 0 on eliminated rows
    Field pointwise_residual(const Field& u) const;
    void hessian(const Field& u, std::vector<Triplet>& out) const;

    bool eliminated(std::size_t node) const;
    const OperatorSpec& spec() const { return spec_; }
    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

  private:
    double node_value(const Field& u, std::size_t i) const;

    GridPtr grid_;
    OperatorSpec spec_;
    const RhsEnv* rhs_;
    std::vector<double> bdata_; // per boundary_node entry; empty = homogeneous
};

/// Throwing wrappers around EnergyModel for one-off evaluations.
double frozen_energy(const Field& u, const RhsEnv& rhs, const OperatorSpec& spec,
                     const std::vector<double>& boundary_data = {});
Field energy_gradient(const Field& u, const RhsEnv& rhs, const OperatorSpec& spec,
                      const std::vector<double>& boundary_data = {});

} // namespace squelp
