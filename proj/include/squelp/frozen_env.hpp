#pragma once

#include "squelp/problem.hpp"

namespace squelp {

/// Right-hand side of the scalar auxiliary problem with the gradient argument
/// frozen at w:
///   r(x, s) = f-part(x, s, |grad w(x)|) + g-part(x, max(s, floor(x)) + shift)
///             + forcing(x).
/// Only the gradient is frozen; the s-dependence stays live so the inner
/// minimization sees the full nonlinearity.  `floor` is the subsolution the
/// singular part is truncated against (nullptr = truncate at 0, used by the
/// epsilon-shift path and by raw residual checks).
class FrozenScalarRhs final : public RhsEnv {
  public:
    FrozenScalarRhs(const ScalarProblem& prob, const Field& w, const Field* floor);

    double value(std::size_t cell, double s) const override;
    double value_ds(std::size_t cell, double s) const override;
    double antiderivative(std::size_t cell, double s) const override;

    /// sup over cells of |r(x, u(x))| (non-finite samples skipped)
    double sup_at(const Field& u) const;

  private:
    struct TermCache {
        Term term;
        std::vector<double> c0; // coeff * profile * frozen gradient factors, per cell
    };
    std::vector<TermCache> regular_, singular_;
    std::vector<double> floor_, forcing_;
    double shift_ = 0.0;
};

/// Fully frozen rhs of one system component:
///   r(x) = component reaction at (z1, z2, |grad w1|, |grad w2|) + z^{r-1}
/// where z is the component's own frozen value and r its exponent.  Linear in
/// s by construction, so value_ds = 0.
class FrozenSystemRhs final : public RhsEnv {
  public:
    FrozenSystemRhs(const SystemProblem& prob, const SystemState& state, int component);

    double value(std::size_t cell, double) const override { return r_[cell]; }
    double value_ds(std::size_t, double) const override { return 0.0; }
    double antiderivative(std::size_t cell, double s) const override { return r_[cell] * s; }

    double sup() const;

  private:
    std::vector<double> r_;
};

/// Tabulate any rhs env along a field, one value per cell (feeds the
/// gradient-bound probes).
std::vector<double> freeze_rhs_values(const RhsEnv& env, const Field& u);

} // namespace squelp
