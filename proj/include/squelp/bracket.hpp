#pragma once

#include <optional>

#include "squelp/frozen_env.hpp"
#include "squelp/problem.hpp"

namespace squelp {

enum class BracketTag { Constant, DistanceBased, Shifted };

/// Ordered pair enclosing the solutions the fixed point is allowed to select.
/// sub is strictly positive on interior nodes; super, when present, dominates
/// sub with strict inequality somewhere.
struct Bracket {
    Field sub;
    std::optional<Field> super;
    BracketTag tag = BracketTag::Constant;
    double k = 0.0;     // distance-based slope
    double level = 0.0; // constant level
    double eps = 0.0;   // shift parameter when tag == Shifted
};

/// Discrete residual sign check.  Convention: nonpositive pointwise residual
/// of the frozen problem (gradient frozen at the candidate itself, no
/// truncation) means subsolution; margin is the worst signed residual.
struct ResidualCheck {
    bool ok = false;
    std::size_t worst_node = 0;
    double margin = 0.0;
    double tol = 0.0;
};

ResidualCheck subsolution_check(const ScalarProblem& prob, const Field& cand);
ResidualCheck supersolution_check(const ScalarProblem& prob, const Field& cand);

/// sub = c for a Neumann problem; throws NotASubsolution when the residual
/// check rejects.
Bracket constant_subsolution(const ScalarProblem& prob, double c);

/// sub = k dist(., boundary) for Robin/Dirichlet, halving k up to 20 times
/// until the residual check accepts.
Bracket distance_subsolution(const ScalarProblem& prob, double k = 1.0);

/// Smallest accepted doubling 2^j * start passing the supersolution check.
double constant_supersolution_level(const ScalarProblem& prob, double start = 1.0,
                                    int max_doublings = 40);

/// Componentwise constant brackets for the system: subs at the given levels,
/// supers by doubling, all four residual checks re-verified against both
/// companion levels.
std::pair<Bracket, Bracket> system_constant_brackets(const SystemProblem& prob, double level_u,
                                                     double level_v, double super_start = 1.0);

/// Residual of a constant candidate in one system component with the
/// companion held at t_ref.
ResidualCheck system_constant_check(const SystemProblem& prob, int component, double c,
                                    double companion, bool as_super);

/// T(u) = max{u, sub} nodewise.
Field truncate(const Field& u, const Bracket& bracket);

struct HardyCertificate {
    struct Entry {
        double numerator = 0.0, denominator = 0.0, ratio = 0.0;
        bool skipped = false;
    };
    std::vector<Entry> entries;
    double max_ratio = 0.0;
    bool all_finite = true;
};

/// Empirical Hardy-Sobolev summability ratios R(phi) =
/// int u^{-gamma}|phi| / int |grad phi|^p for test functions vanishing on the
/// boundary; throws if u fails the k_lower distance bound.
HardyCertificate hardy_sobolev_check(const Field& u, double gamma, double p,
                                     const std::vector<Field>& phi_set, double k_lower);

} // namespace squelp
