#pragma once

#include <string>
#include <vector>

#include "squelp/bracket.hpp"
#include "squelp/fixed_point.hpp"
#include "squelp/problem.hpp"

namespace squelp {

struct GridConfig {
    int dimension = 1;
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
    std::size_t nx = 64, ny = 8;
};

enum class BracketMode { Constant, Distance };

struct BracketConfig {
    BracketMode mode = BracketMode::Distance;
    double k0 = 1.0;          // distance-based initial slope
    double level = 0.5;       // constant subsolution level (first component)
    double level2 = 0.5;      // second system component
    bool build_super = false; // scalar: also search a constant supersolution
    double super_start = 1.0; // doubling search origin
};

enum class ExperimentKind { None, Convergence, Uniqueness, Multiplicity, Compare, Audit };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::None;
    std::vector<std::size_t> levels{32, 64};             // convergence grids
    std::string reference = "two_plus_sin";              // manufactured case
    double convection = 0.0;                             // coefficient of |xi|^{p-1}
    std::vector<double> eps_schedule{1e-1, 1e-2, 1e-3, 1e-4};
    int ladder_pairs = 3;                                // multiplicity bracket count
    double uniqueness_tol = 1e-6;
};

struct RunConfig {
    GridConfig grid;
    Arity arity = Arity::Scalar;
    OperatorSpec op;  // scalar operator; for systems the u-component (p)
    double q_exp = 2.0; // v-component exponent for systems
    ReactionSpec reaction;
    BracketConfig bracket;
    FixedPointOptions solver;
    ExperimentConfig experiment;
    std::string out_dir = "out";
    std::vector<std::string> warnings; // non-fatal findings from parsing

    GridPtr build_grid() const;
    ScalarProblem scalar_problem(GridPtr g) const;
    SystemProblem system_problem(GridPtr g) const;
    Bracket build_bracket(const ScalarProblem& prob) const;

    std::string serialize() const; // canonical form; parse(serialize(c)) == c
};

/// Strict sectioned key=value parser.  Unknown sections/keys and malformed
/// values raise ParseError with the line number; semantic violations are
/// collected and raised together as one ValidationError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace squelp
