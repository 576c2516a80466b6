#pragma once

#include <functional>

#include "squelp/operators.hpp"
#include "squelp/reactions.hpp"

namespace squelp {

/// Scalar convective problem: -div a(grad u) + lambda |u|^{p-2}u = reaction,
/// with the boundary condition carried by op.bc.  `forcing` and
/// `boundary_data` are optional verification hooks (manufactured cases);
/// production runs leave them empty.
struct ScalarProblem {
    GridPtr grid;
    OperatorSpec op;
    ReactionSpec reaction;
    std::function<double(Vec)> forcing;            // added to the reaction, x only
    std::function<double(Vec, Vec)> boundary_data; // flux data b(x, outward normal)

    std::vector<double> boundary_values() const; // per boundary node, empty if none
};

/// Two-component Neumann system; each component carries a pure r-Laplacian
/// with the unit potential (lambda = 1).  grad_cap is the a priori gradient
/// bound M the outer iteration monitors.
struct SystemProblem {
    GridPtr grid;
    OperatorSpec op_u, op_v;
    ReactionSpec reaction; // arity System
    double grad_cap = 0.0;
};

struct SystemState {
    Field z1, z2; // frozen values
    Field w1, w2; // frozen gradients' carriers
};

} // namespace squelp
