#include "squelp/problem.hpp"

namespace squelp {

std::vector<double> ScalarProblem::boundary_values() const {
    if (!boundary_data) return {};
    std::vector<double> out(grid->boundary_node.size());
    for (std::size_t b = 0; b < out.size(); ++b)
        out[b] = boundary_data(grid->node[grid->boundary_node[b]], grid->boundary_normal[b]);
    return out;
}

} // namespace squelp
