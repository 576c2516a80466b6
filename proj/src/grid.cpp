#include "squelp/grid.hpp"

#include <algorithm>
#include <cmath>

namespace squelp {

double Grid::measure() const {
    return dimension == 1 ? hi.x - lo.x : (hi.x - lo.x) * (hi.y - lo.y);
}

double Grid::surface_measure() const {
    return dimension == 1 ? 2.0 : 2.0 * ((hi.x - lo.x) + (hi.y - lo.y));
}

namespace {

void check_partition(const Grid& g) {
    double vol = 0.0;
    for (double w : g.node_volume) vol += w;
    double cvol = 0.0;
    for (const auto& c : g.cell) cvol += c.weight;
    double surf = 0.0;
    for (double w : g.surface_weight) surf += w;
    const double m = g.measure();
    if (std::abs(vol - m) > 1e-12 * m || std::abs(cvol - m) > 1e-12 * m)
        throw Error("grid volume weights do not sum to the domain measure");
    if (std::abs(surf - g.surface_measure()) > 1e-12 * g.surface_measure())
        throw Error("grid surface weights do not sum to the boundary measure");
}

} // namespace

GridPtr build_interval_grid(double x0, double x1, std::size_t n_cells) {
    std::vector<std::string> bad;
    if (n_cells < 2) bad.push_back("n_cells must be at least 2");
    if (!(x1 > x0)) bad.push_back("interval extent must have positive measure");
    if (!bad.empty()) throw ValidationError(bad);

    auto g = std::make_shared<Grid>();
    g->dimension = 1;
    g->lo = {x0, 0.0};
    g->hi = {x1, 0.0};
    g->nx = n_cells;
    g->hx = (x1 - x0) / double(n_cells);

    const std::size_t n = n_cells;
    g->node.resize(n + 1);
    g->node_volume.resize(n + 1);
    g->dist_boundary.resize(n + 1);
    g->on_boundary.assign(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = x0 + (x1 - x0) * double(i) / double(n);
        g->node[i] = {x, 0.0};
        g->node_volume[i] = (i == 0 || i == n) ? g->hx / 2 : g->hx;
        g->dist_boundary[i] = std::min(x - x0, x1 - x);
    }
    g->on_boundary[0] = g->on_boundary[n] = 1;
    g->boundary_node = {0, n};
    g->boundary_normal = {{-1.0, 0.0}, {1.0, 0.0}};
    g->surface_weight = {1.0, 1.0};

    g->cell.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto& k = g->cell[c];
        k.node = {c, c + 1, 0};
        k.n_node = 2;
        k.center = {0.5 * (g->node[c].x + g->node[c + 1].x), 0.0};
        k.weight = g->hx;
        k.grad_coeff[0] = {-1.0 / g->hx, 0.0};
        k.grad_coeff[1] = {1.0 / g->hx, 0.0};
        k.interp = {0.5, 0.5, 0.0};
    }
    check_partition(*g);
    return g;
}

GridPtr build_rectangle_grid(Vec lo, Vec hi, std::size_t nx_cells, std::size_t ny_cells) {
    std::vector<std::string> bad;
    if (nx_cells < 2 || ny_cells < 2) bad.push_back("n_cells must be at least 2 along each axis");
    if (!(hi.x > lo.x) || !(hi.y > lo.y)) bad.push_back("rectangle extent must have positive measure");
    if (!bad.empty()) throw ValidationError(bad);

    auto g = std::make_shared<Grid>();
    g->dimension = 2;
    g->lo = lo;
    g->hi = hi;
    g->nx = nx_cells;
    g->ny = ny_cells;
    g->hx = (hi.x - lo.x) / double(nx_cells);
    g->hy = (hi.y - lo.y) / double(ny_cells);

    const std::size_t nn = (nx_cells + 1) * (ny_cells + 1);
    g->node.resize(nn);
    g->node_volume.resize(nn);
    g->dist_boundary.resize(nn);
    g->on_boundary.assign(nn, 0);
    for (std::size_t j = 0; j <= ny_cells; ++j) {
        for (std::size_t i = 0; i <= nx_cells; ++i) {
            const std::size_t id = g->index(i, j);
            const double x = lo.x + (hi.x - lo.x) * double(i) / double(nx_cells);
            const double y = lo.y + (hi.y - lo.y) * double(j) / double(ny_cells);
            g->node[id] = {x, y};
            const double wx = (i == 0 || i == nx_cells) ? g->hx / 2 : g->hx;
            const double wy = (j == 0 || j == ny_cells) ? g->hy / 2 : g->hy;
            g->node_volume[id] = wx * wy;
            g->dist_boundary[id] = std::min(std::min(x - lo.x, hi.x - x), std::min(y - lo.y, hi.y - y));
            if (i == 0 || i == nx_cells || j == 0 || j == ny_cells) g->on_boundary[id] = 1;
        }
    }

    for (std::size_t j = 0; j <= ny_cells; ++j) {
        for (std::size_t i = 0; i <= nx_cells; ++i) {
            const std::size_t id = g->index(i, j);
            if (!g->on_boundary[id]) continue;
            Vec n{0.0, 0.0};
            double w = 0.0;
            if (i == 0) n.x -= 1.0;
            if (i == nx_cells) n.x += 1.0;
            if (j == 0) n.y -= 1.0;
            if (j == ny_cells) n.y += 1.0;
            const bool corner_x = (i == 0 || i == nx_cells);
            const bool corner_y = (j == 0 || j == ny_cells);
            if (corner_x) w += (j == 0 || j == ny_cells) ? g->hy / 2 : g->hy;
            if (corner_y) w += (i == 0 || i == nx_cells) ? g->hx / 2 : g->hx;
            const double len = norm(n);
            g->boundary_node.push_back(id);
            g->boundary_normal.push_back((1.0 / len) * n);
            g->surface_weight.push_back(w);
        }
    }

    // each rectangle splits along its main diagonal into two P1 triangles;
    // centroid quadrature is exact for the piecewise-linear interpolant
    g->cell.reserve(2 * nx_cells * ny_cells);
    const double tw = g->hx * g->hy / 2.0;
    for (std::size_t j = 0; j < ny_cells; ++j) {
        for (std::size_t i = 0; i < nx_cells; ++i) {
            const std::size_t a = g->index(i, j), b = g->index(i + 1, j);
            const std::size_t c = g->index(i, j + 1), d = g->index(i + 1, j + 1);
            Grid::Cell ka;
            ka.node = {a, b, c};
            ka.n_node = 3;
            ka.center = {(g->node[a].x + g->node[b].x + g->node[c].x) / 3.0,
                         (g->node[a].y + g->node[b].y + g->node[c].y) / 3.0};
            ka.weight = tw;
            ka.grad_coeff[0] = {-1.0 / g->hx, -1.0 / g->hy};
            ka.grad_coeff[1] = {1.0 / g->hx, 0.0};
            ka.grad_coeff[2] = {0.0, 1.0 / g->hy};
            ka.interp = {1.0 / 3, 1.0 / 3, 1.0 / 3};
            g->cell.push_back(ka);

            Grid::Cell kb;
            kb.node = {d, c, b};
            kb.n_node = 3;
            kb.center = {(g->node[d].x + g->node[c].x + g->node[b].x) / 3.0,
                         (g->node[d].y + g->node[c].y + g->node[b].y) / 3.0};
            kb.weight = tw;
            kb.grad_coeff[0] = {1.0 / g->hx, 1.0 / g->hy};
            kb.grad_coeff[1] = {-1.0 / g->hx, 0.0};
            kb.grad_coeff[2] = {0.0, -1.0 / g->hy};
            kb.interp = {1.0 / 3, 1.0 / 3, 1.0 / 3};
            g->cell.push_back(kb);
        }
    }
    check_partition(*g);
    return g;
}

double Field::min() const {
    double m = v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
}

double Field::max() const {
    double m = v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
}

namespace {

// derivative along one grid line: central inside, shifted three-point at the ends
double deriv_line(const Field& u, std::size_t i, std::size_t n, double h, auto at) {
    if (i == 0) return (-3 * u[at(0)] + 4 * u[at(1)] - u[at(2)]) / (2 * h);
    if (i == n) return (3 * u[at(n)] - 4 * u[at(n - 1)] + u[at(n - 2)]) / (2 * h);
    return (u[at(i + 1)] - u[at(i - 1)]) / (2 * h);
}

} // namespace

VectorField discrete_gradient(const Field& u) {
    const Grid& g = u.grid();
    VectorField out{u.grid_ptr(), std::vector<Vec>(g.node_count())};
    if (g.dimension == 1) {
        for (std::size_t i = 0; i <= g.nx; ++i)
            out.v[i] = {deriv_line(u, i, g.nx, g.hx, [](std::size_t k) { return k; }), 0.0};
        return out;
    }
    for (std::size_t j = 0; j <= g.ny; ++j) {
        for (std::size_t i = 0; i <= g.nx; ++i) {
            const double dx = deriv_line(u, i, g.nx, g.hx, [&](std::size_t k) { return g.index(k, j); });
            const double dy = deriv_line(u, j, g.ny, g.hy, [&](std::size_t k) { return g.index(i, k); });
            out.v[g.index(i, j)] = {dx, dy};
        }
    }
    return out;
}

double integrate_volume(const Field& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) s += g.node_volume[i] * f[i];
    return s;
}

double integrate_surface(const Field& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (std::size_t b = 0; b < g.boundary_node.size(); ++b) s += g.surface_weight[b] * f[g.boundary_node[b]];
    return s;
}

double inf_norm(const Field& u) {
    double m = 0.0;
    for (double x : u.values()) m = std::max(m, std::abs(x));
    return m;
}

double inf_dist(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double grad_inf_norm(const Field& u) {
    const VectorField g = discrete_gradient(u);
    double m = 0.0;
    for (const Vec& v : g.v) m = std::max(m, norm(v));
    return m;
}

} // namespace squelp
