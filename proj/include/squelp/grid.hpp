#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "squelp/errors.hpp"

namespace squelp {

struct Vec {
    double x = 0.0;
    double y = 0.0;
};

inline Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
inline Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
inline Vec operator*(double t, Vec a) { return {t * a.x, t * a.y}; }
inline double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec a) { return std::sqrt(dot(a, a)); }

/// Uniform vertex-centered grid on an interval (1D) or axis-aligned rectangle
/// (2D).  Quadrature cells carry everything the energy assembly needs: linear
/// interpolation weights and gradient coefficients for their corner nodes and
/// a volume weight.  1D cells are intervals sampled at the midpoint; 2D cells
/// are the two triangles of each rectangle, sampled at the centroid.
class Grid {
  public:
    struct Cell {
        std::array<std::size_t, 3> node{};
        int n_node = 0;
        Vec center;
        double weight = 0.0;
        std::array<Vec, 3> grad_coeff{};
        std::array<double, 3> interp{};
    };

    int dimension = 1;
    Vec lo, hi;
    std::size_t nx = 0, ny = 0; // cells per axis
    double hx = 0.0, hy = 0.0;

    std::vector<Vec> node;
    std::vector<double> node_volume;   // trapezoid weights, sums to measure()
    std::vector<double> dist_boundary; // exact distance to the boundary
    std::vector<std::uint8_t> on_boundary;

    std::vector<std::size_t> boundary_node; // in node-index order
    std::vector<Vec> boundary_normal;       // unit outward (averaged at corners)
    std::vector<double> surface_weight;     // sums to surface_measure()

    std::vector<Cell> cell;

    std::size_t node_count() const { return node.size(); }
    std::size_t index(std::size_t i, std::size_t j = 0) const { return j * (nx + 1) + i; }
    double measure() const;
    double surface_measure() const;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_interval_grid(double x0, double x1, std::size_t n_cells);
GridPtr build_rectangle_grid(Vec lo, Vec hi, std::size_t nx_cells, std::size_t ny_cells);

/// Nodal scalar field.
class Field {
  public:
    Field() = default;
    explicit Field(GridPtr g, double fill = 0.0) : grid_(std::move(g)), v_(grid_->node_count(), fill) {}

    template <class Fn>
    static Field from_fn(GridPtr g, Fn&& f) {
        Field u(g);
        for (std::size_t i = 0; i < u.size(); ++i) u.v_[i] = f(g->node[i]);
        return u;
    }

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::span<const double> values() const { return v_; }
    std::vector<double>& raw() { return v_; }

    double min() const;
    double max() const;

  private:
    GridPtr grid_;
    std::vector<double> v_;
};

struct VectorField {
    GridPtr grid;
    std::vector<Vec> v;
};

/// Second-order nodal gradient: central differences inside, one-sided
/// three-point stencils on the boundary, per axis.
VectorField discrete_gradient(const Field& u);

double integrate_volume(const Field& f);  // trapezoid nodal weights
double integrate_surface(const Field& f); // values at boundary nodes

double inf_norm(const Field& u);
double inf_dist(const Field& a, const Field& b);
double grad_inf_norm(const Field& u); // max nodal |grad u|

} // namespace squelp
