#pragma once

#include <memory>
#include <string>

#include "squelp/bracket.hpp"
#include "squelp/problem.hpp"

namespace squelp {

/// Tiny closed-form expression tree in one variable with exact symbolic
/// differentiation — keeps manufactured forcing terms free of numerical
/// differentiation error.
class Expr {
  public:
    Expr(); // zero
    static Expr constant(double c);
    static Expr var();

    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator*(const Expr& o) const;
    Expr pow(int k) const;
    static Expr sin(const Expr& a);
    static Expr cos(const Expr& a);
    static Expr sinh(const Expr& a);
    static Expr cosh(const Expr& a);

    Expr derivative() const;
    double operator()(double x) const;

    struct Node; // defined in the implementation file

  private:
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

/// One-dimensional reference solution with its first two derivatives.
struct ManufacturedCase {
    std::string name;
    Expr u, du, d2u;

    double exact(double x) const { return u(x); }

    static ManufacturedCase two_plus_sin();        // 2 + sin(pi x)
    static ManufacturedCase two_plus_bump();       // 2 + x^2 (1-x)^2, flat ends
    static ManufacturedCase constant(double c);
    static ManufacturedCase by_name(const std::string& name);
};

/// Attach symbolically derived forcing and boundary data so that u* solves
/// the discrete problem's continuum limit:
///   forcing = -d/dx a(u*') + lambda |u*|^{p-2}u* - convection |u*'|^{p-1},
///   boundary = a(u*') n (+ beta |u*|^{p-2}u* for Robin).
/// The convective reaction term convection*|xi|^{p-1} is added to the
/// reaction so the full freeze loop is exercised.  1D grids only.
ScalarProblem manufactured_problem(GridPtr grid, const ManufacturedCase& mc, OperatorSpec op,
                                   double convection);

/// Bracket floor for a manufactured run: sub = u* - 1.  Because the forcing
/// makes u* an exact discrete-limit solution, shifting it down by one leaves
/// a residual surplus of order lambda (or beta on the boundary) that dwarfs
/// the O(h^2) discretization error, so the check accepts it at every
/// resolution.  Throws NotASubsolution if the candidate fails the check.
Bracket reference_bracket(const ScalarProblem& prob, const ManufacturedCase& mc);

} // namespace squelp
