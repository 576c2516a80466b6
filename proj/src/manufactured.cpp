#include "squelp/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "squelp/errors.hpp"

namespace squelp {

struct Expr::Node {
    enum Kind { Const, Var, Add, Sub, Mul, Pow, Sin, Cos, Sinh, Cosh } kind = Const;
    double c = 0.0;
    int k = 0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

NodePtr const_node(double c) {
    Expr::Node n;
    n.kind = Expr::Node::Const;
    n.c = c;
    return make(n);
}

NodePtr unary_node(Expr::Node::Kind kind, NodePtr a) {
    Expr::Node n;
    n.kind = kind;
    n.a = std::move(a);
    return make(n);
}

NodePtr binary_node(Expr::Node::Kind kind, NodePtr a, NodePtr b) {
    Expr::Node n;
    n.kind = kind;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(n);
}

NodePtr pow_node(NodePtr a, int k) {
    Expr::Node n;
    n.kind = Expr::Node::Pow;
    n.k = k;
    n.a = std::move(a);
    return make(n);
}

double eval_node(const Expr::Node& n, double x) {
    switch (n.kind) {
    case Expr::Node::Const: return n.c;
    case Expr::Node::Var: return x;
    case Expr::Node::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Expr::Node::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Expr::Node::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Expr::Node::Pow: return std::pow(eval_node(*n.a, x), n.k);
    case Expr::Node::Sin: return std::sin(eval_node(*n.a, x));
    case Expr::Node::Cos: return std::cos(eval_node(*n.a, x));
    case Expr::Node::Sinh: return std::sinh(eval_node(*n.a, x));
    case Expr::Node::Cosh: return std::cosh(eval_node(*n.a, x));
    }
    return 0.0;
}

NodePtr mul_node(NodePtr a, NodePtr b) { return binary_node(Expr::Node::Mul, std::move(a), std::move(b)); }

NodePtr diff_node(const NodePtr& n) {
    switch (n->kind) {
    case Expr::Node::Const: return const_node(0.0);
    case Expr::Node::Var: return const_node(1.0);
    case Expr::Node::Add: return binary_node(Expr::Node::Add, diff_node(n->a), diff_node(n->b));
    case Expr::Node::Sub: return binary_node(Expr::Node::Sub, diff_node(n->a), diff_node(n->b));
    case Expr::Node::Mul:
        return binary_node(Expr::Node::Add, mul_node(diff_node(n->a), n->b),
                           mul_node(n->a, diff_node(n->b)));
    case Expr::Node::Pow: {
        if (n->k == 0) return const_node(0.0);
        auto scaled = mul_node(const_node(double(n->k)), pow_node(n->a, n->k - 1));
        return mul_node(std::move(scaled), diff_node(n->a));
    }
    case Expr::Node::Sin: return mul_node(unary_node(Expr::Node::Cos, n->a), diff_node(n->a));
    case Expr::Node::Cos:
        return mul_node(mul_node(const_node(-1.0), unary_node(Expr::Node::Sin, n->a)), diff_node(n->a));
    case Expr::Node::Sinh: return mul_node(unary_node(Expr::Node::Cosh, n->a), diff_node(n->a));
    case Expr::Node::Cosh: return mul_node(unary_node(Expr::Node::Sinh, n->a), diff_node(n->a));
    }
    return const_node(0.0);
}

} // namespace

Expr::Expr() : n_(const_node(0.0)) {}
Expr Expr::constant(double c) { return Expr(const_node(c)); }
Expr Expr::var() {
    Node n;
    n.kind = Node::Var;
    return Expr(make(n));
}
Expr Expr::operator+(const Expr& o) const { return Expr(binary_node(Node::Add, n_, o.n_)); }
Expr Expr::operator-(const Expr& o) const { return Expr(binary_node(Node::Sub, n_, o.n_)); }
Expr Expr::operator*(const Expr& o) const { return Expr(binary_node(Node::Mul, n_, o.n_)); }
Expr Expr::pow(int k) const { return Expr(pow_node(n_, k)); }
Expr Expr::sin(const Expr& a) { return Expr(unary_node(Node::Sin, a.n_)); }
Expr Expr::cos(const Expr& a) { return Expr(unary_node(Node::Cos, a.n_)); }
Expr Expr::sinh(const Expr& a) { return Expr(unary_node(Node::Sinh, a.n_)); }
Expr Expr::cosh(const Expr& a) { return Expr(unary_node(Node::Cosh, a.n_)); }
Expr Expr::derivative() const { return Expr(diff_node(n_)); }
double Expr::operator()(double x) const { return eval_node(*n_, x); }

ManufacturedCase ManufacturedCase::two_plus_sin() {
    Expr u = Expr::constant(2.0) + Expr::sin(Expr::constant(std::numbers::pi) * Expr::var());
    return {"two_plus_sin", u, u.derivative(), u.derivative().derivative()};
}

ManufacturedCase ManufacturedCase::two_plus_bump() {
    Expr x = Expr::var();
    Expr u = Expr::constant(2.0) + x.pow(2) * (Expr::constant(1.0) - x).pow(2);
    return {"two_plus_bump", u, u.derivative(), u.derivative().derivative()};
}

ManufacturedCase ManufacturedCase::constant(double c) {
    Expr u = Expr::constant(c);
    return {"constant", u, u.derivative(), u.derivative().derivative()};
}

ManufacturedCase ManufacturedCase::by_name(const std::string& name) {
    if (name == "two_plus_sin") return two_plus_sin();
    if (name == "two_plus_bump") return two_plus_bump();
    if (name == "constant") return constant(2.0);
    throw ValidationError("unknown reference solution '" + name + "'");
}

ScalarProblem manufactured_problem(GridPtr grid, const ManufacturedCase& mc, OperatorSpec op,
                                   double convection) {
    op.require_valid();
    if (grid->dimension != 1)
        throw ValidationError("reference problems are one-dimensional");

    ReactionSpec reaction;
    reaction.arity = Arity::Scalar;
    if (convection != 0.0) {
        Term t;
        t.coeff = convection;
        t.xi1_exp = op.p - 1.0;
        reaction.terms.push_back(t);
        reaction.require_valid();
    }

    // -d/dx a(u') for a(s) = |s|^{p-2}s is -(p-1)|u'|^{p-2}u''; the q-part of
    // a sum operator contributes the analogous term.
    auto divergence_part = [op](double x, const ManufacturedCase& c) {
        const double d = c.du(x), dd = c.d2u(x);
        double out = -(op.p - 1.0) * std::pow(std::abs(d), op.p - 2.0) * dd;
        if (op.kind == OperatorKind::PQSum)
            out += -(op.q - 1.0) * std::pow(std::abs(d), op.q - 2.0) * dd;
        return out;
    };

    ScalarProblem prob;
    prob.grid = std::move(grid);
    prob.op = op;
    prob.reaction = reaction;
    prob.forcing = [mc, op, convection, divergence_part](Vec x) {
        double f = divergence_part(x.x, mc);
        f += op.lambda * sgn_pow(mc.u(x.x), op.p - 1.0);
        f -= convection * std::pow(std::abs(mc.du(x.x)), op.p - 1.0);
        return f;
    };
    if (op.bc != BoundaryKind::Dirichlet) {
        prob.boundary_data = [mc, op](Vec x, Vec n) {
            double b = dot(a_map({mc.du(x.x), 0.0}, op), n);
            if (op.bc == BoundaryKind::Robin) b += op.beta * sgn_pow(mc.u(x.x), op.p - 1.0);
            return b;
        };
    }
    return prob;
}

Bracket reference_bracket(const ScalarProblem& prob, const ManufacturedCase& mc) {
    Field sub = Field::from_fn(prob.grid, [&](Vec x) { return mc.exact(x.x) - 1.0; });
    const ResidualCheck chk = subsolution_check(prob, sub);
    if (!chk.ok)
        throw NotASubsolution("reference offset u*-1 rejected by the residual check",
                              chk.worst_node, chk.margin);
    Bracket b;
    b.sub = std::move(sub);
    b.tag = BracketTag::Constant;
    return b;
}

} // namespace squelp
