#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "squelp/grid.hpp"

namespace squelp {

enum class Arity { Scalar, System };
enum class Profile { Uniform, Sin2PiX, RampX };
enum class Modulator { None, SinS, CosT };

/// One product term of a reaction:
///   coeff * profile(x) * mod * s^{s_exp} * t^{t_exp} * |xi1|^{xi1_exp} * |xi2|^{xi2_exp}.
/// A negative s_exp (or t_exp) makes the term singular; positive powers use
/// the max(.,0) extension.  The desingularization shift is applied to all
/// s-dependence of singular-in-s terms (and t-dependence of singular-in-t
/// terms), modulator included.
struct Term {
    double coeff = 1.0;
    Profile profile = Profile::Uniform;
    Modulator mod = Modulator::None;
    double omega = 1.0;
    double s_exp = 0.0;
    double t_exp = 0.0;
    double xi1_exp = 0.0;
    double xi2_exp = 0.0;

    bool singular_s() const { return s_exp < 0.0; }
    bool singular_t() const { return t_exp < 0.0; }
    bool convective() const { return xi1_exp != 0.0 || xi2_exp != 0.0; }
};

double profile_value(Profile pr, Vec x);

/// Declared hypotheses attached to the singular part.
struct SingularMeta {
    bool monotone_decreasing = false;
    bool singular_limit = false; // value -> +inf as s -> 0+
    double growth_C = 0.0;       // bound value <= C s^{-growth_gamma} on (0,1]
    double growth_gamma = 0.0;
};

/// Exponent bookkeeping for the system hypotheses; NaN = undeclared.
struct ChainParams {
    double alpha1 = NAN, beta1 = NAN, gamma1 = NAN, delta1 = NAN;
    double alpha2 = NAN, beta2 = NAN, gamma2 = NAN, delta2 = NAN;
    double eta = NAN;
    bool complete() const;
};

struct ReactionSpec {
    Arity arity = Arity::Scalar;
    std::vector<Term> terms;  // scalar reaction, or first system component
    std::vector<Term> terms2; // second system component
    ChainParams chain;
    SingularMeta meta;
    double shift = 0.0; // epsilon of the desingularized variant

    std::vector<std::string> validate() const;
    void require_valid() const;
    bool has_singular() const;
    std::vector<Term> singular_part() const; // terms with s_exp < 0
    std::vector<Term> regular_part() const;
};

/// Throwing evaluation at a point; SingularDomain if a singular factor would
/// see a non-positive argument (after the shift).
double eval_reaction(const ReactionSpec& spec, Vec x, double s, Vec xi1);
std::pair<double, double> eval_reaction_system(const ReactionSpec& spec, Vec x, double s, double t,
                                               Vec xi1, Vec xi2);

/// Copy with the desingularization shift increased by eps.
ReactionSpec shift_reaction(const ReactionSpec& spec, double eps);

/// s-dependent factor of a term (modulator and s-power; shift folded in by
/// the caller via the argument).  Negative exponents clamp the base at 0 and
/// let IEEE produce +inf; positive exponents use max(s, 0).
double term_sfactor(const Term& t, double s);
double term_sfactor_deriv(const Term& t, double s);
/// integral of term_sfactor over [a, b]; closed form for pure powers and pure
/// modulators, 32-point Gauss-Legendre otherwise
double term_sfactor_antiderivative(const Term& t, double a, double b);

struct Witness {
    Vec x;
    double s = 0.0;
    double value = 0.0;
    double bound = 0.0;
};

struct Certificate {
    bool ok = true;
    std::vector<Witness> witnesses; // sampled violations, at most 8
    std::string note;
};

/// Checks value(x, s) <= C s^{-gamma} for the singular part over cell centers
/// and 64 log-spaced s in (1e-6, 1].
Certificate check_growth(const ReactionSpec& spec, const Grid& g, double C, double gamma,
                         std::size_t n_s = 64);
/// Checks the singular part is non-increasing in s on (0, 1] (tolerance 1e-12)
/// and does not vanish identically at s = 1.
Certificate check_monotone_decreasing(const ReactionSpec& spec, const Grid& g, std::size_t n_s = 64);
/// Strict chains max{gamma1, delta1} < beta1 - alpha1 < p - 1 and
/// max{gamma2, delta2} < alpha2 - beta2 < q - 1.
bool check_parameter_chain(const ReactionSpec& spec, double p, double q);

} // namespace squelp
