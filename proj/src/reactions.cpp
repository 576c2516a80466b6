#include "squelp/reactions.hpp"

#include <algorithm>
#include <cmath>

namespace squelp {

double profile_value(Profile pr, Vec x) {
    switch (pr) {
    case Profile::Uniform: return 1.0;
    case Profile::Sin2PiX: return std::sin(2.0 * M_PI * x.x);
    case Profile::RampX: return x.x;
    }
    return 0.0;
}

bool ChainParams::complete() const {
    for (double v : {alpha1, beta1, gamma1, delta1, alpha2, beta2, gamma2, delta2})
        if (std::isnan(v)) return false;
    return true;
}

bool ReactionSpec::has_singular() const {
    for (const auto& t : terms)
        if (t.singular_s() || t.singular_t()) return true;
    for (const auto& t : terms2)
        if (t.singular_s() || t.singular_t()) return true;
    return false;
}

std::vector<Term> ReactionSpec::singular_part() const {
    std::vector<Term> out;
    for (const auto& t : terms)
        if (t.singular_s()) out.push_back(t);
    return out;
}

std::vector<Term> ReactionSpec::regular_part() const {
    std::vector<Term> out;
    for (const auto& t : terms)
        if (!t.singular_s()) out.push_back(t);
    return out;
}

std::vector<std::string> ReactionSpec::validate() const {
    std::vector<std::string> bad;
    if (arity == Arity::Scalar && !terms2.empty())
        bad.push_back("scalar reaction must not declare second-component terms");
    if (shift < 0.0) bad.push_back("desingularization shift must be nonnegative");

    auto check_term = [&](const Term& t, const char* who) {
        if (t.mod != Modulator::None && !(t.omega > 0.0))
            bad.push_back(std::string(who) + ": modulator frequency must be positive");
        if (arity == Arity::Scalar) {
            if (t.t_exp != 0.0) bad.push_back(std::string(who) + ": scalar terms cannot depend on t");
            if (t.mod == Modulator::CosT)
                bad.push_back(std::string(who) + ": scalar terms cannot use the cos-t modulator");
            if (t.xi2_exp != 0.0)
                bad.push_back(std::string(who) + ": scalar terms cannot depend on the second gradient");
        }
        if (t.singular_s() || t.singular_t()) {
            if (t.convective())
                bad.push_back(std::string(who) + ": singular terms must not depend on gradients");
            if (arity == Arity::Scalar && t.coeff < 0.0)
                bad.push_back(std::string(who) + ": singular coefficient field must be nonnegative");
            if (arity == Arity::Scalar && t.profile == Profile::Sin2PiX)
                bad.push_back(std::string(who) + ": singular coefficient field must be nonnegative (signed profile)");
        }
    };
    for (const auto& t : terms) check_term(t, "term");
    for (const auto& t : terms2) check_term(t, "term2");

    if (arity == Arity::Scalar && !singular_part().empty()) {
        if (!meta.singular_limit)
            bad.push_back("singular terms present but singular_limit_at_0 not declared");
        if (!meta.monotone_decreasing)
            bad.push_back("singular power terms are decreasing on (0,1]; declare monotone_decreasing");
    }
    if (meta.growth_C < 0.0) bad.push_back("growth constant C must be nonnegative");
    if (meta.growth_C > 0.0 || meta.growth_gamma != 0.0) {
        if (!(meta.growth_gamma > 0.0 && meta.growth_gamma < 1.0))
            bad.push_back("growth exponent gamma must lie in (0,1)");
    }
    for (double v : {chain.alpha1, chain.beta1, chain.gamma1, chain.delta1, chain.alpha2,
                     chain.beta2, chain.gamma2, chain.delta2, chain.eta})
        if (!std::isnan(v) && !(v > 0.0)) {
            bad.push_back("declared exponents must be positive");
            break;
        }
    return bad;
}

void ReactionSpec::require_valid() const {
    auto bad = validate();
    if (!bad.empty()) throw ValidationError(bad);
}

namespace {

// max(s,0)^e; for e < 0 the clamped zero base gives +inf per IEEE pow
double pow_pos(double s, double e) {
    if (e == 0.0) return 1.0;
    return std::pow(s > 0.0 ? s : 0.0, e);
}

double eval_term(const Term& t, double shift, Vec x, double s, double tt, double n1, double n2,
                 bool throwing) {
    const double s_eff = t.singular_s() ? s + shift : s;
    const double t_eff = t.singular_t() ? tt + shift : tt;
    if (throwing && t.singular_s() && s_eff <= 0.0)
        throw SingularDomain("singular reaction factor evaluated at non-positive s");
    if (throwing && t.singular_t() && t_eff <= 0.0)
        throw SingularDomain("singular reaction factor evaluated at non-positive t");
    double c = t.coeff * profile_value(t.profile, x);
    if (c == 0.0) return 0.0;
    switch (t.mod) {
    case Modulator::SinS: c *= std::sin(t.omega * s_eff); break;
    case Modulator::CosT: c *= std::cos(t.omega * t_eff); break;
    case Modulator::None: break;
    }
    if (t.s_exp != 0.0) c *= pow_pos(s_eff, t.s_exp);
    if (t.t_exp != 0.0) c *= pow_pos(t_eff, t.t_exp);
    if (t.xi1_exp != 0.0) c *= std::pow(n1, t.xi1_exp);
    if (t.xi2_exp != 0.0) c *= std::pow(n2, t.xi2_exp);
    return c;
}

} // namespace

double eval_reaction(const ReactionSpec& spec, Vec x, double s, Vec xi1) {
    if (spec.arity != Arity::Scalar) throw Error("eval_reaction expects a scalar spec");
    double v = 0.0;
    for (const auto& t : spec.terms) v += eval_term(t, spec.shift, x, s, 0.0, norm(xi1), 0.0, true);
    return v;
}

std::pair<double, double> eval_reaction_system(const ReactionSpec& spec, Vec x, double s, double t,
                                               Vec xi1, Vec xi2) {
    if (spec.arity != Arity::System) throw Error("eval_reaction_system expects a system spec");
    const double n1 = norm(xi1), n2 = norm(xi2);
    double f = 0.0, g = 0.0;
    for (const auto& tm : spec.terms) f += eval_term(tm, spec.shift, x, s, t, n1, n2, true);
    for (const auto& tm : spec.terms2) g += eval_term(tm, spec.shift, x, s, t, n1, n2, true);
    return {f, g};
}

ReactionSpec shift_reaction(const ReactionSpec& spec, double eps) {
    if (!(eps >= 0.0)) throw ValidationError("desingularization shift must be nonnegative");
    ReactionSpec out = spec;
    out.shift += eps;
    return out;
}

double term_sfactor(const Term& t, double s) {
    double v = pow_pos(s, t.s_exp);
    if (t.mod == Modulator::SinS) v *= std::sin(t.omega * s);
    return v;
}

double term_sfactor_deriv(const Term& t, double s) {
    const double P = pow_pos(s, t.s_exp);
    double dP = 0.0;
    if (t.s_exp != 0.0) dP = s > 0.0 ? t.s_exp * std::pow(s, t.s_exp - 1.0) : 0.0;
    if (t.mod == Modulator::SinS)
        return t.omega * std::cos(t.omega * s) * P + std::sin(t.omega * s) * dP;
    return dP;
}

namespace {

struct GaussLegendre32 {
    std::array<double, 32> x{}, w{};
    GaussLegendre32() {
        const int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                const double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            x[i] = xi;
            x[n - 1 - i] = -xi;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
    }
};

const GaussLegendre32& gl32() {
    static const GaussLegendre32 g;
    return g;
}

// antiderivative of max(s,0)^e at x, so that the difference gives the integral
double power_primitive(double x, double e) {
    if (e == -1.0) return x > 0.0 ? std::log(x) : -HUGE_VAL;
    return pow_pos(x, e + 1.0) / (e + 1.0);
}

} // namespace

double term_sfactor_antiderivative(const Term& t, double a, double b) {
    if (t.mod == Modulator::None)
        return power_primitive(b, t.s_exp) - power_primitive(a, t.s_exp);
    if (t.s_exp == 0.0) // pure sin modulator
        return (std::cos(t.omega * a) - std::cos(t.omega * b)) / t.omega;
    // modulated power: smooth on the integration range, quadrature is exact
    // to machine precision for the products this grammar produces
    const auto& gl = gl32();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 32; ++i) acc += gl.w[i] * term_sfactor(t, mid + half * gl.x[i]);
    return half * acc;
}

Certificate check_growth(const ReactionSpec& spec, const Grid& g, double C, double gamma,
                         std::size_t n_s) {
    Certificate cert;
    const auto sing = spec.singular_part();
    if (sing.empty()) {
        cert.note = "no singular part; growth bound holds vacuously";
        return cert;
    }
    for (std::size_t j = 0; j < n_s; ++j) {
        const double s = std::pow(10.0, -6.0 * (1.0 - double(j) / double(n_s - 1)));
        for (const Vec& x : g.node) {
            double v = 0.0;
            for (const auto& t : sing) v += eval_term(t, spec.shift, x, s, 0.0, 0.0, 0.0, false);
            if (v * std::pow(s, gamma) > C + 1e-12 * std::max(1.0, C)) {
                cert.ok = false;
                if (cert.witnesses.size() < 8)
                    cert.witnesses.push_back({x, s, v, C * std::pow(s, -gamma)});
            }
        }
    }
    cert.note = cert.ok ? "bound holds at all samples" : "bound violated at sampled points";
    return cert;
}

Certificate check_monotone_decreasing(const ReactionSpec& spec, const Grid& g, std::size_t n_s) {
    Certificate cert;
    // the checked part is the singular split when present; otherwise every
    // gradient-free term is treated as the designated g-part
    auto scope = spec.singular_part();
    if (scope.empty())
        for (const auto& t : spec.terms)
            if (!t.convective()) scope.push_back(t);
    auto value = [&](const Vec& x, double s) {
        double v = 0.0;
        for (const auto& t : scope) v += eval_term(t, spec.shift, x, s, 0.0, 0.0, 0.0, false);
        return v;
    };
    double at_one = 0.0;
    for (const Vec& x : g.node) {
        double prev = HUGE_VAL;
        for (std::size_t j = 0; j < n_s; ++j) {
            const double s = std::pow(10.0, -6.0 * (1.0 - double(j) / double(n_s - 1)));
            const double v = value(x, s);
            if (v > prev + 1e-12) {
                cert.ok = false;
                if (cert.witnesses.size() < 8) cert.witnesses.push_back({x, s, v, prev});
            }
            prev = v;
        }
        at_one = std::max(at_one, value(x, 1.0));
    }
    if (!(at_one > 0.0)) {
        cert.ok = false;
        cert.note = "singular part vanishes identically at s = 1";
    } else if (cert.note.empty()) {
        cert.note = cert.ok ? "non-increasing at all samples" : "increase detected";
    }
    return cert;
}

bool check_parameter_chain(const ReactionSpec& spec, double p, double q) {
    const ChainParams& c = spec.chain;
    if (spec.arity != Arity::System || !c.complete()) return false;
    const bool first = std::max(c.gamma1, c.delta1) < c.beta1 - c.alpha1 && c.beta1 - c.alpha1 < p - 1.0;
    const bool second = std::max(c.gamma2, c.delta2) < c.alpha2 - c.beta2 && c.alpha2 - c.beta2 < q - 1.0;
    return first && second;
}

} // namespace squelp
