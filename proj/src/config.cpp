#include "squelp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "squelp/report.hpp"

namespace squelp {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    double out = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        throw ParseError(line, "expected a number, got '" + v + "'");
    return out;
}

long long parse_int(const std::string& v, int line) {
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ParseError(line, "expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ParseError(line, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split_ws(const std::string& v) {
    std::istringstream is(v);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

Profile parse_profile(const std::string& v, int line) {
    if (v == "uniform") return Profile::Uniform;
    if (v == "sin2pix") return Profile::Sin2PiX;
    if (v == "rampx") return Profile::RampX;
    throw ParseError(line, "unknown profile '" + v + "'");
}

Modulator parse_mod(const std::string& v, int line) {
    if (v == "none") return Modulator::None;
    if (v == "sin_s") return Modulator::SinS;
    if (v == "cos_t") return Modulator::CosT;
    throw ParseError(line, "unknown modulator '" + v + "'");
}

Term parse_term(const std::string& v, int line) {
    Term t;
    for (const auto& tok : split_ws(v)) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "term field '" + tok + "' is not key=value");
        std::string k = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (k == "coeff") t.coeff = parse_double(val, line);
        else if (k == "profile") t.profile = parse_profile(val, line);
        else if (k == "mod") t.mod = parse_mod(val, line);
        else if (k == "omega") t.omega = parse_double(val, line);
        else if (k == "s") t.s_exp = parse_double(val, line);
        else if (k == "t") t.t_exp = parse_double(val, line);
        else if (k == "xi1") t.xi1_exp = parse_double(val, line);
        else if (k == "xi2") t.xi2_exp = parse_double(val, line);
        else throw ParseError(line, "unknown term field '" + k + "'");
    }
    return t;
}

const char* profile_name(Profile p) {
    switch (p) {
    case Profile::Uniform: return "uniform";
    case Profile::Sin2PiX: return "sin2pix";
    case Profile::RampX: return "rampx";
    }
    return "uniform";
}

const char* mod_name(Modulator m) {
    switch (m) {
    case Modulator::None: return "none";
    case Modulator::SinS: return "sin_s";
    case Modulator::CosT: return "cos_t";
    }
    return "none";
}

std::string term_text(const Term& t) {
    std::string s = "coeff=" + fmt_num(t.coeff);
    s += " profile=" + std::string(profile_name(t.profile));
    s += " mod=" + std::string(mod_name(t.mod));
    s += " omega=" + fmt_num(t.omega);
    s += " s=" + fmt_num(t.s_exp);
    s += " t=" + fmt_num(t.t_exp);
    s += " xi1=" + fmt_num(t.xi1_exp);
    s += " xi2=" + fmt_num(t.xi2_exp);
    return s;
}

const char* bc_name(BoundaryKind b) {
    switch (b) {
    case BoundaryKind::Robin: return "robin";
    case BoundaryKind::Neumann: return "neumann";
    case BoundaryKind::Dirichlet: return "dirichlet";
    }
    return "robin";
}

const char* kind_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::None: return "none";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Uniqueness: return "uniqueness";
    case ExperimentKind::Multiplicity: return "multiplicity";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::Audit: return "audit";
    }
    return "none";
}

struct Assignment {
    std::string section, key, value;
    int line;
};

void apply_problem(RunConfig& c, const Assignment& a) {
    const std::string& k = a.key;
    if (k == "dimension") c.grid.dimension = int(parse_int(a.value, a.line));
    else if (k == "x0") c.grid.x0 = parse_double(a.value, a.line);
    else if (k == "x1") c.grid.x1 = parse_double(a.value, a.line);
    else if (k == "y0") c.grid.y0 = parse_double(a.value, a.line);
    else if (k == "y1") c.grid.y1 = parse_double(a.value, a.line);
    else if (k == "nx") c.grid.nx = std::size_t(parse_int(a.value, a.line));
    else if (k == "ny") c.grid.ny = std::size_t(parse_int(a.value, a.line));
    else if (k == "arity") {
        if (a.value == "scalar") c.arity = Arity::Scalar;
        else if (a.value == "system") c.arity = Arity::System;
        else throw ParseError(a.line, "arity must be scalar or system");
    } else if (k == "operator") {
        if (a.value == "p") c.op.kind = OperatorKind::PureR;
        else if (a.value == "pq") c.op.kind = OperatorKind::PQSum;
        else throw ParseError(a.line, "operator must be p or pq");
    } else if (k == "p") c.op.p = parse_double(a.value, a.line);
    else if (k == "q") {
        c.op.q = parse_double(a.value, a.line);
        c.q_exp = c.op.q;
    } else if (k == "lambda") c.op.lambda = parse_double(a.value, a.line);
    else if (k == "beta") c.op.beta = parse_double(a.value, a.line);
    else if (k == "bc") {
        if (a.value == "robin") c.op.bc = BoundaryKind::Robin;
        else if (a.value == "neumann") c.op.bc = BoundaryKind::Neumann;
        else if (a.value == "dirichlet") c.op.bc = BoundaryKind::Dirichlet;
        else throw ParseError(a.line, "bc must be robin, neumann or dirichlet");
    } else throw ParseError(a.line, "unknown [problem] key '" + k + "'");
}

void apply_reaction(RunConfig& c, const Assignment& a) {
    const std::string& k = a.key;
    auto& r = c.reaction;
    if (k == "term") r.terms.push_back(parse_term(a.value, a.line));
    else if (k == "term2") r.terms2.push_back(parse_term(a.value, a.line));
    else if (k == "shift") r.shift = parse_double(a.value, a.line);
    else if (k == "monotone") r.meta.monotone_decreasing = parse_bool(a.value, a.line);
    else if (k == "singular_limit") r.meta.singular_limit = parse_bool(a.value, a.line);
    else if (k == "growth_c") r.meta.growth_C = parse_double(a.value, a.line);
    else if (k == "growth_gamma") r.meta.growth_gamma = parse_double(a.value, a.line);
    else if (k == "alpha1") r.chain.alpha1 = parse_double(a.value, a.line);
    else if (k == "beta1") r.chain.beta1 = parse_double(a.value, a.line);
    else if (k == "gamma1") r.chain.gamma1 = parse_double(a.value, a.line);
    else if (k == "delta1") r.chain.delta1 = parse_double(a.value, a.line);
    else if (k == "alpha2") r.chain.alpha2 = parse_double(a.value, a.line);
    else if (k == "beta2") r.chain.beta2 = parse_double(a.value, a.line);
    else if (k == "gamma2") r.chain.gamma2 = parse_double(a.value, a.line);
    else if (k == "delta2") r.chain.delta2 = parse_double(a.value, a.line);
    else if (k == "eta") r.chain.eta = parse_double(a.value, a.line);
    else throw ParseError(a.line, "unknown [reaction] key '" + k + "'");
}

void apply_bracket(RunConfig& c, const Assignment& a) {
    const std::string& k = a.key;
    if (k == "mode") {
        if (a.value == "constant") c.bracket.mode = BracketMode::Constant;
        else if (a.value == "distance") c.bracket.mode = BracketMode::Distance;
        else throw ParseError(a.line, "bracket mode must be constant or distance");
    } else if (k == "k0") c.bracket.k0 = parse_double(a.value, a.line);
    else if (k == "level") c.bracket.level = parse_double(a.value, a.line);
    else if (k == "level2") c.bracket.level2 = parse_double(a.value, a.line);
    else if (k == "super") c.bracket.build_super = parse_bool(a.value, a.line);
    else if (k == "super_start") c.bracket.super_start = parse_double(a.value, a.line);
    else throw ParseError(a.line, "unknown [bracket] key '" + k + "'");
}

void apply_solver(RunConfig& c, const Assignment& a) {
    const std::string& k = a.key;
    auto& s = c.solver;
    if (k == "tol") s.inner.tol = parse_double(a.value, a.line);
    else if (k == "max_iters") s.inner.max_iters = int(parse_int(a.value, a.line));
    else if (k == "backtracks") s.inner.max_backtracks = int(parse_int(a.value, a.line));
    else if (k == "armijo") s.inner.armijo_c = parse_double(a.value, a.line);
    else if (k == "tol_fp") s.tol_fp = parse_double(a.value, a.line);
    else if (k == "tol_res") s.tol_res = parse_double(a.value, a.line);
    else if (k == "max_outer") s.max_outer = int(parse_int(a.value, a.line));
    else if (k == "grad_cap") s.grad_cap = parse_double(a.value, a.line);
    else if (k == "seed") s.seed = std::uint64_t(parse_int(a.value, a.line));
    else if (k == "n_starts") s.n_starts = int(parse_int(a.value, a.line));
    else throw ParseError(a.line, "unknown [solver] key '" + k + "'");
}

void apply_experiment(RunConfig& c, const Assignment& a) {
    const std::string& k = a.key;
    auto& e = c.experiment;
    if (k == "kind") {
        if (a.value == "convergence") e.kind = ExperimentKind::Convergence;
        else if (a.value == "uniqueness") e.kind = ExperimentKind::Uniqueness;
        else if (a.value == "multiplicity") e.kind = ExperimentKind::Multiplicity;
        else if (a.value == "compare") e.kind = ExperimentKind::Compare;
        else if (a.value == "audit") e.kind = ExperimentKind::Audit;
        else if (a.value == "none") e.kind = ExperimentKind::None;
        else throw ParseError(a.line, "unknown experiment kind '" + a.value + "'");
    } else if (k == "levels") {
        e.levels.clear();
        for (const auto& tok : split_ws(a.value)) e.levels.push_back(std::size_t(parse_int(tok, a.line)));
    } else if (k == "reference") e.reference = a.value;
    else if (k == "convection") e.convection = parse_double(a.value, a.line);
    else if (k == "eps") {
        e.eps_schedule.clear();
        for (const auto& tok : split_ws(a.value)) e.eps_schedule.push_back(parse_double(tok, a.line));
    } else if (k == "pairs") e.ladder_pairs = int(parse_int(a.value, a.line));
    else if (k == "uniqueness_tol") e.uniqueness_tol = parse_double(a.value, a.line);
    else throw ParseError(a.line, "unknown [experiment] key '" + k + "'");
}

void apply_output(RunConfig& c, const Assignment& a) {
    if (a.key == "dir") c.out_dir = a.value;
    else throw ParseError(a.line, "unknown [output] key '" + a.key + "'");
}

void validate_semantics(RunConfig& c) {
    std::vector<std::string> bad;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };

    require(c.grid.dimension == 1 || c.grid.dimension == 2, "dimension must be 1 or 2");
    require(c.grid.x1 > c.grid.x0, "x1 must exceed x0");
    require(c.grid.nx >= 2, "nx must be at least 2");
    if (c.grid.dimension == 2) {
        require(c.grid.y1 > c.grid.y0, "y1 must exceed y0");
        require(c.grid.ny >= 2, "ny must be at least 2");
    }

    c.reaction.arity = c.arity;
    for (const auto& v : c.reaction.validate()) bad.push_back(v);

    if (c.arity == Arity::System) {
        // lambda/beta/bc are fixed by the system formulation; only the two
        // exponents come from the config
        require(c.op.p > 1.0, "p must exceed 1");
        require(c.q_exp > 1.0, "system second exponent q must exceed 1");
        require(c.solver.grad_cap > 0.0, "system runs need a positive grad_cap");
        require(c.op.kind == OperatorKind::PureR, "system components are pure r-Laplacians");
    } else {
        for (const auto& v : c.op.validate()) bad.push_back(v);
    }

    auto& s = c.solver;
    require(s.inner.tol >= 0.0, "tol must be nonnegative");
    require(s.inner.max_iters >= 1, "max_iters must be positive");
    require(s.inner.max_backtracks >= 1, "backtracks must be positive");
    require(s.inner.armijo_c > 0.0 && s.inner.armijo_c < 1.0, "armijo constant must lie in (0,1)");
    require(s.tol_fp >= 0.0, "tol_fp must be nonnegative");
    require(s.tol_res >= 0.0, "tol_res must be nonnegative");
    require(s.max_outer >= 1, "max_outer must be positive");
    require(s.grad_cap >= 0.0, "grad_cap must be nonnegative");
    require(s.n_starts >= 1, "n_starts must be positive");

    require(c.bracket.k0 > 0.0, "bracket k0 must be positive");
    require(c.bracket.level > 0.0, "bracket level must be positive");
    require(c.bracket.level2 > 0.0, "bracket level2 must be positive");
    require(c.bracket.super_start > 0.0, "bracket super_start must be positive");

    auto& e = c.experiment;
    for (std::size_t i = 0; i + 1 < e.levels.size(); ++i)
        if (e.levels[i] >= e.levels[i + 1]) {
            bad.push_back("grid levels must be strictly increasing");
            break;
        }
    if (e.kind == ExperimentKind::Convergence)
        require(e.levels.size() >= 2, "convergence needs at least 2 grid levels");
    for (double eps : e.eps_schedule)
        require(eps > 0.0, "shift schedule entries must be positive");
    for (std::size_t i = 0; i + 1 < e.eps_schedule.size(); ++i)
        if (e.eps_schedule[i] <= e.eps_schedule[i + 1]) {
            bad.push_back("shift schedule must be strictly decreasing");
            break;
        }
    require(e.ladder_pairs >= 1, "ladder pair count must be positive");
    require(e.uniqueness_tol > 0.0, "uniqueness tolerance must be positive");

    if (!bad.empty()) throw ValidationError(bad);

    if (c.arity == Arity::System && c.reaction.chain.complete() &&
        !check_parameter_chain(c.reaction, c.op.p, c.q_exp))
        c.warnings.push_back("declared exponents violate the strict parameter chains");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(line, "unterminated section header");
            section = s.substr(1, s.size() - 2);
            if (section != "problem" && section != "reaction" && section != "bracket" &&
                section != "solver" && section != "experiment" && section != "output")
                throw ParseError(line, "unknown section [" + section + "]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key = value");
        Assignment a{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
        if (a.key.empty()) throw ParseError(line, "empty key");
        if (section.empty()) throw ParseError(line, "key outside any section");
        if (section == "problem") apply_problem(cfg, a);
        else if (section == "reaction") apply_reaction(cfg, a);
        else if (section == "bracket") apply_bracket(cfg, a);
        else if (section == "solver") apply_solver(cfg, a);
        else if (section == "experiment") apply_experiment(cfg, a);
        else apply_output(cfg, a);
    }
    validate_semantics(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

GridPtr RunConfig::build_grid() const {
    if (grid.dimension == 1) return build_interval_grid(grid.x0, grid.x1, grid.nx);
    return build_rectangle_grid({grid.x0, grid.y0}, {grid.x1, grid.y1}, grid.nx, grid.ny);
}

ScalarProblem RunConfig::scalar_problem(GridPtr g) const {
    ScalarProblem prob;
    prob.grid = std::move(g);
    prob.op = op;
    prob.reaction = reaction;
    return prob;
}

SystemProblem RunConfig::system_problem(GridPtr g) const {
    SystemProblem prob;
    prob.grid = std::move(g);
    prob.op_u = OperatorSpec{OperatorKind::PureR, op.p, 0.0, 1.0, 0.0, BoundaryKind::Neumann};
    prob.op_v = OperatorSpec{OperatorKind::PureR, q_exp, 0.0, 1.0, 0.0, BoundaryKind::Neumann};
    prob.reaction = reaction;
    prob.grad_cap = solver.grad_cap;
    return prob;
}

Bracket RunConfig::build_bracket(const ScalarProblem& prob) const {
    Bracket b = bracket.mode == BracketMode::Constant ? constant_subsolution(prob, bracket.level)
                                                      : distance_subsolution(prob, bracket.k0);
    if (bracket.build_super) {
        double lvl = constant_supersolution_level(prob, bracket.super_start);
        b.super = Field(prob.grid, lvl);
    }
    return b;
}

std::string RunConfig::serialize() const {
    std::ostringstream o;
    o << "[problem]\n";
    o << "dimension = " << grid.dimension << '\n';
    o << "x0 = " << fmt_num(grid.x0) << '\n';
    o << "x1 = " << fmt_num(grid.x1) << '\n';
    o << "y0 = " << fmt_num(grid.y0) << '\n';
    o << "y1 = " << fmt_num(grid.y1) << '\n';
    o << "nx = " << grid.nx << '\n';
    o << "ny = " << grid.ny << '\n';
    o << "arity = " << (arity == Arity::Scalar ? "scalar" : "system") << '\n';
    o << "operator = " << (op.kind == OperatorKind::PureR ? "p" : "pq") << '\n';
    o << "p = " << fmt_num(op.p) << '\n';
    o << "q = " << fmt_num(arity == Arity::System ? q_exp : op.q) << '\n';
    o << "lambda = " << fmt_num(op.lambda) << '\n';
    o << "beta = " << fmt_num(op.beta) << '\n';
    o << "bc = " << bc_name(op.bc) << '\n';

    o << "\n[reaction]\n";
    for (const auto& t : reaction.terms) o << "term = " << term_text(t) << '\n';
    for (const auto& t : reaction.terms2) o << "term2 = " << term_text(t) << '\n';
    o << "shift = " << fmt_num(reaction.shift) << '\n';
    o << "monotone = " << (reaction.meta.monotone_decreasing ? "true" : "false") << '\n';
    o << "singular_limit = " << (reaction.meta.singular_limit ? "true" : "false") << '\n';
    o << "growth_c = " << fmt_num(reaction.meta.growth_C) << '\n';
    o << "growth_gamma = " << fmt_num(reaction.meta.growth_gamma) << '\n';
    auto chain_kv = [&](const char* key, double v) {
        if (!std::isnan(v)) o << key << " = " << fmt_num(v) << '\n';
    };
    chain_kv("alpha1", reaction.chain.alpha1);
    chain_kv("beta1", reaction.chain.beta1);
    chain_kv("gamma1", reaction.chain.gamma1);
    chain_kv("delta1", reaction.chain.delta1);
    chain_kv("alpha2", reaction.chain.alpha2);
    chain_kv("beta2", reaction.chain.beta2);
    chain_kv("gamma2", reaction.chain.gamma2);
    chain_kv("delta2", reaction.chain.delta2);
    chain_kv("eta", reaction.chain.eta);

    o << "\n[bracket]\n";
    o << "mode = " << (bracket.mode == BracketMode::Constant ? "constant" : "distance") << '\n';
    o << "k0 = " << fmt_num(bracket.k0) << '\n';
    o << "level = " << fmt_num(bracket.level) << '\n';
    o << "level2 = " << fmt_num(bracket.level2) << '\n';
    o << "super = " << (bracket.build_super ? "true" : "false") << '\n';
    o << "super_start = " << fmt_num(bracket.super_start) << '\n';

    o << "\n[solver]\n";
    o << "tol = " << fmt_num(solver.inner.tol) << '\n';
    o << "max_iters = " << solver.inner.max_iters << '\n';
    o << "backtracks = " << solver.inner.max_backtracks << '\n';
    o << "armijo = " << fmt_num(solver.inner.armijo_c) << '\n';
    o << "tol_fp = " << fmt_num(solver.tol_fp) << '\n';
    o << "tol_res = " << fmt_num(solver.tol_res) << '\n';
    o << "max_outer = " << solver.max_outer << '\n';
    o << "grad_cap = " << fmt_num(solver.grad_cap) << '\n';
    o << "seed = " << solver.seed << '\n';
    o << "n_starts = " << solver.n_starts << '\n';

    o << "\n[experiment]\n";
    o << "kind = " << kind_name(experiment.kind) << '\n';
    o << "levels =";
    for (auto l : experiment.levels) o << ' ' << l;
    o << '\n';
    o << "reference = " << experiment.reference << '\n';
    o << "convection = " << fmt_num(experiment.convection) << '\n';
    o << "eps =";
    for (double e : experiment.eps_schedule) o << ' ' << fmt_num(e);
    o << '\n';
    o << "pairs = " << experiment.ladder_pairs << '\n';
    o << "uniqueness_tol = " << fmt_num(experiment.uniqueness_tol) << '\n';

    o << "\n[output]\n";
    o << "dir = " << out_dir << '\n';
    return o.str();
}

} // namespace squelp
