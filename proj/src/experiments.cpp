#include "squelp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "squelp/manufactured.hpp"
#include "squelp/report.hpp"

namespace squelp {

namespace {

std::string join_path(const std::string& dir, const std::string& leaf) { return dir + "/" + leaf; }

Field random_field_between(const Field& lo, double width, std::mt19937_64& rng) {
    Field out = lo;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lo[i] + width * unit(rng);
    return out;
}

} // namespace

ConvergenceResult run_convergence(const RunConfig& cfg) {
    if (cfg.grid.dimension != 1)
        throw ValidationError("convergence studies run on one-dimensional grids");
    const ManufacturedCase mc = ManufacturedCase::by_name(cfg.experiment.reference);

    ConvergenceResult res;
    for (std::size_t n : cfg.experiment.levels) {
        GridPtr g = build_interval_grid(cfg.grid.x0, cfg.grid.x1, n);
        const ScalarProblem prob = manufactured_problem(g, mc, cfg.op, cfg.experiment.convection);
        const Bracket bracket = reference_bracket(prob, mc);
        const auto fp = iterate_scalar(prob, bracket, bracket.sub, cfg.solver);

        ConvergenceRow row;
        row.level = n;
        row.h = g->hx;
        row.converged = fp.trace.converged && fp.trace.residual_ok;
        double err = 0.0;
        for (std::size_t i = 0; i < g->node_count(); ++i)
            err = std::max(err, std::abs(fp.solution[i] - mc.exact(g->node[i].x)));
        row.max_error = err;
        if (!res.rows.empty()) {
            const auto& prev = res.rows.back();
            row.observed_order = std::log(prev.max_error / row.max_error) / std::log(prev.h / row.h);
        }
        res.all_converged = res.all_converged && row.converged;
        res.rows.push_back(row);
    }
    return res;
}

UniquenessResult run_uniqueness(const RunConfig& cfg) {
    GridPtr g = cfg.build_grid();
    const ScalarProblem prob = cfg.scalar_problem(g);
    const Bracket bracket = cfg.build_bracket(prob);

    std::vector<Field> starts;
    starts.push_back(bracket.sub);
    Field up = bracket.sub;
    for (std::size_t i = 0; i < up.size(); ++i) up[i] += 1.0;
    starts.push_back(up);
    std::mt19937_64 rng(cfg.solver.seed);
    for (int s = 0; s < 3; ++s) starts.push_back(random_field_between(bracket.sub, 2.0, rng));

    UniquenessResult res;
    res.asserted = cfg.op.p == 2.0;
    bool all_converged = true;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const auto fp = iterate_scalar(prob, bracket, starts[s], cfg.solver);
        UniquenessStart rec;
        rec.start_id = int(s);
        rec.converged = fp.trace.converged && fp.trace.residual_ok;
        rec.outer_iterations = fp.trace.outer_iterations;
        rec.final_residual = fp.trace.final_residual;
        all_converged = all_converged && rec.converged;
        res.starts.push_back(rec);
        res.solutions.push_back(fp.solution);
    }
    for (std::size_t i = 0; i < res.solutions.size(); ++i)
        for (std::size_t j = i + 1; j < res.solutions.size(); ++j) {
            const double d = inf_dist(res.solutions[i], res.solutions[j]);
            res.pairwise.push_back(d);
            res.max_pairwise = std::max(res.max_pairwise, d);
        }
    res.pass = all_converged && res.max_pairwise <= cfg.experiment.uniqueness_tol;
    return res;
}

MultiplicityResult run_multiplicity(const RunConfig& cfg) {
    GridPtr g = cfg.build_grid();
    const ScalarProblem prob = cfg.scalar_problem(g);
    if (prob.op.bc != BoundaryKind::Neumann)
        throw ValidationError("the constant-ladder construction needs Neumann boundaries");

    // Alternating strict residual signs over the 0.25-step level scan.
    const double strict = 1e-6;
    const double step = 0.25;
    const int pairs_wanted = cfg.experiment.ladder_pairs;
    const double c_max = step + 2.0 * (pairs_wanted + 1);

    std::vector<std::pair<double, double>> ladder;
    double cur_sub = 0.0;
    bool have_sub = false;
    for (double c = step; c <= c_max + 1e-12 && int(ladder.size()) < pairs_wanted; c += step) {
        const Field cand(g, c);
        if (!have_sub) {
            const auto chk = subsolution_check(prob, cand);
            if (chk.margin <= -strict) {
                cur_sub = c;
                have_sub = true;
            }
        } else {
            const auto chk = supersolution_check(prob, cand);
            if (chk.margin >= strict) {
                ladder.emplace_back(cur_sub, c);
                have_sub = false;
            }
        }
    }
    if (int(ladder.size()) < pairs_wanted)
        throw BracketLadderFailed("found " + std::to_string(ladder.size()) + " of " +
                                  std::to_string(pairs_wanted) +
                                  " alternating residual-sign pairs below level " + fmt_num(c_max));

    MultiplicityResult res;
    for (const auto& [lo, hi] : ladder) {
        Bracket b = constant_subsolution(prob, lo);
        b.super = Field(g, hi);
        const auto fp = iterate_scalar(prob, b, b.sub, cfg.solver);

        MultiplicityEntry e;
        e.sub_level = lo;
        e.super_level = hi;
        e.solution = fp.solution;
        e.min_value = fp.solution.min();
        e.max_value = fp.solution.max();
        e.converged = fp.trace.converged && fp.trace.residual_ok;
        const double tol_in = 1e-8 * std::max(1.0, hi);
        e.inside = e.min_value >= lo - tol_in && e.max_value <= hi + tol_in;
        e.outer_iterations = fp.trace.outer_iterations;
        res.entries.push_back(std::move(e));
    }

    res.containment_ok = true;
    for (const auto& e : res.entries) res.containment_ok = res.containment_ok && e.converged && e.inside;
    res.ordering_ok = true;
    for (std::size_t i = 0; i + 1 < res.entries.size(); ++i)
        res.ordering_ok = res.ordering_ok && res.entries[i].max_value < res.entries[i + 1].min_value;
    res.transitive_ok = true;
    for (std::size_t i = 0; i < res.entries.size(); ++i)
        for (std::size_t j = i + 1; j < res.entries.size(); ++j) {
            res.transitive_ok =
                res.transitive_ok && res.entries[i].max_value < res.entries[j].min_value;
            const double d = inf_dist(res.entries[i].solution, res.entries[j].solution);
            res.pairwise.push_back(d);
            res.min_pairwise = std::min(res.min_pairwise, d);
        }
    if (res.entries.size() < 2) res.min_pairwise = 0.0;
    res.pass = res.containment_ok && res.ordering_ok && res.transitive_ok;
    return res;
}

CompareResult run_compare_desingularization(const RunConfig& cfg) {
    GridPtr g = cfg.build_grid();
    const ScalarProblem prob = cfg.scalar_problem(g);
    const Bracket bracket = cfg.build_bracket(prob);

    CompareResult res;
    const auto trunc = iterate_scalar(prob, bracket, bracket.sub, cfg.solver);
    {
        CompareRow row;
        row.method = "truncation";
        row.outer_iterations = trunc.trace.outer_iterations;
        row.final_residual = trunc.trace.final_residual;
        row.converged = trunc.trace.converged && trunc.trace.residual_ok;
        res.all_converged = row.converged;
        res.rows.push_back(row);
    }

    Bracket zero_floor;
    zero_floor.sub = Field(g, 0.0);
    zero_floor.tag = BracketTag::Shifted;

    Field warm = trunc.solution;
    std::vector<double> drifts;
    for (double eps : cfg.experiment.eps_schedule) {
        ScalarProblem shifted = prob;
        shifted.reaction = shift_reaction(cfg.reaction, eps);
        zero_floor.eps = eps;
        const auto fp = iterate_scalar(shifted, zero_floor, warm, cfg.solver);

        CompareRow row;
        row.method = "shift";
        row.eps = eps;
        row.outer_iterations = fp.trace.outer_iterations;
        row.final_residual = fp.trace.final_residual;
        row.drift = inf_dist(fp.solution, trunc.solution);
        row.converged = fp.trace.converged && fp.trace.residual_ok;
        res.all_converged = res.all_converged && row.converged;
        drifts.push_back(row.drift);
        res.rows.push_back(row);
        warm = fp.solution;
    }

    res.drift_decreasing = drifts.size() >= 1;
    for (std::size_t i = 0; i + 1 < drifts.size(); ++i)
        res.drift_decreasing = res.drift_decreasing && drifts[i + 1] < drifts[i];
    return res;
}

AuditResult run_hypothesis_audit(const RunConfig& cfg) {
    GridPtr g = cfg.build_grid();
    AuditResult res;
    auto add = [&](std::string check, bool ok, std::string detail) {
        res.all_ok = res.all_ok && ok;
        res.rows.push_back({std::move(check), ok, std::move(detail)});
    };

    add("validation", true, "all structural invariants hold");
    for (const auto& w : cfg.warnings) add("config_warning", false, w);

    const auto& r = cfg.reaction;
    if (r.has_singular() && r.meta.growth_C > 0.0) {
        const auto cert = check_growth(r, *g, r.meta.growth_C, r.meta.growth_gamma);
        std::string detail = "bound C=" + fmt_num(r.meta.growth_C) +
                             " gamma=" + fmt_num(r.meta.growth_gamma);
        if (!cert.ok && !cert.witnesses.empty())
            detail += "; worst value " + fmt_num(cert.witnesses.front().value) + " at s=" +
                      fmt_num(cert.witnesses.front().s);
        add("growth_bound", cert.ok, detail);
    }

    if (cfg.arity == Arity::Scalar) {
        const auto cert = check_monotone_decreasing(r, *g);
        add("monotone_decreasing", cert.ok, cert.note);

        if (r.meta.singular_limit) {
            // discrete witness of the declared blow-up: the singular part must
            // grow from s=1e-2 to s=1e-8
            double lo = 0.0, hi = 0.0;
            for (const auto& t : r.singular_part())
                for (const auto& cell : g->cell) {
                    const double c0 = t.coeff * profile_value(t.profile, cell.center);
                    lo = std::max(lo, c0 * term_sfactor(t, 1e-2 + r.shift));
                    hi = std::max(hi, c0 * term_sfactor(t, 1e-8 + r.shift));
                }
            add("singular_limit", hi > lo,
                "value at s=1e-8 is " + fmt_num(hi) + " vs " + fmt_num(lo) + " at s=1e-2");
        }

        if (r.has_singular()) {
            const double gamma =
                r.meta.growth_gamma > 0.0 && r.meta.growth_gamma < 1.0 ? r.meta.growth_gamma : 0.5;
            Field dist(g, 0.0);
            for (std::size_t i = 0; i < g->node_count(); ++i) dist[i] = g->dist_boundary[i];
            std::vector<Field> phis;
            phis.push_back(dist);
            Field d2 = dist;
            for (std::size_t i = 0; i < d2.size(); ++i) d2[i] *= dist[i];
            phis.push_back(d2);
            Field bump(g, 0.0);
            for (std::size_t i = 0; i < bump.size(); ++i) {
                const Vec x = g->node[i];
                double v = std::sin(M_PI * (x.x - g->lo.x) / (g->hi.x - g->lo.x));
                if (g->dimension == 2)
                    v *= std::sin(M_PI * (x.y - g->lo.y) / (g->hi.y - g->lo.y));
                bump[i] = v;
            }
            phis.push_back(bump);
            const auto cert = hardy_sobolev_check(dist, gamma, cfg.op.p, phis, 0.999);
            add("distance_weight_summability", cert.all_finite,
                "max ratio " + fmt_num(cert.max_ratio) + " over " +
                    std::to_string(cert.entries.size()) + " test functions");
        }
    }

    if (cfg.arity == Arity::System) {
        if (r.chain.complete()) {
            const bool ok = check_parameter_chain(r, cfg.op.p, cfg.q_exp);
            const double g1 = std::max(r.chain.gamma1, r.chain.delta1);
            const double g2 = std::max(r.chain.gamma2, r.chain.delta2);
            std::string detail = fmt_num(g1) + " < " + fmt_num(r.chain.beta1 - r.chain.alpha1) +
                                 " < " + fmt_num(cfg.op.p - 1.0) + " and " + fmt_num(g2) + " < " +
                                 fmt_num(r.chain.alpha2 - r.chain.beta2) + " < " +
                                 fmt_num(cfg.q_exp - 1.0);
            add("parameter_chain", ok, detail);
        } else {
            add("parameter_chain", false, "exponents not fully declared");
        }
    }

    return res;
}

void write_convergence(const ConvergenceResult& res, const std::string& dir) {
    ensure_dir(dir);
    CsvWriter csv(join_path(dir, "convergence.csv"),
                  {"level", "h", "max_error", "observed_order", "converged"});
    for (const auto& r : res.rows)
        csv.row({fmt_num(r.level), fmt_num(r.h), fmt_num(r.max_error), fmt_num(r.observed_order),
                 r.converged ? "1" : "0"});
    SummaryWriter sum(join_path(dir, "summary.txt"));
    sum.kv("experiment", std::string("convergence"));
    sum.kv("levels", std::size_t(res.rows.size()));
    sum.kv("all_converged", res.all_converged);
    if (!res.rows.empty()) sum.kv("last_observed_order", res.rows.back().observed_order);
}

void write_uniqueness(const UniquenessResult& res, const std::string& dir) {
    ensure_dir(dir);
    CsvWriter csv(join_path(dir, "starts.csv"),
                  {"start", "converged", "outer_iterations", "final_residual"});
    for (const auto& s : res.starts)
        csv.row({fmt_num(s.start_id), s.converged ? "1" : "0", fmt_num(s.outer_iterations),
                 fmt_num(s.final_residual)});
    CsvWriter pw(join_path(dir, "pairwise.csv"), {"i", "j", "sup_distance"});
    std::size_t k = 0;
    for (std::size_t i = 0; i < res.starts.size(); ++i)
        for (std::size_t j = i + 1; j < res.starts.size(); ++j)
            pw.row({fmt_num(i), fmt_num(j), fmt_num(res.pairwise[k++])});
    SummaryWriter sum(join_path(dir, "summary.txt"));
    sum.kv("experiment", std::string("uniqueness"));
    sum.kv("max_pairwise", res.max_pairwise);
    sum.kv("pass", res.pass);
    sum.kv("asserted", res.asserted);
}

void write_multiplicity(const MultiplicityResult& res, const std::string& dir) {
    ensure_dir(dir);
    CsvWriter csv(join_path(dir, "ladder.csv"),
                  {"pair", "sub_level", "super_level", "min_u", "max_u", "outer_iterations",
                   "converged", "inside"});
    for (std::size_t i = 0; i < res.entries.size(); ++i) {
        const auto& e = res.entries[i];
        csv.row({fmt_num(i), fmt_num(e.sub_level), fmt_num(e.super_level), fmt_num(e.min_value),
                 fmt_num(e.max_value), fmt_num(e.outer_iterations), e.converged ? "1" : "0",
                 e.inside ? "1" : "0"});
    }
    CsvWriter pw(join_path(dir, "pairwise.csv"), {"i", "j", "sup_distance"});
    std::size_t k = 0;
    for (std::size_t i = 0; i < res.entries.size(); ++i)
        for (std::size_t j = i + 1; j < res.entries.size(); ++j)
            pw.row({fmt_num(i), fmt_num(j), fmt_num(res.pairwise[k++])});
    if (!res.entries.empty()) {
        std::vector<const Field*> fields;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < res.entries.size(); ++i) {
            fields.push_back(&res.entries[i].solution);
            names.push_back("u" + std::to_string(i + 1));
        }
        write_fields_csv(fields, names, join_path(dir, "solutions.csv"));
    }
    SummaryWriter sum(join_path(dir, "summary.txt"));
    sum.kv("experiment", std::string("multiplicity"));
    sum.kv("solutions", res.entries.size());
    sum.kv("containment_ok", res.containment_ok);
    sum.kv("ordering_ok", res.ordering_ok);
    sum.kv("transitive_ok", res.transitive_ok);
    sum.kv("min_pairwise", res.min_pairwise);
    sum.kv("pass", res.pass);
}

void write_compare(const CompareResult& res, const std::string& dir) {
    ensure_dir(dir);
    CsvWriter csv(join_path(dir, "compare.csv"),
                  {"method", "eps", "outer_iterations", "final_residual", "drift", "converged"});
    for (const auto& r : res.rows)
        csv.row({r.method, fmt_num(r.eps), fmt_num(r.outer_iterations), fmt_num(r.final_residual),
                 fmt_num(r.drift), r.converged ? "1" : "0"});
    SummaryWriter sum(join_path(dir, "summary.txt"));
    sum.kv("experiment", std::string("compare"));
    sum.kv("all_converged", res.all_converged);
    sum.kv("drift_decreasing", res.drift_decreasing);
}

void write_audit(const AuditResult& res, const std::string& dir) {
    ensure_dir(dir);
    CsvWriter csv(join_path(dir, "audit.csv"), {"check", "ok", "detail"});
    for (const auto& r : res.rows) csv.row({r.check, r.ok ? "1" : "0", r.detail});
    SummaryWriter sum(join_path(dir, "summary.txt"));
    sum.kv("experiment", std::string("audit"));
    sum.kv("all_ok", res.all_ok);
}

void write_fields_csv(const std::vector<const Field*>& fields, const std::vector<std::string>& names,
                      const std::string& path) {
    if (fields.empty()) throw Error("no fields to write");
    const Grid& g = fields.front()->grid();
    std::vector<std::string> cols{"node", "x", "y"};
    cols.insert(cols.end(), names.begin(), names.end());
    CsvWriter csv(path, cols);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        std::vector<std::string> cells{fmt_num(i), fmt_num(g.node[i].x), fmt_num(g.node[i].y)};
        for (const Field* f : fields) cells.push_back(fmt_num((*f)[i]));
        csv.row(cells);
    }
}

} // namespace squelp
