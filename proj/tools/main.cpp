#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"

#include "squelp/config.hpp"
#include "squelp/experiments.hpp"
#include "squelp/report.hpp"

using namespace squelp;

namespace {

const char* status_name(FixedPointStatus s) {
    switch (s) {
    case FixedPointStatus::Converged: return "converged";
    case FixedPointStatus::NoConvergence: return "no_convergence";
    case FixedPointStatus::TrappingExit: return "trapping_exit";
    }
    return "no_convergence";
}

void write_trace(const FixedPointTrace& tr, const std::string& path) {
    CsvWriter csv(path, {"iter", "sup_dist", "c1_dist", "unfrozen_residual", "grad_sup",
                         "margin_sub", "margin_super", "margin_cap", "clamped", "energy",
                         "inner_iterations"});
    for (const auto& r : tr.rows)
        csv.row({fmt_num(r.iter), fmt_num(r.sup_dist), fmt_num(r.c1_dist),
                 fmt_num(r.unfrozen_residual), fmt_num(r.grad_sup), fmt_num(r.margin_sub),
                 fmt_num(r.margin_super), fmt_num(r.margin_cap), r.clamped ? "1" : "0",
                 fmt_num(r.energy), fmt_num(r.inner_iterations)});
}

void print_trace(const FixedPointTrace& tr) {
    for (const auto& r : tr.rows)
        std::printf("outer %3d  sup %.3e  c1 %.3e  residual %.3e  inner %d\n", r.iter, r.sup_dist,
                    r.c1_dist, r.unfrozen_residual, r.inner_iterations);
    std::printf("status %s after %d outer iterations\n", status_name(tr.status),
                tr.outer_iterations);
}

void write_provenance(const RunConfig& cfg) {
    std::ofstream out(cfg.out_dir + "/config.txt");
    if (!out) throw Error("cannot open '" + cfg.out_dir + "/config.txt' for writing");
    out << cfg.serialize();
}

void summarize_trace(SummaryWriter& sum, const FixedPointTrace& tr) {
    sum.kv("status", std::string(status_name(tr.status)));
    sum.kv("converged", tr.converged);
    sum.kv("residual_ok", tr.residual_ok);
    sum.kv("outer_iterations", std::size_t(tr.outer_iterations));
    sum.kv("final_residual", tr.final_residual);
    sum.kv("tol_res", tr.tol_res_used);
}

int run_solve(const RunConfig& cfg, bool verbose) {
    ensure_dir(cfg.out_dir);
    write_provenance(cfg);
    GridPtr g = cfg.build_grid();

    if (cfg.arity == Arity::Scalar) {
        const ScalarProblem prob = cfg.scalar_problem(g);
        const Bracket bracket = cfg.build_bracket(prob);
        const auto fp = iterate_scalar(prob, bracket, bracket.sub, cfg.solver);
        write_trace(fp.trace, cfg.out_dir + "/trace.csv");
        write_fields_csv({&fp.solution}, {"u"}, cfg.out_dir + "/solution.csv");
        SummaryWriter sum(cfg.out_dir + "/summary.txt");
        sum.kv("mode", std::string("solve_scalar"));
        summarize_trace(sum, fp.trace);
        sum.kv("solution_min", fp.solution.min());
        sum.kv("solution_max", fp.solution.max());
        if (verbose) print_trace(fp.trace);

        if (fp.trace.status == FixedPointStatus::Converged) return fp.trace.residual_ok ? 0 : 3;
        const bool bracket_broken = !fp.trace.rows.empty() &&
                                    !std::isnan(fp.trace.rows.back().margin_sub) &&
                                    fp.trace.rows.back().margin_sub < -1e-8 * inf_norm(bracket.sub);
        return bracket_broken ? 5 : 4;
    }

    const SystemProblem prob = cfg.system_problem(g);
    const auto [bu, bv] =
        system_constant_brackets(prob, cfg.bracket.level, cfg.bracket.level2, cfg.bracket.super_start);
    const SystemState start{bu.sub, bv.sub, bu.sub, bv.sub};
    const auto fp = iterate_system(prob, bu, bv, start, cfg.solver);
    write_trace(fp.trace, cfg.out_dir + "/trace.csv");
    write_fields_csv({&fp.u, &fp.v}, {"u", "v"}, cfg.out_dir + "/solution.csv");
    SummaryWriter sum(cfg.out_dir + "/summary.txt");
    sum.kv("mode", std::string("solve_system"));
    summarize_trace(sum, fp.trace);
    sum.kv("u_min", fp.u.min());
    sum.kv("u_max", fp.u.max());
    sum.kv("v_min", fp.v.min());
    sum.kv("v_max", fp.v.max());
    if (verbose) print_trace(fp.trace);

    switch (fp.trace.status) {
    case FixedPointStatus::Converged: return fp.trace.residual_ok ? 0 : 3;
    case FixedPointStatus::TrappingExit: return 5;
    case FixedPointStatus::NoConvergence: return 4;
    }
    return 4;
}

int run_converge(const RunConfig& cfg, bool verbose) {
    const auto res = run_convergence(cfg);
    ensure_dir(cfg.out_dir);
    write_provenance(cfg);
    write_convergence(res, cfg.out_dir);
    if (verbose)
        for (const auto& r : res.rows)
            std::printf("n %4zu  h %.4e  error %.6e  order %.3f\n", r.level, r.h, r.max_error,
                        r.observed_order);
    return res.all_converged ? 0 : 4;
}

int run_unique(const RunConfig& cfg, bool verbose) {
    const auto res = run_uniqueness(cfg);
    ensure_dir(cfg.out_dir);
    write_provenance(cfg);
    write_uniqueness(res, cfg.out_dir);
    if (verbose)
        std::printf("max pairwise sup-distance %.3e (%s)\n", res.max_pairwise,
                    res.pass ? "pass" : "fail");
    for (const auto& s : res.starts)
        if (!s.converged) return 4;
    if (res.asserted && !res.pass) return 1;
    return 0;
}

int run_multi(const RunConfig& cfg, bool verbose) {
    const auto res = run_multiplicity(cfg);
    ensure_dir(cfg.out_dir);
    write_provenance(cfg);
    write_multiplicity(res, cfg.out_dir);
    if (verbose)
        for (std::size_t i = 0; i < res.entries.size(); ++i)
            std::printf("pair %zu  [%.2f, %.2f]  u in [%.4f, %.4f]\n", i, res.entries[i].sub_level,
                        res.entries[i].super_level, res.entries[i].min_value,
                        res.entries[i].max_value);
    for (const auto& e : res.entries)
        if (!e.converged) return 4;
    return res.pass ? 0 : 1;
}

int run_compare(const RunConfig& cfg, bool verbose) {
    const auto res = run_compare_desingularization(cfg);
    ensure_dir(cfg.out_dir);
    write_provenance(cfg);
    write_compare(res, cfg.out_dir);
    if (verbose)
        for (const auto& r : res.rows)
            std::printf("%-10s eps %.1e  drift %.6e\n", r.method.c_str(), r.eps, r.drift);
    if (!res.all_converged) return 4;
    return res.drift_decreasing ? 0 : 1;
}

int run_audit(const RunConfig& cfg, bool verbose) {
    const auto res = run_hypothesis_audit(cfg);
    ensure_dir(cfg.out_dir);
    write_provenance(cfg);
    write_audit(res, cfg.out_dir);
    if (verbose)
        for (const auto& r : res.rows)
            std::printf("%-28s %s  %s\n", r.check.c_str(), r.ok ? "ok  " : "FAIL",
                        r.detail.c_str());
    return 0; // the audit reports; it does not fail the run
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-supersolution solver for singular convective quasilinear problems"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    std::uint64_t seed_override = 0;
    bool verbose = false;

    const char* names[] = {"solve", "converge", "unique", "multi", "compare", "audit"};
    const char* blurbs[] = {"single bracketed fixed-point run",
                            "manufactured-solution convergence table",
                            "multi-start agreement at a single configuration",
                            "ordered ladder of bracketed solutions",
                            "truncation vs shift desingularization",
                            "structural hypothesis audit"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "problem/experiment config file")->required();
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--seed", seed_override, "random seed override");
        sub->add_flag("--verbose", verbose, "print per-iteration progress");
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    try {
        RunConfig cfg = parse_config_file(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (sub->count("--seed") > 0) cfg.solver.seed = seed_override;
        for (const auto& w : cfg.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

        const std::string name = sub->get_name();
        if (name == "solve") return run_solve(cfg, verbose);
        if (name == "converge") return run_converge(cfg, verbose);
        if (name == "unique") return run_unique(cfg, verbose);
        if (name == "multi") return run_multi(cfg, verbose);
        if (name == "compare") return run_compare(cfg, verbose);
        return run_audit(cfg, verbose);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NotASubsolution& e) {
        std::fprintf(stderr, "error: not a subsolution: %s\n", e.what());
        return 5;
    } catch (const NoSupersolution& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const BracketLadderFailed& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const SingularDomain& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NonFiniteEnergy& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const LineSearchStall& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
