#include <sstream>
#include <string>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "squelp/config.hpp"
#include "squelp/errors.hpp"

using namespace squelp;

namespace {

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    for (const auto& v : violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

// Line reported by the ParseError, or -1 if the text parsed cleanly.
int parse_error_line(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ParseError& e) {
        return e.line;
    } catch (const ValidationError&) {
        return -2;
    }
    return -1;
}

std::string system_text(double gamma1) {
    std::ostringstream o;
    o << "[problem]\n"
      << "arity = system\n"
      << "p = 2\n"
      << "q = 2\n"
      << "[reaction]\n"
      << "term = coeff=1 s=-0.1 t=0.5\n"
      << "term2 = coeff=1 s=0.6 t=-0.1\n"
      << "alpha1 = 0.1\nbeta1 = 0.5\ngamma1 = " << gamma1 << "\ndelta1 = 0.2\n"
      << "alpha2 = 0.6\nbeta2 = 0.1\ngamma2 = 0.3\ndelta2 = 0.3\n"
      << "[solver]\n"
      << "grad_cap = 6\n";
    return o.str();
}

} // namespace

TEST_CASE("a minimal config keeps the documented defaults") {
    // the default Robin operator has lambda = beta = 0, which validation
    // rejects as non-coercive; one potential coefficient is the least a
    // config can say
    RunConfig c = parse_config_text("[problem]\nlambda = 1\n");

    CHECK(c.grid.dimension == 1);
    CHECK(c.grid.x0 == 0.0);
    CHECK(c.grid.x1 == 1.0);
    CHECK(c.grid.nx == 64);
    CHECK(c.grid.ny == 8);
    CHECK(c.arity == Arity::Scalar);

    CHECK(c.op.kind == OperatorKind::PureR);
    CHECK(c.op.p == 2.0);
    CHECK(c.op.lambda == 1.0);
    CHECK(c.op.beta == 0.0);
    CHECK(c.op.bc == BoundaryKind::Robin);
    CHECK(c.q_exp == 2.0);

    CHECK(c.bracket.mode == BracketMode::Distance);
    CHECK(c.bracket.k0 == 1.0);
    CHECK(c.bracket.level == 0.5);
    CHECK(c.bracket.level2 == 0.5);
    CHECK_FALSE(c.bracket.build_super);
    CHECK(c.bracket.super_start == 1.0);

    CHECK(c.solver.tol_fp == 1e-8);
    CHECK(c.solver.tol_res == 0.0);
    CHECK(c.solver.max_outer == 200);
    CHECK(c.solver.inner.tol == 1e-9);
    CHECK(c.solver.inner.max_iters == 500);
    CHECK(c.solver.inner.max_backtracks == 60);
    CHECK(c.solver.inner.armijo_c == 1e-4);
    CHECK(c.solver.grad_cap == 0.0);
    CHECK(c.solver.seed == 1);
    CHECK(c.solver.n_starts == 3);

    CHECK(c.experiment.kind == ExperimentKind::None);
    const std::vector<std::size_t> want_levels{32, 64};
    CHECK(c.experiment.levels == want_levels);
    CHECK(c.experiment.reference == "two_plus_sin");
    CHECK(c.experiment.convection == 0.0);
    const std::vector<double> want_eps{1e-1, 1e-2, 1e-3, 1e-4};
    CHECK(c.experiment.eps_schedule == want_eps);
    CHECK(c.experiment.ladder_pairs == 3);
    CHECK(c.experiment.uniqueness_tol == 1e-6);

    CHECK(c.out_dir == "out");
    CHECK(c.reaction.terms.empty());
    CHECK(c.warnings.empty());
}

TEST_CASE("comments, blank lines and padding are ignored") {
    const std::string text =
        "# leading comment\n"
        "\n"
        "   [problem]   \n"
        "; semicolon comments work too\n"
        "  nx   =   48  \n"
        "p=3.5\n"
        "beta = 1\n"
        "\n"
        "[output]\n"
        "dir = out/elsewhere\n";
    RunConfig c = parse_config_text(text);
    CHECK(c.grid.nx == 48);
    CHECK(c.op.p == 3.5);
    CHECK(c.out_dir == "out/elsewhere");
}

TEST_CASE("reaction terms parse their inline key=value fields") {
    RunConfig c = parse_config_text(
        "[problem]\n"
        "lambda = 1\n"
        "[reaction]\n"
        "term = coeff=2.5 profile=sin2pix mod=sin_s omega=3 s=1.5 xi1=1\n"
        "term = coeff=1 s=-0.5\n"
        "monotone = true\n"
        "singular_limit = true\n");
    REQUIRE(c.reaction.terms.size() == 2);
    const Term& t = c.reaction.terms[0];
    CHECK(t.coeff == 2.5);
    CHECK(t.profile == Profile::Sin2PiX);
    CHECK(t.mod == Modulator::SinS);
    CHECK(t.omega == 3.0);
    CHECK(t.s_exp == 1.5);
    CHECK(t.xi1_exp == 1.0);
    CHECK(t.t_exp == 0.0);
    CHECK(c.reaction.terms[1].singular_s());
    CHECK(c.reaction.meta.monotone_decreasing);
    CHECK(c.reaction.meta.singular_limit);
}

TEST_CASE("tokenizer failures report the offending line") {
    CHECK(parse_error_line("nx = 4\n") == 1);                        // key outside any section
    CHECK(parse_error_line("[problem]\nwat\n") == 2);                // no equals sign
    CHECK(parse_error_line("[problem\nnx = 4\n") == 1);              // unterminated header
    CHECK(parse_error_line("[conundrum]\n") == 1);                   // unknown section
    CHECK(parse_error_line("[problem]\n# pad\nnx = twelve\n") == 3); // bad integer
    CHECK(parse_error_line("[problem]\np = 1.5oops\n") == 2);        // trailing junk on a number
    CHECK(parse_error_line("[bracket]\nsuper = yes\n") == 2);        // bool must be true/false
    CHECK(parse_error_line("[problem]\nflavour = mild\n") == 2);     // unknown key
    CHECK(parse_error_line("[problem]\n= 3\n") == 2);                // empty key
    CHECK(parse_error_line("[reaction]\nterm = coeff\n") == 2);      // term field not key=value
    CHECK(parse_error_line("[reaction]\nterm = zing=1\n") == 2);     // unknown term field
    CHECK(parse_error_line("[reaction]\nterm = profile=spiky\n") == 2);
    CHECK(parse_error_line("[reaction]\nterm = mod=tan_s\n") == 2);
    CHECK(parse_error_line("[problem]\narity = matrix\n") == 2);
    CHECK(parse_error_line("[problem]\noperator = biharmonic\n") == 2);
    CHECK(parse_error_line("[problem]\nbc = absorbing\n") == 2);
    CHECK(parse_error_line("[bracket]\nmode = wedge\n") == 2);
    CHECK(parse_error_line("[experiment]\nkind = sorcery\n") == 2);
    CHECK(parse_error_line("[experiment]\nlevels = 16 fast\n") == 2);
    CHECK(parse_error_line("[solver]\nwarp = 9\n") == 2);
    CHECK(parse_error_line("[output]\nfile = x.csv\n") == 2);
}

TEST_CASE("parse errors carry the line number in the message") {
    try {
        parse_config_text("[solver]\nmax_iters = 3.5\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        const std::string what = e.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("integer") != std::string::npos);
        CHECK(what.find("3.5") != std::string::npos);
    }
}

TEST_CASE("semantic violations are collected into one ValidationError") {
    const std::string text =
        "[problem]\n"
        "p = 0.5\n"
        "nx = 1\n"
        "[solver]\n"
        "armijo = 2\n"
        "[bracket]\n"
        "level = -1\n";
    try {
        parse_config_text(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations.size() >= 4);
        CHECK(mentions(e.violations, "exponent p must exceed 1"));
        CHECK(mentions(e.violations, "nx"));
        CHECK(mentions(e.violations, "armijo"));
        CHECK(mentions(e.violations, "level"));
        // the what() string lists every violation, not just the first
        const std::string what = e.what();
        CHECK(what.find("nx") != std::string::npos);
        CHECK(what.find("armijo") != std::string::npos);
    }
}

TEST_CASE("growth envelope exponent must sit in the open unit interval") {
    const std::string head = "[problem]\nlambda = 1\n[reaction]\n";
    try {
        parse_config_text(head + "growth_c = 2\ngrowth_gamma = 1.5\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e.violations, "(0,1)"));
    }
    // gamma alone (without C) is still range-checked once declared
    CHECK_THROWS_AS(parse_config_text(head + "growth_gamma = -0.2\n"), ValidationError);
    CHECK_NOTHROW(parse_config_text(head + "growth_c = 2\ngrowth_gamma = 0.5\n"));
}

TEST_CASE("a Robin operator needs a coercive lower-order coefficient") {
    try {
        parse_config_text("");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e.violations, "lambda + beta"));
    }
    CHECK_NOTHROW(parse_config_text("[problem]\nbeta = 0.5\n"));
    // beta belongs to the Robin boundary term only
    CHECK_THROWS_AS(parse_config_text("[problem]\nbc = neumann\nlambda = 1\nbeta = 0.5\n"),
                    ValidationError);
}

TEST_CASE("system configs get the system-specific checks") {
    const std::string text =
        "[problem]\n"
        "arity = system\n"
        "operator = pq\n"
        "q = 1\n";
    try {
        parse_config_text(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e.violations, "grad_cap"));
        CHECK(mentions(e.violations, "second exponent q must exceed 1"));
        CHECK(mentions(e.violations, "pure r-Laplacians"));
    }
}

TEST_CASE("a complete but violated exponent chain warns instead of failing") {
    RunConfig ok = parse_config_text(system_text(0.2));
    CHECK(ok.warnings.empty());

    RunConfig warned = parse_config_text(system_text(0.6));
    REQUIRE(warned.warnings.size() == 1);
    CHECK(warned.warnings[0].find("parameter chains") != std::string::npos);
}

TEST_CASE("experiment schedules must be ordered") {
    const std::string head = "[problem]\nlambda = 1\n[experiment]\n";
    CHECK_THROWS_AS(parse_config_text(head + "levels = 64 32\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(head + "eps = 1e-3 1e-2\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(head + "eps = -0.1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(head + "kind = convergence\nlevels = 64\n"),
                    ValidationError);
    RunConfig ok = parse_config_text(head + "kind = convergence\nlevels = 16 32 64\n");
    const std::vector<std::size_t> want{16, 32, 64};
    CHECK(ok.experiment.levels == want);
    CHECK(ok.experiment.kind == ExperimentKind::Convergence);
}

TEST_CASE("a missing config file is a parse error at line zero") {
    try {
        parse_config_file("/nonexistent/squelp.ini");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 0);
        CHECK(std::string(e.what()).find("cannot open") != std::string::npos);
    }
}

TEST_CASE("serialize is a fixed point of parse for every shipped config") {
    const char* names[] = {"headline_scalar.ini",       "system_pq.ini",
                           "convergence_robin_p2.ini",  "convergence_neumann_p3.ini",
                           "uniqueness_p2.ini",         "multiplicity.ini",
                           "compare_shift.ini",         "audit_headline.ini",
                           "audit_system.ini"};
    for (const char* name : names) {
        CAPTURE(name);
        RunConfig first = parse_config_file(std::string(SQUELP_CONFIG_DIR "/") + name);
        const std::string canon = first.serialize();
        RunConfig second = parse_config_text(canon);
        CHECK(second.serialize() == canon);
    }
}

TEST_CASE("the default configuration round-trips through its own serialization") {
    RunConfig d;
    d.op.lambda = 1.0; // the bare default operator is rejected as non-coercive
    const std::string canon = d.serialize();
    RunConfig back = parse_config_text(canon);
    CHECK(back.serialize() == canon);
    CHECK(back.solver.seed == d.solver.seed);
    CHECK(back.experiment.reference == d.experiment.reference);
}
