#pragma once

#include <string>
#include <vector>

#include "squelp/config.hpp"
#include "squelp/fixed_point.hpp"

namespace squelp {

struct ConvergenceRow {
    std::size_t level = 0;
    double h = 0.0;
    double max_error = 0.0;
    double observed_order = NAN; // vs the previous level; NaN on the first row
    bool converged = false;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    bool all_converged = true;
};

/// Solve the reference problem through the full freeze loop on each grid
/// level and measure nodal max-norm errors against the closed-form solution.
ConvergenceResult run_convergence(const RunConfig& cfg);

struct UniquenessStart {
    int start_id = 0;
    bool converged = false;
    int outer_iterations = 0;
    double final_residual = 0.0;
};

struct UniquenessResult {
    std::vector<UniquenessStart> starts;
    std::vector<Field> solutions;
    std::vector<double> pairwise; // upper triangle, row-major
    double max_pairwise = 0.0;
    bool pass = false;     // all starts converged and agreed within tolerance
    bool asserted = false; // the agreement claim is only backed by theory at p=2
};

/// Run the scalar pipeline from 5 distinct initial frozen fields (sub, sub+1,
/// 3 seeded random fields in [sub, sub+2]) and compare the limits pairwise.
UniquenessResult run_uniqueness(const RunConfig& cfg);

struct MultiplicityEntry {
    double sub_level = 0.0, super_level = 0.0;
    Field solution;
    double min_value = 0.0, max_value = 0.0;
    bool converged = false;
    bool inside = false; // sub <= u <= super nodewise
    int outer_iterations = 0;
};

struct MultiplicityResult {
    std::vector<MultiplicityEntry> entries;
    std::vector<double> pairwise;
    double min_pairwise = HUGE_VAL;
    bool containment_ok = false;
    bool ordering_ok = false;   // max(u_n) < min(u_{n+1}) for consecutive n
    bool transitive_ok = false; // the same for every pair n < m, checked explicitly
    bool pass = false;
};

/// Scan constant levels in steps of 0.25 for alternating strict residual
/// signs, bracket one solution per (sub, super) pair, and certify the
/// ordering.  Throws BracketLadderFailed when the sign pattern cannot be
/// found.
MultiplicityResult run_multiplicity(const RunConfig& cfg);

struct CompareRow {
    std::string method; // "truncation" or "shift"
    double eps = 0.0;
    int outer_iterations = 0;
    double final_residual = 0.0;
    double drift = 0.0; // ||u_eps - u_trunc||_inf; 0 for the truncation row
    bool converged = false;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    bool all_converged = true;
    bool drift_decreasing = false; // strictly, along the shift schedule
};

/// Solve once with truncation, then along the shift schedule (warm-started,
/// no truncation), reporting the drift from the truncation solution.
CompareResult run_compare_desingularization(const RunConfig& cfg);

struct AuditRow {
    std::string check;
    bool ok = true;
    std::string detail;
};

struct AuditResult {
    std::vector<AuditRow> rows;
    bool all_ok = true;
};

/// Evaluate the declared structural hypotheses (growth bound, monotone
/// decrease, singular limit, parameter chains, distance-weight summability)
/// against the configured reaction.  Reports findings; never throws for a
/// failed hypothesis.
AuditResult run_hypothesis_audit(const RunConfig& cfg);

/// CSV/summary emission for each campaign, rooted at dir.
void write_convergence(const ConvergenceResult& res, const std::string& dir);
void write_uniqueness(const UniquenessResult& res, const std::string& dir);
void write_multiplicity(const MultiplicityResult& res, const std::string& dir);
void write_compare(const CompareResult& res, const std::string& dir);
void write_audit(const AuditResult& res, const std::string& dir);

/// node,x,y,<name[0]>,... per-node table for external plotting.
void write_fields_csv(const std::vector<const Field*>& fields, const std::vector<std::string>& names,
                      const std::string& path);

} // namespace squelp
