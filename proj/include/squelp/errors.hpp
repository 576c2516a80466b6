#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace squelp {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Config text could not be tokenized.  `line` is 1-based.
struct ParseError : Error {
    ParseError(int line_, const std::string& what_)
        : Error("parse error at line " + std::to_string(line_) + ": " + what_), line(line_) {}
    int line;
};

/// Config parsed but violates a documented invariant.  All violations found in
/// one pass are listed, not just the first.
struct ValidationError : Error {
    explicit ValidationError(std::vector<std::string> violations_)
        : Error(join(violations_)), violations(std::move(violations_)) {}
    explicit ValidationError(const std::string& one) : ValidationError(std::vector<std::string>{one}) {}
    std::vector<std::string> violations;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& e : v) s += "\n  - " + e;
        return s;
    }
};

/// A singular reaction factor was evaluated at a non-positive argument.
struct SingularDomain : Error {
    using Error::Error;
};

/// Candidate failed the discrete subsolution residual sign check.
struct NotASubsolution : Error {
    NotASubsolution(const std::string& what_, std::size_t worst_node_, double margin_)
        : Error(what_), worst_node(worst_node_), margin(margin_) {}
    std::size_t worst_node;
    double margin;
};

/// Doubling search exhausted without finding a constant supersolution.
struct NoSupersolution : Error {
    using Error::Error;
};

/// Energy or its gradient became non-finite at an evaluation point.
struct NonFiniteEnergy : Error {
    using Error::Error;
};

/// Backtracking line search could not find a decreasing step.
struct LineSearchStall : Error {
    using Error::Error;
};

/// Alternating residual-sign scan for the multiplicity ladder failed.
struct BracketLadderFailed : Error {
    using Error::Error;
};

} // namespace squelp
