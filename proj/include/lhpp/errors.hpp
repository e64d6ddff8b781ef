#pragma once

#include <stdexcept>
#include <string>

namespace lhpp {

// Invalid model or pool parameters (correlation matrix not PSD, weights out
// of range, ...).
class parameter_error : public std::runtime_error {
public:
    explicit parameter_error(const std::string& what) : std::runtime_error(what) {}
};

// Root bracket does not contain a sign change.
class bracketing_error : public std::runtime_error {
public:
    explicit bracketing_error(const std::string& what) : std::runtime_error(what) {}
};

// A closed-form approximation was evaluated outside its validity range
// (e.g. non-positive enlarged variance).
class approximation_error : public std::runtime_error {
public:
    explicit approximation_error(const std::string& what) : std::runtime_error(what) {}
};

// Constrained structuring problem has no feasible point.
class infeasibility_error : public std::runtime_error {
public:
    explicit infeasibility_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or degenerate denominators encountered in a numerical
// routine.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Scenario configuration file could not be parsed or failed validation.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lhpp
