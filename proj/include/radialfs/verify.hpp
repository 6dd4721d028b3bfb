#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace radialfs {

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const;
    nlohmann::json to_json() const;
};

class UnknownSuiteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ops, hankel, spaces, solver, specfun, or all (the five concatenated).
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name);

}  // namespace radialfs
