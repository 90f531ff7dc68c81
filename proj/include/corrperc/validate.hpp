#pragma once

#include <string>
#include <vector>

namespace corrperc::validate {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail; // measured value or discrepancy, for the report line
};

// Closed-form colour-count moments against brute-force enumeration.
std::vector<Check> moments_suite();

// Reduced N-dimensional solvers against the dense colour-space system.
std::vector<Check> oracle_suite();

// Monte Carlo estimates against analytic values on small known cases.
std::vector<Check> mc_suite();

// Dispatch by name: "moments", "oracle", "mc", or "all".
std::vector<Check> run_suite(const std::string &name);

} // namespace corrperc::validate
