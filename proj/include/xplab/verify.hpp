#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xplab {

struct Check {
    std::string suite;
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double threshold = 0.0;
};

std::vector<std::string> verify_suites();

// Runs one named suite, or every suite for "all". Throws ParameterError for unknown names.
std::vector<Check> run_suite(const std::string& suite);

// Prints the table and returns the process exit code (nonzero on any failure).
int verify_command(const std::string& suite, std::ostream& out);

} // namespace xplab
