#pragma once

#include "xplab/lattice.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace xplab {

using Json = nlohmann::ordered_json;

struct Term {
    std::string name;
    double value = 0.0;
};

using Terms = std::vector<Term>;

const Term* find_term(const Terms& terms, const std::string& name);
double term_value(const Terms& terms, const std::string& name); // throws if absent

constexpr double kDegenerateTol = 1e-14;

struct InequalityReport {
    std::string functional;
    Terms params;
    Terms lhs_terms; // empty when the left side is a single quantity
    double lhs = 0.0;
    Terms rhs_terms;
    std::string rhs_combine = "sum"; // "sum" or "max"
    double rhs = 0.0;
    double implied_constant = 0.0; // lhs / rhs
    bool degenerate = false;       // every term below kDegenerateTol
    bool unbounded = false;        // rhs vanishes while lhs does not
    Terms extras;                  // auxiliary quantities (halves, intermediate bounds, ...)
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    std::optional<SamplePlan> plan;
    double std_error = 0.0; // of lhs when Monte Carlo

    // Fills lhs (from lhs_terms if present), rhs, implied_constant and the flags.
    void finalize();
    double extra(const std::string& name) const { return term_value(extras, name); }
    double rhs_term(const std::string& name) const { return term_value(rhs_terms, name); }
    double lhs_term(const std::string& name) const { return term_value(lhs_terms, name); }
};

Json to_json(const SamplePlan& plan);
SamplePlan plan_from_json(const Json& j);
Json to_json(const InequalityReport& r);
InequalityReport report_from_json(const Json& j);

// One header line and one data line; columns follow the report's own field order.
std::string csv_header(const InequalityReport& r);
std::string csv_row(const InequalityReport& r);

Json to_json(const GridFunction& f); // table form {M, n, d, p, values}
GridFunction grid_function_from_json(const Json& j);

// Shortest decimal that round-trips (used for CSV cells).
std::string format_double(double v);

} // namespace xplab
