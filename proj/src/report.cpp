#include "xplab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace xplab {

const Term* find_term(const Terms& terms, const std::string& name)
{
    for (const auto& t : terms)
        if (t.name == name)
            return &t;
    return nullptr;
}

double term_value(const Terms& terms, const std::string& name)
{
    const Term* t = find_term(terms, name);
    if (!t)
        throw ParameterError("no term named '" + name + "'");
    return t->value;
}

void InequalityReport::finalize()
{
    if (!lhs_terms.empty()) {
        CompensatedSum s;
        for (const auto& t : lhs_terms)
            s.add(t.value);
        lhs = s.value();
    }
    if (rhs_combine == "max") {
        rhs = 0.0;
        for (const auto& t : rhs_terms)
            rhs = std::max(rhs, t.value);
    } else {
        CompensatedSum s;
        for (const auto& t : rhs_terms)
            s.add(t.value);
        rhs = s.value();
    }
    bool all_small = std::abs(lhs) < kDegenerateTol;
    for (const auto& t : lhs_terms)
        all_small = all_small && std::abs(t.value) < kDegenerateTol;
    for (const auto& t : rhs_terms)
        all_small = all_small && std::abs(t.value) < kDegenerateTol;
    degenerate = all_small;
    unbounded = false;
    if (degenerate) {
        implied_constant = 0.0;
    } else if (std::abs(rhs) < kDegenerateTol) {
        unbounded = true;
        implied_constant = std::numeric_limits<double>::infinity();
    } else {
        implied_constant = lhs / rhs;
    }
}

namespace {

Json number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

double number_or(const Json& j, double fallback)
{
    return j.is_null() ? fallback : j.get<double>();
}

Json terms_json(const Terms& terms)
{
    Json o = Json::object();
    for (const auto& t : terms)
        o[t.name] = number(t.value);
    return o;
}

Terms terms_from(const Json& o)
{
    Terms out;
    for (auto it = o.begin(); it != o.end(); ++it)
        out.push_back({it.key(), number_or(it.value(), std::numeric_limits<double>::quiet_NaN())});
    return out;
}

} // namespace

Json to_json(const SamplePlan& plan)
{
    Json j;
    j["mode"] = to_string(plan.mode);
    j["budget"] = plan.budget;
    j["seed"] = plan.seed;
    j["subset_mode"] = to_string(plan.subset_mode);
    j["subset_count"] = plan.subset_count;
    return j;
}

SamplePlan plan_from_json(const Json& j)
{
    auto mode = [](const std::string& s) {
        if (s == "exhaustive")
            return PlanMode::Exhaustive;
        if (s == "monte-carlo")
            return PlanMode::MonteCarlo;
        throw ParameterError("unknown plan mode '" + s + "'");
    };
    SamplePlan p;
    p.mode = mode(j.at("mode").get<std::string>());
    p.budget = j.at("budget").get<std::uint64_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.subset_mode = mode(j.at("subset_mode").get<std::string>());
    p.subset_count = j.at("subset_count").get<std::uint64_t>();
    return p;
}

Json to_json(const InequalityReport& r)
{
    Json j;
    j["functional"] = r.functional;
    j["params"] = terms_json(r.params);
    if (!r.lhs_terms.empty())
        j["lhs_terms"] = terms_json(r.lhs_terms);
    j["lhs"] = number(r.lhs);
    j["rhs_terms"] = terms_json(r.rhs_terms);
    j["rhs_combine"] = r.rhs_combine;
    j["rhs"] = number(r.rhs);
    j["implied_constant"] = r.degenerate ? Json(nullptr) : number(r.implied_constant);
    j["degenerate"] = r.degenerate;
    j["unbounded"] = r.unbounded;
    j["std_error"] = number(r.std_error);
    j["extras"] = terms_json(r.extras);
    j["warnings"] = r.warnings;
    j["notes"] = r.notes;
    if (r.plan)
        j["plan"] = to_json(*r.plan);
    return j;
}

InequalityReport report_from_json(const Json& j)
{
    InequalityReport r;
    r.functional = j.at("functional").get<std::string>();
    r.params = terms_from(j.at("params"));
    if (j.contains("lhs_terms"))
        r.lhs_terms = terms_from(j.at("lhs_terms"));
    r.lhs = number_or(j.at("lhs"), std::numeric_limits<double>::quiet_NaN());
    r.rhs_terms = terms_from(j.at("rhs_terms"));
    r.rhs_combine = j.at("rhs_combine").get<std::string>();
    r.rhs = number_or(j.at("rhs"), std::numeric_limits<double>::quiet_NaN());
    r.degenerate = j.at("degenerate").get<bool>();
    r.unbounded = j.at("unbounded").get<bool>();
    r.implied_constant = r.degenerate ? 0.0
                         : number_or(j.at("implied_constant"), std::numeric_limits<double>::infinity());
    r.std_error = number_or(j.at("std_error"), 0.0);
    r.extras = terms_from(j.at("extras"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("plan"))
        r.plan = plan_from_json(j.at("plan"));
    return r;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

template <class Fn>
void csv_cells(const InequalityReport& r, Fn&& cell)
{
    cell("functional", csv_escape(r.functional));
    for (const auto& t : r.params)
        cell("param." + t.name, format_double(t.value));
    for (const auto& t : r.lhs_terms)
        cell("lhs." + t.name, format_double(t.value));
    cell("lhs", format_double(r.lhs));
    for (const auto& t : r.rhs_terms)
        cell("rhs." + t.name, format_double(t.value));
    cell("rhs", format_double(r.rhs));
    cell("implied_constant", r.degenerate ? std::string() : format_double(r.implied_constant));
    cell("degenerate", r.degenerate ? "true" : "false");
    cell("unbounded", r.unbounded ? "true" : "false");
    cell("std_error", format_double(r.std_error));
    for (const auto& t : r.extras)
        cell("extra." + t.name, format_double(t.value));
    cell("warnings", std::to_string(r.warnings.size()));
    if (r.plan) {
        cell("plan.mode", to_string(r.plan->mode));
        cell("plan.budget", std::to_string(r.plan->budget));
        cell("plan.seed", std::to_string(r.plan->seed));
    }
}

} // namespace

std::string csv_header(const InequalityReport& r)
{
    std::string out;
    csv_cells(r, [&](const std::string& name, const std::string&) {
        if (!out.empty())
            out += ',';
        out += csv_escape(name);
    });
    return out;
}

std::string csv_row(const InequalityReport& r)
{
    std::string out;
    bool first = true;
    csv_cells(r, [&](const std::string&, const std::string& value) {
        if (!first)
            out += ',';
        first = false;
        out += value;
    });
    return out;
}

Json to_json(const GridFunction& f0)
{
    const GridFunction f = f0.tabulated();
    Json j;
    j["M"] = f.modulus();
    j["n"] = f.dim();
    j["d"] = f.value_dim();
    j["p"] = f.value_p();
    j["values"] = f.table();
    return j;
}

GridFunction grid_function_from_json(const Json& j)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "M" && k != "n" && k != "d" && k != "p" && k != "values")
            throw ParameterError("unknown GridFunction field '" + k + "'");
    }
    return GridFunction::from_table(j.at("M").get<std::int64_t>(), j.at("n").get<int>(),
                                    j.at("d").get<int>(), j.at("p").get<double>(),
                                    j.at("values").get<std::vector<double>>());
}

} // namespace xplab
