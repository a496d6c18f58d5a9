#pragma once

#include "xplab/inequalities.hpp"
#include "xplab/report.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace xplab {

// One swept parameter: either an explicit list or a [start, stop] range with count points.
struct Sweep {
    std::string param;
    std::vector<double> values;
    std::optional<double> start, stop;
    std::optional<int> count;
    bool geometric = false;

    std::vector<double> points() const;
    bool operator==(const Sweep&) const = default;
};

struct ExperimentConfig {
    std::string subcommand;
    std::optional<double> p, q, m, n, k, d, R, s, theta, r, K;
    std::optional<int> trials;
    std::optional<std::uint64_t> budget, seed;
    std::optional<std::string> kind;          // variant selector (trace kind, cotype law, ...)
    std::optional<std::string> function;      // builtin family
    std::optional<std::string> function_file; // GridFunction JSON
    std::optional<std::vector<std::string>> matrix_files;
    std::optional<std::vector<double>> a;
    std::optional<VectorList> vectors;
    std::optional<std::vector<std::int64_t>> set, eps, w, y;
    std::optional<Sweep> sweep;
    std::optional<std::string> out, format;
    std::optional<bool> deterministic;
    std::optional<int> threads;

    bool operator==(const ExperimentConfig&) const = default;
};

Json to_json(const ExperimentConfig& c);
// Rejects unknown fields and more than one sweep.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

// Fields set in overlay replace those in base.
ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& overlay);

std::vector<std::string> subcommands();

struct RunResult {
    Json report;       // the report as the library serialises it
    bool warned = false;
};

RunResult run_report(const ExperimentConfig& c);

// {"schema", "version", "config", "plan", "report", "wall_clock_seconds"?}
Json report_document(const ExperimentConfig& c, const RunResult& r, double wall_seconds);

// Scalar leaves of a JSON object as (dotted name, value) columns.
std::vector<std::pair<std::string, std::string>> flatten_scalars(const Json& j);

// One CSV line per sweep point, preceded by a header.
std::string scan(const ExperimentConfig& c);

// Entry points used by the executable; they return the process exit code.
int run_command(const ExperimentConfig& c, std::ostream& out, std::ostream& err);
int scan_command(const ExperimentConfig& c, std::ostream& out, std::ostream& err);

std::string library_version();

} // namespace xplab
