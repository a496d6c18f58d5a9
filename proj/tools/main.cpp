#include "xplab/cli.hpp"
#include "xplab/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    std::string config;
    std::string sweep;
    xplab::ExperimentConfig c;
    double p = 0, q = 0, m = 0, n = 0, k = 0, d = 0, R = 0, s = 0, theta = 0, r = 0, K = 0;
    int trials = 0, threads = 0;
    std::uint64_t seed = 0;
    double budget = 0;
    std::string kind, function, function_file, out, format;
    std::vector<std::string> matrices;
    std::vector<double> a;
    std::vector<std::int64_t> set, eps, w, y;
    bool deterministic = false;
};

void add_flags(CLI::App* app, Flags& f)
{
    app->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--p", f.p);
    app->add_option("--q", f.q);
    app->add_option("--m", f.m);
    app->add_option("--n", f.n);
    app->add_option("--k", f.k);
    app->add_option("--d", f.d);
    app->add_option("--R", f.R);
    app->add_option("--s", f.s);
    app->add_option("--theta", f.theta);
    app->add_option("--r", f.r);
    app->add_option("--K", f.K);
    app->add_option("--trials", f.trials);
    app->add_option("--seed", f.seed);
    app->add_option("--budget", f.budget);
    app->add_option("--kind", f.kind, "report variant");
    app->add_option("--function", f.function, "random | indicator | cosine | character | exponential");
    app->add_option("--function-file", f.function_file, "GridFunction JSON");
    app->add_option("--matrix", f.matrices, "matrix CSV file (repeatable)");
    app->add_option("--a", f.a, "coefficients")->delimiter(',');
    app->add_option("--set", f.set, "subset S (0-based)")->delimiter(',');
    app->add_option("--eps", f.eps, "sign vector")->delimiter(',');
    app->add_option("--w", f.w, "geodesic target")->delimiter(',');
    app->add_option("--y", f.y, "character frequency")->delimiter(',');
    app->add_option("--out", f.out, "output path");
    app->add_option("--format", f.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--deterministic", f.deterministic, "omit wall-clock fields");
    app->add_option("--threads", f.threads, "worker cap")->check(CLI::PositiveNumber);
}

xplab::Sweep parse_sweep(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw xplab::ParameterError("sweep must look like name=start:stop:count[:geom] or name=v1,v2,...");
    xplab::Sweep s;
    s.param = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    auto split = [](const std::string& str, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = str.find(sep, start);
            parts.push_back(str.substr(start, pos - start));
            if (pos == std::string::npos)
                break;
            start = pos + 1;
        }
        return parts;
    };
    if (rest.find(':') != std::string::npos) {
        const auto parts = split(rest, ':');
        if (parts.size() < 3 || parts.size() > 4)
            throw xplab::ParameterError("range sweep needs start:stop:count[:geom]");
        s.start = std::stod(parts[0]);
        s.stop = std::stod(parts[1]);
        s.count = std::stoi(parts[2]);
        if (parts.size() == 4) {
            if (parts[3] != "geom" && parts[3] != "lin")
                throw xplab::ParameterError("sweep spacing must be geom or lin");
            s.geometric = parts[3] == "geom";
        }
    } else {
        for (const auto& v : split(rest, ','))
            s.values.push_back(std::stod(v));
    }
    return s;
}

xplab::ExperimentConfig collect(const CLI::App* app, const Flags& f, const std::string& subcommand)
{
    xplab::ExperimentConfig base;
    if (!f.config.empty())
        base = xplab::load_config(f.config);
    xplab::ExperimentConfig o;
    o.subcommand = subcommand;
    auto num = [&](const char* flag, std::optional<double>& dst, double v) {
        if (app->count(flag))
            dst = v;
    };
    num("--p", o.p, f.p);
    num("--q", o.q, f.q);
    num("--m", o.m, f.m);
    num("--n", o.n, f.n);
    num("--k", o.k, f.k);
    num("--d", o.d, f.d);
    num("--R", o.R, f.R);
    num("--s", o.s, f.s);
    num("--theta", o.theta, f.theta);
    num("--r", o.r, f.r);
    num("--K", o.K, f.K);
    if (app->count("--trials"))
        o.trials = f.trials;
    if (app->count("--threads"))
        o.threads = f.threads;
    if (app->count("--seed"))
        o.seed = f.seed;
    if (app->count("--budget")) {
        if (f.budget < 1 || f.budget != std::floor(f.budget))
            throw xplab::ParameterError("budget must be a positive integer");
        o.budget = static_cast<std::uint64_t>(f.budget);
    }
    auto str = [&](const char* flag, std::optional<std::string>& dst, const std::string& v) {
        if (app->count(flag))
            dst = v;
    };
    str("--kind", o.kind, f.kind);
    str("--function", o.function, f.function);
    str("--function-file", o.function_file, f.function_file);
    str("--out", o.out, f.out);
    str("--format", o.format, f.format);
    if (!f.matrices.empty())
        o.matrix_files = f.matrices;
    if (!f.a.empty())
        o.a = f.a;
    if (!f.set.empty())
        o.set = f.set;
    if (!f.eps.empty())
        o.eps = f.eps;
    if (!f.w.empty())
        o.w = f.w;
    if (!f.y.empty())
        o.y = f.y;
    if (f.deterministic)
        o.deterministic = true;
    if (!f.sweep.empty())
        o.sweep = parse_sweep(f.sweep);
    xplab::ExperimentConfig c = xplab::merge(base, o);
    if (c.subcommand.empty())
        throw xplab::ParameterError("no report named; give one on the command line or in the config");
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Metric inequality laboratory"};
    app.set_version_flag("--version", xplab::library_version());
    app.require_subcommand(1);

    Flags run_flags, scan_flags;
    std::string report, scan_report, suite = "all";

    auto* run = app.add_subcommand("run", "evaluate one report and write its JSON");
    run->add_option("report", report, "report name (see `xplab list`)");
    add_flags(run, run_flags);

    auto* scan = app.add_subcommand("scan", "sweep one parameter and write a CSV curve");
    scan->add_option("report", scan_report, "report name");
    add_flags(scan, scan_flags);
    scan->add_option("--sweep", scan_flags.sweep, "name=start:stop:count[:geom] or name=v1,v2,...");

    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("suite", suite, "suite name or all");

    auto* list = app.add_subcommand("list", "list reports and verify suites");

    CLI11_PARSE(app, argc, argv);

    auto fail = [](const std::exception& e) {
        std::cerr << xplab::Json{{"error", {{"type", "parameter"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    };

    if (*run) {
        xplab::ExperimentConfig c;
        try {
            c = collect(run, run_flags, report);
        } catch (const std::exception& e) {
            return fail(e);
        }
        return xplab::run_command(c, std::cout, std::cerr);
    }
    if (*scan) {
        xplab::ExperimentConfig c;
        try {
            c = collect(scan, scan_flags, scan_report);
        } catch (const std::exception& e) {
            return fail(e);
        }
        return xplab::scan_command(c, std::cout, std::cerr);
    }
    if (*verify)
        return xplab::verify_command(suite, std::cout);
    if (*list) {
        std::cout << "reports:";
        for (const auto& s : xplab::subcommands())
            std::cout << " " << s;
        std::cout << "\nsuites:";
        for (const auto& s : xplab::verify_suites())
            std::cout << " " << s;
        std::cout << "\n";
    }
    return 0;
}
