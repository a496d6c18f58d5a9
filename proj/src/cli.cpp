#include "xplab/cli.hpp"

#include "xplab/complexify.hpp"
#include "xplab/embeddings.hpp"
#include "xplab/schatten.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#ifndef XPLAB_VERSION
#define XPLAB_VERSION "0.0.0"
#endif

namespace xplab {

std::string library_version() { return XPLAB_VERSION; }

// ---------------------------------------------------------------- config JSON

std::vector<double> Sweep::points() const
{
    if (!values.empty()) {
        if (start || stop || count)
            throw ParameterError("sweep: give either values or a range, not both");
        return values;
    }
    if (!start || !stop || !count)
        throw ParameterError("sweep '" + param + "' needs values or start, stop and count");
    if (*count < 1)
        throw ParameterError("sweep count must be >= 1");
    std::vector<double> out;
    const int c = *count;
    for (int i = 0; i < c; ++i) {
        const double t = c == 1 ? 0.0 : double(i) / (c - 1);
        if (geometric) {
            if (!(*start > 0.0 && *stop > 0.0))
                throw ParameterError("geometric sweep needs positive endpoints");
            double v = *start * std::pow(*stop / *start, t);
            // integer endpoints: snap rounding noise such as 127.99999999999999
            if (*start == std::round(*start) && *stop == std::round(*stop) &&
                std::abs(v - std::round(v)) <= 1e-9 * v)
                v = std::round(v);
            out.push_back(v);
        } else {
            out.push_back(*start + t * (*stop - *start));
        }
    }
    if (c > 1)
        out.back() = *stop;
    return out;
}

namespace {

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v)
{
    if (v)
        j[key] = *v;
}

std::uint64_t as_uint(const Json& v, const std::string& key)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number()) {
        const double x = v.get<double>();
        if (x >= 0.0 && x == std::floor(x) && x < 1.8e19)
            return static_cast<std::uint64_t>(x);
    }
    throw ParameterError("config field '" + key + "' must be a nonnegative integer");
}

double as_double(const Json& v, const std::string& key)
{
    if (!v.is_number())
        throw ParameterError("config field '" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const Json& v, const std::string& key)
{
    const double x = as_double(v, key);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw ParameterError("config field '" + key + "' must be an integer");
    return static_cast<int>(x);
}

Json sweep_json(const Sweep& s)
{
    Json j;
    j["param"] = s.param;
    if (!s.values.empty())
        j["values"] = s.values;
    put(j, "start", s.start);
    put(j, "stop", s.stop);
    put(j, "count", s.count);
    if (s.geometric)
        j["geometric"] = true;
    return j;
}

Sweep sweep_from(const Json& j)
{
    if (!j.is_object())
        throw ParameterError("sweep must be an object");
    Sweep s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        if (k == "param")
            s.param = v.get<std::string>();
        else if (k == "values")
            s.values = v.get<std::vector<double>>();
        else if (k == "start")
            s.start = as_double(v, k);
        else if (k == "stop")
            s.stop = as_double(v, k);
        else if (k == "count")
            s.count = as_int(v, k);
        else if (k == "geometric")
            s.geometric = v.get<bool>();
        else
            throw ParameterError("unknown sweep field '" + k + "'");
    }
    if (s.param.empty())
        throw ParameterError("sweep needs a param");
    return s;
}

} // namespace

Json to_json(const ExperimentConfig& c)
{
    Json j;
    j["subcommand"] = c.subcommand;
    put(j, "p", c.p);
    put(j, "q", c.q);
    put(j, "m", c.m);
    put(j, "n", c.n);
    put(j, "k", c.k);
    put(j, "d", c.d);
    put(j, "R", c.R);
    put(j, "s", c.s);
    put(j, "theta", c.theta);
    put(j, "r", c.r);
    put(j, "K", c.K);
    put(j, "trials", c.trials);
    put(j, "budget", c.budget);
    put(j, "seed", c.seed);
    put(j, "kind", c.kind);
    put(j, "function", c.function);
    put(j, "function_file", c.function_file);
    put(j, "matrix_files", c.matrix_files);
    put(j, "a", c.a);
    put(j, "vectors", c.vectors);
    put(j, "set", c.set);
    put(j, "eps", c.eps);
    put(j, "w", c.w);
    put(j, "y", c.y);
    if (c.sweep)
        j["sweep"] = sweep_json(*c.sweep);
    put(j, "out", c.out);
    put(j, "format", c.format);
    put(j, "deterministic", c.deterministic);
    put(j, "threads", c.threads);
    return j;
}

ExperimentConfig config_from_json(const Json& j)
{
    if (!j.is_object())
        throw ParameterError("config must be a JSON object");
    ExperimentConfig c;
    std::map<std::string, std::optional<double>*> reals = {
        {"p", &c.p}, {"q", &c.q}, {"m", &c.m}, {"n", &c.n}, {"k", &c.k},  {"d", &c.d},
        {"R", &c.R}, {"s", &c.s}, {"theta", &c.theta}, {"r", &c.r}, {"K", &c.K}};
    std::map<std::string, std::optional<std::string>*> strings = {
        {"kind", &c.kind}, {"function", &c.function}, {"function_file", &c.function_file},
        {"out", &c.out}, {"format", &c.format}};
    std::map<std::string, std::optional<std::vector<std::int64_t>>*> ints = {
        {"set", &c.set}, {"eps", &c.eps}, {"w", &c.w}, {"y", &c.y}};
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const Json& v = it.value();
        if (key == "subcommand") {
            c.subcommand = v.get<std::string>();
        } else if (auto r = reals.find(key); r != reals.end()) {
            *r->second = as_double(v, key);
        } else if (auto s = strings.find(key); s != strings.end()) {
            if (!v.is_string())
                throw ParameterError("config field '" + key + "' must be a string");
            *s->second = v.get<std::string>();
        } else if (auto i = ints.find(key); i != ints.end()) {
            *i->second = v.get<std::vector<std::int64_t>>();
        } else if (key == "trials") {
            c.trials = as_int(v, key);
        } else if (key == "threads") {
            c.threads = as_int(v, key);
        } else if (key == "budget") {
            c.budget = as_uint(v, key);
        } else if (key == "seed") {
            c.seed = as_uint(v, key);
        } else if (key == "matrix_files") {
            c.matrix_files = v.get<std::vector<std::string>>();
        } else if (key == "a") {
            c.a = v.get<std::vector<double>>();
        } else if (key == "vectors") {
            c.vectors = v.get<VectorList>();
        } else if (key == "deterministic") {
            c.deterministic = v.get<bool>();
        } else if (key == "sweep") {
            if (v.is_array()) {
                if (v.size() != 1)
                    throw ParameterError("only one parameter may be swept");
                c.sweep = sweep_from(v.front());
            } else {
                c.sweep = sweep_from(v);
            }
        } else {
            throw ParameterError("unknown config field '" + key + "'");
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParameterError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& o)
{
    if (!o.subcommand.empty())
        base.subcommand = o.subcommand;
    auto take = [](auto& dst, const auto& src) {
        if (src)
            dst = src;
    };
    take(base.p, o.p);
    take(base.q, o.q);
    take(base.m, o.m);
    take(base.n, o.n);
    take(base.k, o.k);
    take(base.d, o.d);
    take(base.R, o.R);
    take(base.s, o.s);
    take(base.theta, o.theta);
    take(base.r, o.r);
    take(base.K, o.K);
    take(base.trials, o.trials);
    take(base.budget, o.budget);
    take(base.seed, o.seed);
    take(base.kind, o.kind);
    take(base.function, o.function);
    take(base.function_file, o.function_file);
    take(base.matrix_files, o.matrix_files);
    take(base.a, o.a);
    take(base.vectors, o.vectors);
    take(base.set, o.set);
    take(base.eps, o.eps);
    take(base.w, o.w);
    take(base.y, o.y);
    take(base.sweep, o.sweep);
    take(base.out, o.out);
    take(base.format, o.format);
    take(base.deterministic, o.deterministic);
    take(base.threads, o.threads);
    return base;
}

// ---------------------------------------------------------------- run

namespace {

double need(const std::optional<double>& v, const char* name)
{
    if (!v)
        throw ParameterError(std::string("missing parameter '") + name + "'");
    return *v;
}

std::int64_t need_int(const std::optional<double>& v, const char* name)
{
    const double x = need(v, name);
    if (x != std::floor(x) || std::abs(x) > 9e15)
        throw ParameterError(std::string("parameter '") + name + "' must be an integer");
    return static_cast<std::int64_t>(x);
}

std::int64_t int_or(const std::optional<double>& v, const char* name, std::int64_t fallback)
{
    return v ? need_int(v, name) : fallback;
}

int small_int(std::int64_t v, const char* name)
{
    if (v < 0 || v > 1 << 20)
        throw ParameterError(std::string("parameter '") + name + "' out of range");
    return static_cast<int>(v);
}

std::uint64_t seed_of(const ExperimentConfig& c) { return c.seed.value_or(0); }
std::uint64_t budget_of(const ExperimentConfig& c) { return c.budget.value_or(1000000); }

SamplePlan plan_for(const ExperimentConfig& c, std::int64_t modulus, int n, int k)
{
    return make_sample_plan(modulus, n, k, budget_of(c), seed_of(c));
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GridFunction build_function(const ExperimentConfig& c, std::int64_t modulus, int n, double p)
{
    if (c.function_file) {
        const GridFunction f = grid_function_from_json(Json::parse(read_file(*c.function_file)));
        if (f.modulus() != modulus || f.dim() != n)
            throw ParameterError("function file lives on Z_" + std::to_string(f.modulus()) + "^" +
                                 std::to_string(f.dim()) + ", expected Z_" +
                                 std::to_string(modulus) + "^" + std::to_string(n));
        return f.with_value_p(p);
    }
    const std::string family = c.function.value_or("random");
    const int d = small_int(int_or(c.d, "d", 1), "d");
    const double two_pi = 2.0 * std::numbers::pi;
    if (family == "random")
        return random_grid_function(modulus, n, d, p, seed_of(c), "cli:function");
    if (family == "indicator") {
        return GridFunction::from_evaluator(modulus, n, d, p, [](auto x, auto out) {
            bool origin = true;
            for (auto v : x)
                origin = origin && v == 0;
            for (auto& o : out)
                o = origin ? 1.0 : 0.0;
        });
    }
    if (family == "cosine" || family == "character") {
        if (d != 1)
            throw ParameterError(family + " family is scalar (d = 1)");
        std::vector<std::int64_t> y(n, 0);
        if (family == "cosine")
            y[0] = 1;
        else if (c.y)
            y = *c.y;
        else
            std::fill(y.begin(), y.end(), 1);
        if (static_cast<int>(y.size()) != n)
            throw ParameterError("y must have n entries");
        return GridFunction::from_evaluator(modulus, n, 1, p, [y, modulus, two_pi](auto x, auto out) {
            std::int64_t dot = 0;
            for (std::size_t j = 0; j < y.size(); ++j)
                dot = mod(dot + mod(x[j], modulus) * mod(y[j], modulus), modulus);
            out[0] = std::cos(two_pi * double(dot) / double(modulus));
        });
    }
    if (family == "exponential") {
        if (modulus % 2 != 0)
            throw ParameterError("exponential family needs an even modulus");
        return exponential_embedding(modulus / 2, n).with_value_p(p);
    }
    throw ParameterError("unknown function family '" + family + "'");
}

Subset subset_of(const ExperimentConfig& c, int n)
{
    Subset s;
    if (c.set) {
        for (auto v : *c.set) {
            if (v < 0 || v >= n)
                throw ParameterError("set entries must lie in [0, n)");
            s.push_back(static_cast<int>(v));
        }
    } else {
        for (int j = 0; j < n; ++j)
            s.push_back(j);
    }
    return s;
}

VectorList vectors_of(const ExperimentConfig& c)
{
    if (c.vectors)
        return *c.vectors;
    if (c.a) {
        VectorList out;
        for (double v : *c.a)
            out.push_back({v});
        return out;
    }
    const int n = small_int(need_int(c.n, "n"), "n");
    const int d = small_int(int_or(c.d, "d", 1), "d");
    CounterRng rng = make_stream(seed_of(c), "cli:vectors");
    VectorList out(n, std::vector<double>(d));
    for (auto& v : out)
        for (auto& x : v)
            x = rng.normal();
    return out;
}

std::vector<Matrix> matrices_of(const ExperimentConfig& c, bool square, const char* purpose)
{
    std::vector<Matrix> out;
    if (c.matrix_files) {
        for (const auto& path : *c.matrix_files)
            out.push_back(matrix_from_csv(read_file(path)));
        return out;
    }
    const int n = small_int(need_int(c.n, "n"), "n");
    const int d = small_int(int_or(c.d, "d", 2), "d");
    CounterRng rng = make_stream(seed_of(c), purpose);
    for (int i = 0; i < n; ++i)
        out.push_back(square ? random_psd(d, rng).matrix() : random_gaussian(d, d, rng));
    return out;
}

Json plain(const InequalityReport& r) { return to_json(r); }

Json counterexample_json(double s, double q, double K)
{
    const Counterexample ce = psd_counterexample(s, q, K);
    Json j;
    j["functional"] = "psd-counterexample";
    j["params"] = {{"s", s}, {"q", q}, {"K", K}};
    j["form"] = ce.form;
    j["closed_form"] = ce.closed_form;
    j["relative_error"] =
        ce.closed_form != 0.0 ? std::abs(ce.form - ce.closed_form) / std::abs(ce.closed_form) : 0.0;
    j["min_eigenvalue"] = ce.min_eigenvalue;
    j["negative"] = ce.min_eigenvalue < 0.0;
    j["warnings"] = Json::array();
    if (q != 4.0)
        j["warnings"].push_back("closed form applies to q = 4 only");
    return j;
}

TraceKind trace_kind(const ExperimentConfig& c)
{
    const std::string k = c.kind.value_or("main");
    if (k == "main")
        return TraceKind::main_qge1();
    if (k == "qlt1")
        return TraceKind::qlt1();
    if (k == "lambda")
        return TraceKind::lambda_family();
    if (k == "lieb-thirring")
        return TraceKind::lieb_thirring(need(c.r, "r"));
    if (k == "op-convex") {
        std::optional<double> s;
        if (c.s)
            s = *c.s;
        return TraceKind::op_convex(need(c.theta, "theta"), s);
    }
    if (k == "holder") {
        if (!c.vectors || c.vectors->size() != 2)
            throw ParameterError("holder kind needs vectors = [[a_0..a_{k-1}], [b_1..b_k]]");
        return TraceKind::holder((*c.vectors)[0], (*c.vectors)[1]);
    }
    throw ParameterError("unknown trace kind '" + k + "'");
}

using Runner = std::function<Json(const ExperimentConfig&)>;

const std::map<std::string, Runner>& runners()
{
    static const std::map<std::string, Runner> table = {
        {"metric-xp",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const int k = small_int(int_or(c.k, "k", 1), "k");
             const auto f = build_function(c, 4 * m, n, c.p.value_or(2.0));
             return plain(metric_xp_report(f, k, plan_for(c, 4 * m, n, k)));
         }},
        {"reverse-metric-xp",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const int k = small_int(int_or(c.k, "k", 1), "k");
             const auto f = build_function(c, 8 * m, n, c.p.value_or(2.0));
             return plain(reverse_metric_xp_report(f, k, plan_for(c, 8 * m, n, k)));
         }},
        {"linear-xp",
         [](const ExperimentConfig& c) {
             const VectorList z = vectors_of(c);
             const int n = static_cast<int>(z.size());
             const int k = small_int(int_or(c.k, "k", 1), "k");
             const LinearMode mode =
                 c.kind.value_or("rademacher") == "square" ? LinearMode::SquareFunction : LinearMode::Rademacher;
             return plain(linear_xp_report(z, k, need(c.p, "p"), plan_for(c, 1, n, k), mode));
         }},
        {"reverse-linear-xp",
         [](const ExperimentConfig& c) {
             const VectorList z = vectors_of(c);
             const int n = static_cast<int>(z.size());
             const int k = small_int(int_or(c.k, "k", 1), "k");
             return plain(reverse_linear_xp_report(z, k, need(c.p, "p"), plan_for(c, 1, n, k)));
         }},
        {"smoothness",
         [](const ExperimentConfig& c) {
             const int n = small_int(need_int(c.n, "n"), "n");
             const int d = small_int(int_or(c.d, "d", 1), "d");
             const double p = c.p.value_or(2.0);
             const std::string kind = c.kind.value_or("enflo");
             SmoothnessKind sk;
             if (kind == "enflo")
                 sk = SmoothnessKind::enflo(c.r.value_or(2.0));
             else if (kind == "bmw")
                 sk = SmoothnessKind::bmw(need(c.q, "q"), p);
             else if (kind == "pisier")
                 sk = SmoothnessKind::pisier(p);
             else
                 throw ParameterError("unknown smoothness kind '" + kind + "'");
             return plain(smoothness_report(random_hypercube_function(n, d, p, seed_of(c)), sk));
         }},
        {"cotype",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const std::string kind = c.kind.value_or("three-letter");
             CotypeVariant v;
             std::int64_t modulus;
             if (kind == "three-letter") {
                 v = CotypeVariant::ThreeLetter;
                 modulus = 2 * m;
             } else if (kind == "rademacher") {
                 v = CotypeVariant::Rademacher;
                 modulus = 8 * m;
             } else {
                 throw ParameterError("unknown cotype kind '" + kind + "'");
             }
             const auto f = build_function(c, modulus, n, c.p.value_or(2.0));
             return plain(cotype_report(f, need(c.s, "s"), v, plan_for(c, modulus, n, 0)));
         }},
        {"convolution-probe",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const double p = need(c.p, "p");
             return plain(convolution_probe(build_function(c, m, n, p), p));
         }},
        {"convolution-search",
         [](const ExperimentConfig& c) {
             return plain(convolution_search(need_int(c.m, "m"), small_int(need_int(c.n, "n"), "n"),
                                             need(c.p, "p"), c.trials.value_or(16), seed_of(c)));
         }},
        {"scaling-witness",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const int k = small_int(int_or(c.k, "k", 1), "k");
             return plain(scaling_witness_report(m, n, k, need(c.p, "p"), plan_for(c, 2 * m, n, k)));
         }},
        {"displacement",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const double p = need(c.p, "p");
             return plain(displacement_report(build_function(c, 4 * m, n, p), subset_of(c, n),
                                              need_int(c.R, "R"), p));
         }},
        {"set-gradient",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const double p = need(c.p, "p");
             std::vector<int> eps(n, 1);
             if (c.eps) {
                 if (static_cast<int>(c.eps->size()) != n)
                     throw ParameterError("eps must have n entries");
                 for (int j = 0; j < n; ++j)
                     eps[j] = static_cast<int>((*c.eps)[j]);
             }
             return plain(set_gradient_report(build_function(c, 4 * m, n, p), subset_of(c, n), eps, p));
         }},
        {"doubled-shift",
         [](const ExperimentConfig& c) {
             const auto m = need_int(c.m, "m");
             const int n = small_int(need_int(c.n, "n"), "n");
             const double p = need(c.p, "p");
             return plain(doubled_shift_report(build_function(c, 4 * m, n, p), subset_of(c, n), p));
         }},
        {"trace",
         [](const ExperimentConfig& c) {
             std::vector<Matrix> ab;
             if (c.matrix_files) {
                 ab = matrices_of(c, true, "cli:trace");
             } else {
                 const int d = small_int(int_or(c.d, "d", 3), "d");
                 CounterRng rng = make_stream(seed_of(c), "cli:trace");
                 ab = {random_psd(d, rng).matrix(), random_psd(d, rng).matrix()};
             }
             if (ab.size() != 2)
                 throw ParameterError("trace needs exactly two matrices");
             return plain(trace_inequality_report(SymMatrix(ab[0]), SymMatrix(ab[1]), c.q.value_or(2.0),
                                                  trace_kind(c)));
         }},
        {"psd-counterexample",
         [](const ExperimentConfig& c) {
             return counterexample_json(need(c.s, "s"), c.q.value_or(4.0), c.K.value_or(2.0));
         }},
        {"schatten-xp",
         [](const ExperimentConfig& c) {
             const auto a = matrices_of(c, false, "cli:schatten");
             const int n = static_cast<int>(a.size());
             const int k = small_int(int_or(c.k, "k", 1), "k");
             return plain(schatten_xp_report(a, k, need(c.p, "p"), plan_for(c, 1, n, k)));
         }},
        {"psd-xp",
         [](const ExperimentConfig& c) {
             std::vector<SymMatrix> b;
             for (const auto& m : matrices_of(c, true, "cli:psd"))
                 b.emplace_back(m);
             const int n = static_cast<int>(b.size());
             const int k = small_int(int_or(c.k, "k", 1), "k");
             return plain(psd_xp_report(b, k, need(c.q, "q"), plan_for(c, 1, n, k)));
         }},
        {"khinchine",
         [](const ExperimentConfig& c) {
             const auto a = matrices_of(c, false, "cli:khinchine");
             return plain(khinchine_report(a, need(c.p, "p"), plan_for(c, 1, static_cast<int>(a.size()), 0)));
         }},
        {"rosenthal-distortion",
         [](const ExperimentConfig& c) {
             const auto r = rosenthal_distortion(need_int(c.n, "n"), need(c.q, "q"), need(c.p, "p"));
             Json j;
             j["functional"] = "rosenthal-distortion";
             j["params"] = {{"n", need(c.n, "n")}, {"q", need(c.q, "q")}, {"p", need(c.p, "p")}};
             j["distortion"] = r.distortion;
             j["s_star"] = r.s_star;
             j["s_max"] = r.s_max;
             j["exponent"] = r.exponent;
             j["asymptotic"] = r.asymptotic;
             return j;
         }},
        {"grid-bounds",
         [](const ExperimentConfig& c) {
             const auto b = grid_bounds(need(c.m, "m"), need(c.n, "n"), need(c.q, "q"), need(c.p, "p"));
             Json j;
             j["functional"] = "grid-bounds";
             j["params"] = {{"m", need(c.m, "m")}, {"n", need(c.n, "n")}, {"q", need(c.q, "q")}, {"p", need(c.p, "p")}};
             j["exponent"] = b.exponent;
             j["lower_shape"] = b.lower_shape;
             j["upper_shape"] = b.upper_shape;
             j["transition"] = b.transition;
             j["theta"] = b.theta;
             j["theta_lower"] = b.theta_lower;
             j["theta_upper"] = b.theta_upper;
             j["psi_at_theta"] = b.psi_at_theta;
             return j;
         }},
        {"grid-distortion",
         [](const ExperimentConfig& c) {
             const std::string kind = c.kind.value_or("schoenberg");
             GridEmbedding which;
             if (kind == "schoenberg")
                 which = GridEmbedding::Schoenberg;
             else if (kind == "rosenthal")
                 which = GridEmbedding::Rosenthal;
             else
                 throw ParameterError("unknown grid embedding '" + kind + "'");
             const auto r = composite_grid_distortion(small_int(need_int(c.m, "m"), "m"),
                                                      small_int(need_int(c.n, "n"), "n"), need(c.q, "q"),
                                                      c.p.value_or(2.0), which);
             Json j = to_json(r);
             j.erase("source");
             j.erase("image");
             Json out;
             out["functional"] = "grid-distortion";
             out["params"] = {{"m", need(c.m, "m")}, {"n", need(c.n, "n")}, {"q", need(c.q, "q")},
                              {"p", c.p.value_or(2.0)}};
             out["embedding"] = kind;
             out.update(j);
             return out;
         }},
        {"geodesic",
         [](const ExperimentConfig& c) {
             if (!c.w)
                 throw ParameterError("missing parameter 'w'");
             Json j;
             j["functional"] = "geodesic";
             j["w"] = *c.w;
             j["path"] = geodesic(*c.w);
             j["length"] = j["path"].size() - 1;
             return j;
         }},
        {"circular-moment",
         [](const ExperimentConfig& c) { return plain(circular_moment_report(need(c.p, "p"))); }},
        {"bridge",
         [](const ExperimentConfig& c) {
             VectorList z;
             if (c.vectors) {
                 z = *c.vectors;
             } else {
                 const int n = small_int(need_int(c.n, "n"), "n");
                 const int d = small_int(int_or(c.d, "d", n), "d");
                 z.assign(n, std::vector<double>(d, 0.0));
                 for (int j = 0; j < n && j < d; ++j)
                     z[j][j] = 1.0;
             }
             const int n = static_cast<int>(z.size());
             const auto m = need_int(c.m, "m");
             const int k = small_int(int_or(c.k, "k", 1), "k");
             return plain(bridge_report(z, m, k, need(c.p, "p"), plan_for(c, 2 * m, n, k)));
         }},
        {"contraction",
         [](const ExperimentConfig& c) {
             if (!c.a)
                 throw ParameterError("missing parameter 'a'");
             VectorList z;
             if (c.vectors) {
                 z = *c.vectors;
             } else {
                 ExperimentConfig rc = c;
                 rc.a.reset();
                 rc.n = static_cast<double>(c.a->size());
                 z = vectors_of(rc);
             }
             return plain(contraction_check(*c.a, z, need(c.p, "p"),
                                            plan_for(c, 1, static_cast<int>(z.size()), 0)));
         }},
    };
    return table;
}

bool has_warnings(const Json& report)
{
    return report.contains("warnings") && report["warnings"].is_array() && !report["warnings"].empty();
}

void flatten_into(const Json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string name = prefix.empty() ? it.key() : prefix + "." + it.key();
        const Json& v = it.value();
        if (v.is_object())
            flatten_into(v, name, out);
        else if (v.is_number_float())
            out.emplace_back(name, format_double(v.get<double>()));
        else if (v.is_number())
            out.emplace_back(name, v.dump());
        else if (v.is_boolean())
            out.emplace_back(name, v.get<bool>() ? "true" : "false");
        else if (v.is_null())
            out.emplace_back(name, "");
        else if (v.is_string())
            out.emplace_back(name, v.get<std::string>());
        else if (v.is_array() && name == "warnings")
            out.emplace_back("warning_count", std::to_string(v.size()));
    }
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string csv_line(const std::vector<std::string>& cells)
{
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            line += ',';
        line += csv_cell(cells[i]);
    }
    return line + "\n";
}

// Returns the value actually applied (integer parameters are rounded).
double set_param(ExperimentConfig& c, const std::string& name, double v)
{
    const double r = std::round(v);
    auto as_u64 = [&](double x) {
        if (x < 0.0)
            throw ParameterError("sweep value for '" + name + "' must be nonnegative");
        return static_cast<std::uint64_t>(x);
    };
    if (name == "p") c.p = v;
    else if (name == "q") c.q = v;
    else if (name == "s") c.s = v;
    else if (name == "theta") c.theta = v;
    else if (name == "r") c.r = v;
    else if (name == "K") c.K = v;
    else if (name == "m") return *(c.m = r);
    else if (name == "n") return *(c.n = r);
    else if (name == "k") return *(c.k = r);
    else if (name == "d") return *(c.d = r);
    else if (name == "R") return *(c.R = r);
    else if (name == "trials") c.trials = static_cast<int>(r);
    else if (name == "budget") c.budget = as_u64(r);
    else if (name == "seed") c.seed = as_u64(r);
    else throw ParameterError("parameter '" + name + "' cannot be swept");
    const bool rounded = name == "trials" || name == "budget" || name == "seed";
    return rounded ? r : v;
}

std::string error_json(const std::exception& e)
{
    std::string type = "internal";
    if (dynamic_cast<const ParameterError*>(&e))
        type = "parameter";
    else if (dynamic_cast<const NumericalError*>(&e))
        type = "numerical";
    else if (dynamic_cast<const Json::exception*>(&e))
        type = "config";
    Json j;
    j["error"] = {{"type", type}, {"message", e.what()}};
    return j.dump();
}

void apply_threads(const ExperimentConfig& c)
{
    if (c.threads) {
        if (*c.threads < 1)
            throw ParameterError("threads must be >= 1");
        set_thread_limit(*c.threads);
    }
}

} // namespace

std::vector<std::string> subcommands()
{
    std::vector<std::string> out;
    for (const auto& [name, fn] : runners())
        out.push_back(name);
    return out;
}

RunResult run_report(const ExperimentConfig& c)
{
    const auto it = runners().find(c.subcommand);
    if (it == runners().end())
        throw ParameterError("unknown subcommand '" + c.subcommand + "'");
    RunResult r;
    r.report = it->second(c);
    r.warned = has_warnings(r.report);
    return r;
}

Json report_document(const ExperimentConfig& c, const RunResult& r, double wall_seconds)
{
    Json j;
    j["schema"] = "xp-report/1";
    j["version"] = library_version();
    j["config"] = to_json(c);
    if (c.deterministic.value_or(false))
        j["config"].erase("threads"); // results do not depend on it
    j["plan"] = r.report.contains("plan") ? r.report["plan"] : Json(nullptr);
    j["report"] = r.report;
    if (!c.deterministic.value_or(false))
        j["wall_clock_seconds"] = wall_seconds;
    return j;
}

std::vector<std::pair<std::string, std::string>> flatten_scalars(const Json& j)
{
    std::vector<std::pair<std::string, std::string>> out;
    flatten_into(j, "", out);
    return out;
}

std::string scan(const ExperimentConfig& c)
{
    if (!c.sweep)
        throw ParameterError("scan needs a sweep");
    std::vector<std::string> header;
    std::string body;
    for (double v : c.sweep->points()) {
        ExperimentConfig point = c;
        point.sweep.reset();
        const double applied = set_param(point, c.sweep->param, v);
        const auto cols = flatten_scalars(run_report(point).report);
        if (header.empty()) {
            header.push_back(c.sweep->param);
            for (const auto& [name, value] : cols)
                header.push_back(name);
        }
        std::vector<std::string> row(header.size());
        row[0] = format_double(applied);
        for (const auto& [name, value] : cols) {
            const auto pos = std::find(header.begin() + 1, header.end(), name);
            if (pos != header.end())
                row[pos - header.begin()] = value;
        }
        body += csv_line(row);
    }
    return csv_line(header) + body;
}

int run_command(const ExperimentConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        apply_threads(c);
        const std::string format = c.format.value_or("json");
        if (format != "json" && format != "csv")
            throw ParameterError("format must be json or csv");
        const auto t0 = std::chrono::steady_clock::now();
        const RunResult r = run_report(c);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const Json doc = report_document(c, r, wall);
        if (format == "json") {
            const std::string text = doc.dump(2) + "\n";
            if (c.out) {
                std::ofstream f(*c.out, std::ios::binary);
                if (!f)
                    throw ParameterError("cannot write '" + *c.out + "'");
                f << text;
            } else {
                out << text;
            }
        } else {
            std::vector<std::string> names{"subcommand"}, values{c.subcommand};
            for (const auto& [name, value] : flatten_scalars(r.report)) {
                names.push_back(name);
                values.push_back(value);
            }
            if (c.out) {
                const bool fresh = !std::filesystem::exists(*c.out) || std::filesystem::file_size(*c.out) == 0;
                std::ofstream f(*c.out, std::ios::app | std::ios::binary);
                if (!f)
                    throw ParameterError("cannot write '" + *c.out + "'");
                if (fresh)
                    f << csv_line(names);
                f << csv_line(values);
            } else {
                out << csv_line(names) << csv_line(values);
            }
        }
        return r.warned ? 2 : 0;
    } catch (const std::exception& e) {
        err << error_json(e) << "\n";
        return 1;
    }
}

int scan_command(const ExperimentConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        apply_threads(c);
        const std::string text = scan(c);
        if (c.out) {
            std::ofstream f(*c.out, std::ios::binary);
            if (!f)
                throw ParameterError("cannot write '" + *c.out + "'");
            f << text;
        } else {
            out << text;
        }
        return 0;
    } catch (const std::exception& e) {
        err << error_json(e) << "\n";
        return 1;
    }
}

} // namespace xplab
