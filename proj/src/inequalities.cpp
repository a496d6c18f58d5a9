#include "xplab/inequalities.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace xplab {

namespace {

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v)
    {
        ++n;
        const double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    Estimate estimate() const
    {
        Estimate e;
        e.mean = mean;
        e.count = n;
        e.exhaustive = false;
        e.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        return e;
    }
};

Subset first_subset(int k)
{
    Subset s(k);
    for (int i = 0; i < k; ++i)
        s[i] = i;
    return s;
}

void check_p(double p, double lo, const char* what)
{
    if (!(p >= lo) || !std::isfinite(p))
        throw ParameterError(std::string(what) + ": exponent out of range");
}

void check_k(int k, int n)
{
    if (k < 1 || k > n)
        throw ParameterError("subset size k must lie in [1, n]");
}

void check_subset(const Subset& s, int n)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= n)
            throw ParameterError("subset element out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (s[i] == s[j])
                throw ParameterError("subset has repeated elements");
    }
}

double torus_points(const GridFunction& f)
{
    const Torus t = f.torus();
    if (!t.enumerable())
        throw ParameterError("torus too large to enumerate");
    return static_cast<double>(t.size());
}

Terms common_params(double p, std::int64_t m, int n, int k)
{
    return {{"p", p}, {"m", static_cast<double>(m)}, {"n", static_cast<double>(n)},
            {"k", static_cast<double>(k)}};
}

// sum_x || sum_j c_j v_j(x) ||^p over exhaustive sign patterns, for tables v_j of length points*d
double sign_sum_over_table(const std::vector<std::vector<double>>& v, std::uint64_t points, int d,
                           double p)
{
    const int n = static_cast<int>(v.size());
    const std::uint64_t cube = std::uint64_t(1) << n;
    const std::uint64_t chunk = 512;
    const std::uint64_t chunks = (points + chunk - 1) / chunk;
    const auto parts = detail::chunked_map<CompensatedSum>(chunks, [&](std::uint64_t c) {
        CompensatedSum acc;
        std::vector<double> w(d);
        const std::uint64_t end = std::min(points, (c + 1) * chunk);
        for (std::uint64_t x = c * chunk; x < end; ++x)
            for (std::uint64_t e = 0; e < cube; ++e) {
                std::fill(w.begin(), w.end(), 0.0);
                for (int j = 0; j < n; ++j) {
                    const double sg = HypercubeFunction::sign(e, j);
                    for (int a = 0; a < d; ++a)
                        w[a] += sg * v[j][x * d + a];
                }
                acc.add(norm_pow(w.data(), d, p, p));
            }
        return acc;
    });
    CompensatedSum total;
    for (const auto& s : parts)
        total.merge(s);
    return total.value();
}

} // namespace

SamplePlan exhaustive_plan()
{
    SamplePlan plan;
    plan.mode = PlanMode::Exhaustive;
    plan.subset_mode = PlanMode::Exhaustive;
    plan.budget = std::numeric_limits<std::uint64_t>::max();
    return plan;
}

Estimate subset_sign_average(int n, int k, const SamplePlan& plan, const SignValue& value,
                             std::string_view purpose)
{
    check_k(k, n);
    if (n > 30)
        throw ParameterError("too many coefficients for sign enumeration");
    std::vector<double> c(n, 0.0);
    if (plan.exhaustive()) {
        const std::uint64_t cube = std::uint64_t(1) << k;
        CompensatedSum over_sets;
        std::uint64_t sets = 0;
        Subset s = first_subset(k);
        do {
            CompensatedSum inner;
            for (std::uint64_t e = 0; e < cube; ++e) {
                std::fill(c.begin(), c.end(), 0.0);
                for (int i = 0; i < k; ++i)
                    c[s[i]] = HypercubeFunction::sign(e, i);
                inner.add(value(c));
            }
            over_sets.add(inner.value() / static_cast<double>(cube));
            ++sets;
        } while (next_combination(s, n));
        Estimate out;
        out.mean = over_sets.value() / static_cast<double>(sets);
        out.count = sets * cube;
        return out;
    }
    CounterRng rng = make_stream(plan, purpose);
    Welford w;
    for (std::uint64_t i = 0; i < plan.budget; ++i) {
        const Subset s = random_subset(n, k, rng);
        std::fill(c.begin(), c.end(), 0.0);
        for (int j : s)
            c[j] = (rng() & 1) ? -1.0 : 1.0;
        w.add(value(c));
    }
    return w.estimate();
}

Estimate sign_average(int n, const SamplePlan& plan, const SignValue& value,
                      std::string_view purpose)
{
    if (n < 1 || n > 30)
        throw ParameterError("sign average needs 1 <= n <= 30");
    std::vector<double> c(n);
    if (plan.exhaustive()) {
        const std::uint64_t cube = std::uint64_t(1) << n;
        CompensatedSum acc;
        for (std::uint64_t e = 0; e < cube; ++e) {
            for (int j = 0; j < n; ++j)
                c[j] = HypercubeFunction::sign(e, j);
            acc.add(value(c));
        }
        Estimate out;
        out.mean = acc.value() / static_cast<double>(cube);
        out.count = cube;
        return out;
    }
    CounterRng rng = make_stream(plan, purpose);
    Welford w;
    for (std::uint64_t i = 0; i < plan.budget; ++i) {
        for (int j = 0; j < n; ++j)
            c[j] = (rng() & 1) ? -1.0 : 1.0;
        w.add(value(c));
    }
    return w.estimate();
}

// ---------------------------------------------------------------- metric X_p

InequalityReport metric_xp_report(const GridFunction& f, int k, const SamplePlan& plan)
{
    const std::int64_t modulus = f.modulus();
    if (modulus % 4 != 0)
        throw ParameterError("metric X_p report needs a modulus divisible by 4");
    const int n = f.dim();
    check_k(k, n);
    const double p = f.value_p();
    check_p(p, 1.0, "metric X_p");
    const std::int64_t m = modulus / 4;
    const double mp = std::pow(static_cast<double>(m), p);
    const double kn = static_cast<double>(k) / n;

    InequalityReport r;
    r.functional = "metric-xp";
    r.params = common_params(p, m, n, k);
    const Estimate lhs = subset_gap_estimate(f, 2 * m, k, plan, p);
    r.lhs = lhs.mean / mp;
    r.std_error = lhs.std_error / mp;

    CompensatedSum edges;
    for (int j = 0; j < n; ++j)
        edges.add(gap_moment(f, Displacement::edge(j), plan, p));
    r.rhs_terms.push_back({"edge", kn * edges.value()});
    r.rhs_terms.push_back(
        {"diag", std::pow(kn, p / 2.0) * gap_moment(f, Displacement::diagonal(), plan, p)});
    r.plan = plan;
    r.finalize();

    const double nd = n;
    const double main_threshold = std::pow(nd, 1.5) * std::log(p) / std::sqrt(double(k)) + p * nd;
    const double weak_threshold = std::pow(nd, 1.5) / std::sqrt(double(k));
    r.extras = {{"main_threshold", main_threshold},
                {"main_threshold_met", double(m) >= main_threshold ? 1.0 : 0.0},
                {"weak_threshold", weak_threshold},
                {"weak_threshold_met", double(m) >= weak_threshold ? 1.0 : 0.0}};
    if (p < 2.0)
        r.warnings.push_back("p < 2: outside the range where the inequality is asserted");
    if (double(m) < main_threshold)
        r.warnings.push_back("m below the threshold n^{3/2} log(p)/sqrt(k) + p n");
    return r;
}

InequalityReport reverse_metric_xp_report(const GridFunction& f, int k, const SamplePlan& plan)
{
    const std::int64_t modulus = f.modulus();
    if (modulus % 8 != 0)
        throw ParameterError("reverse metric X_p report needs a modulus divisible by 8");
    const int n = f.dim();
    check_k(k, n);
    const double p = f.value_p();
    check_p(p, 1.0, "reverse metric X_p");
    const std::int64_t m = modulus / 8;
    const double mp = std::pow(static_cast<double>(m), p);
    const double kn = static_cast<double>(k) / n;

    InequalityReport r;
    r.functional = "reverse-metric-xp";
    r.params = common_params(p, m, n, k);
    CompensatedSum cot;
    for (int j = 0; j < n; ++j) {
        Coords v(n, 0);
        v[j] = 4 * m;
        cot.add(gap_moment(f, Displacement::fixed_shift(v), plan, p));
    }
    r.lhs_terms.push_back({"cotype", kn * cot.value() / mp});
    r.lhs_terms.push_back(
        {"type", std::pow(kn, p / 2.0) * gap_moment(f, Displacement::symmetric_diagonal(), plan, p)});
    const Estimate sets = subset_gap_estimate(f, 1, k, plan, p);
    const double pp = std::pow(p, p / 2.0);
    r.rhs_terms.push_back({"subsets", pp * sets.mean});
    r.std_error = pp * sets.std_error;
    r.plan = plan;
    r.finalize();

    const double rhs = r.rhs;
    auto half = [&](double v) {
        return rhs < kDegenerateTol ? (v < kDegenerateTol ? 0.0 : std::numeric_limits<double>::infinity())
                                    : v / rhs;
    };
    r.extras = {{"goal1_ratio", half(r.lhs_term("type"))},
                {"goal2_ratio", half(r.lhs_term("cotype"))}};
    const double threshold = std::pow(double(k), 1.0 / p) / std::sqrt(p);
    if (double(m) < threshold)
        r.warnings.push_back("m below k^{1/p}/sqrt(p)");
    return r;
}

// ---------------------------------------------------------------- linear X_p

XpSides xp_sides(int n, int k, const SamplePlan& plan, const SignValue& value)
{
    check_k(k, n);
    XpSides s;
    const Estimate sub = subset_sign_average(n, k, plan, value, "xp:subsets");
    s.subsets = sub.mean;
    s.subsets_se = sub.std_error;
    s.rademacher = sign_average(n, plan, value, "xp:full").mean;
    return s;
}

namespace {

VectorList as_columns(const std::vector<double>& a)
{
    VectorList out;
    out.reserve(a.size());
    for (double v : a)
        out.push_back({v});
    return out;
}

int vector_dim(const VectorList& a)
{
    if (a.empty())
        throw ParameterError("empty coefficient list");
    const std::size_t d = a.front().size();
    if (d == 0)
        throw ParameterError("coefficient vectors must be nonempty");
    for (const auto& v : a)
        if (v.size() != d)
            throw ParameterError("coefficient vectors have different lengths");
    return static_cast<int>(d);
}

SignValue vector_sign_value(const VectorList& a, double p)
{
    const int d = vector_dim(a);
    return [&a, d, p](const std::vector<double>& c) {
        std::vector<double> w(d, 0.0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (c[j] == 0.0)
                continue;
            for (int i = 0; i < d; ++i)
                w[i] += c[j] * a[j][i];
        }
        return norm_pow(w.data(), d, p, p);
    };
}

struct LinearSides {
    XpSides signs;
    double ell_p = 0.0;
    double square = 0.0;
};

LinearSides linear_sides(const VectorList& a, int k, double p, const SamplePlan& plan)
{
    const int d = vector_dim(a);
    const int n = static_cast<int>(a.size());
    LinearSides s;
    s.signs = xp_sides(n, k, plan, vector_sign_value(a, p));
    CompensatedSum lp;
    for (const auto& v : a)
        lp.add(norm_pow(v.data(), d, p, p));
    s.ell_p = lp.value();
    CompensatedSum sq;
    for (int i = 0; i < d; ++i) {
        CompensatedSum col;
        for (const auto& v : a)
            col.add(v[i] * v[i]);
        sq.add(std::pow(col.value(), p / 2.0));
    }
    s.square = sq.value();
    return s;
}

} // namespace

InequalityReport linear_xp_report(const VectorList& a, int k, double p, const SamplePlan& plan,
                                  LinearMode mode)
{
    check_p(p, 2.0, "linear X_p");
    const LinearSides s = linear_sides(a, k, p, plan);
    const int n = static_cast<int>(a.size());
    const double kn = static_cast<double>(k) / n;
    InequalityReport r;
    r.functional = mode == LinearMode::Rademacher ? "linear-xp" : "linear-xp-square";
    r.params = {{"p", p}, {"n", double(n)}, {"k", double(k)}, {"d", double(a.front().size())}};
    r.lhs = s.signs.subsets;
    r.std_error = s.signs.subsets_se;
    r.rhs_terms.push_back({"ell_p", kn * s.ell_p});
    if (mode == LinearMode::Rademacher)
        r.rhs_terms.push_back({"rademacher", std::pow(kn, p / 2.0) * s.signs.rademacher});
    else
        r.rhs_terms.push_back({"square_function", std::pow(kn, p / 2.0) * s.square});
    r.extras = {{"rademacher_moment", s.signs.rademacher}, {"square_function_moment", s.square}};
    r.plan = plan;
    r.finalize();
    return r;
}

InequalityReport linear_xp_report(const std::vector<double>& a, int k, double p,
                                  const SamplePlan& plan, LinearMode mode)
{
    return linear_xp_report(as_columns(a), k, p, plan, mode);
}

InequalityReport reverse_linear_xp_report(const VectorList& a, int k, double p,
                                          const SamplePlan& plan)
{
    check_p(p, 2.0, "reverse linear X_p");
    const LinearSides s = linear_sides(a, k, p, plan);
    const int n = static_cast<int>(a.size());
    const double kn = static_cast<double>(k) / n;
    InequalityReport r;
    r.functional = "reverse-linear-xp";
    r.params = {{"p", p}, {"n", double(n)}, {"k", double(k)}, {"d", double(a.front().size())}};
    r.lhs_terms = {{"ell_p", kn * s.ell_p}, {"rademacher", std::pow(kn, p / 2.0) * s.signs.rademacher}};
    r.rhs_terms = {{"subsets", s.signs.subsets}};
    r.std_error = s.signs.subsets_se;
    r.plan = plan;
    r.finalize();
    return r;
}

InequalityReport reverse_linear_xp_report(const std::vector<double>& a, int k, double p,
                                          const SamplePlan& plan)
{
    return reverse_linear_xp_report(as_columns(a), k, p, plan);
}

// ---------------------------------------------------------------- hypercube smoothness

InequalityReport smoothness_report(const HypercubeFunction& h, const SmoothnessKind& kind)
{
    const int n = h.n, d = h.d;
    if (n < 1)
        throw ParameterError("smoothness report needs n >= 1");
    const std::uint64_t size = h.size();
    const double vp = h.value_p;
    InequalityReport r;
    r.params = {{"n", double(n)}, {"d", double(d)}};

    auto flip_sum = [&](double power) {
        CompensatedSum acc;
        for (int j = 0; j < n; ++j)
            for (std::uint64_t e = 0; e < size; ++e)
                acc.add(diff_norm_pow(h.at(e), h.at(h.flip(e, j)), d, vp, power));
        return acc.value();
    };
    auto antipodal_sum = [&](double power) {
        CompensatedSum acc;
        for (std::uint64_t e = 0; e < size; ++e)
            acc.add(diff_norm_pow(h.at(e), h.at(h.antipode(e)), d, vp, power));
        return acc.value();
    };
    const double cube = static_cast<double>(size);

    switch (kind.tag) {
    case SmoothnessKind::Tag::Enflo:
        check_p(kind.r, 1.0, "Enflo type");
        r.functional = "enflo-type";
        r.params.push_back({"r", kind.r});
        r.lhs = antipodal_sum(kind.r) / cube;
        r.rhs_terms = {{"flips", flip_sum(kind.r) / cube}};
        break;
    case SmoothnessKind::Tag::BMW:
        check_p(kind.q, 1.0, "BMW type");
        check_p(kind.p, 1.0, "BMW type");
        r.functional = "bmw-type";
        r.params.push_back({"q", kind.q});
        r.params.push_back({"p", kind.p});
        r.lhs = antipodal_sum(kind.p);
        r.rhs_terms = {{"flips", std::pow(double(n), kind.p / kind.q - 1.0) * flip_sum(kind.p)}};
        break;
    case SmoothnessKind::Tag::Pisier: {
        check_p(kind.p, 1.0, "Pisier");
        if (n > 12)
            throw ParameterError("Pisier report enumerates 4^n pairs; n must be <= 12");
        r.functional = "pisier";
        r.params.push_back({"p", kind.p});
        r.lhs = antipodal_sum(kind.p) / cube;
        // differences g_j(eps) = h(sigma^j eps) - h(eps)
        std::vector<double> g(size * n * d);
        for (std::uint64_t e = 0; e < size; ++e)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < d; ++a)
                    g[(e * n + j) * d + a] = h.at(h.flip(e, j))[a] - h.at(e)[a];
        const auto parts = detail::chunked_map<CompensatedSum>(size, [&](std::uint64_t e) {
            CompensatedSum acc;
            std::vector<double> w(d);
            for (std::uint64_t delta = 0; delta < size; ++delta) {
                std::fill(w.begin(), w.end(), 0.0);
                for (int j = 0; j < n; ++j) {
                    const double sg = HypercubeFunction::sign(delta, j);
                    for (int a = 0; a < d; ++a)
                        w[a] += sg * g[(e * n + j) * d + a];
                }
                acc.add(norm_pow(w.data(), d, vp, kind.p));
            }
            return acc;
        });
        CompensatedSum total;
        for (const auto& s : parts)
            total.merge(s);
        r.rhs_terms = {{"rademacher_gradient", total.value() / (cube * cube)}};
        break;
    }
    }
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- cotype

InequalityReport cotype_report(const GridFunction& f, double s, CotypeVariant variant,
                               const SamplePlan& plan)
{
    check_p(s, 1.0, "cotype");
    const std::int64_t modulus = f.modulus();
    const int n = f.dim();
    std::int64_t m = 0, shift = 0;
    SignLaw law = SignLaw::Rademacher;
    InequalityReport r;
    if (variant == CotypeVariant::ThreeLetter) {
        if (modulus % 2 != 0)
            throw ParameterError("three-letter cotype needs an even modulus 2m");
        m = modulus / 2;
        shift = m;
        law = SignLaw::ThreeLetter;
        r.functional = "metric-cotype";
    } else {
        if (modulus % 8 != 0)
            throw ParameterError("Rademacher cotype needs a modulus divisible by 8");
        m = modulus / 8;
        shift = 4 * m;
        r.functional = "rademacher-cotype";
    }
    r.params = {{"s", s}, {"m", double(m)}, {"n", double(n)}};
    CompensatedSum acc;
    for (int j = 0; j < n; ++j) {
        Coords v(n, 0);
        v[j] = shift;
        acc.add(gap_moment(f, Displacement::fixed_shift(v), plan, s));
    }
    r.lhs = acc.value() / std::pow(double(m), s);
    const Estimate diag = gap_estimate(f, Displacement::diagonal(law), plan, s);
    r.rhs_terms = {{"diag", diag.mean}};
    r.plan = plan;
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- convolution probe

InequalityReport convolution_probe(const GridFunction& f0, double p)
{
    check_p(p, 1.0, "convolution probe");
    if (f0.value_dim() != 1)
        throw ParameterError("convolution probe is scalar: value dimension must be 1");
    const GridFunction f = f0.tabulated().with_value_p(p);
    const int n = f.dim();
    const Torus torus = f.torus();
    const std::uint64_t points = torus.size();
    if (n > 20 || saturating_mul(points, std::uint64_t(1) << n) > (std::uint64_t(1) << 28))
        throw ParameterError("convolution probe: torus times hypercube too large");
    const double pts = static_cast<double>(points);
    const double cube = static_cast<double>(std::uint64_t(1) << n);
    const SamplePlan plan = exhaustive_plan();

    const GridFunction ef = edge_average(f, EdgeAverageKind::cal_e_all());
    const double lhs = pts * gap_moment(ef, Displacement::symmetric_diagonal(), plan, p);

    std::vector<std::vector<double>> g(n, std::vector<double>(points));
    Coords x(n), y(n);
    for (int j = 0; j < n; ++j) {
        const GridFunction ej = edge_average(f, EdgeAverageKind::cal_e(j));
        for (std::uint64_t idx = 0; idx < points; ++idx) {
            torus.coords(idx, x);
            y = x;
            y[j] += 1;
            const double plus = *ej.at_index(torus.index(y));
            y[j] -= 2;
            g[j][idx] = plus - *ej.at_index(torus.index(y));
        }
    }
    const double rad = sign_sum_over_table(g, points, 1, p) / cube;

    CompensatedSum edge;
    for (int j = 0; j < n; ++j)
        edge.add(pts * gap_moment(f, Displacement::edge(j), plan, p));

    InequalityReport r;
    r.functional = "convolution-probe";
    r.params = {{"p", p}, {"m", double(f.modulus())}, {"n", double(n)}};
    r.lhs = lhs;
    r.rhs_terms = {{"rad", rad}, {"edge", edge.value()}};
    r.finalize();
    double beta = std::numeric_limits<double>::infinity();
    if (!r.degenerate && lhs >= kDegenerateTol)
        beta = r.rhs / lhs;
    r.extras = {{"beta_bound", beta}};
    r.notes.push_back("beta_bound = (rad + edge) / lhs; any admissible beta_p is at most this value");
    return r;
}

GridFunction random_grid_function(std::int64_t m, int n, int d, double p, std::uint64_t seed,
                                  std::string_view purpose)
{
    const Torus torus(m, n);
    if (!torus.enumerable() || torus.size() > (std::uint64_t(1) << 26))
        throw ParameterError("torus too large for a random table");
    CounterRng rng = make_stream(seed, purpose);
    std::vector<double> v(torus.size() * d);
    for (auto& e : v)
        e = 2.0 * rng.uniform() - 1.0;
    return GridFunction::from_table(m, n, d, p, std::move(v));
}

HypercubeFunction random_hypercube_function(int n, int d, double p, std::uint64_t seed)
{
    if (n < 0 || n > 24)
        throw ParameterError("hypercube dimension out of range");
    CounterRng rng = make_stream(seed, "random-hypercube-function");
    std::vector<double> v((std::size_t(1) << n) * d);
    for (auto& e : v)
        e = 2.0 * rng.uniform() - 1.0;
    return HypercubeFunction(n, d, p, std::move(v));
}

InequalityReport convolution_search(std::int64_t m, int n, double p, int trials,
                                    std::uint64_t seed)
{
    if (trials < 1)
        throw ParameterError("convolution search needs at least one trial");
    // each trial owns its stream, so the search partitions the seed space by trial index
    const auto reports = detail::chunked_map<InequalityReport>(
        static_cast<std::uint64_t>(trials), [&](std::uint64_t t) {
            const std::string purpose = "convolution-search/" + std::to_string(t);
            return convolution_probe(random_grid_function(m, n, 1, p, seed, purpose), p);
        });
    std::size_t best = 0;
    for (std::size_t t = 1; t < reports.size(); ++t)
        if (reports[t].extra("beta_bound") < reports[best].extra("beta_bound"))
            best = t;
    InequalityReport r = reports[best];
    r.functional = "convolution-search";
    r.params.push_back({"trials", double(trials)});
    r.params.push_back({"seed", double(seed)});
    r.extras.push_back({"search_min_beta_bound", r.extra("beta_bound")});
    r.extras.push_back({"argmin_trial", double(best)});
    return r;
}

// ---------------------------------------------------------------- scaling witness

GridFunction exponential_embedding(std::int64_t m, int n)
{
    if (m < 1 || n < 1)
        throw ParameterError("exponential embedding needs m, n >= 1");
    const std::int64_t modulus = 2 * m;
    return GridFunction::from_evaluator(
        modulus, n, 2 * n, 2.0, [m, modulus](std::span<const std::int64_t> x, std::span<double> out) {
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double phase =
                    std::numbers::pi * static_cast<double>(mod(x[j], modulus)) / static_cast<double>(m);
                out[2 * j] = std::cos(phase);
                out[2 * j + 1] = std::sin(phase);
            }
        });
}

InequalityReport scaling_witness_report(std::int64_t m, int n, int k, double p,
                                        const SamplePlan& plan)
{
    check_k(k, n);
    check_p(p, 1.0, "scaling witness");
    const GridFunction g = exponential_embedding(m, n);
    const double kn = static_cast<double>(k) / n;
    const double mp = std::pow(double(m), p);

    InequalityReport r;
    r.functional = "scaling-witness";
    r.params = common_params(p, m, n, k);
    const Estimate sets = subset_gap_estimate(g, m, k, plan, p);
    r.lhs = sets.mean / mp;
    r.std_error = sets.std_error / mp;
    CompensatedSum edges;
    double edge_one = 0.0;
    for (int j = 0; j < n; ++j) {
        const double e = gap_moment(g, Displacement::edge(j), plan, p);
        if (j == 0)
            edge_one = e;
        edges.add(e);
    }
    const double diag = gap_moment(g, Displacement::diagonal(), plan, p);
    r.rhs_terms = {{"edge", kn * edges.value()}, {"diag", std::pow(kn, p / 2.0) * diag}};
    r.plan = plan;
    r.finalize();

    const double chord = std::hypot(std::cos(std::numbers::pi / double(m)) - 1.0,
                                    std::sin(std::numbers::pi / double(m)));
    r.extras = {{"shifted_set_moment", sets.mean},
                {"shifted_set_predicted", std::pow(2.0 * std::sqrt(double(k)), p)},
                {"edge_moment_per_coordinate", edge_one},
                {"edge_moment_predicted", std::pow(chord, p)},
                {"diagonal_moment", diag}};
    r.notes.push_back("untruncated exponential embedding: the shifted-set moment is (2 sqrt k)^p for "
                      "every m, so lhs = (2 sqrt k)^p / m^p and the scale m cancels only after truncation");
    return r;
}

// ---------------------------------------------------------------- section-4 displacement lemmas

InequalityReport displacement_report(const GridFunction& f0, const Subset& s, std::int64_t radius,
                                     double p)
{
    check_p(p, 1.0, "displacement");
    const GridFunction f = f0.tabulated().with_value_p(p);
    const int n = f.dim();
    check_subset(s, n);
    const std::int64_t modulus = f.modulus();
    const GridFunction ds = box_average(f, BoxAverageKind::ds(s, radius));
    const double pts = torus_points(f);
    const int d = f.value_dim();
    CompensatedSum lhs;
    for (std::uint64_t idx = 0; idx < f.torus().size(); ++idx)
        lhs.add(diff_norm_pow(f.at_index(idx), ds.at_index(idx), d, p, p));

    const SamplePlan plan = exhaustive_plan();
    InequalityReport r;
    r.functional = "displacement";
    r.params = {{"p", p}, {"m", double(modulus / 4)}, {"n", double(n)},
                {"R", double(radius)}, {"set_size", double(s.size())}};
    r.lhs = lhs.value();
    r.rhs_terms = {
        {"diag", std::pow(double(radius), p) * pts * gap_moment(f, Displacement::diagonal(), plan, p)},
        {"set", s.empty() ? 0.0 : pts * gap_moment(f, Displacement::shifted_set(s, 1), plan, p)}};
    r.finalize();
    r.extras = {{"constant_8p", std::pow(8.0, p)}};
    const std::int64_t m = modulus / 4;
    if (radius < n || radius > 2 * m || m < n)
        r.warnings.push_back("standing assumptions R in [n, 2m] and m >= n not met");
    return r;
}

InequalityReport set_gradient_report(const GridFunction& f0, const Subset& s,
                                     std::span<const int> eps, double p)
{
    check_p(p, 1.0, "set gradient");
    const GridFunction f = f0.with_value_p(p);
    const int n = f.dim();
    check_subset(s, n);
    if (static_cast<int>(eps.size()) != n)
        throw ParameterError("sign vector has wrong length");
    InequalityReport r;
    r.functional = "set-gradient";
    r.params = {{"p", p}, {"M", double(f.modulus())}, {"n", double(n)}, {"set_size", double(s.size())}};
    r.lhs = set_shift_sum(f, s, eps, 1, p);
    const double pts = torus_points(f);
    CompensatedSum edges;
    for (int j : s)
        edges.add(pts * gap_moment(f, Displacement::edge(j), exhaustive_plan(), p));
    const double factor = s.empty() ? 0.0 : std::pow(double(s.size()), p - 1.0);
    r.rhs_terms = {{"edges", factor * edges.value()}};
    r.finalize();
    return r;
}

InequalityReport doubled_shift_report(const GridFunction& f0, const Subset& s, double p)
{
    check_p(p, 1.0, "doubled shift");
    const GridFunction f = f0.with_value_p(p);
    const int n = f.dim();
    check_subset(s, n);
    const double total = torus_points(f) * static_cast<double>(std::uint64_t(1) << n);
    const SamplePlan plan = exhaustive_plan();
    InequalityReport r;
    r.functional = "doubled-shift";
    r.params = {{"p", p}, {"M", double(f.modulus())}, {"n", double(n)}, {"set_size", double(s.size())}};
    r.lhs = s.empty() ? 0.0 : total * gap_moment(f, Displacement::shifted_set(s, 2), plan, p);
    r.rhs_terms = {{"diag", std::pow(2.0, p) * total * gap_moment(f, Displacement::diagonal(), plan, p)}};
    r.finalize();
    return r;
}

} // namespace xplab
