#include "xplab/verify.hpp"

#include "xplab/cli.hpp"
#include "xplab/complexify.hpp"
#include "xplab/embeddings.hpp"
#include "xplab/inequalities.hpp"
#include "xplab/operators.hpp"
#include "xplab/schatten.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>

namespace xplab {

namespace {

using Suite = std::function<void(std::vector<Check>&)>;

void add_max(std::vector<Check>& out, const std::string& suite, const std::string& name,
             double observed, double threshold)
{
    out.push_back({suite, name, observed <= threshold, observed, threshold});
}

void add_min(std::vector<Check>& out, const std::string& suite, const std::string& name,
             double observed, double threshold)
{
    out.push_back({suite, name, observed >= threshold, observed, threshold});
}

double rel(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

GridFunction scaled_shifted(const GridFunction& f, double scale, double shift)
{
    std::vector<double> v = f.tabulated().table();
    for (auto& x : v)
        x = scale * x + shift;
    return GridFunction::from_table(f.modulus(), f.dim(), f.value_dim(), f.value_p(), std::move(v));
}

GridFunction translated(const GridFunction& f, const Coords& shift)
{
    const GridFunction t = f.tabulated();
    const Torus torus = t.torus();
    std::vector<double> v(t.table().size());
    Coords x(t.dim(), 0), y(t.dim());
    const int d = t.value_dim();
    do {
        for (int j = 0; j < t.dim(); ++j)
            y[j] = x[j] + shift[j];
        const double* src = t.at_index(torus.index(y));
        std::copy(src, src + d, v.begin() + torus.index(x) * d);
    } while (torus.next(x));
    return GridFunction::from_table(t.modulus(), t.dim(), d, t.value_p(), std::move(v));
}

std::vector<Subset> nonempty_subsets(int n)
{
    std::vector<Subset> out;
    for (int mask = 1; mask < (1 << n); ++mask) {
        Subset s;
        for (int j = 0; j < n; ++j)
            if (mask >> j & 1)
                s.push_back(j);
        out.push_back(s);
    }
    return out;
}

// ------------------------------------------------------------------ lattice

void lattice_suite(std::vector<Check>& out)
{
    const std::string suite = "lattice";
    {
        double worst = 0.0;
        const SamplePlan plan = exhaustive_plan();
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const GridFunction f = random_grid_function(8, 2, 2, 3.0, seed, "verify:translation");
            const GridFunction g = translated(f, {3, 5});
            const std::vector<Displacement> specs = {
                Displacement::edge(0), Displacement::edge(1), Displacement::diagonal(),
                Displacement::diagonal(SignLaw::ThreeLetter), Displacement::symmetric_diagonal(),
                Displacement::shifted_set({0}, 2), Displacement::fixed_shift({4, 1})};
            for (const auto& s : specs)
                worst = std::max(worst, rel(gap_moment(f, s, plan), gap_moment(g, s, plan)));
        }
        add_max(out, suite, "gap-translation-invariance", worst, 1e-12);
    }
    {
        const GridFunction f = random_grid_function(16, 3, 1, 2.0, 11, "verify:mc");
        int good = 0;
        const int trials = 100;
        for (int t = 0; t < trials; ++t) {
            SamplePlan a;
            a.mode = PlanMode::MonteCarlo;
            a.budget = 2000;
            a.seed = 1000 + t;
            SamplePlan b = a;
            b.budget = 8000;
            b.seed = 5000 + t;
            const Estimate ea = gap_estimate(f, Displacement::diagonal(), a);
            const Estimate eb = gap_estimate(f, Displacement::diagonal(), b);
            const double se = std::hypot(ea.std_error, eb.std_error);
            if (std::abs(ea.mean - eb.mean) < 5.0 * se)
                ++good;
        }
        add_min(out, suite, "monte-carlo-convergence", double(good) / trials, 0.99);
    }
    {
        double worst = 0.0;
        for (auto [m, n] : {std::pair{2, 2}, std::pair{1, 3}})
            for (double p : {2.0, 4.0})
                for (std::uint64_t seed = 0; seed < 10; ++seed) {
                    const GridFunction f = random_grid_function(4 * m, n, 1, p, seed, "verify:set-gradient");
                    for (const auto& s : nonempty_subsets(n))
                        for (std::uint64_t e = 0; e < (1u << n); ++e) {
                            std::vector<int> eps(n);
                            signs_from_index(SignLaw::Rademacher, e, eps);
                            worst = std::max(worst, set_gradient_report(f, s, eps, p).implied_constant);
                        }
                }
        add_max(out, suite, "set-gradient-lemma", worst, 1.0 + 1e-10);
    }
    {
        double worst = 0.0;
        for (auto [m, n] : {std::pair{2, 2}, std::pair{1, 3}})
            for (double p : {2.0, 4.0})
                for (std::uint64_t seed = 0; seed < 10; ++seed) {
                    const GridFunction f = random_grid_function(4 * m, n, 1, p, seed, "verify:doubled");
                    for (const auto& s : nonempty_subsets(n))
                        worst = std::max(worst, doubled_shift_report(f, s, p).implied_constant);
                }
        add_max(out, suite, "doubled-shift-lemma", worst, 1.0 + 1e-10);
    }
}

void geodesic_suite(std::vector<Check>& out)
{
    const std::string suite = "geodesic";
    double endpoint_bad = 0, step_bad = 0, inject_bad = 0, sign_bad = 0;
    for (int n = 1; n <= 3; ++n) {
        const std::vector<std::int64_t> odd = {-5, -3, -1, 1, 3, 5};
        Coords idx(n, 0);
        while (true) {
            Coords w(n);
            std::int64_t len = 0;
            for (int j = 0; j < n; ++j) {
                w[j] = odd[idx[j]];
                len = std::max<std::int64_t>(len, std::abs(w[j]));
            }
            const auto path = geodesic(w);
            if (static_cast<std::int64_t>(path.size()) != len + 1 || path.front() != Coords(n, 0) ||
                path.back() != w)
                ++endpoint_bad;
            for (std::size_t t = 1; t < path.size(); ++t)
                for (int j = 0; j < n; ++j)
                    if (std::abs(path[t][j] - path[t - 1][j]) != 1)
                        ++step_bad;
            auto sorted = path;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                ++inject_bad;
            Coords absw(n);
            for (int j = 0; j < n; ++j)
                absw[j] = std::abs(w[j]);
            const auto base = geodesic(absw);
            for (std::size_t t = 0; t < path.size(); ++t)
                for (int j = 0; j < n; ++j)
                    if (path[t][j] != (w[j] < 0 ? -base[t][j] : base[t][j]))
                        ++sign_bad;
            int j = 0;
            while (j < n && ++idx[j] == 6)
                idx[j++] = 0;
            if (j == n)
                break;
        }
    }
    add_max(out, suite, "endpoints", endpoint_bad, 0);
    add_max(out, suite, "unit-linf-steps", step_bad, 0);
    add_max(out, suite, "injective", inject_bad, 0);
    add_max(out, suite, "sign-equivariant", sign_bad, 0);
}

// ------------------------------------------------------------------ operators

double table_pow(const GridFunction& f, double p)
{
    const GridFunction t = f.tabulated();
    CompensatedSum s;
    for (std::uint64_t i = 0; i < t.torus().size(); ++i)
        s.add(norm_pow(t.at_index(i), t.value_dim(), p, p));
    return s.value();
}

void operators_suite(std::vector<Check>& out)
{
    const std::string suite = "operators";
    {
        double worst = 0.0;
        for (double p : {1.0, 2.0, 3.0}) {
            const GridFunction f = random_grid_function(8, 2, 2, p, 3, "verify:contractive");
            const std::vector<GridFunction> images = {
                box_average(f, BoxAverageKind::a(3)),     box_average(f, BoxAverageKind::bj(1, 3)),
                box_average(f, BoxAverageKind::ds({0}, 3)), box_average(f, BoxAverageKind::delta_t({1}, 1)),
                edge_average(f, EdgeAverageKind::e(0)),   edge_average(f, EdgeAverageKind::cal_e(1)),
                edge_average(f, EdgeAverageKind::cal_e_all()), edge_average(f, EdgeAverageKind::t(0))};
            const double base = table_pow(f, p);
            for (const auto& g : images)
                worst = std::max(worst, table_pow(g, p) / base);
        }
        add_max(out, suite, "averaging-contractive", worst, 1.0 + 1e-12);
    }
    {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const GridFunction f = random_grid_function(8, 2, 1, 2.0, seed, "verify:commute");
            const auto x = box_average(box_average(f, BoxAverageKind::ds({0}, 3)), BoxAverageKind::a(1));
            const auto y = box_average(box_average(f, BoxAverageKind::a(1)), BoxAverageKind::ds({0}, 3));
            for (std::size_t i = 0; i < x.table().size(); ++i)
                worst = std::max(worst, std::abs(x.table()[i] - y.table()[i]));
        }
        add_max(out, suite, "box-averages-commute", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (auto [m, n] : {std::pair{2, 2}, std::pair{1, 3}})
            for (double p : {2.0, 3.0})
                for (std::uint64_t seed = 0; seed < 3; ++seed) {
                    const GridFunction f = random_grid_function(4 * m, n, 1, p, seed, "verify:displacement");
                    for (const auto& s : nonempty_subsets(n))
                        for (std::int64_t radius = 1; radius <= 2 * m; radius += 2) {
                            const auto r = displacement_report(f, s, radius, p);
                            worst = std::max(worst, r.implied_constant / std::pow(8.0, p));
                        }
                }
        add_max(out, suite, "displacement-8p", worst, 1.0);
    }
    {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const HypercubeFunction h = random_hypercube_function(4, 2, 2.0, seed);
            const auto once = rademacher_projection(h);
            const auto twice = rademacher_projection(once);
            for (std::size_t i = 0; i < once.values.size(); ++i)
                worst = std::max(worst, std::abs(once.values[i] - twice.values[i]));
        }
        add_max(out, suite, "rad-idempotent", worst, 1e-12);
    }
}

// ------------------------------------------------------------------ inequalities

double worst_term_rel(const InequalityReport& a, const InequalityReport& b, double factor)
{
    double w = rel(a.lhs * factor, b.lhs);
    for (std::size_t i = 0; i < a.rhs_terms.size(); ++i)
        w = std::max(w, rel(a.rhs_terms[i].value * factor, b.rhs_terms[i].value));
    return w;
}

void inequalities_suite(std::vector<Check>& out)
{
    const std::string suite = "inequalities";
    const SamplePlan plan = make_sample_plan(8, 2, 1, 1000000, 0);
    const GridFunction f = random_grid_function(8, 2, 2, 3.0, 21, "verify:reports");
    const auto base = metric_xp_report(f, 1, plan);
    {
        const auto shifted = metric_xp_report(scaled_shifted(f, 1.0, 0.75), 1, plan);
        add_max(out, suite, "constant-shift-invariance", worst_term_rel(base, shifted, 1.0), 1e-12);
    }
    {
        const double lambda = 2.5;
        const auto scaled = metric_xp_report(scaled_shifted(f, lambda, 0.0), 1, plan);
        double w = worst_term_rel(base, scaled, std::pow(lambda, 3.0));
        w = std::max(w, rel(base.implied_constant, scaled.implied_constant));
        add_max(out, suite, "scaling-homogeneity", w, 1e-10);
    }
    {
        double worst = 0.0;
        for (int n = 1; n <= 4; ++n)
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto h = random_hypercube_function(n, 1, 2.0, seed);
                worst = std::max(worst, smoothness_report(h, SmoothnessKind::enflo(2.0)).implied_constant);
            }
        add_max(out, suite, "enflo-type-2-scalar", worst, 1.0 + 1e-12);
    }
    {
        double worst = -1e300;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            CounterRng rng = make_stream(seed, "verify:jensen");
            VectorList z(4, std::vector<double>(3));
            for (auto& v : z)
                for (auto& x : v)
                    x = rng.normal();
            for (double p : {2.0, 3.0, 5.0}) {
                const auto r = linear_xp_report(z, 2, p, exhaustive_plan());
                worst = std::max(worst, r.extra("square_function_moment") - r.extra("rademacher_moment") *
                                                                                 (1.0 + 1e-12));
            }
        }
        add_max(out, suite, "jensen-square-function", worst, 0.0);
    }
    {
        const auto r = bridge_report({{1.0, 0.0}, {0.0, 1.0}}, 2, 1, 4.0, exhaustive_plan());
        add_min(out, suite, "bridge-lower-bound", r.extra("lower_bound_min_ratio"), 1.0 - 1e-9);
        add_max(out, suite, "bridge-contraction", r.extra("contraction_max_ratio"), 1.0 + 1e-9);
    }
}

// ------------------------------------------------------------------ embeddings

void embeddings_suite(std::vector<Check>& out)
{
    const std::string suite = "embeddings";
    {
        double worst = -1e300;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            CounterRng rng = make_stream(seed, "verify:monotone");
            PointList src(12, Point(3)), img(12, Point(3));
            for (std::size_t i = 0; i < src.size(); ++i)
                for (int a = 0; a < 3; ++a) {
                    src[i][a] = rng.normal();
                    img[i][a] = src[i][a] + 0.3 * rng.normal();
                }
            const double full = distortion(src, 2.0, img, 2.0).distortion;
            const PointList sub_src(src.begin(), src.begin() + 7), sub_img(img.begin(), img.begin() + 7);
            worst = std::max(worst, distortion(sub_src, 2.0, sub_img, 2.0).distortion - full);
        }
        add_max(out, suite, "distortion-subset-monotone", worst, 0.0);
    }
    {
        const PointList grid = integer_grid(4, 2);
        const PointList img = schoenberg_embed(grid, 3.0);
        const Metric snow = [](const Point& x, const Point& y) { return std::pow(lp_distance(x, y, 2.0), 2.0 / 3.0); };
        const Metric l2 = [](const Point& x, const Point& y) { return lp_distance(x, y, 2.0); };
        add_max(out, suite, "schoenberg-isometry", distortion(grid, snow, img, l2).distortion - 1.0, 1e-8);
    }
    {
        double worst = 0.0;
        CounterRng rng = make_stream(0, "verify:rosenthal");
        for (int t = 0; t < 20; ++t) {
            Point x(6), y(6), s(6);
            for (int i = 0; i < 6; ++i) {
                x[i] = rng.normal();
                y[i] = rng.normal();
                s[i] = x[i] + y[i];
            }
            const Point jx = rosenthal_embed(x, 3.0), jy = rosenthal_embed(y, 3.0), js = rosenthal_embed(s, 3.0);
            for (std::size_t i = 0; i < js.size(); ++i)
                worst = std::max(worst, std::abs(js[i] - jx[i] - jy[i]) / std::max(1.0, std::abs(js[i])));
        }
        add_max(out, suite, "rosenthal-linear", worst, 1e-14);
    }
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (int e = 4; e <= 14; ++e) {
            const double lx = std::log(std::ldexp(1.0, e));
            const double ly = std::log(rosenthal_distortion(std::int64_t(1) << e, 3.0, 6.0).distortion);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++count;
        }
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        add_max(out, suite, "rosenthal-exponent-fit", std::abs(slope - 1.0 / 12.0), 0.02);
    }
}

// ------------------------------------------------------------------ trace

Matrix random_orthogonal(int d, CounterRng& rng)
{
    const Matrix g = random_gaussian(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ();
}

void trace_suite(std::vector<Check>& out)
{
    const std::string suite = "trace";
    CounterRng rng = make_stream(0, "verify:trace");
    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const int d = 2 + t % 5;
            const Matrix a = random_gaussian(d, d, rng);
            const Matrix q = random_orthogonal(d, rng);
            for (double p : {1.0, 2.0, 3.0, 4.5})
                worst = std::max(worst, rel(schatten_norm(a, p), schatten_norm(Matrix(q * a * q.transpose()), p)));
        }
        add_max(out, suite, "unitary-invariance", worst, 1e-10);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const SymMatrix a = random_psd(2 + t % 5, rng);
            worst = std::max(worst, std::abs(trace_power(a, 1.0) - a.trace()));
            for (double q : {0.5, 1.5, 2.0, 3.7})
                worst = std::max(worst, rel(trace_mixed(a, SymMatrix::identity(a.order()), q), trace_power(a, q)));
        }
        add_max(out, suite, "trace-power-identities", worst, 1e-12);
    }
    {
        double worst = -1e300;
        for (int t = 0; t < 50; ++t) {
            const SymMatrix c = random_psd(2 + t % 5, rng);
            const SymMatrix d = c + random_psd(c.order(), rng);
            const double q = 1.0 + 7.0 * rng.uniform();
            worst = std::max(worst, trace_power(c, q) - trace_power(d, q));
        }
        add_max(out, suite, "trace-power-monotone", worst, 1e-10);
    }
    struct Corpus {
        std::string name;
        double q;
        TraceKind kind;
    };
    const std::vector<Corpus> corpora = {
        {"main-q1", 1.0, TraceKind::main_qge1()},       {"main-q2.7", 2.7, TraceKind::main_qge1()},
        {"main-q4", 4.0, TraceKind::main_qge1()},       {"qlt1-q0.5", 0.5, TraceKind::qlt1()},
        {"lambda-q3", 3.0, TraceKind::lambda_family()}, {"holder-q2", 2.0, TraceKind::holder({1.0, 1.0}, {0.5, 0.5})},
        {"lieb-thirring-r1.5", 2.0, TraceKind::lieb_thirring(1.5)},
        {"op-convex-theta1.5", 2.0, TraceKind::op_convex(1.5)}};
    for (const auto& c : corpora) {
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const int d = 2 + t % 5;
            const SymMatrix a = random_psd(d, rng), b = random_psd(d, rng);
            const auto r = trace_inequality_report(a, b, c.q, c.kind);
            worst = std::max(worst, r.implied_constant);
            if (c.kind.tag == TraceKind::Tag::OpConvex)
                worst = std::max(worst, 1.0 + std::max(0.0, -r.extra("min_eigenvalue")) / std::max(1.0, r.rhs));
        }
        add_max(out, suite, "corpus-" + c.name, worst, 1.0 + 1e-8);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            std::vector<SymMatrix> b;
            for (int i = 0; i < 4; ++i)
                b.push_back(random_psd(3, rng));
            const auto r = psd_xp_report(b, 2, 2.0);
            worst = std::max(worst, r.implied_constant / r.extra("lemma_constant"));
        }
        add_max(out, suite, "psd-xp-lemma-constant", worst, 1.0);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const SymMatrix a = random_psd(2 + t % 4, rng), b = random_psd(2 + t % 4, rng);
            const double theta = 1.0 + rng.uniform();
            const auto r = trace_inequality_report(a, b, theta, TraceKind::op_convex(theta));
            worst = std::max(worst, std::max(r.implied_constant - 1.0, -r.extra("min_eigenvalue") / r.rhs));
        }
        add_max(out, suite, "op-convex-optimal-weight", worst, 1e-8);
    }
}

// ------------------------------------------------------------------ complexify

void complexify_suite(std::vector<Check>& out)
{
    const std::string suite = "complexify";
    CounterRng rng = make_stream(0, "verify:complexify");
    auto random_vec = [&](int d) {
        std::vector<double> v(d);
        for (auto& x : v)
            x = rng.normal();
        return v;
    };
    {
        double worst = -1e300;
        for (int t = 0; t < 200; ++t) {
            const double p = t % 2 ? 3.0 : 4.0;
            const auto u1 = random_vec(3), v1 = random_vec(3), u2 = random_vec(3), v2 = random_vec(3);
            std::vector<double> us(3), vs(3), uh(3), vh(3);
            const double lambda = -1.7;
            for (int a = 0; a < 3; ++a) {
                us[a] = u1[a] + u2[a];
                vs[a] = v1[a] + v2[a];
                uh[a] = lambda * u1[a];
                vh[a] = lambda * v1[a];
            }
            const double n1 = complexification_norm(u1, v1, p), n2 = complexification_norm(u2, v2, p);
            worst = std::max(worst, complexification_norm(us, vs, p) - (n1 + n2) * (1.0 + 1e-10));
            worst = std::max(worst, rel(complexification_norm(uh, vh, p), std::abs(lambda) * n1) - 1e-10);
        }
        add_max(out, suite, "norm-axioms", worst, 0.0);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double p = 1.0 + 0.5 * (t % 8);
            const auto z = random_vec(4);
            const std::vector<double> zero(4, 0.0);
            const double ratio = std::pow(complexification_norm(z, zero, p), p) / norm_pow(z.data(), 4, p, p);
            worst = std::max(worst, rel(ratio, circular_moment(p)));
        }
        add_max(out, suite, "real-embedding-moment", worst, 1e-9);
    }
    {
        const auto r = bridge_report({{1.0, 0.0}, {0.0, 1.0}}, 2, 1, 4.0, exhaustive_plan());
        add_max(out, suite, "bridge-z0-bound", r.extra("z0_term") / r.extra("z0_bound"), 1.0 + 1e-9);
    }
}

// ------------------------------------------------------------------ cli

void cli_suite(std::vector<Check>& out)
{
    const std::string suite = "cli";
    ExperimentConfig c;
    c.subcommand = "linear-xp";
    c.n = 2;
    c.k = 1;
    c.p = 4;
    c.a = std::vector<double>{1.0, 1.0};
    c.budget = 1000000;
    c.seed = 7;
    const Json via_run = run_report(c).report;
    const Json direct = to_json(linear_xp_report(std::vector<double>{1.0, 1.0}, 1, 4.0, make_sample_plan(1, 2, 1, 1000000, 7)));
    add_max(out, suite, "run-equals-library", via_run == direct ? 0.0 : 1.0, 0.0);
    c.sweep = Sweep{"n", {}, 4.0, 64.0, 5, true};
    c.vectors = VectorList{{1.0, 2.0}, {0.5, -1.0}};
    const ExperimentConfig back = config_from_json(to_json(c));
    const bool same = back == c && to_json(back) == to_json(c);
    add_max(out, suite, "config-roundtrip", same ? 0.0 : 1.0, 0.0);
}

const std::map<std::string, Suite>& suites()
{
    static const std::map<std::string, Suite> table = {
        {"lattice", lattice_suite},   {"geodesic", geodesic_suite},       {"operators", operators_suite},
        {"inequalities", inequalities_suite}, {"embeddings", embeddings_suite}, {"trace", trace_suite},
        {"complexify", complexify_suite},     {"cli", cli_suite}};
    return table;
}

} // namespace

std::vector<std::string> verify_suites()
{
    std::vector<std::string> out;
    for (const auto& [name, fn] : suites())
        out.push_back(name);
    out.push_back("all");
    return out;
}

std::vector<Check> run_suite(const std::string& suite)
{
    std::vector<Check> out;
    if (suite == "all") {
        for (const auto& [name, fn] : suites())
            fn(out);
        return out;
    }
    const auto it = suites().find(suite);
    if (it == suites().end())
        throw ParameterError("unknown verify suite '" + suite + "'");
    it->second(out);
    return out;
}

int verify_command(const std::string& suite, std::ostream& out)
{
    std::vector<Check> checks;
    try {
        checks = run_suite(suite);
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        return 1;
    }
    int failed = 0;
    out << std::left << std::setw(14) << "suite" << std::setw(32) << "check" << std::setw(8) << "status"
        << std::setw(24) << "observed" << "threshold\n";
    for (const auto& c : checks) {
        out << std::left << std::setw(14) << c.suite << std::setw(32) << c.name << std::setw(8)
            << (c.passed ? "pass" : "FAIL") << std::setw(24) << format_double(c.observed)
            << format_double(c.threshold) << "\n";
        failed += !c.passed;
    }
    out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return failed ? 1 : 0;
}

} // namespace xplab
