#include "oracles.hpp"
#include "xplab/inequalities.hpp"

#include <doctest.h>

#include <complex>
#include <numbers>

using namespace xplab;

namespace {

GridFunction indicator(std::int64_t M, int n, double p)
{
    return GridFunction::from_evaluator(M, n, 1, p, [](auto x, auto out) {
        bool zero = true;
        for (auto v : x)
            zero = zero && v == 0;
        out[0] = zero;
    });
}

GridFunction constant(std::int64_t M, int n, double p)
{
    return GridFunction::from_evaluator(M, n, 2, p, [](auto, auto out) {
        out[0] = 1.0;
        out[1] = -2.0;
    });
}

GridFunction affine(const GridFunction& f, double scale, double shift)
{
    auto v = f.tabulated().table();
    for (auto& x : v)
        x = scale * x + shift;
    return GridFunction::from_table(f.modulus(), f.dim(), f.value_dim(), f.value_p(), v);
}

std::vector<oracle::Vec> random_vectors(int n, int d, std::uint64_t seed)
{
    auto rng = make_stream(seed, "test-vectors");
    std::vector<oracle::Vec> z(n, oracle::Vec(d));
    for (auto& v : z)
        for (auto& x : v)
            x = rng.normal();
    return z;
}

} // namespace

TEST_CASE("metric X_p worked example")
{
    const auto r = metric_xp_report(indicator(4, 1, 2.0), 1, exhaustive_plan());
    CHECK(r.lhs == doctest::Approx(0.5));
    CHECK(r.rhs_term("edge") == doctest::Approx(0.5));
    CHECK(r.rhs_term("diag") == doctest::Approx(0.5));
    CHECK(r.implied_constant == doctest::Approx(0.5));
    CHECK(metric_xp_report(constant(8, 2, 3.0), 1, exhaustive_plan()).degenerate);
    CHECK_THROWS_AS(metric_xp_report(indicator(6, 1, 2.0), 1, exhaustive_plan()), ParameterError);
    CHECK_THROWS_AS(metric_xp_report(indicator(8, 2, 2.0), 3, exhaustive_plan()), ParameterError);
}

TEST_CASE("metric X_p against brute force")
{
    const double p = 3.0;
    const auto f = random_grid_function(8, 2, 2, p, 12);
    const auto t = oracle::table_of(f);
    const int m = 2, n = 2, k = 1;
    double lhs = 0.0;
    for (int j = 0; j < n; ++j)
        lhs += oracle::mean_gap(t, p, 1, [&](const auto& e, auto& a, auto&) { a[j] += 2 * m * e[0]; }) / n;
    lhs /= std::pow(m, p);
    double edge = 0.0;
    for (int j = 0; j < n; ++j)
        edge += oracle::mean_gap(t, p, 0, [&](const auto&, auto& a, auto&) { a[j] += 1; });
    const double diag = oracle::mean_gap(t, p, n, [](const auto& e, auto& a, auto&) {
        a[0] += e[0];
        a[1] += e[1];
    });
    const auto r = metric_xp_report(f, k, exhaustive_plan());
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(r.rhs_term("edge") == doctest::Approx(0.5 * edge).epsilon(1e-12));
    CHECK(r.rhs_term("diag") == doctest::Approx(std::pow(0.5, p / 2) * diag).epsilon(1e-12));
    CHECK(!r.warnings.empty()); // m = 2 is far below the threshold
}

TEST_CASE("metric X_p Monte Carlo agrees with enumeration")
{
    const auto w = GridFunction::from_evaluator(8, 2, 1, 2.0, [](auto x, auto out) {
        out[0] = std::cos(2.0 * std::numbers::pi * double(x[0] + 3 * x[1]) / 8.0);
    });
    const auto exact = metric_xp_report(w, 1, exhaustive_plan());
    SamplePlan mc = make_sample_plan(8, 2, 1, 40000, 5);
    mc.mode = PlanMode::MonteCarlo;
    const auto est = metric_xp_report(w, 1, mc);
    CHECK(std::abs(est.lhs - exact.lhs) < 3.0 * est.std_error + 1e-12);
}

TEST_CASE("linear X_p examples")
{
    const auto r = linear_xp_report(std::vector<double>{1.0, 1.0}, 1, 4.0, exhaustive_plan());
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs_term("ell_p") == doctest::Approx(1.0));
    CHECK(r.rhs_term("rademacher") == doctest::Approx(2.0));
    const auto one = linear_xp_report(std::vector<double>{-1.5}, 1, 3.0, exhaustive_plan());
    CHECK(one.lhs == doctest::Approx(std::pow(1.5, 3)));
    CHECK(one.rhs_term("ell_p") == doctest::Approx(std::pow(1.5, 3)));
    CHECK_THROWS_AS(linear_xp_report(VectorList{}, 1, 3.0, exhaustive_plan()), ParameterError);
}

TEST_CASE("linear X_p against brute force, both modes")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto z = random_vectors(5, 3, seed);
        for (double p : {2.0, 3.0, 4.5})
            for (int k = 1; k <= 5; ++k) {
                const auto r = linear_xp_report(z, k, p, exhaustive_plan());
                const double kn = double(k) / 5;
                double ell = 0.0;
                for (const auto& v : z)
                    ell += oracle::lp_pow(v, p);
                CHECK(r.lhs == doctest::Approx(oracle::subset_moment(z, k, p)).epsilon(1e-12));
                CHECK(r.rhs_term("ell_p") == doctest::Approx(kn * ell).epsilon(1e-12));
                CHECK(r.rhs_term("rademacher") ==
                      doctest::Approx(std::pow(kn, p / 2) * oracle::rademacher_moment(z, p)).epsilon(1e-12));
                const auto sq = linear_xp_report(z, k, p, exhaustive_plan(), LinearMode::SquareFunction);
                double square = 0.0;
                for (int i = 0; i < 3; ++i) {
                    double s2 = 0.0;
                    for (const auto& v : z)
                        s2 += v[i] * v[i];
                    square += std::pow(s2, p / 2);
                }
                CHECK(sq.rhs_term("square_function") ==
                      doctest::Approx(std::pow(kn, p / 2) * square).epsilon(1e-12));
                CHECK(sq.rhs_term("square_function") <= r.rhs_term("rademacher") * (1 + 1e-12));
            }
    }
}

TEST_CASE("reverse linear X_p")
{
    const auto r = reverse_linear_xp_report(std::vector<double>{1.0}, 1, 3.0, exhaustive_plan());
    CHECK(r.lhs == doctest::Approx(2.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.implied_constant == doctest::Approx(2.0));
    CHECK(reverse_linear_xp_report(std::vector<double>{0.0, 0.0}, 1, 3.0, exhaustive_plan()).degenerate);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto z = random_vectors(6, 1, seed);
        const auto rr = reverse_linear_xp_report(z, 3, 4.0, exhaustive_plan());
        CHECK(std::isfinite(rr.implied_constant));
        CHECK(rr.rhs == doctest::Approx(oracle::subset_moment(z, 3, 4.0)).epsilon(1e-12));
    }
}

TEST_CASE("reverse metric X_p")
{
    CHECK(reverse_metric_xp_report(constant(8, 1, 2.0), 1, exhaustive_plan()).degenerate);
    const auto f = indicator(8, 1, 2.0);
    const auto t = oracle::table_of(f);
    const auto r = reverse_metric_xp_report(f, 1, exhaustive_plan());
    const double cotype = oracle::mean_gap(t, 2.0, 0, [](const auto&, auto& a, auto&) { a[0] += 4; });
    const double type = oracle::mean_gap(t, 2.0, 1, [](const auto& e, auto& a, auto& b) {
        a[0] += e[0];
        b[0] -= e[0];
    });
    const double set = oracle::mean_gap(t, 2.0, 1, [](const auto& e, auto& a, auto&) { a[0] += e[0]; });
    CHECK(r.lhs_term("cotype") == doctest::Approx(cotype));
    CHECK(r.lhs_term("type") == doctest::Approx(type));
    CHECK(r.rhs == doctest::Approx(2.0 * set));
    CHECK(r.extra("goal1_ratio") == doctest::Approx(type / r.rhs));
    CHECK(r.extra("goal2_ratio") == doctest::Approx(cotype / r.rhs));
}

TEST_CASE("smoothness reports")
{
    std::vector<double> v(8);
    for (std::uint64_t i = 0; i < 8; ++i)
        v[i] = HypercubeFunction::sign(i, 0);
    const HypercubeFunction h(3, 1, 2.0, v);
    const auto e = smoothness_report(h, SmoothnessKind::enflo(2.0));
    CHECK(e.lhs == doctest::Approx(4.0));
    CHECK(e.rhs == doctest::Approx(4.0));
    CHECK(e.implied_constant == doctest::Approx(1.0));
    CHECK(smoothness_report(HypercubeFunction(2, 1, 2.0, {3, 3, 3, 3}), SmoothnessKind::enflo(2.0)).degenerate);
    for (int n = 1; n <= 4; ++n)
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto g = random_hypercube_function(n, 1, 2.0, seed);
            CHECK(smoothness_report(g, SmoothnessKind::enflo(2.0)).implied_constant <= 1.0 + 1e-12);
        }
}

TEST_CASE("pisier and BMW against brute force")
{
    const auto h = random_hypercube_function(3, 2, 3.0, 8);
    const int n = 3;
    const double p = 3.0;
    auto val = [&](std::uint64_t i) { return oracle::Vec(h.at(i), h.at(i) + 2); };
    double anti = 0.0, pis = 0.0, flips = 0.0;
    for (std::uint64_t e = 0; e < 8; ++e) {
        anti += oracle::lp_pow(oracle::diff(val(e), val(h.antipode(e))), p) / 8;
        for (int j = 0; j < n; ++j)
            flips += oracle::lp_pow(oracle::diff(val(e), val(h.flip(e, j))), p) / 8;
        for (std::uint64_t dl = 0; dl < 8; ++dl) {
            oracle::Vec s(2, 0.0);
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < 2; ++a)
                    s[a] += HypercubeFunction::sign(dl, j) * (h.at(h.flip(e, j))[a] - h.at(e)[a]);
            pis += oracle::lp_pow(s, p) / 64;
        }
    }
    const auto pr = smoothness_report(h, SmoothnessKind::pisier(p));
    CHECK(pr.lhs == doctest::Approx(anti).epsilon(1e-12));
    CHECK(pr.rhs == doctest::Approx(pis).epsilon(1e-12));
    const auto br = smoothness_report(h, SmoothnessKind::bmw(2.0, p));
    CHECK(br.implied_constant == doctest::Approx(anti / (std::pow(n, p / 2.0 - 1.0) * flips)).epsilon(1e-12));
}

TEST_CASE("metric cotype, three-letter example")
{
    const auto f = GridFunction::from_evaluator(4, 1, 1, 2.0, [](auto x, auto out) {
        out[0] = std::cos(std::numbers::pi * double(x[0]) / 2.0);
    });
    const auto r = cotype_report(f, 2.0, CotypeVariant::ThreeLetter, exhaustive_plan());
    CHECK(r.lhs == doctest::Approx(0.5));
    CHECK(r.rhs == doctest::Approx(2.0 / 3.0));
    CHECK(cotype_report(constant(4, 2, 2.0), 2.0, CotypeVariant::ThreeLetter, exhaustive_plan()).degenerate);
    CHECK_THROWS_AS(cotype_report(f, 2.0, CotypeVariant::Rademacher, exhaustive_plan()), ParameterError);
}

TEST_CASE("metric cotype, rademacher variant against brute force")
{
    const auto f = random_grid_function(8, 2, 1, 3.0, 2);
    const auto t = oracle::table_of(f);
    double lhs = 0.0;
    for (int j = 0; j < 2; ++j)
        lhs += oracle::mean_gap(t, 3.0, 0, [&](const auto&, auto& a, auto&) { a[j] += 4; });
    const double rhs = oracle::mean_gap(t, 3.0, 2, [](const auto& e, auto& a, auto&) {
        a[0] += e[0];
        a[1] += e[1];
    });
    const auto r = cotype_report(f, 3.0, CotypeVariant::Rademacher, exhaustive_plan());
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("convolution probe against brute force")
{
    const double p = 2.0;
    const auto f = random_grid_function(6, 2, 1, p, 3);
    const auto t = oracle::table_of(f);
    auto calE = [&](std::vector<long long> x, int skip) {
        double s = 0.0;
        for (const auto& e : oracle::all_signs(2)) {
            auto y = x;
            for (int j = 0; j < 2; ++j)
                if (j != skip)
                    y[j] += e[j];
            s += t.at(y)[0] / 4.0;
        }
        return s;
    };
    double lhs = 0.0, rad = 0.0, edge = 0.0;
    for (long long i = 0; i < t.size(); ++i) {
        const auto x = t.coords(i);
        for (const auto& e : oracle::all_signs(2)) {
            auto a = x, b = x;
            for (int j = 0; j < 2; ++j) {
                a[j] += e[j];
                b[j] -= e[j];
            }
            lhs += std::pow(std::abs(calE(a, -1) - calE(b, -1)), p) / 4.0;
            double s = 0.0;
            for (int j = 0; j < 2; ++j) {
                auto u = x, w = x;
                u[j] += 1;
                w[j] -= 1;
                s += e[j] * (calE(u, j) - calE(w, j));
            }
            rad += std::pow(std::abs(s), p) / 4.0;
        }
        for (int j = 0; j < 2; ++j) {
            auto u = x;
            u[j] += 1;
            edge += std::pow(std::abs(t.at(u)[0] - t.at(x)[0]), p);
        }
    }
    const auto r = convolution_probe(f, p);
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(r.rhs_term("rad") == doctest::Approx(rad).epsilon(1e-12));
    CHECK(r.rhs_term("edge") == doctest::Approx(edge).epsilon(1e-12));
    CHECK(r.extra("beta_bound") == doctest::Approx((rad + edge) / lhs).epsilon(1e-12));
    const auto c = GridFunction::from_evaluator(4, 2, 1, p, [](auto, auto out) { out[0] = 1.0; });
    CHECK(convolution_probe(c, p).degenerate);
}

TEST_CASE("convolution search is deterministic and reports its minimum")
{
    const auto a = convolution_search(6, 2, 2.0, 6, 9);
    const auto b = convolution_search(6, 2, 2.0, 6, 9);
    CHECK(a.extra("search_min_beta_bound") == b.extra("search_min_beta_bound"));
    CHECK(a.extra("search_min_beta_bound") == doctest::Approx(a.extra("beta_bound")));
    set_thread_limit(1);
    const auto c = convolution_search(6, 2, 2.0, 6, 9);
    set_thread_limit(4);
    CHECK(c.extra("search_min_beta_bound") == a.extra("search_min_beta_bound"));
}

TEST_CASE("scaling witness moments")
{
    for (auto [m, n, k] : {std::tuple{2, 2, 1}, std::tuple{3, 2, 2}, std::tuple{2, 3, 2}}) {
        const double p = 3.0;
        const auto r = scaling_witness_report(m, n, k, p, exhaustive_plan());
        CHECK(r.extra("shifted_set_moment") == doctest::Approx(std::pow(2.0 * std::sqrt(double(k)), p)).epsilon(1e-10));
        const double chord = std::abs(std::polar(1.0, std::numbers::pi / m) - 1.0);
        CHECK(r.extra("edge_moment_per_coordinate") == doctest::Approx(std::pow(chord, p)).epsilon(1e-10));
        if (k == n) {
            // shifted set by m vs diagonal: both are sums of n independent coordinate moves
            CHECK(r.extra("shifted_set_moment") <= std::pow(2.0, p) * std::pow(double(m), p) *
                                                       r.extra("diagonal_moment") * (1 + 1e-12));
        }
    }
}

TEST_CASE("displacement report")
{
    const auto f = random_grid_function(4, 2, 1, 2.0, 1);
    const auto id = displacement_report(f, {0, 1}, 1, 2.0);
    CHECK(id.lhs == doctest::Approx(0.0));
    CHECK(displacement_report(constant(8, 2, 2.0), {0}, 1, 2.0).degenerate);
    const auto r = displacement_report(f, {0}, 1, 2.0);
    CHECK(std::isfinite(r.implied_constant));
    CHECK_THROWS_AS(displacement_report(f, {0}, 2, 2.0), ParameterError);
}

TEST_CASE("reports respect constants and scaling")
{
    const double p = 3.0, lambda = 1.7;
    const auto f = random_grid_function(8, 2, 2, p, 30);
    const auto g = affine(f, 1.0, 4.25);
    const auto h = affine(f, lambda, 0.0);
    auto compare = [&](const InequalityReport& a, const InequalityReport& b, double factor) {
        CHECK(b.lhs == doctest::Approx(factor * a.lhs).epsilon(1e-10));
        for (std::size_t i = 0; i < a.rhs_terms.size(); ++i)
            CHECK(b.rhs_terms[i].value == doctest::Approx(factor * a.rhs_terms[i].value).epsilon(1e-10));
        CHECK(b.implied_constant == doctest::Approx(a.implied_constant).epsilon(1e-10));
    };
    const auto plan = exhaustive_plan();
    const double s = std::pow(lambda, p);
    compare(metric_xp_report(f, 1, plan), metric_xp_report(g, 1, plan), 1.0);
    compare(metric_xp_report(f, 1, plan), metric_xp_report(h, 1, plan), s);
    compare(reverse_metric_xp_report(f, 2, plan), reverse_metric_xp_report(g, 2, plan), 1.0);
    compare(reverse_metric_xp_report(f, 2, plan), reverse_metric_xp_report(h, 2, plan), s);
    compare(displacement_report(f, {1}, 3, p), displacement_report(g, {1}, 3, p), 1.0);
    compare(displacement_report(f, {1}, 3, p), displacement_report(h, {1}, 3, p), s);
    compare(cotype_report(f, p, CotypeVariant::Rademacher, plan), cotype_report(g, p, CotypeVariant::Rademacher, plan), 1.0);
    compare(cotype_report(f, p, CotypeVariant::Rademacher, plan), cotype_report(h, p, CotypeVariant::Rademacher, plan), s);
}
