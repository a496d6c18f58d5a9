#include "oracles.hpp"
#include "xplab/complexify.hpp"

#include <doctest.h>

#include <numbers>

using namespace xplab;

namespace {

// midpoint rule with many nodes as a crude independent reference
double midpoint_norm_pow(const oracle::Vec& u, const oracle::Vec& v, double p, int nodes)
{
    double s = 0.0;
    const double h = 2 * std::numbers::pi / nodes;
    for (int i = 0; i < nodes; ++i) {
        const double t = (i + 0.5) * h;
        oracle::Vec w(u.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            w[j] = std::cos(t) * u[j] - std::sin(t) * v[j];
        s += oracle::lp_pow(w, p);
    }
    return s * h;
}

oracle::Vec random_vec(CounterRng& rng, int d)
{
    oracle::Vec v(d);
    for (auto& x : v)
        x = rng.normal();
    return v;
}

} // namespace

TEST_CASE("circular moment")
{
    for (double p : {1.0, 2.0, 3.0, 4.5, 8.0}) {
        CHECK(oracle::rel(circular_moment(p), oracle::circular_moment(p)) < 1e-11);
        CHECK(oracle::rel(circular_moment_displayed(p), 2 * oracle::circular_moment(p)) < 1e-12);
        const auto r = circular_moment_report(p);
        CHECK(r.extra("ratio") == doctest::Approx(2.0).epsilon(1e-11));
        CHECK_FALSE(r.warnings.empty());
    }
    CHECK(circular_moment(2.0) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("complexification norm")
{
    const oracle::Vec u{1.0, -2.0, 0.5}, v{0.3, 0.0, 1.0};
    for (double p : {1.0, 2.0, 3.0, 5.5}) {
        const double n = complexification_norm(u, v, p);
        CHECK(oracle::rel(std::pow(n, p), midpoint_norm_pow(u, v, p, 200000)) < 1e-8);
        CHECK(oracle::rel(std::pow(n, p), complexified_norm_pow(u, v, p, circular_moment(p))) < 1e-9);
    }
    const oracle::Vec zero(3, 0.0);
    // the real subspace: ||(u, 0)||^p = moment * ||u||_p^p
    CHECK(oracle::rel(std::pow(complexification_norm(u, zero, 3.0), 3.0),
                      oracle::circular_moment(3.0) * oracle::lp_pow(u, 3.0)) < 1e-10);
    CHECK_THROWS_AS(complexification_norm(u, v, 0.5), ParameterError);
    CHECK_THROWS_AS(complexification_norm(u, v, 2.0, 16), ParameterError);
}

TEST_CASE("complexification norm axioms")
{
    auto rng = make_stream(21, "norm-axioms");
    const double p = 3.0;
    for (int t = 0; t < 1000; ++t) {
        const auto u1 = random_vec(rng, 2), v1 = random_vec(rng, 2);
        const auto u2 = random_vec(rng, 2), v2 = random_vec(rng, 2);
        oracle::Vec us(2), vs(2);
        for (int i = 0; i < 2; ++i) {
            us[i] = u1[i] + u2[i];
            vs[i] = v1[i] + v2[i];
        }
        const double mom = circular_moment(p);
        const auto norm = [&](const oracle::Vec& a, const oracle::Vec& b) {
            return std::pow(complexified_norm_pow(a, b, p, mom), 1.0 / p);
        };
        CHECK(norm(us, vs) <= norm(u1, v1) + norm(u2, v2) + 1e-12);
        // multiplication by i rotates (u, v) to (-v, u)
        oracle::Vec mv(2);
        for (int i = 0; i < 2; ++i)
            mv[i] = -v1[i];
        CHECK(oracle::rel(norm(mv, u1), norm(u1, v1)) < 1e-12);
        const double c = rng.normal();
        oracle::Vec cu(2), cv(2);
        for (int i = 0; i < 2; ++i) {
            cu[i] = c * u1[i];
            cv[i] = c * v1[i];
        }
        CHECK(oracle::rel(norm(cu, cv), std::abs(c) * norm(u1, v1)) < 1e-12);
    }
}

TEST_CASE("contraction principle")
{
    auto rng = make_stream(22, "contraction");
    for (int t = 0; t < 10; ++t) {
        VectorList z;
        std::vector<double> a;
        for (int j = 0; j < 4; ++j) {
            z.push_back(random_vec(rng, 2));
            a.push_back(rng.normal());
        }
        const auto r = contraction_check(a, z, 3.0, exhaustive_plan());
        CHECK(r.implied_constant <= 1.0 + 1e-12);
        double amax = 0.0;
        for (double x : a)
            amax = std::max(amax, std::abs(x));
        const double plain = 16.0 * oracle::rademacher_moment(z, 3.0);
        CHECK(oracle::rel(r.rhs, std::pow(amax, 3.0) * plain) < 1e-11);
    }
}

TEST_CASE("bridge intermediate bounds")
{
    const VectorList z{{1.0, 0.0}, {0.0, 1.0}};
    const auto r = bridge_report(z, 2, 1, 4.0, exhaustive_plan());
    CHECK(r.extra("lower_bound_min_ratio") >= 1.0 - 1e-9);
    CHECK(r.extra("z0_term") <= r.extra("z0_bound") * (1 + 1e-9));
    CHECK(r.extra("contraction_max_ratio") <= 1.0 + 1e-9);
    CHECK(std::abs(r.extra("shift_identity_residual")) < 1e-9);
    CHECK(r.extra("gamma") > 0.0);
    CHECK(r.warnings.empty());

    const auto low = bridge_report(z, 2, 1, 1.5, exhaustive_plan());
    CHECK_FALSE(low.warnings.empty());

    SamplePlan tiny = exhaustive_plan();
    tiny.budget = 10;
    CHECK_THROWS_AS(bridge_report(z, 2, 1, 4.0, tiny), ParameterError);
}
