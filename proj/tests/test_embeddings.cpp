#include "oracles.hpp"
#include "xplab/embeddings.hpp"

#include <doctest.h>

#include <complex>
#include <numbers>

using namespace xplab;

namespace {

double dense_rosenthal(double n, double q, double p)
{
    double lo = 1e300, hi = 0.0;
    for (double s = 1.0; s <= n + 1e-12; s += 1e-3) {
        const double v = std::pow(n, p / 2) * std::pow(s, 1 - p / q) + std::pow(n, p / q) * std::pow(s, p / 2 - p / q);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return std::pow(hi / lo, 1.0 / p);
}

double grid_distance_q(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y, std::int64_t m, double q)
{
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto a = std::polar(1.0, 2 * std::numbers::pi * double(x[j]) / double(m));
        const auto b = std::polar(1.0, 2 * std::numbers::pi * double(y[j]) / double(m));
        s += std::pow(std::abs(a - b), q);
    }
    return std::pow(s, 1.0 / q);
}

} // namespace

TEST_CASE("lp distance")
{
    const Point a{0, 3}, b{4, 0};
    CHECK(lp_distance(a, b, 2.0) == doctest::Approx(5.0));
    CHECK(lp_distance(a, b, 1.0) == doctest::Approx(7.0));
}

TEST_CASE("rosenthal embedding examples")
{
    const int n = 5;
    const double q = 3.0, p = 6.0;
    Point e1(n, 0.0);
    e1[0] = 1.0;
    CHECK(std::pow(rosenthal_norm(rosenthal_embed(e1, q), p), p) ==
          doctest::Approx(std::pow(n, p / 2) + std::pow(n, p / q)));
    const Point ones(n, 1.0);
    CHECK(std::pow(rosenthal_norm(rosenthal_embed(ones, q), p), p) ==
          doctest::Approx(std::pow(n, p / 2) * n + std::pow(n, p / q) * std::pow(n, p / 2)).epsilon(1e-12));
    CHECK(rosenthal_distortion(1, 3.0, 6.0).distortion == doctest::Approx(1.0));
}

TEST_CASE("rosenthal embedding is linear")
{
    auto rng = make_stream(2, "rosenthal-linear");
    for (int t = 0; t < 50; ++t) {
        Point x(7), y(7), s(7);
        for (int i = 0; i < 7; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
            s[i] = x[i] + y[i];
        }
        const auto jx = rosenthal_embed(x, 4.0), jy = rosenthal_embed(y, 4.0), js = rosenthal_embed(s, 4.0);
        for (std::size_t i = 0; i < js.size(); ++i)
            CHECK(js[i] == doctest::Approx(jx[i] + jy[i]).epsilon(1e-15));
    }
}

TEST_CASE("rosenthal distortion matches a dense continuous search")
{
    for (int n = 2; n <= 20; n += 3)
        for (auto [p, q] : {std::pair{6.0, 3.0}, std::pair{5.0, 4.0}, std::pair{8.0, 2.5}})
            CHECK(rosenthal_distortion(n, q, p).distortion == doctest::Approx(dense_rosenthal(n, q, p)).epsilon(0.01));
    CHECK(rosenthal_distortion(100, 4.0, 4.0).exponent == 0.0);
    CHECK(rosenthal_distortion(100, 3.0, 6.0).exponent == doctest::Approx(1.0 / 12.0));
    CHECK_THROWS_AS(rosenthal_distortion(10, 2.0, 4.0), ParameterError);
    CHECK_THROWS_AS(rosenthal_distortion(10, 5.0, 4.0), ParameterError);
}

TEST_CASE("distortion of explicit maps")
{
    const PointList src{{0}, {1}, {2}};
    const auto same = distortion(src, 1.0, src, 1.0);
    CHECK(same.distortion == doctest::Approx(1.0));
    const PointList triple{{0}, {3}, {6}};
    CHECK(distortion(src, 1.0, triple, 1.0).distortion == doctest::Approx(1.0));
    const PointList img{{0}, {1}, {1.5}};
    const auto r = distortion(src, 1.0, img, 1.0);
    CHECK(r.expansion == doctest::Approx(1.0));
    CHECK(r.contraction == doctest::Approx(0.5)); // the (1, 2) pair
    CHECK(r.distortion == doctest::Approx(2.0));
    CHECK(r.pairs == 3);
    const auto bad = distortion(PointList{{0}, {0}, {1}}, 1.0, PointList{{0}, {1}, {2}}, 1.0);
    CHECK(bad.infinite_expansion);
}

TEST_CASE("distortion never increases on subsets")
{
    auto rng = make_stream(5, "subset-monotone");
    for (int t = 0; t < 10; ++t) {
        PointList src(15, Point(2)), img(15, Point(3));
        for (int i = 0; i < 15; ++i) {
            for (auto& v : src[i])
                v = rng.normal();
            for (auto& v : img[i])
                v = rng.normal();
        }
        const double full = distortion(src, 2.0, img, 3.0).distortion;
        for (int size = 2; size < 15; size += 4) {
            const PointList s(src.begin(), src.begin() + size), i(img.begin(), img.begin() + size);
            CHECK(distortion(s, 2.0, i, 3.0).distortion <= full);
        }
    }
}

TEST_CASE("schoenberg realisation")
{
    const PointList two{{0.0, 0.0}, {8.0, 0.0}};
    const auto i2 = schoenberg_embed(two, 3.0);
    CHECK(lp_distance(i2[0], i2[1], 2.0) == doctest::Approx(4.0).epsilon(1e-12));

    const PointList grid = integer_grid(2, 2);
    CHECK(grid.size() == 9);
    const auto img4 = schoenberg_embed(grid, 4.0);
    const auto img2 = schoenberg_embed(grid, 2.0);
    for (std::size_t a = 0; a < grid.size(); ++a)
        for (std::size_t b = a + 1; b < grid.size(); ++b) {
            const double d = lp_distance(grid[a], grid[b], 2.0);
            CHECK(lp_distance(img4[a], img4[b], 2.0) == doctest::Approx(std::sqrt(d)).epsilon(1e-9));
            CHECK(lp_distance(img2[a], img2[b], 2.0) == doctest::Approx(d).epsilon(1e-9));
        }
}

TEST_CASE("grid rounding map")
{
    CHECK(grid_round_map(std::vector<std::int64_t>{0}, 4) == std::vector<std::int64_t>{16, 8});
    for (std::int64_t m = 2; m <= 8; ++m)
        for (int n = 1; n <= 2; ++n) {
            const Torus t(m, n);
            Coords x(n, 0);
            do {
                Coords y(n, 0);
                do {
                    const auto hx = grid_round_map(x, m), hy = grid_round_map(y, m);
                    for (auto v : hx) {
                        CHECK(v >= 0);
                        CHECK(v <= 4 * m);
                    }
                    for (double q : {2.0, 3.0, 4.0}) {
                        Point a(hx.begin(), hx.end()), b(hy.begin(), hy.end());
                        const double img = lp_distance(a, b, q);
                        const double base = grid_distance_q(x, y, m, q);
                        CHECK(double(m) * base <= img + 1e-12);
                        CHECK(img <= 3.0 * double(m) * base + 1e-12);
                    }
                } while (t.next(y));
            } while (t.next(x));
        }
}

TEST_CASE("psi and theta checkpoints")
{
    CHECK(psi(4, 3, 0.0) == doctest::Approx(-4.0));
    CHECK(psi(4, 3, 0.75) == doctest::Approx(-1.0));
    const double th = theta(4, 3);
    CHECK(th > 0.75);
    CHECK(th < 1.0 - 1.0 / 128.0);
    CHECK(std::abs(psi(4, 3, th)) < 1e-10);
    // expanded quadratic form as an independent check
    for (auto [p, q] : {std::pair{5.0, 3.0}, std::pair{9.0, 2.5}})
        for (double t : {0.1, 0.5, 0.9}) {
            const double quad = p * p * (q - 2) / (q * q * (p - 2)) * t * t +
                                p * (p * q - 3 * q + 2) / (q * (p - 2)) * t - p;
            CHECK(psi(p, q, t) == doctest::Approx(quad).epsilon(1e-12));
        }
}

TEST_CASE("grid bound calculators")
{
    const auto b = grid_bounds(10, 100, 3, 6);
    CHECK(b.exponent == doctest::Approx(1.0 / 12.0));
    CHECK(b.upper_shape == doctest::Approx(std::min(std::pow(100.0, 1.0 / 12.0), std::pow(10.0, 1.0 / 3.0))));
    CHECK(b.transition == doctest::Approx(std::pow(100.0, 3.0 / 12.0)));
    const double lower = std::pow(std::min(std::pow(10.0, 3.0 * 4 / (3.0 * 4 + 3)), 100.0), 1.0 / 12.0);
    CHECK(b.lower_shape == doctest::Approx(lower));
    CHECK(std::abs(b.psi_at_theta) < 1e-10);
    CHECK_THROWS_AS(grid_bounds(10, 100, 4, 3), ParameterError);
}

TEST_CASE("composite grid distortions")
{
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 2; ++n)
            for (double q : {2.5, 3.0, 4.0}) {
                const auto s = composite_grid_distortion(m, n, q, 6.0, GridEmbedding::Schoenberg);
                CHECK(s.distortion <= std::pow(double(m), 1.0 - 2.0 / q) + 1e-9);
            }
    const auto s = composite_grid_distortion(4, 2, 3.0, 6.0, GridEmbedding::Schoenberg);
    CHECK(s.distortion == doctest::Approx(std::pow(4.0, 1.0 / 3.0)).epsilon(1e-9));
    const auto r = composite_grid_distortion(1, 3, 3.0, 6.0, GridEmbedding::Rosenthal);
    CHECK(r.distortion >= 1.0);
    CHECK(std::isfinite(r.distortion));
    CHECK_THROWS_AS(composite_grid_distortion(20, 3, 3.0, 6.0, GridEmbedding::Schoenberg, 1000), ParameterError);
}

TEST_CASE("point list CSV round trip")
{
    const PointList pts{{1.5, -2.0}, {0.0, 1e-300}, {3.25, 7.0}};
    CHECK(points_from_csv(points_to_csv(pts)) == pts);
}
