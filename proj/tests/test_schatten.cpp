#include "oracles.hpp"
#include "xplab/schatten.hpp"

#include <doctest.h>

using namespace xplab;

namespace {

Matrix random_orthogonal(int d, CounterRng& rng)
{
    Eigen::HouseholderQR<Matrix> qr(random_gaussian(d, d, rng));
    return qr.householderQ();
}

double eigen_trace_power(const Matrix& a, double q)
{
    return oracle::spectral_power(a, q).trace();
}

} // namespace

TEST_CASE("jacobi agrees with eigen's solver")
{
    auto rng = make_stream(1, "jacobi");
    for (int d = 1; d <= 7; ++d)
        for (int t = 0; t < 10; ++t) {
            const Matrix g = random_gaussian(d, d, rng);
            const Matrix a = g + g.transpose();
            const Spectrum sp = eigen_sym(a);
            Eigen::SelfAdjointEigenSolver<Matrix> es(a);
            Vector ref = es.eigenvalues().reverse();
            for (int i = 0; i < d; ++i)
                CHECK(sp.values(i) == doctest::Approx(ref(i)).epsilon(1e-10).scale(a.norm()));
            const Matrix back = sp.vectors * sp.values.asDiagonal() * sp.vectors.transpose();
            CHECK((back - a).norm() <= 1e-11 * (1.0 + a.norm()));
            CHECK((sp.vectors.transpose() * sp.vectors - Matrix::Identity(d, d)).norm() < 1e-12);
        }
}

TEST_CASE("spectral powers")
{
    auto rng = make_stream(2, "powers");
    const SymMatrix a = random_psd(4, rng);
    CHECK((a.power(0.0) - Matrix::Identity(4, 4)).norm() < 1e-14);
    CHECK((a.power(1.0) - a.matrix()).norm() < 1e-12);
    CHECK((a.power(2.0) - a.matrix() * a.matrix()).norm() < 1e-12);
    CHECK((a.power(0.5) * a.power(0.5) - a.matrix()).norm() < 1e-12);
    CHECK((a.power(1.7) - oracle::spectral_power(a.matrix(), 1.7)).norm() < 1e-11);
    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(SymMatrix(neg).power(0.5), ParameterError);
    CHECK_FALSE(SymMatrix(neg).psd());
}

TEST_CASE("schatten norms")
{
    auto rng = make_stream(3, "schatten");
    for (double p : {1.0, 2.0, 3.5, 6.0}) {
        const Matrix a = random_gaussian(4, 3, rng);
        CHECK(std::pow(schatten_norm(a, p), p) == doctest::Approx(oracle::schatten_pow(a, p)).epsilon(1e-12));
    }
    const Matrix a = random_gaussian(3, 3, rng);
    CHECK(schatten_norm(a, 2.0) == doctest::Approx(a.norm()).epsilon(1e-13));
}

TEST_CASE("schatten norm is unitarily invariant")
{
    auto rng = make_stream(4, "unitary");
    for (int t = 0; t < 20; ++t) {
        const int d = 2 + t % 5;
        const Matrix a = random_gaussian(d, d, rng);
        const Matrix u = random_orthogonal(d, rng), v = random_orthogonal(d, rng);
        for (double p : {1.0, 2.5, 4.0})
            CHECK(oracle::rel(schatten_norm(Matrix(u * a * v), p), schatten_norm(a, p)) < 1e-10);
    }
}

TEST_CASE("trace identities")
{
    auto rng = make_stream(5, "trace-identities");
    for (int t = 0; t < 10; ++t) {
        const SymMatrix a = random_psd(4, rng), b = random_psd(4, rng);
        CHECK(trace_power(a, 1.0) == doctest::Approx(a.trace()).epsilon(1e-12));
        CHECK(trace_power(a, 2.0) == doctest::Approx((a.matrix() * a.matrix()).trace()).epsilon(1e-12));
        CHECK(trace_mixed(a, b, 1.0) == doctest::Approx((a.matrix() * b.matrix()).trace()).epsilon(1e-12));
        CHECK(trace_power(a, 2.3) == doctest::Approx(eigen_trace_power(a.matrix(), 2.3)).epsilon(1e-11));
        CHECK(trace_mixed(a, b, 0.4) ==
              doctest::Approx((oracle::spectral_power(a.matrix(), 0.4) * b.matrix()).trace()).epsilon(1e-11));
    }
}

TEST_CASE("trace power is monotone on PSD pairs")
{
    auto rng = make_stream(6, "monotone");
    for (int t = 0; t < 50; ++t) {
        const SymMatrix a = random_psd(3, rng), b = random_psd(3, rng);
        for (double q : {0.5, 1.0, 2.0, 3.3})
            CHECK(trace_power(a + b, q) >= trace_power(a, q) * (1 - 1e-12));
    }
}

TEST_CASE("trace reports against the spectral oracle")
{
    auto rng = make_stream(7, "trace-reports");
    for (int t = 0; t < 20; ++t) {
        const int d = 2 + t % 4;
        const SymMatrix a = random_psd(d, rng), b = random_psd(d, rng);
        const Matrix am = a.matrix(), bm = b.matrix(), s = am + bm;

        for (double q : {1.0, 2.0, 2.7}) {
            const auto r = trace_inequality_report(a, b, q, TraceKind::main_qge1());
            const double lhs = std::pow((oracle::spectral_power(s, q) * am).trace(), 1.0 / q);
            const double at = std::pow(eigen_trace_power(am, q + 1), 1.0 / q);
            const double bt = std::pow((oracle::spectral_power(bm, q) * am).trace(), 1.0 / q);
            CHECK(oracle::rel(r.lhs, lhs) < 1e-10);
            CHECK(oracle::rel(r.rhs, at + bt) < 1e-10);
            CHECK(r.implied_constant <= 1.0 + 1e-8);
        }
        for (double q : {0.25, 0.9}) {
            const auto r = trace_inequality_report(a, b, q, TraceKind::qlt1());
            const double lhs = (oracle::spectral_power(s, q) * am).trace();
            const double rhs = eigen_trace_power(am, q + 1) + (oracle::spectral_power(bm, q) * am).trace();
            CHECK(oracle::rel(r.lhs, lhs) < 1e-10);
            CHECK(oracle::rel(r.rhs, rhs) < 1e-10);
            CHECK(r.implied_constant <= 1.0 + 1e-8);
        }
        {
            const double q = 3.5;
            const auto r = trace_inequality_report(a, b, q, TraceKind::lambda_family());
            CHECK(oracle::rel(r.lhs, (oracle::spectral_power(s, q - 1) * am).trace()) < 1e-10);
            CHECK(oracle::rel(r.rhs, r.extra("closed_form_min")) < 1e-6);
        }
        for (double rr : {1.0, 1.5, 3.0}) {
            const auto r = trace_inequality_report(a, b, 1.0, TraceKind::lieb_thirring(rr));
            const Matrix ar = oracle::spectral_power(am, rr);
            CHECK(oracle::rel(r.lhs, eigen_trace_power(am * bm * am, rr)) < 1e-9);
            CHECK(oracle::rel(r.rhs, (ar * oracle::spectral_power(bm, rr) * ar).trace()) < 1e-9);
            CHECK(r.implied_constant <= 1.0 + 1e-8);
        }
        for (double th : {1.0, 1.5, 2.0}) {
            const auto r = trace_inequality_report(a, b, 1.0, TraceKind::op_convex(th));
            CHECK(oracle::rel(r.lhs, eigen_trace_power(s, th)) < 1e-10);
            CHECK(r.implied_constant <= 1.0 + 1e-8);
            CHECK(r.extra("min_eigenvalue") >= -1e-9 * (1.0 + r.rhs));
        }
    }
}

TEST_CASE("holder word report")
{
    auto rng = make_stream(8, "holder");
    const SymMatrix a = random_psd(3, rng), b = random_psd(3, rng);
    const double q = 2.0;
    // tr(A B^{1/2} A B^{1/2}); exponents sum to 3 = q + 1
    const auto r = trace_inequality_report(a, b, q, TraceKind::holder({1.0, 1.0}, {0.5, 0.5}));
    const Matrix w = a.matrix() * oracle::spectral_power(b.matrix(), 0.5) * a.matrix() *
                     oracle::spectral_power(b.matrix(), 0.5);
    CHECK(oracle::rel(r.lhs, w.trace()) < 1e-10);
    CHECK(r.implied_constant <= 1.0 + 1e-9);
    CHECK_THROWS_AS(trace_inequality_report(a, b, q, TraceKind::holder({1.0}, {1.0})), ParameterError);
}

TEST_CASE("trace report parameter checks")
{
    auto rng = make_stream(9, "trace-params");
    const SymMatrix a = random_psd(2, rng), b = random_psd(3, rng);
    CHECK_THROWS_AS(trace_inequality_report(a, b, 2.0, TraceKind::main_qge1()), ParameterError);
    CHECK_THROWS_AS(trace_inequality_report(a, a, 0.5, TraceKind::main_qge1()), ParameterError);
    CHECK_THROWS_AS(trace_inequality_report(a, a, 1.5, TraceKind::qlt1()), ParameterError);
    CHECK_THROWS_AS(trace_inequality_report(a, a, 1.0, TraceKind::op_convex(2.5)), ParameterError);
    CHECK_THROWS_AS(trace_inequality_report(a, a, 1.0, TraceKind::lieb_thirring(0.5)), ParameterError);
}

TEST_CASE("operator convexity at the optimal weight")
{
    auto rng = make_stream(10, "op-convex");
    for (int t = 0; t < 20; ++t) {
        const SymMatrix a = random_psd(3, rng), b = random_psd(3, rng);
        for (double th : {1.2, 1.8}) {
            const auto r = trace_inequality_report(a, b, 1.0, TraceKind::op_convex(th));
            const double closed = std::pow(std::pow(trace_power(a, th), 1 / th) + std::pow(trace_power(b, th), 1 / th), th);
            CHECK(oracle::rel(r.rhs, closed) < 1e-10);
        }
    }
}

TEST_CASE("PSD subadditivity counterexample")
{
    for (double s : {0.5, 0.1, 0.01}) {
        const auto c = psd_counterexample(s, 4.0, 2.0);
        const double closed = -std::pow(s, 6) - 3 * std::pow(s, 8) + std::pow(s, 10);
        CHECK(oracle::rel(c.form, closed) < 1e-12);
        CHECK(c.closed_form == doctest::Approx(closed));
    }
    CHECK(psd_counterexample(0.1, 4.0, 2.0).min_eigenvalue < 0.0);
    const auto frac = psd_counterexample(0.3, 3.5, 2.0);
    CHECK(std::isfinite(frac.form));
}

TEST_CASE("scalar matrices reduce to the linear report")
{
    auto rng = make_stream(11, "d1");
    for (int t = 0; t < 10; ++t) {
        const int n = 3 + t % 3;
        std::vector<double> a(n);
        std::vector<Matrix> m(n, Matrix(1, 1));
        for (int j = 0; j < n; ++j) {
            a[j] = rng.normal();
            m[j](0, 0) = a[j];
        }
        const SamplePlan plan = make_sample_plan(2, n, 2, 1000000, 7);
        const auto lin = linear_xp_report(a, 2, 4.0, plan);
        const auto sch = schatten_xp_report(m, 2, 4.0, plan);
        CHECK(lin.lhs == sch.lhs);
        CHECK(lin.rhs == sch.rhs);
        CHECK(lin.implied_constant == sch.implied_constant);
    }
}

TEST_CASE("diagonal khinchine reduces to scalar khinchine")
{
    auto rng = make_stream(12, "diag");
    const int n = 4, d = 3;
    const double p = 4.0;
    std::vector<Matrix> a(n, Matrix::Zero(d, d));
    std::vector<oracle::Vec> cols(d, oracle::Vec(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i) {
            a[j](i, i) = rng.normal();
            cols[i][j] = a[j](i, i);
        }
    double lhs = 0.0, sq = 0.0;
    for (int i = 0; i < d; ++i) {
        std::vector<oracle::Vec> z;
        double s2 = 0.0;
        for (double v : cols[i]) {
            z.push_back({v});
            s2 += v * v;
        }
        lhs += oracle::rademacher_moment(z, p);
        sq += std::pow(s2, p / 2);
    }
    const auto r = khinchine_report(a, p, exhaustive_plan());
    CHECK(oracle::rel(r.lhs, lhs) < 1e-10);
    CHECK(oracle::rel(r.rhs_term("column"), sq) < 1e-10);
    CHECK(oracle::rel(r.rhs_term("row"), sq) < 1e-10);
    CHECK(r.extra("easy_ratio") <= 1.0 + 1e-10);
}

TEST_CASE("schatten X_p report against brute force")
{
    auto rng = make_stream(13, "schatten-xp");
    const int n = 4, k = 2;
    const double p = 4.0;
    std::vector<Matrix> a;
    for (int j = 0; j < n; ++j)
        a.push_back(random_gaussian(2, 2, rng));
    double sub = 0.0, rad = 0.0, lp = 0.0;
    const auto sets = oracle::all_subsets_of_size(n, k);
    for (const auto& s : sets)
        for (const auto& e : oracle::all_signs(k)) {
            Matrix w = Matrix::Zero(2, 2);
            for (int i = 0; i < k; ++i)
                w += e[i] * a[s[i]];
            sub += oracle::schatten_pow(w, p);
        }
    sub /= double(sets.size()) * std::ldexp(1.0, k);
    for (const auto& e : oracle::all_signs(n)) {
        Matrix w = Matrix::Zero(2, 2);
        for (int i = 0; i < n; ++i)
            w += e[i] * a[i];
        rad += oracle::schatten_pow(w, p);
    }
    rad /= std::ldexp(1.0, n);
    for (const auto& m : a)
        lp += oracle::schatten_pow(m, p);
    const auto r = schatten_xp_report(a, k, p, exhaustive_plan());
    CHECK(oracle::rel(r.lhs, sub) < 1e-11);
    CHECK(oracle::rel(r.rhs_term("ell_p"), 0.5 * lp) < 1e-11);
    CHECK(oracle::rel(r.rhs_term("rademacher"), 0.25 * rad) < 1e-11);
    CHECK_THROWS_AS(schatten_xp_report(a, k, 1.5, exhaustive_plan()), ParameterError);
}

TEST_CASE("psd X_p report")
{
    auto rng = make_stream(14, "psd-xp");
    std::vector<SymMatrix> b;
    for (int j = 0; j < 4; ++j)
        b.push_back(random_psd(3, rng));
    Matrix total = Matrix::Zero(3, 3);
    for (const auto& m : b)
        total += m.matrix();
    const auto full = psd_xp_report(b, 4, 2.5);
    CHECK(oracle::rel(full.lhs, eigen_trace_power(total, 2.5)) < 1e-11);
    CHECK(oracle::rel(full.rhs_term("full"), eigen_trace_power(total, 2.5)) < 1e-11);
    CHECK(full.implied_constant <= 1.0 + 1e-12);
    CHECK_FALSE(full.warnings.empty());

    const auto half = psd_xp_report(b, 2, 2.5);
    double lhs = 0.0;
    const auto sets = oracle::all_subsets_of_size(4, 2);
    for (const auto& s : sets)
        lhs += eigen_trace_power(b[s[0]].matrix() + b[s[1]].matrix(), 2.5);
    CHECK(oracle::rel(half.lhs, lhs / double(sets.size())) < 1e-11);
    CHECK(half.warnings.empty());
    CHECK(half.implied_constant <= half.extra("lemma_constant"));

    const SamplePlan mc = make_sample_plan(2, 12, 6, 100, 3);
    std::vector<SymMatrix> many;
    for (int j = 0; j < 12; ++j)
        many.push_back(random_psd(2, rng));
    const auto est = psd_xp_report(many, 6, 2.0, mc);
    const auto exact = psd_xp_report(many, 6, 2.0);
    CHECK(std::abs(est.lhs - exact.lhs) <= 5 * est.std_error + 1e-12);
}

TEST_CASE("matrix serialisation")
{
    auto rng = make_stream(15, "csv");
    const Matrix a = random_gaussian(3, 2, rng);
    CHECK(matrix_from_csv(matrix_to_csv(a)) == a);
    CHECK(matrix_from_json(to_json(a)) == a);
    CHECK_THROWS_AS(matrix_from_csv("1,2\n3"), ParameterError);
    CHECK_THROWS_AS(matrix_from_csv("1,x"), ParameterError);
}
