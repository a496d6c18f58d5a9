#include "xplab/complexify.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace xplab {

namespace {

constexpr double kPi = std::numbers::pi;

double trapezoid(std::span<const double> u, std::span<const double> v, double p, int nodes)
{
    CompensatedSum acc;
    const double h = 2.0 * kPi / nodes;
    for (int i = 0; i < nodes; ++i) {
        const double t = h * i;
        const double c = std::cos(t), s = std::sin(t);
        double sum = 0.0;
        for (std::size_t a = 0; a < u.size(); ++a)
            sum += std::pow(std::abs(c * u[a] - s * v[a]), p);
        acc.add(sum);
    }
    return h * acc.value();
}

int vector_dim(const VectorList& z)
{
    if (z.empty())
        throw ParameterError("empty vector list");
    const std::size_t d = z.front().size();
    if (d == 0)
        throw ParameterError("vectors must be nonempty");
    for (const auto& v : z)
        if (v.size() != d)
            throw ParameterError("vectors have different lengths");
    return static_cast<int>(d);
}

// sum over all sign vectors delta of ||sum_j w_j delta_j z_j||^p (complex weights w_j = (re, im))
// measured in the complexification.
double complex_sign_sum(const VectorList& z, const std::vector<double>& re,
                        const std::vector<double>& im, double p, double moment)
{
    const int n = static_cast<int>(z.size());
    const int d = static_cast<int>(z.front().size());
    std::vector<double> u(d), v(d);
    CompensatedSum acc;
    for (std::uint64_t e = 0; e < (std::uint64_t(1) << n); ++e) {
        std::fill(u.begin(), u.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const double sg = (e >> j) & 1 ? -1.0 : 1.0;
            for (int a = 0; a < d; ++a) {
                u[a] += sg * re[j] * z[j][a];
                v[a] += sg * im[j] * z[j][a];
            }
        }
        acc.add(complexified_norm_pow(u, v, p, moment));
    }
    return acc.value();
}

double real_sign_sum(const VectorList& z, const Subset* s, double p)
{
    const int n = static_cast<int>(z.size());
    const int d = static_cast<int>(z.front().size());
    std::vector<double> w(d);
    CompensatedSum acc;
    for (std::uint64_t e = 0; e < (std::uint64_t(1) << n); ++e) {
        std::fill(w.begin(), w.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            if (s && std::find(s->begin(), s->end(), j) == s->end())
                continue;
            const double sg = (e >> j) & 1 ? -1.0 : 1.0;
            for (int a = 0; a < d; ++a)
                w[a] += sg * z[j][a];
        }
        acc.add(norm_pow(w.data(), d, p, p));
    }
    return acc.value();
}

} // namespace

double complexification_norm(std::span<const double> u, std::span<const double> v, double p,
                             int nodes)
{
    if (u.size() != v.size())
        throw ParameterError("complexification: u and v differ in length");
    if (!(p >= 1.0))
        throw ParameterError("complexification needs p >= 1");
    if (nodes < 64)
        throw ParameterError("complexification needs at least 64 nodes");
    double prev = trapezoid(u, v, p, nodes);
    for (int n = 2 * nodes; n <= (1 << 17); n *= 2) {
        const double next = trapezoid(u, v, p, n);
        const bool close = std::abs(next - prev) <= 1e-10 * std::abs(next);
        prev = next;
        if (close)
            break;
    }
    return std::pow(prev, 1.0 / p);
}

double circular_moment(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw ParameterError("circular moment needs p >= 1");
    double err = 0.0;
    const double quarter = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [p](double t) { return std::pow(std::cos(t), p); }, 0.0, kPi / 2.0, 20, 1e-13, &err);
    return 4.0 * quarter;
}

double circular_moment_displayed(double p)
{
    return 4.0 * std::sqrt(kPi) * std::exp(std::lgamma(p / 2.0 + 0.5) - std::lgamma(p / 2.0 + 1.0));
}

InequalityReport circular_moment_report(double p)
{
    InequalityReport r;
    r.functional = "circular-moment";
    r.params = {{"p", p}};
    r.lhs = circular_moment(p);
    r.rhs_terms = {{"displayed", circular_moment_displayed(p)}};
    r.finalize();
    r.extras = {{"ratio", r.rhs / r.lhs}};
    if (std::abs(r.rhs / r.lhs - 1.0) > 1e-9)
        r.warnings.push_back("displayed Gamma-ratio constant differs from the quadrature value");
    return r;
}

double complexified_norm_pow(std::span<const double> u, std::span<const double> v, double p,
                             double moment)
{
    double s = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a)
        s += std::pow(u[a] * u[a] + v[a] * v[a], p / 2.0);
    return moment * s;
}

InequalityReport contraction_check(const std::vector<double>& a, const VectorList& z, double p,
                                   const SamplePlan& plan)
{
    if (!(p >= 1.0))
        throw ParameterError("contraction check needs p >= 1");
    const int d = vector_dim(z);
    const int n = static_cast<int>(z.size());
    if (static_cast<int>(a.size()) != n)
        throw ParameterError("coefficient count differs from vector count");
    auto value_for = [&](const std::vector<double>& coef) {
        return [&z, coef, d, p](const std::vector<double>& c) {
            std::vector<double> w(d, 0.0);
            for (std::size_t j = 0; j < z.size(); ++j)
                for (int i = 0; i < d; ++i)
                    w[i] += coef[j] * c[j] * z[j][i];
            return norm_pow(w.data(), d, p, p);
        };
    };
    const double cube = std::ldexp(1.0, n);
    const Estimate lhs = sign_average(n, plan, value_for(a), "contraction:weighted");
    const Estimate plain = sign_average(n, plan, value_for(std::vector<double>(n, 1.0)), "contraction:plain");
    double amax = 0.0;
    for (double v : a)
        amax = std::max(amax, std::abs(v));
    InequalityReport r;
    r.functional = "contraction";
    r.params = {{"p", p}, {"n", double(n)}, {"d", double(d)}};
    r.lhs = cube * lhs.mean;
    r.std_error = cube * lhs.std_error;
    r.rhs_terms = {{"max_coefficient", std::pow(amax, p) * cube * plain.mean}};
    r.plan = plan;
    r.finalize();
    return r;
}

InequalityReport bridge_report(const VectorList& z, std::int64_t m, int k, double p,
                               const SamplePlan& plan)
{
    const int d = vector_dim(z);
    const int n = static_cast<int>(z.size());
    if (k < 1 || k > n)
        throw ParameterError("subset size k must lie in [1, n]");
    if (m < 1)
        throw ParameterError("bridge needs m >= 1");
    if (!(p >= 1.0))
        throw ParameterError("bridge needs p >= 1");
    const std::int64_t modulus = 2 * m;
    const Torus torus(modulus, n);
    const std::uint64_t cube = std::uint64_t(1) << n;
    const std::uint64_t work = saturating_mul(
        saturating_mul(torus.size(), saturating_mul(cube, cube)),
        binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
    if (!torus.enumerable() || n > 16 || work > plan.budget)
        throw ParameterError("bridge: enumeration exceeds the plan budget");

    const double moment = circular_moment(p);
    const double md = static_cast<double>(m);
    const double mp = std::pow(md, p);
    const double kn = static_cast<double>(k) / n;
    const double points = static_cast<double>(torus.size());
    std::vector<double> cosv(modulus), sinv(modulus);
    for (std::int64_t x = 0; x < modulus; ++x) {
        cosv[x] = std::cos(kPi * double(x) / md);
        sinv[x] = std::sin(kPi * double(x) / md);
    }

    // f_delta(x) = (sum_j delta_j cos(pi x_j/m) z_j, sum_j delta_j sin(pi x_j/m) z_j)
    auto eval = [&](std::uint64_t delta, const Coords& x, std::vector<double>& u, std::vector<double>& v) {
        std::fill(u.begin(), u.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const double sg = (delta >> j) & 1 ? -1.0 : 1.0;
            const std::int64_t r = mod(x[j], modulus);
            for (int a = 0; a < d; ++a) {
                u[a] += sg * cosv[r] * z[j][a];
                v[a] += sg * sinv[r] * z[j][a];
            }
        }
    };
    std::vector<double> u1(d), v1(d), u2(d), v2(d), du(d), dv(d);
    auto gap = [&](std::uint64_t delta, const Coords& x, const Coords& y) {
        eval(delta, y, u1, v1);
        eval(delta, x, u2, v2);
        for (int a = 0; a < d; ++a) {
            du[a] = u1[a] - u2[a];
            dv[a] = v1[a] - v2[a];
        }
        return complexified_norm_pow(du, dv, p, moment);
    };

    std::vector<Subset> sets;
    {
        Subset s(k);
        for (int i = 0; i < k; ++i)
            s[i] = i;
        do
            sets.push_back(s);
        while (next_combination(s, n));
    }
    const double nsets = static_cast<double>(sets.size());

    CompensatedSum metric_lhs, metric_edge, metric_diag;
    Coords x(n), y(n);
    std::vector<int> eps(n);
    for (std::uint64_t delta = 0; delta < cube; ++delta) {
        CompensatedSum lhs, edge, diag;
        std::fill(x.begin(), x.end(), 0);
        do {
            for (const auto& s : sets)
                for (std::uint64_t e = 0; e < cube; ++e) {
                    signs_from_index(SignLaw::Rademacher, e, eps);
                    y = x;
                    for (int j : s)
                        y[j] += m * eps[j];
                    lhs.add(gap(delta, x, y));
                }
            for (int j = 0; j < n; ++j) {
                y = x;
                y[j] += 1;
                edge.add(gap(delta, x, y));
            }
            for (std::uint64_t e = 0; e < cube; ++e) {
                signs_from_index(SignLaw::Rademacher, e, eps);
                for (int j = 0; j < n; ++j)
                    y[j] = x[j] + eps[j];
                diag.add(gap(delta, x, y));
            }
        } while (torus.next(x));
        metric_lhs.add(lhs.value() / (nsets * double(cube) * mp));
        metric_edge.add(kn * edge.value());
        metric_diag.add(std::pow(kn, p / 2.0) * diag.value() / double(cube));
    }
    const double metric_rhs = metric_edge.value() + metric_diag.value();
    double gamma = 0.0;
    if (metric_lhs.value() >= kDegenerateTol)
        gamma = metric_rhs / metric_lhs.value();

    // linear sides
    const XpSides lin = xp_sides(n, k, exhaustive_plan(), [&](const std::vector<double>& c) {
        std::vector<double> w(d, 0.0);
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < d; ++a)
                w[a] += c[j] * z[j][a];
        return norm_pow(w.data(), d, p, p);
    });
    CompensatedSum zsum;
    for (const auto& v : z)
        zsum.add(norm_pow(v.data(), d, p, p));

    // (a) lower bound on the left-hand side, per subset
    double a_min = std::numeric_limits<double>::infinity();
    for (const auto& s : sets) {
        CompensatedSum left;
        std::fill(x.begin(), x.end(), 0);
        std::vector<double> re(n, 0.0), im(n, 0.0);
        do {
            for (int j : s) {
                const std::int64_t r = mod(x[j], modulus);
                re[j] = cosv[r];
                im[j] = sinv[r];
            }
            left.add(complex_sign_sum(z, re, im, p, moment));
        } while (torus.next(x));
        const double bound = std::pow(2.0, p + 1.0) * points / std::pow(kPi, p - 1.0) *
                             real_sign_sum(z, &s, p);
        if (bound >= kDegenerateTol)
            a_min = std::min(a_min, left.value() / bound);
    }

    // (b) edge term against pi^{p+1}/m^p sum ||z_j||^p
    const double chord = std::hypot(1.0 - std::cos(kPi / md), std::sin(kPi / md));
    CompensatedSum b_term;
    const std::vector<double> zero(d, 0.0);
    for (const auto& v : z)
        b_term.add(std::pow(chord, p) * complexified_norm_pow(v, zero, p, moment));
    const double b_bound = std::pow(kPi, p + 1.0) / mp * zsum.value();

    // (c) contraction step, for every x and eps
    const double full = real_sign_sum(z, nullptr, p);
    const double c_bound = 2.0 * std::pow(kPi, p + 1.0) / mp * full;
    double c_max = 0.0;
    {
        std::vector<double> re(n), im(n);
        std::fill(x.begin(), x.end(), 0);
        do {
            for (std::uint64_t e = 0; e < cube; ++e) {
                signs_from_index(SignLaw::Rademacher, e, eps);
                for (int j = 0; j < n; ++j) {
                    const std::int64_t r0 = mod(x[j], modulus), r1 = mod(x[j] + eps[j], modulus);
                    re[j] = cosv[r1] - cosv[r0];
                    im[j] = sinv[r1] - sinv[r0];
                }
                const double left = complex_sign_sum(z, re, im, p, moment);
                if (c_bound >= kDegenerateTol)
                    c_max = std::max(c_max, left / c_bound);
            }
        } while (torus.next(x));
    }

    // exp(pi i (x + m sigma)/m) - exp(pi i x/m) = -2 exp(pi i x/m)
    double identity = 0.0;
    for (std::int64_t t = 0; t < modulus; ++t)
        for (int sigma : {-1, 1}) {
            const std::int64_t r = mod(t + m * sigma, modulus);
            identity = std::max(identity, std::abs(cosv[r] - cosv[t] + 2.0 * cosv[t]));
            identity = std::max(identity, std::abs(sinv[r] - sinv[t] + 2.0 * sinv[t]));
        }

    InequalityReport rep;
    rep.functional = "bridge";
    rep.params = {{"p", p}, {"m", md}, {"n", double(n)}, {"k", double(k)}, {"d", double(d)}};
    rep.lhs = std::pow(2.0 / kPi, 2.0 * p) * gamma * lin.subsets;
    rep.rhs_terms = {{"ell_p", kn * zsum.value()}, {"rademacher", std::pow(kn, p / 2.0) * lin.rademacher}};
    rep.plan = plan;
    rep.finalize();
    rep.extras = {{"gamma", gamma},
                  {"metric_lhs", metric_lhs.value()},
                  {"metric_edge", metric_edge.value()},
                  {"metric_diag", metric_diag.value()},
                  {"linear_lhs", lin.subsets},
                  {"lower_bound_min_ratio", std::isfinite(a_min) ? a_min : 1.0},
                  {"z0_term", b_term.value()},
                  {"z0_bound", b_bound},
                  {"contraction_max_ratio", c_max},
                  {"shift_identity_residual", identity}};
    if (p < 2.0)
        rep.warnings.push_back("p < 2: the z0 bound uses p >= 2");
    return rep;
}

} // namespace xplab
