#pragma once

// Brute-force reference computations. Nothing here calls the library's summation engines; they
// only read tables and redo the arithmetic in the most literal way.

#include "xplab/lattice.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double lp_pow(const Vec& v, double p)
{
    double s = 0.0;
    for (double x : v)
        s += std::pow(std::abs(x), p);
    return s;
}

// Row-major table of a grid function as vectors, indexed by x_0 + M x_1 + ...
struct Table {
    long long M = 1;
    int n = 0;
    int d = 1;
    std::vector<Vec> values;

    long long size() const { return static_cast<long long>(values.size()); }
    long long index(std::vector<long long> x) const
    {
        long long idx = 0, stride = 1;
        for (int j = 0; j < n; ++j) {
            long long r = ((x[j] % M) + M) % M;
            idx += r * stride;
            stride *= M;
        }
        return idx;
    }
    std::vector<long long> coords(long long idx) const
    {
        std::vector<long long> x(n);
        for (int j = 0; j < n; ++j) {
            x[j] = idx % M;
            idx /= M;
        }
        return x;
    }
    const Vec& at(const std::vector<long long>& x) const { return values[index(x)]; }
};

inline Table table_of(const xplab::GridFunction& f)
{
    Table t;
    t.M = f.modulus();
    t.n = f.dim();
    t.d = f.value_dim();
    long long total = 1;
    for (int j = 0; j < t.n; ++j)
        total *= t.M;
    t.values.resize(total);
    std::vector<std::int64_t> x(t.n);
    for (long long i = 0; i < total; ++i) {
        const auto c = t.coords(i);
        for (int j = 0; j < t.n; ++j)
            x[j] = c[j];
        Vec v(t.d);
        f.eval(x, v);
        t.values[i] = v;
    }
    return t;
}

inline Vec diff(const Vec& a, const Vec& b)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

// All sign vectors in {-1,1}^n (bit i set means -1).
inline std::vector<std::vector<int>> all_signs(int n)
{
    std::vector<std::vector<int>> out;
    for (long long m = 0; m < (1LL << n); ++m) {
        std::vector<int> e(n);
        for (int i = 0; i < n; ++i)
            e[i] = (m >> i) & 1 ? -1 : 1;
        out.push_back(e);
    }
    return out;
}

inline std::vector<std::vector<int>> all_subsets_of_size(int n, int k)
{
    std::vector<std::vector<int>> out;
    for (long long m = 0; m < (1LL << n); ++m) {
        if (__builtin_popcountll(m) != k)
            continue;
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (m >> i & 1)
                s.push_back(i);
        out.push_back(s);
    }
    return out;
}

// Mean over x and eps of ||f(x + shift(eps)) - f(x - back(eps))||_p^p.
inline double mean_gap(const Table& t, double p, int sign_dim,
                       const std::function<void(const std::vector<int>&, std::vector<long long>&,
                                                std::vector<long long>&)>& offsets)
{
    double sum = 0.0;
    long long count = 0;
    const auto signs = all_signs(sign_dim);
    for (long long i = 0; i < t.size(); ++i) {
        const auto x = t.coords(i);
        for (const auto& e : signs) {
            std::vector<long long> a(x), b(x);
            offsets(e, a, b);
            sum += lp_pow(diff(t.at(a), t.at(b)), p);
            ++count;
        }
    }
    return sum / count;
}

// E_{|S|=k} E_eps ||sum_{j in S} eps_j z_j||_p^p and E_eps ||sum eps_j z_j||_p^p.
inline double subset_moment(const std::vector<Vec>& z, int k, double p)
{
    const int n = static_cast<int>(z.size());
    const auto sets = all_subsets_of_size(n, k);
    double total = 0.0;
    for (const auto& s : sets)
        for (const auto& e : all_signs(k)) {
            Vec w(z[0].size(), 0.0);
            for (int a = 0; a < k; ++a)
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] += e[a] * z[s[a]][i];
            total += lp_pow(w, p);
        }
    return total / (double(sets.size()) * std::ldexp(1.0, k));
}

inline double rademacher_moment(const std::vector<Vec>& z, double p)
{
    return subset_moment(z, static_cast<int>(z.size()), p);
}

// Eigen's self-adjoint solver as an independent spectral calculus.
inline Eigen::MatrixXd spectral_power(const Eigen::MatrixXd& a, double q)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    Eigen::VectorXd l = es.eigenvalues();
    for (int i = 0; i < l.size(); ++i)
        l(i) = l(i) <= 0.0 ? 0.0 : std::pow(l(i), q);
    return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

inline double schatten_pow(const Eigen::MatrixXd& a, double p)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    double s = 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        s += std::pow(svd.singularValues()(i), p);
    return s;
}

// int_0^{2 pi} |cos t|^p dt = 2 sqrt(pi) Gamma((p+1)/2) / Gamma(p/2 + 1)
inline double circular_moment(double p)
{
    return 2.0 * std::sqrt(std::numbers::pi) *
           std::exp(std::lgamma((p + 1.0) / 2.0) - std::lgamma(p / 2.0 + 1.0));
}

inline double rel(double a, double b)
{
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

} // namespace oracle
