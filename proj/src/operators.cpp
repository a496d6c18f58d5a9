#include "xplab/operators.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace xplab {

namespace {

constexpr std::size_t kMaxSupport = 20000000;

std::vector<Coords> cartesian(const std::vector<std::vector<std::int64_t>>& axes)
{
    std::size_t total = 1;
    for (const auto& a : axes) {
        if (a.empty())
            return {};
        if (total > kMaxSupport / a.size())
            throw ParameterError("averaging support too large");
        total *= a.size();
    }
    std::vector<Coords> out;
    out.reserve(total);
    const std::size_t n = axes.size();
    std::vector<std::size_t> pos(n, 0);
    Coords y(n);
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            y[i] = axes[i][pos[i]];
        out.push_back(y);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++pos[i] < axes[i].size())
                break;
            pos[i] = 0;
            if (i == 0)
                return out;
        }
        if (n == 0)
            return out;
    }
}

std::vector<std::int64_t> evens_inside(std::int64_t r) // even y with |y| < r, r odd
{
    std::vector<std::int64_t> v;
    for (std::int64_t y = -(r - 1); y <= r - 1; y += 2)
        v.push_back(y);
    return v;
}

std::vector<std::int64_t> odds_upto(std::int64_t r) // odd y with |y| <= r, r odd
{
    std::vector<std::int64_t> v;
    for (std::int64_t y = -r; y <= r; y += 2)
        v.push_back(y);
    return v;
}

bool contains(const Subset& s, int j) { return std::find(s.begin(), s.end(), j) != s.end(); }

void check_set(const Subset& s, int n)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= n)
            throw ParameterError("subset element out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (s[i] == s[j])
                throw ParameterError("subset has repeated elements");
    }
}

} // namespace

std::vector<Coords> box_support(int n, const BoxAverageKind& kind)
{
    const std::int64_t r = kind.radius;
    if (r < 1 || r % 2 == 0)
        throw ParameterError("box radius R must be a positive odd integer");
    std::vector<std::vector<std::int64_t>> axes(n);
    switch (kind.tag) {
    case BoxAverageKind::Tag::DS:
    case BoxAverageKind::Tag::Bj: {
        Subset s = kind.set;
        if (kind.tag == BoxAverageKind::Tag::Bj) {
            if (kind.j < 0 || kind.j >= n)
                throw ParameterError("B_j index out of range");
            s = {kind.j};
        }
        check_set(s, n);
        for (int i = 0; i < n; ++i)
            axes[i] = contains(s, i) ? evens_inside(r) : odds_upto(r);
        break;
    }
    case BoxAverageKind::Tag::A:
        for (int i = 0; i < n; ++i)
            axes[i] = evens_inside(r);
        break;
    case BoxAverageKind::Tag::DeltaT:
        check_set(kind.set, n);
        for (int i = 0; i < n; ++i)
            axes[i] = contains(kind.set, i) ? evens_inside(r) : std::vector<std::int64_t>{0};
        break;
    }
    return cartesian(axes);
}

GridFunction average_over(const GridFunction& f, const std::vector<Coords>& offsets)
{
    if (offsets.empty())
        throw ParameterError("empty averaging support");
    const GridFunction g = f.tabulated();
    const Torus torus = g.torus();
    const int n = g.dim(), d = g.value_dim();
    const std::uint64_t points = torus.size();
    std::vector<double> out(points * d);
    const std::uint64_t chunk = 256;
    const std::uint64_t chunks = (points + chunk - 1) / chunk;
    const double inv = 1.0 / static_cast<double>(offsets.size());
    detail::chunked_map<int>(chunks, [&](std::uint64_t c) {
        Coords x(n), y(n);
        std::vector<CompensatedSum> acc(d);
        const std::uint64_t end = std::min(points, (c + 1) * chunk);
        for (std::uint64_t idx = c * chunk; idx < end; ++idx) {
            torus.coords(idx, x);
            std::fill(acc.begin(), acc.end(), CompensatedSum{});
            for (const auto& o : offsets) {
                for (int i = 0; i < n; ++i)
                    y[i] = x[i] + o[i];
                const double* v = g.at_index(torus.index(y));
                for (int a = 0; a < d; ++a)
                    acc[a].add(v[a]);
            }
            for (int a = 0; a < d; ++a)
                out[idx * d + a] = acc[a].value() * inv;
        }
        return 0;
    });
    return GridFunction::from_table(g.modulus(), n, d, g.value_p(), std::move(out));
}

GridFunction box_average(const GridFunction& f, const BoxAverageKind& kind)
{
    const std::int64_t m = f.modulus();
    if (m % 4 != 0)
        throw ParameterError("box averages need a modulus divisible by 4");
    if (2 * kind.radius > m)
        throw ParameterError("box radius R exceeds M/2");
    return average_over(f, box_support(f.dim(), kind));
}

std::vector<Coords> edge_support(int n, const EdgeAverageKind& kind)
{
    if (kind.tag != EdgeAverageKind::Tag::CalE && (kind.j < 0 || kind.j >= n))
        throw ParameterError("edge operator index out of range");
    std::vector<Coords> out;
    if (kind.tag == EdgeAverageKind::Tag::Ej) {
        Coords a(n, 0), b(n, 0);
        a[kind.j] = 1;
        b[kind.j] = -1;
        return {a, b};
    }
    const std::uint64_t count = std::uint64_t(1) << n;
    std::vector<int> eps(n);
    for (std::uint64_t e = 0; e < count; ++e) {
        signs_from_index(SignLaw::Rademacher, e, eps);
        Coords y(n);
        for (int i = 0; i < n; ++i) {
            const bool skip = kind.tag != EdgeAverageKind::Tag::CalE && i == kind.j;
            y[i] = skip ? 0 : (kind.tag == EdgeAverageKind::Tag::Tj ? 2 * eps[i] : eps[i]);
        }
        out.push_back(y);
    }
    return out;
}

GridFunction edge_average(const GridFunction& f, const EdgeAverageKind& kind)
{
    return average_over(f, edge_support(f.dim(), kind));
}

HypercubeFunction::HypercubeFunction(int n_, int d_, double p_, std::vector<double> v)
    : n(n_), d(d_), value_p(p_), values(std::move(v))
{
    if (n < 0 || n > 30 || d < 1)
        throw ParameterError("hypercube function: bad n or d");
    if (values.size() != (std::size_t(1) << n) * static_cast<std::size_t>(d))
        throw ParameterError("hypercube function: table length must be 2^n * d");
}

HypercubeFunction rademacher_projection(const HypercubeFunction& h)
{
    const std::uint64_t size = h.size();
    std::vector<double> coef(static_cast<std::size_t>(h.n) * h.d, 0.0);
    for (int j = 0; j < h.n; ++j)
        for (int a = 0; a < h.d; ++a) {
            CompensatedSum s;
            for (std::uint64_t e = 0; e < size; ++e)
                s.add(HypercubeFunction::sign(e, j) * h.at(e)[a]);
            coef[j * h.d + a] = s.value() / static_cast<double>(size);
        }
    HypercubeFunction out = h;
    for (std::uint64_t e = 0; e < size; ++e)
        for (int a = 0; a < h.d; ++a) {
            double v = 0.0;
            for (int j = 0; j < h.n; ++j)
                v += HypercubeFunction::sign(e, j) * coef[j * h.d + a];
            out.at(e)[a] = v;
        }
    return out;
}

GridFunction character(const LatticePoint& y)
{
    const std::int64_t m = y.modulus;
    if (m % 8 != 0)
        throw ParameterError("characters live on Z_{8m}^n");
    const int n = y.dim();
    const Torus torus(m, n);
    if (!torus.enumerable() || torus.size() > (std::uint64_t(1) << 26))
        throw ParameterError("torus too large for a character table");
    std::vector<double> v(torus.size() * 2);
    Coords x(n, 0);
    std::uint64_t idx = 0;
    do {
        std::int64_t s = 0;
        for (int i = 0; i < n; ++i)
            s = mod(s + x[i] * y.coords[i], m);
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(m);
        v[2 * idx] = std::cos(phase);
        v[2 * idx + 1] = std::sin(phase);
        ++idx;
    } while (torus.next(x));
    return GridFunction::from_table(m, n, 2, 2.0, std::move(v));
}

double rad_identity_residual(const GridFunction& f0, const LatticePoint& x)
{
    if (f0.modulus() % 8 != 0)
        throw ParameterError("the Rademacher identity lives on Z_{8m}^n");
    if (x.modulus != f0.modulus() || x.dim() != f0.dim())
        throw ParameterError("base point is not on the torus of f");
    const GridFunction f = f0.tabulated();
    const Torus torus = f.torus();
    const int n = f.dim(), d = f.value_dim();
    if (n > 20)
        throw ParameterError("dimension too large for the hypercube enumeration");
    const std::uint64_t cube = std::uint64_t(1) << n;

    std::vector<double> hv(cube * d);
    const double* fx = f.at_index(torus.index(x.coords));
    Coords y(n);
    std::vector<int> eps(n);
    for (std::uint64_t e = 0; e < cube; ++e) {
        signs_from_index(SignLaw::Rademacher, e, eps);
        for (int i = 0; i < n; ++i)
            y[i] = x.coords[i] + 2 * eps[i];
        const double* v = f.at_index(torus.index(y));
        for (int a = 0; a < d; ++a)
            hv[e * d + a] = v[a] - fx[a];
    }
    const HypercubeFunction rad = rademacher_projection(HypercubeFunction(n, d, f.value_p(), hv));

    // D_j = T_j f(x + 2e_j) - T_j f(x - 2e_j)
    std::vector<double> diff(static_cast<std::size_t>(n) * d, 0.0);
    for (int j = 0; j < n; ++j) {
        const auto offsets = edge_support(n, EdgeAverageKind::t(j));
        for (int side = 0; side < 2; ++side) {
            const std::int64_t shift = side == 0 ? 2 : -2;
            std::vector<CompensatedSum> acc(d);
            for (const auto& o : offsets) {
                for (int i = 0; i < n; ++i)
                    y[i] = x.coords[i] + o[i] + (i == j ? shift : 0);
                const double* v = f.at_index(torus.index(y));
                for (int a = 0; a < d; ++a)
                    acc[a].add(v[a]);
            }
            for (int a = 0; a < d; ++a)
                diff[j * d + a] += (side == 0 ? 1.0 : -1.0) * acc[a].value() /
                                   static_cast<double>(offsets.size());
        }
    }

    double worst = 0.0;
    std::vector<double> rhs(d);
    for (std::uint64_t e = 0; e < cube; ++e) {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < d; ++a)
                rhs[a] += 0.5 * HypercubeFunction::sign(e, j) * diff[j * d + a];
        worst = std::max(worst, diff_norm_pow(rad.at(e), rhs.data(), d, f.value_p(), 1.0));
    }
    return worst;
}

} // namespace xplab
