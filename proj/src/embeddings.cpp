#include "xplab/embeddings.hpp"

#include "xplab/schatten.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace xplab {

double lp_distance(std::span<const double> a, std::span<const double> b, double p)
{
    if (a.size() != b.size())
        throw ParameterError("points have different dimensions");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = std::abs(a[i] - b[i]);
        s += p == 2.0 ? t * t : std::pow(t, p);
    }
    return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

Point rosenthal_embed(std::span<const double> x, double q)
{
    if (x.empty())
        throw ParameterError("Rosenthal embedding needs n >= 1");
    const double n = static_cast<double>(x.size());
    const double a = std::sqrt(n), b = std::pow(n, 1.0 / q);
    Point out(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = a * x[i];
        out[x.size() + i] = b * x[i];
    }
    return out;
}

double rosenthal_norm(std::span<const double> image, double p)
{
    if (image.size() % 2 != 0)
        throw ParameterError("Rosenthal image must have even length");
    const std::size_t n = image.size() / 2;
    double lp = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lp += std::pow(std::abs(image[i]), p);
        l2 += image[n + i] * image[n + i];
    }
    return std::pow(lp + std::pow(l2, p / 2.0), 1.0 / p);
}

double rosenthal_objective(double n, double s, double q, double p)
{
    return std::pow(n, p / 2.0) * std::pow(s, 1.0 - p / q) +
           std::pow(n, p / q) * std::pow(s, p / 2.0 - p / q);
}

RosenthalDistortion rosenthal_distortion(std::int64_t n, double q, double p)
{
    if (!(q > 2.0) || !(q <= p))
        throw ParameterError("Rosenthal distortion needs 2 < q <= p");
    if (n < 1 || n > (std::int64_t(1) << 26))
        throw ParameterError("Rosenthal distortion needs 1 <= n <= 2^26");
    RosenthalDistortion r;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::int64_t s = 1; s <= n; ++s) {
        const double v = rosenthal_objective(double(n), double(s), q, p);
        if (v < lo) {
            lo = v;
            r.s_star = s;
        }
        if (v > hi) {
            hi = v;
            r.s_max = s;
        }
    }
    r.distortion = std::pow(hi / lo, 1.0 / p);
    r.exponent = (p - q) * (q - 2.0) / (q * q * (p - 2.0));
    r.asymptotic = std::pow(double(n), r.exponent);
    return r;
}

EmbeddingResult distortion(const PointList& source, const Metric& source_metric,
                           const PointList& image, const Metric& image_metric)
{
    if (source.size() != image.size())
        throw ParameterError("source and image lists differ in length");
    if (source.size() < 2)
        throw ParameterError("distortion needs at least two points");
    const std::uint64_t count = source.size();
    struct Part {
        double hi = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        bool infinite = false;
        std::uint64_t pairs = 0;
    };
    const auto parts = detail::chunked_map<Part>(count, [&](std::uint64_t i) {
        Part part;
        for (std::uint64_t j = i + 1; j < count; ++j) {
            const double ds = source_metric(source[i], source[j]);
            const double di = image_metric(image[i], image[j]);
            ++part.pairs;
            if (ds == 0.0) {
                if (di != 0.0)
                    part.infinite = true;
                continue;
            }
            const double ratio = di / ds;
            part.hi = std::max(part.hi, ratio);
            part.lo = std::min(part.lo, ratio);
        }
        return part;
    });
    EmbeddingResult r;
    r.source = source;
    r.image = image;
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (const auto& part : parts) {
        hi = std::max(hi, part.hi);
        lo = std::min(lo, part.lo);
        r.infinite_expansion = r.infinite_expansion || part.infinite;
        r.pairs += part.pairs;
    }
    if (!std::isfinite(lo))
        throw ParameterError("all source points coincide");
    r.expansion = r.infinite_expansion ? std::numeric_limits<double>::infinity() : hi;
    r.contraction = lo;
    r.distortion = (r.infinite_expansion || lo == 0.0) ? std::numeric_limits<double>::infinity()
                                                         : hi / lo;
    return r;
}

EmbeddingResult distortion(const PointList& source, double q, const PointList& image, double p)
{
    auto src = [q](const Point& a, const Point& b) { return lp_distance(a, b, q); };
    auto img = [p](const Point& a, const Point& b) { return lp_distance(a, b, p); };
    EmbeddingResult r = distortion(source, src, image, img);
    r.source_p = q;
    r.image_p = p;
    return r;
}

PointList schoenberg_embed(const PointList& points, double q)
{
    if (!(q >= 2.0))
        throw ParameterError("Schoenberg embedding needs q >= 2");
    const std::size_t n = points.size();
    if (n == 0)
        return {};
    if (n > 1024)
        throw ParameterError("Schoenberg embedding limited to 1024 points");
    const double e = 4.0 / q;
    Matrix d2(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = i == j ? 0.0 : std::pow(lp_distance(points[i], points[j], 2.0), e);
            d2(i, j) = d2(j, i) = v;
        }
    const Vector row_mean = d2.rowwise().mean();
    const double total_mean = row_mean.mean();
    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            gram(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + total_mean);
    const Spectrum sp = eigen_sym(gram);
    const double lmax = std::max(sp.values(0), 0.0);
    PointList out(n, Point(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        double lam = sp.values(k);
        if (lam < 0.0) {
            if (lam < -1e-6 * lmax)
                throw NumericalError("Schoenberg Gram matrix has a significantly negative eigenvalue");
            lam = 0.0;
        }
        const double scale = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            out[i][k] = scale * sp.vectors(i, k);
    }
    return out;
}

std::vector<std::int64_t> grid_round_map(std::span<const std::int64_t> x, std::int64_t m)
{
    if (m < 2)
        throw ParameterError("grid rounding needs m >= 2");
    std::vector<std::int64_t> out;
    out.reserve(2 * x.size());
    const double two_m = 2.0 * double(m);
    for (std::int64_t u : x) {
        const double phase = 2.0 * std::numbers::pi * double(mod(u, m)) / double(m);
        auto nearest = [&](double v) {
            return std::clamp<std::int64_t>(std::llround(v), 0, 4 * m);
        };
        out.push_back(nearest(two_m + two_m * std::cos(phase)));
        out.push_back(nearest(two_m + two_m * std::sin(phase)));
    }
    return out;
}

double psi(double p, double q, double t)
{
    return 3.0 * t * p / q - 3.0 +
           (t * p + 2.0 - 2.0 * t * p / q - p) * (1.0 + (t * p - q) / (q * (p - 2.0)));
}

double theta(double p, double q)
{
    if (!(q > 2.0 && q < p))
        throw ParameterError("theta_{p,q} needs 2 < q < p");
    const double lead = (2.0 * q * (p - q) + q * q * (p - 1.0) * (p - 2.0)) / (2.0 * p * p * (q - 2.0));
    const double c = p * q - 3.0 * q + 2.0;
    return lead * (std::sqrt(1.0 + 4.0 * p * (p - 2.0) * (q - 2.0) / (c * c)) - 1.0);
}

GridBounds grid_bounds(double m, double n, double q, double p)
{
    if (!(q > 2.0 && q < p))
        throw ParameterError("grid bounds need 2 < q < p");
    if (!(m >= 1.0) || !(n >= 1.0))
        throw ParameterError("grid bounds need m, n >= 1");
    GridBounds g;
    g.exponent = (p - q) * (q - 2.0) / (q * q * (p - 2.0));
    const double mexp = q * (p - 2.0) / (q * (p - 2.0) + p - q);
    g.lower_shape = std::pow(std::min(std::pow(m, mexp), n), g.exponent);
    g.upper_shape = std::min(std::pow(n, g.exponent), std::pow(m, 1.0 - 2.0 / q));
    g.transition = std::pow(n, (p - q) / (q * (p - 2.0)));
    g.theta = theta(p, q);
    g.theta_lower = q / p;
    g.theta_upper = 1.0 - (p - q) * (q - 2.0) / (2.0 * p * p * p);
    g.psi_at_theta = psi(p, q, g.theta);
    if (std::abs(g.psi_at_theta) > 1e-10)
        throw NumericalError("psi_{p,q}(theta_{p,q}) is not zero");
    return g;
}

PointList integer_grid(int m, int n)
{
    if (m < 1 || n < 1)
        throw ParameterError("grid needs m, n >= 1");
    const Torus t(m + 1, n);
    if (!t.enumerable() || t.size() > 20000000)
        throw ParameterError("grid too large");
    PointList out;
    out.reserve(t.size());
    Coords x(n, 0);
    do {
        out.emplace_back(x.begin(), x.end());
    } while (t.next(x));
    return out;
}

EmbeddingResult composite_grid_distortion(int m, int n, double q, double p, GridEmbedding which,
                                          std::uint64_t max_points)
{
    const double points = std::pow(double(m) + 1.0, double(n));
    if (points > double(max_points))
        throw ParameterError("grid has more points than the budget allows");
    const PointList grid = integer_grid(m, n);
    auto src = [q](const Point& a, const Point& b) { return lp_distance(a, b, q); };
    EmbeddingResult r;
    if (which == GridEmbedding::Rosenthal) {
        if (!(q > 2.0 && q <= p))
            throw ParameterError("Rosenthal mode needs 2 < q <= p");
        PointList img;
        img.reserve(grid.size());
        for (const auto& x : grid)
            img.push_back(rosenthal_embed(x, q));
        auto metric = [p](const Point& a, const Point& b) {
            Point d(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                d[i] = a[i] - b[i];
            return rosenthal_norm(d, p);
        };
        r = distortion(grid, src, img, metric);
    } else {
        const PointList img = schoenberg_embed(grid, q);
        auto metric = [](const Point& a, const Point& b) { return lp_distance(a, b, 2.0); };
        r = distortion(grid, src, img, metric);
    }
    r.source_p = q;
    r.image_p = which == GridEmbedding::Rosenthal ? p : 2.0;
    return r;
}

namespace {

Json points_json(const PointList& pts)
{
    Json a = Json::array();
    for (const auto& x : pts)
        a.push_back(x);
    return a;
}

Json finite_or_null(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

} // namespace

Json to_json(const EmbeddingResult& r)
{
    Json j;
    j["source_p"] = r.source_p;
    j["image_p"] = r.image_p;
    j["points"] = r.source.size();
    j["pairs"] = r.pairs;
    j["expansion"] = finite_or_null(r.expansion);
    j["contraction"] = r.contraction;
    j["distortion"] = finite_or_null(r.distortion);
    j["infinite_expansion"] = r.infinite_expansion;
    j["source"] = points_json(r.source);
    j["image"] = points_json(r.image);
    return j;
}

std::string points_to_csv(const PointList& pts)
{
    std::string out;
    for (const auto& x : pts) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i)
                out += ',';
            out += format_double(x[i]);
        }
        out += '\n';
    }
    return out;
}

PointList points_from_csv(const std::string& text)
{
    const Matrix m = matrix_from_csv(text);
    PointList out(m.rows(), Point(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j);
    return out;
}

} // namespace xplab
