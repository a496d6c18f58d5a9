#include "xplab/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace xplab {

namespace {

constexpr double kJacobiTol = 1e-13;
constexpr int kMaxSweeps = 100;
constexpr double kClip = 1e-12;

bool is_integer(double q) { return std::isfinite(q) && q == std::round(q); }

double off_diagonal(const Matrix& a)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j)
                s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

Matrix mirror_upper(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw ParameterError("matrix must be square");
    Matrix s = a;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            s(i, j) = s(j, i);
    return s;
}

// eigenvalue -> eigenvalue^q with the clipping rules of SymMatrix::power
double spectral_pow(double lambda, double q, double tol)
{
    if (q == 0.0)
        return 1.0;
    if (is_integer(q))
        return std::pow(lambda, q);
    if (lambda < -tol)
        throw ParameterError("fractional power of a matrix with a negative eigenvalue");
    return std::pow(std::max(lambda, 0.0), q);
}

// sum of |singular value|^p; 1x1 input gives |a|^p exactly
double schatten_pow(const Matrix& a, double p)
{
    if (a.rows() == 1 && a.cols() == 1)
        return std::pow(std::abs(a(0, 0)), p);
    double s = 0.0;
    if (a.rows() == a.cols() && a == a.transpose()) {
        const Spectrum sp = eigen_sym(a);
        for (Eigen::Index i = 0; i < sp.values.size(); ++i)
            s += std::pow(std::abs(sp.values(i)), p);
    } else {
        const Spectrum sp = eigen_sym(Matrix(a.transpose() * a));
        for (Eigen::Index i = 0; i < sp.values.size(); ++i)
            s += std::pow(std::max(sp.values(i), 0.0), p / 2.0);
    }
    return s;
}

void check_same_order(const std::vector<Matrix>& a)
{
    if (a.empty())
        throw ParameterError("empty matrix list");
    for (const auto& m : a)
        if (m.rows() != a.front().rows() || m.cols() != a.front().cols())
            throw ParameterError("matrices have different dimensions");
}

void require_psd(const SymMatrix& a, const char* name)
{
    if (!a.psd())
        throw ParameterError(std::string(name) + " is not positive semidefinite");
}

double root(double v, double q) { return std::pow(std::max(v, 0.0), 1.0 / q); }

} // namespace

Spectrum eigen_sym(const Matrix& input)
{
    Matrix a = mirror_upper(input);
    const Eigen::Index d = a.rows();
    if (!a.allFinite())
        throw ParameterError("matrix has non-finite entries");
    Matrix v = Matrix::Identity(d, d);
    const double norm = a.norm();
    int sweep = 0;
    while (off_diagonal(a) > kJacobiTol * norm) {
        if (sweep == kMaxSweeps)
            throw NumericalError("Jacobi eigensolver did not converge");
        ++sweep;
        for (Eigen::Index p = 0; p < d; ++p)
            for (Eigen::Index q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < d; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<Eigen::Index> order(d);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
    Spectrum out;
    out.values.resize(d);
    out.vectors.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values(i) = a(order[i], order[i]);
        out.vectors.col(i) = v.col(order[i]);
    }
    out.sweeps = sweep;
    return out;
}

double psd_tolerance(const Vector& eigenvalues)
{
    return eigenvalues.size() == 0 ? 0.0 : kClip * eigenvalues.cwiseAbs().maxCoeff();
}

SymMatrix::SymMatrix(const Matrix& a) : a_(mirror_upper(a)), spec_(eigen_sym(a_))
{
    psd_ = a_.rows() == 0 || min_eigenvalue() >= -psd_tolerance(spec_.values);
}

SymMatrix SymMatrix::identity(int d) { return SymMatrix(Matrix::Identity(d, d)); }

SymMatrix SymMatrix::diagonal(const Vector& diag) { return SymMatrix(Matrix(diag.asDiagonal())); }

double SymMatrix::max_eigenvalue() const { return spec_.values(0); }

double SymMatrix::min_eigenvalue() const { return spec_.values(spec_.values.size() - 1); }

Matrix SymMatrix::power(double q) const
{
    if (q < 0.0)
        throw ParameterError("negative matrix powers are not supported");
    const int d = order();
    if (q == 0.0)
        return Matrix::Identity(d, d);
    if (q == 1.0)
        return a_;
    const double tol = psd_tolerance(spec_.values);
    Vector lam(d);
    for (int i = 0; i < d; ++i)
        lam(i) = spectral_pow(spec_.values(i), q, tol);
    return spec_.vectors * lam.asDiagonal() * spec_.vectors.transpose();
}

double schatten_norm(const Matrix& a, double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw ParameterError("Schatten exponent must be a finite p >= 1");
    if (a.rows() == 1 && a.cols() == 1)
        return std::abs(a(0, 0));
    return std::pow(schatten_pow(a, p), 1.0 / p);
}

double schatten_norm(const SymMatrix& a, double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw ParameterError("Schatten exponent must be a finite p >= 1");
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.eigenvalues().size(); ++i)
        s += std::pow(std::abs(a.eigenvalues()(i)), p);
    return std::pow(s, 1.0 / p);
}

double trace_power(const SymMatrix& a, double q)
{
    if (q < 0.0)
        throw ParameterError("negative matrix powers are not supported");
    if (q == 0.0)
        return a.order();
    if (q == 1.0)
        return a.trace();
    const double tol = psd_tolerance(a.eigenvalues());
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.eigenvalues().size(); ++i)
        s += spectral_pow(a.eigenvalues()(i), q, tol);
    return s;
}

double trace_mixed(const SymMatrix& a, const SymMatrix& b, double q)
{
    if (a.order() != b.order())
        throw ParameterError("trace_mixed: orders differ");
    return (a.power(q).cwiseProduct(b.matrix().transpose())).sum();
}

std::string to_string(TraceKind::Tag tag)
{
    switch (tag) {
    case TraceKind::Tag::MainQge1: return "main-q-ge-1";
    case TraceKind::Tag::Qlt1: return "q-lt-1";
    case TraceKind::Tag::LambdaFamily: return "lambda-family";
    case TraceKind::Tag::Holder: return "holder";
    case TraceKind::Tag::LiebThirring: return "lieb-thirring";
    case TraceKind::Tag::OpConvex: return "op-convex";
    }
    return "unknown";
}

InequalityReport trace_inequality_report(const SymMatrix& a, const SymMatrix& b, double q,
                                         const TraceKind& kind)
{
    if (a.order() != b.order())
        throw ParameterError("trace inequality: orders differ");
    require_psd(a, "A");
    require_psd(b, "B");
    const SymMatrix sum = a + b;
    InequalityReport r;
    r.functional = "trace-" + to_string(kind.tag);
    r.params = {{"q", q}, {"d", double(a.order())}};

    switch (kind.tag) {
    case TraceKind::Tag::MainQge1:
        if (!(q >= 1.0))
            throw ParameterError("main trace inequality needs q >= 1");
        r.lhs = root(trace_mixed(sum, a, q), q);
        r.rhs_terms = {{"a_term", root(trace_power(a, q + 1.0), q)},
                       {"b_term", root(trace_mixed(b, a, q), q)}};
        break;
    case TraceKind::Tag::Qlt1:
        if (!(q > 0.0 && q < 1.0))
            throw ParameterError("this trace inequality needs 0 < q < 1");
        r.lhs = trace_mixed(sum, a, q);
        r.rhs_terms = {{"a_term", trace_power(a, q + 1.0)}, {"b_term", trace_mixed(b, a, q)}};
        break;
    case TraceKind::Tag::LambdaFamily: {
        if (!(q >= 1.0))
            throw ParameterError("lambda family needs q >= 1");
        const double rr = std::max(q - 2.0, 0.0);
        const double v = trace_power(a, q);
        const double x = trace_mixed(b, a, q - 1.0);
        auto objective = [&](double lambda) {
            return v / std::pow(lambda, rr) + x / std::pow(1.0 - lambda, rr);
        };
        double best = std::numeric_limits<double>::infinity(), best_lambda = 0.5;
        for (int i = 1; i <= 1025; ++i) {
            const double lambda = double(i) / 1026.0;
            const double val = objective(lambda);
            if (val < best) {
                best = val;
                best_lambda = lambda;
            }
        }
        if (v > 0.0 && x > 0.0) {
            const double lambda = 1.0 / (1.0 + std::pow(x / v, 1.0 / (rr + 1.0)));
            if (lambda > 0.0 && lambda < 1.0 && objective(lambda) < best) {
                best = objective(lambda);
                best_lambda = lambda;
            }
        }
        r.lhs = trace_mixed(sum, a, q - 1.0);
        r.rhs_terms = {{"lambda_min", best}};
        r.extras = {{"lambda", best_lambda},
                    {"closed_form_min",
                     std::pow(std::pow(std::max(v, 0.0), 1.0 / (rr + 1.0)) +
                                  std::pow(std::max(x, 0.0), 1.0 / (rr + 1.0)),
                              rr + 1.0)}};
        r.params.push_back({"r", rr});
        break;
    }
    case TraceKind::Tag::Holder: {
        const std::size_t k = kind.a.size();
        if (k == 0 || kind.b.size() != k)
            throw ParameterError("Holder word needs k exponents a_0..a_{k-1} and k exponents b_1..b_k");
        double total = 0.0, bsum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (!(kind.a[j] > 0.0) || !(kind.b[j] > 0.0))
                throw ParameterError("Holder exponents must be positive");
            total += kind.a[j] + kind.b[j];
            bsum += kind.b[j];
        }
        if (!(q > 0.0) || std::abs(total - (q + 1.0)) > 1e-12 * (q + 1.0))
            throw ParameterError("Holder exponents must sum to q + 1");
        for (std::size_t j = 0; j < k; ++j) {
            const double left = j == 0 ? kind.b[k - 1] : kind.b[j - 1];
            if (left + kind.b[j] > 2.0 * q * kind.a[j] * (1.0 + 1e-12))
                throw ParameterError("Holder exponents violate b_j + b_{j+1} <= 2 q a_j");
        }
        Matrix word = Matrix::Identity(a.order(), a.order());
        for (std::size_t j = 0; j < k; ++j)
            word = word * a.power(kind.a[j]) * b.power(kind.b[j]);
        r.lhs = word.trace();
        const double t = bsum / q;
        r.rhs_terms = {{"holder", std::pow(std::max(trace_power(a, q + 1.0), 0.0), 1.0 - t) *
                                      std::pow(std::max(trace_mixed(b, a, q), 0.0), t)}};
        r.params.push_back({"k", double(k)});
        break;
    }
    case TraceKind::Tag::LiebThirring: {
        if (!(kind.r >= 1.0))
            throw ParameterError("Lieb-Thirring needs r >= 1");
        const Matrix x = a.matrix(), y = b.matrix();
        r.lhs = trace_power(SymMatrix(Matrix(x * y * x)), kind.r);
        const Matrix xr = a.power(kind.r);
        r.rhs_terms = {{"lt", (xr * b.power(kind.r) * xr).trace()}};
        r.params = {{"r", kind.r}, {"d", double(a.order())}};
        break;
    }
    case TraceKind::Tag::OpConvex: {
        const double th = kind.theta;
        if (!(th >= 1.0 && th <= 2.0))
            throw ParameterError("operator convexity needs theta in [1, 2]");
        const double ta = trace_power(a, th), tb = trace_power(b, th);
        double s = 0.5;
        if (kind.s)
            s = *kind.s;
        else if (ta > 0.0 && tb > 0.0)
            s = 1.0 / (1.0 + std::pow(tb / ta, 1.0 / th));
        if (!(s > 0.0 && s < 1.0))
            throw ParameterError("operator convexity weight s must lie in (0, 1)");
        const double ws = std::pow(s, th - 1.0), wt = std::pow(1.0 - s, th - 1.0);
        const Matrix gap = a.power(th) / ws + b.power(th) / wt - sum.power(th);
        r.lhs = trace_power(sum, th);
        r.rhs_terms = {{"a_term", ta / ws}, {"b_term", tb / wt}};
        r.extras = {{"min_eigenvalue", eigen_sym(gap).values.minCoeff()}, {"s", s}};
        r.params = {{"theta", th}, {"d", double(a.order())}};
        break;
    }
    }
    r.finalize();
    return r;
}

Counterexample psd_counterexample(double s, double q, double k)
{
    if (!(s > 0.0) || !(q > 0.0))
        throw ParameterError("counterexample needs s > 0 and q > 0");
    Counterexample c;
    const double s2 = s * s;
    c.a = Matrix::Zero(2, 2);
    c.a(0, 0) = s2;
    c.b.resize(2, 2);
    c.b << 1.0, s, s, s2;
    c.w.resize(2);
    c.w << -s, 1.0;
    const Matrix sum = c.a + c.b;
    Matrix gap;
    if (is_integer(q)) {
        const int n = static_cast<int>(q);
        // <(A+B)^n w, w> cancels its leading s^4 terms, so the vectors are carried in long double;
        // B w vanishes exactly
        using Mat2 = Eigen::Matrix<long double, 2, 2>;
        using Vec2 = Eigen::Matrix<long double, 2, 1>;
        const Mat2 la = c.a.cast<long double>(), lb = c.b.cast<long double>();
        const Vec2 lw = c.w.cast<long double>();
        Vec2 va = lw, vb = lw, vs = lw;
        Matrix pa = Matrix::Identity(2, 2), pb = pa, ps = pa;
        for (int i = 0; i < n; ++i) {
            va = la * va;
            vb = lb * vb;
            vs = Vec2(la * vs) + Vec2(lb * vs);
            pa = pa * c.a;
            pb = pb * c.b;
            ps = ps * sum;
        }
        const long double form = static_cast<long double>(k) * (va.dot(lw) + vb.dot(lw)) - vs.dot(lw);
        c.form = static_cast<double>(form);
        gap = k * (pa + pb) - ps;
    } else {
        const SymMatrix a(c.a), b(c.b), ab(sum);
        gap = k * (a.power(q) + b.power(q)) - ab.power(q);
        c.form = c.w.dot(gap * c.w);
    }
    c.min_eigenvalue = eigen_sym(gap).values.minCoeff();
    c.closed_form = -std::pow(s, 6) - 3.0 * std::pow(s, 8) + (k - 1.0) * std::pow(s, 10);
    return c;
}

Matrix random_gaussian(int rows, int cols, CounterRng& rng)
{
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            g(i, j) = rng.normal();
    return g;
}

SymMatrix random_psd(int d, CounterRng& rng, const std::vector<double>& profile)
{
    if (d < 1)
        throw ParameterError("random_psd needs d >= 1");
    const Matrix g = random_gaussian(d, d, rng);
    const Matrix a = g * g.transpose() / double(d);
    if (profile.empty())
        return SymMatrix(a);
    if (static_cast<int>(profile.size()) != d)
        throw ParameterError("eigenvalue profile must have d entries");
    Vector lam(d);
    for (int i = 0; i < d; ++i) {
        if (profile[i] < 0.0)
            throw ParameterError("eigenvalue profile must be nonnegative");
        lam(i) = profile[i];
    }
    const Spectrum sp = eigen_sym(a);
    return SymMatrix(Matrix(sp.vectors * lam.asDiagonal() * sp.vectors.transpose()));
}

InequalityReport schatten_xp_report(const std::vector<Matrix>& a, int k, double p,
                                    const SamplePlan& plan)
{
    if (!(p >= 2.0))
        throw ParameterError("Schatten X_p report needs p >= 2");
    check_same_order(a);
    const int n = static_cast<int>(a.size());
    const SignValue value = [&a, p](const std::vector<double>& c) {
        Matrix w = Matrix::Zero(a.front().rows(), a.front().cols());
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (c[j] == 0.0)
                continue;
            w += c[j] * a[j];
        }
        return schatten_pow(w, p);
    };
    const XpSides s = xp_sides(n, k, plan, value);
    CompensatedSum lp;
    for (const auto& m : a)
        lp.add(schatten_pow(m, p));
    const double kn = static_cast<double>(k) / n;
    InequalityReport r;
    r.functional = "schatten-xp";
    r.params = {{"p", p}, {"n", double(n)}, {"k", double(k)}, {"d", double(a.front().rows())}};
    r.lhs = s.subsets;
    r.std_error = s.subsets_se;
    r.rhs_terms = {{"ell_p", kn * lp.value()}, {"rademacher", std::pow(kn, p / 2.0) * s.rademacher}};
    r.plan = plan;
    r.finalize();
    return r;
}

InequalityReport psd_xp_report(const std::vector<SymMatrix>& b, int k, double q,
                               const std::optional<SamplePlan>& plan)
{
    if (!(q >= 1.0))
        throw ParameterError("PSD X_p report needs q >= 1");
    if (b.empty())
        throw ParameterError("empty matrix list");
    const int n = static_cast<int>(b.size());
    if (k < 1 || k > n)
        throw ParameterError("subset size k must lie in [1, n]");
    const int d = b.front().order();
    for (const auto& m : b) {
        if (m.order() != d)
            throw ParameterError("matrices have different orders");
        require_psd(m, "B_j");
    }
    auto set_value = [&](const Subset& s) {
        Matrix acc = Matrix::Zero(d, d);
        for (int j : s)
            acc += b[j].matrix();
        return trace_power(SymMatrix(acc), q);
    };
    InequalityReport r;
    r.functional = "psd-xp";
    r.params = {{"q", q}, {"n", double(n)}, {"k", double(k)}, {"d", double(d)}};
    if (!plan || plan->subset_mode == PlanMode::Exhaustive) {
        CompensatedSum acc;
        std::uint64_t count = 0;
        Subset s(k);
        std::iota(s.begin(), s.end(), 0);
        do {
            acc.add(set_value(s));
            ++count;
        } while (next_combination(s, n));
        r.lhs = acc.value() / static_cast<double>(count);
    } else {
        const auto sets = subset_stream(n, k, *plan, "psd-xp:subsets");
        double mean = 0.0, m2 = 0.0;
        std::uint64_t count = 0;
        for (const auto& s : sets) {
            const double v = set_value(s);
            ++count;
            const double delta = v - mean;
            mean += delta / double(count);
            m2 += delta * (v - mean);
        }
        r.lhs = mean;
        r.std_error = count > 1 ? std::sqrt(m2 / double(count - 1) / double(count)) : 0.0;
    }
    const double kn = static_cast<double>(k) / n;
    CompensatedSum singles;
    Matrix total = Matrix::Zero(d, d);
    for (const auto& m : b) {
        singles.add(trace_power(m, q));
        total += m.matrix();
    }
    r.rhs_terms = {{"ell_q", kn * singles.value()},
                   {"full", std::pow(kn, q) * trace_power(SymMatrix(total), q)}};
    r.rhs_combine = "max";
    r.plan = plan;
    r.finalize();
    r.extras = {{"lemma_constant", std::pow(4.0 * q / std::log(2.0 * q), q)}};
    if (2 * k > n)
        r.warnings.push_back("k > n/2: outside the range of the direct estimate");
    return r;
}

InequalityReport khinchine_report(const std::vector<Matrix>& a, double p, const SamplePlan& plan)
{
    if (!(p >= 2.0))
        throw ParameterError("noncommutative Khinchine report needs p >= 2");
    check_same_order(a);
    const int n = static_cast<int>(a.size());
    const SignValue value = [&a, p](const std::vector<double>& c) {
        Matrix w = Matrix::Zero(a.front().rows(), a.front().cols());
        for (std::size_t j = 0; j < a.size(); ++j)
            w += c[j] * a[j];
        return schatten_pow(w, p);
    };
    const Estimate e = sign_average(n, plan, value, "khinchine");
    Matrix col = Matrix::Zero(a.front().cols(), a.front().cols());
    Matrix row = Matrix::Zero(a.front().rows(), a.front().rows());
    for (const auto& m : a) {
        col += m.transpose() * m;
        row += m * m.transpose();
    }
    InequalityReport r;
    r.functional = "khinchine";
    r.params = {{"p", p}, {"n", double(n)}, {"d", double(a.front().rows())}};
    r.lhs = e.mean;
    r.std_error = e.std_error;
    r.rhs_terms = {{"column", trace_power(SymMatrix(col), p / 2.0)},
                   {"row", trace_power(SymMatrix(row), p / 2.0)}};
    r.plan = plan;
    r.finalize();
    const double upper = r.degenerate || r.unbounded ? 0.0 : std::pow(p, -p / 2.0) * r.lhs / r.rhs;
    const double easy = r.degenerate || r.lhs < kDegenerateTol
                            ? (r.degenerate ? 0.0 : std::numeric_limits<double>::infinity())
                            : r.rhs / r.lhs;
    r.extras = {{"upper_ratio", upper}, {"easy_ratio", easy}};
    return r;
}

Matrix matrix_from_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
                    throw ParameterError("bad matrix cell '" + cell + "'");
            } catch (const std::logic_error&) {
                throw ParameterError("bad matrix cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParameterError("ragged matrix CSV");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ParameterError("empty matrix CSV");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];
    return m;
}

std::string matrix_to_csv(const Matrix& a)
{
    std::string out;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j)
                out += ',';
            out += format_double(a(i, j));
        }
        out += '\n';
    }
    return out;
}

Json to_json(const Matrix& a)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            row.push_back(a(i, j));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j)
{
    if (!j.is_array() || j.empty())
        throw ParameterError("matrix JSON must be a nonempty list of rows");
    const std::size_t cols = j.front().size();
    Matrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ParameterError("ragged matrix JSON");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = j[r][c].get<double>();
    }
    return m;
}

} // namespace xplab
