#include "xplab/lattice.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace xplab {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t splitmix(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::atomic<int> g_threads{static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};

} // namespace

void set_thread_limit(int threads) { g_threads = std::max(1, threads); }
int thread_limit() { return g_threads; }

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    if (a > kSat / b)
        return kSat;
    return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, unsigned exp)
{
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i)
        r = saturating_mul(r, base);
    return r;
}

std::uint64_t binomial(unsigned n, unsigned k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
        if (r > kSat)
            return kSat;
    }
    return static_cast<std::uint64_t>(r);
}

// ---------------------------------------------------------------- LatticePoint

LatticePoint::LatticePoint(Coords c, std::int64_t m) : coords(std::move(c)), modulus(m)
{
    if (m < 1)
        throw ParameterError("modulus must be positive");
    for (auto& v : coords)
        v = mod(v, m);
}

Coords LatticePoint::symmetric() const
{
    Coords out(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        out[i] = to_symmetric(coords[i], modulus);
    return out;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const
{
    if (o.modulus != modulus || o.coords.size() != coords.size())
        throw ParameterError("lattice points live on different tori");
    Coords c(coords.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = coords[i] + o.coords[i];
    return {c, modulus};
}

LatticePoint LatticePoint::operator-() const
{
    Coords c(coords.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = -coords[i];
    return {c, modulus};
}

// ---------------------------------------------------------------- Torus

Torus::Torus(std::int64_t modulus, int dim) : m_(modulus), n_(dim)
{
    if (modulus < 1)
        throw ParameterError("modulus must be positive");
    if (dim < 0)
        throw ParameterError("dimension must be nonnegative");
    size_ = saturating_pow(static_cast<std::uint64_t>(modulus), static_cast<unsigned>(dim));
    enumerable_ = size_ < (std::uint64_t(1) << 62);
}

std::uint64_t Torus::index(std::span<const std::int64_t> x) const
{
    std::uint64_t h = 0;
    for (int i = 0; i < n_; ++i)
        h = h * static_cast<std::uint64_t>(m_) + static_cast<std::uint64_t>(mod(x[i], m_));
    return h;
}

void Torus::coords(std::uint64_t idx, std::span<std::int64_t> out) const
{
    for (int i = n_ - 1; i >= 0; --i) {
        out[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(m_));
        idx /= static_cast<std::uint64_t>(m_);
    }
}

bool Torus::next(std::span<std::int64_t> x) const
{
    for (int i = n_ - 1; i >= 0; --i) {
        if (++x[i] < m_)
            return true;
        x[i] = 0;
    }
    return false;
}

std::uint64_t sign_count(SignLaw law, int n)
{
    return saturating_pow(law == SignLaw::Rademacher ? 2 : 3, static_cast<unsigned>(n));
}

void signs_from_index(SignLaw law, std::uint64_t idx, std::span<int> out)
{
    const int n = static_cast<int>(out.size());
    if (law == SignLaw::Rademacher) {
        for (int i = 0; i < n; ++i)
            out[i] = (idx >> i) & 1 ? -1 : 1;
    } else {
        for (int i = 0; i < n; ++i) {
            out[i] = static_cast<int>(idx % 3) - 1;
            idx /= 3;
        }
    }
}

// ---------------------------------------------------------------- GridFunction

GridFunction GridFunction::from_table(std::int64_t modulus, int n, int d, double value_p,
                                      std::vector<double> values)
{
    if (d < 1)
        throw ParameterError("value dimension must be positive");
    if (!(value_p >= 1.0))
        throw ParameterError("value exponent p must be >= 1");
    Torus t(modulus, n);
    if (!t.enumerable() || saturating_mul(t.size(), d) != values.size())
        throw ParameterError("table length must equal M^n * d");
    GridFunction f;
    f.m_ = modulus;
    f.n_ = n;
    f.d_ = d;
    f.p_ = value_p;
    f.table_ = std::move(values);
    return f;
}

GridFunction GridFunction::from_evaluator(std::int64_t modulus, int n, int d, double value_p,
                                          Evaluator eval)
{
    if (d < 1)
        throw ParameterError("value dimension must be positive");
    if (!(value_p >= 1.0))
        throw ParameterError("value exponent p must be >= 1");
    if (!eval)
        throw ParameterError("empty evaluator");
    Torus(modulus, n);
    GridFunction f;
    f.m_ = modulus;
    f.n_ = n;
    f.d_ = d;
    f.p_ = value_p;
    f.eval_ = std::move(eval);
    return f;
}

void GridFunction::eval(std::span<const std::int64_t> x, std::span<double> out) const
{
    if (has_table()) {
        const double* v = at_index(torus().index(x));
        std::copy(v, v + d_, out.begin());
        return;
    }
    Coords r(x.begin(), x.begin() + n_);
    for (auto& c : r)
        c = mod(c, m_);
    eval_(r, out);
}

GridFunction GridFunction::tabulated() const
{
    if (has_table())
        return *this;
    Torus t = torus();
    if (!t.enumerable() || saturating_mul(t.size(), d_) > (std::uint64_t(1) << 31))
        throw ParameterError("torus too large to tabulate");
    std::vector<double> values(t.size() * d_);
    Coords x(n_, 0);
    std::uint64_t idx = 0;
    do {
        eval_(x, std::span<double>(values.data() + idx * d_, d_));
        ++idx;
    } while (t.next(x));
    GridFunction g = from_table(m_, n_, d_, p_, std::move(values));
    g.eval_ = eval_;
    return g;
}

GridFunction GridFunction::with_value_p(double p) const
{
    if (!(p >= 1.0))
        throw ParameterError("value exponent p must be >= 1");
    GridFunction g = *this;
    g.p_ = p;
    return g;
}

double GridFunction::mode_mismatch() const
{
    if (!has_table() || !has_evaluator())
        throw ParameterError("mode_mismatch needs both a table and an evaluator");
    Torus t = torus();
    Coords x(n_, 0);
    std::vector<double> buf(d_);
    double worst = 0.0;
    std::uint64_t idx = 0;
    do {
        eval_(x, buf);
        for (int i = 0; i < d_; ++i)
            worst = std::max(worst, std::abs(buf[i] - table_[idx * d_ + i]));
        ++idx;
    } while (t.next(x));
    return worst;
}

double norm_pow(const double* a, int d, double p, double power)
{
    if (d == 1)
        return std::pow(std::abs(a[0]), power);
    double s = 0.0;
    for (int i = 0; i < d; ++i)
        s += p == 2.0 ? a[i] * a[i] : std::pow(std::abs(a[i]), p);
    return power == p ? s : std::pow(s, power / p);
}

double diff_norm_pow(const double* a, const double* b, int d, double p, double power)
{
    if (d == 1)
        return std::pow(std::abs(a[0] - b[0]), power);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double t = a[i] - b[i];
        s += p == 2.0 ? t * t : std::pow(std::abs(t), p);
    }
    return power == p ? s : std::pow(s, power / p);
}

// ---------------------------------------------------------------- plans and randomness

SamplePlan make_sample_plan(std::int64_t modulus, int n, int k, std::uint64_t budget,
                            std::uint64_t seed)
{
    if (modulus < 1 || n < 1)
        throw ParameterError("make_sample_plan: M and n must be >= 1");
    if (budget < 1)
        throw ParameterError("make_sample_plan: budget must be >= 1");
    if (k < 0 || k > n)
        throw ParameterError("make_sample_plan: k must lie in [0, n]");
    const std::uint64_t points = saturating_mul(
        saturating_pow(static_cast<std::uint64_t>(modulus), static_cast<unsigned>(n)),
        saturating_pow(2, static_cast<unsigned>(n)));
    const std::uint64_t subsets = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k));
    SamplePlan plan;
    plan.budget = budget;
    plan.seed = seed;
    plan.subset_mode = subsets <= budget ? PlanMode::Exhaustive : PlanMode::MonteCarlo;
    plan.subset_count = plan.subset_mode == PlanMode::Exhaustive ? subsets : budget;
    plan.mode = points <= budget && subsets <= budget ? PlanMode::Exhaustive : PlanMode::MonteCarlo;
    return plan;
}

std::string to_string(PlanMode m) { return m == PlanMode::Exhaustive ? "exhaustive" : "monte-carlo"; }

CounterRng::result_type CounterRng::operator()()
{
    ++ctr_;
    return splitmix(key_ ^ splitmix(ctr_));
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n)
{
    if (n <= 1)
        return 0;
    const std::uint64_t limit = kSat - kSat % n;
    std::uint64_t x;
    do {
        x = (*this)();
    } while (x >= limit);
    return x % n;
}

double CounterRng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    while (u <= 0.0)
        u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * 3.14159265358979323846 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

CounterRng make_stream(std::uint64_t seed, std::string_view purpose)
{
    return CounterRng(splitmix(splitmix(seed) ^ fnv1a(purpose)));
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

// ---------------------------------------------------------------- gap moments

std::string to_string(const Displacement& d)
{
    switch (d.kind) {
    case Displacement::Kind::Edge: return "edge";
    case Displacement::Kind::Diagonal:
        return d.law == SignLaw::Rademacher ? "diagonal" : "diagonal-three-letter";
    case Displacement::Kind::SymmetricDiagonal: return "symmetric-diagonal";
    case Displacement::Kind::ShiftedSet: return "shifted-set";
    case Displacement::Kind::FixedShift: return "fixed-shift";
    }
    return "?";
}

namespace {

void check_subset(const Subset& s, int n)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= n)
            throw ParameterError("subset element out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (s[j] == s[i])
                throw ParameterError("subset has repeated elements");
    }
}

void check_disp(const GridFunction& f, const Displacement& disp)
{
    const int n = f.dim();
    switch (disp.kind) {
    case Displacement::Kind::Edge:
        if (disp.j < 0 || disp.j >= n)
            throw ParameterError("edge index out of range");
        break;
    case Displacement::Kind::ShiftedSet: check_subset(disp.set, n); break;
    case Displacement::Kind::FixedShift:
        if (static_cast<int>(disp.shift.size()) != n)
            throw ParameterError("shift vector has wrong length");
        break;
    default: break;
    }
}

// number of free sign coordinates of a displacement
int sign_dims(const GridFunction& f, const Displacement& disp)
{
    switch (disp.kind) {
    case Displacement::Kind::Diagonal:
    case Displacement::Kind::SymmetricDiagonal: return f.dim();
    case Displacement::Kind::ShiftedSet: return static_cast<int>(disp.set.size());
    default: return 0;
    }
}

// Builds the two evaluation points for (x, eps).
void endpoints(const Displacement& disp, std::span<const std::int64_t> x, std::span<const int> eps,
               std::span<std::int64_t> y1, std::span<std::int64_t> y2)
{
    const std::size_t n = x.size();
    std::copy(x.begin(), x.end(), y1.begin());
    std::copy(x.begin(), x.end(), y2.begin());
    switch (disp.kind) {
    case Displacement::Kind::Edge: y1[disp.j] += 1; break;
    case Displacement::Kind::Diagonal:
        for (std::size_t i = 0; i < n; ++i)
            y1[i] += eps[i];
        break;
    case Displacement::Kind::SymmetricDiagonal:
        for (std::size_t i = 0; i < n; ++i) {
            y1[i] += eps[i];
            y2[i] -= eps[i];
        }
        break;
    case Displacement::Kind::ShiftedSet:
        for (std::size_t a = 0; a < disp.set.size(); ++a)
            y1[disp.set[a]] += disp.t * eps[a];
        break;
    case Displacement::Kind::FixedShift:
        for (std::size_t i = 0; i < n; ++i)
            y1[i] += disp.shift[i];
        break;
    }
}

struct Evaluation {
    const GridFunction& f;
    Torus torus;
    std::vector<double> b1, b2;

    explicit Evaluation(const GridFunction& g)
        : f(g), torus(g.torus()), b1(g.value_dim()), b2(g.value_dim())
    {
    }
    double term(std::span<const std::int64_t> y1, std::span<const std::int64_t> y2, double power)
    {
        const double* v1;
        const double* v2;
        if (f.has_table()) {
            v1 = f.at_index(torus.index(y1));
            v2 = f.at_index(torus.index(y2));
        } else {
            f.eval(y1, b1);
            f.eval(y2, b2);
            v1 = b1.data();
            v2 = b2.data();
        }
        return diff_norm_pow(v1, v2, f.value_dim(), f.value_p(), power);
    }
};

constexpr std::uint64_t kChunk = 512;
constexpr std::uint64_t kMaxExhaustive = std::uint64_t(1) << 34;

void random_point(CounterRng& rng, std::int64_t m, std::span<std::int64_t> x)
{
    for (auto& c : x)
        c = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m)));
}

void random_signs(CounterRng& rng, SignLaw law, std::span<int> eps)
{
    for (auto& e : eps)
        e = law == SignLaw::Rademacher ? (rng() >> 63 ? -1 : 1)
                                       : static_cast<int>(rng.below(3)) - 1;
}

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double v)
    {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    Estimate estimate() const
    {
        Estimate e;
        e.mean = mean;
        e.count = n;
        e.exhaustive = false;
        e.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        return e;
    }
};

// exhaustive mean over x and the sign patterns of one displacement
CompensatedSum exhaustive_sum(const GridFunction& f, const Displacement& disp, double power,
                              std::uint64_t& terms)
{
    const Torus torus = f.torus();
    const int sd = sign_dims(f, disp);
    const SignLaw law = disp.kind == Displacement::Kind::ShiftedSet ? SignLaw::Rademacher : disp.law;
    const std::uint64_t ns = sign_count(law, sd);
    if (!torus.enumerable() || saturating_mul(torus.size(), ns) > kMaxExhaustive)
        throw ParameterError("exhaustive evaluation requested on a torus that is too large");
    const std::uint64_t points = torus.size();
    const std::uint64_t chunks = (points + kChunk - 1) / kChunk;
    const int n = f.dim();
    auto partial = detail::chunked_map<CompensatedSum>(chunks, [&](std::uint64_t c) {
        Evaluation ev(f);
        CompensatedSum s;
        Coords x(n), y1(n), y2(n);
        std::vector<int> eps(sd);
        const std::uint64_t end = std::min(points, (c + 1) * kChunk);
        for (std::uint64_t idx = c * kChunk; idx < end; ++idx) {
            torus.coords(idx, x);
            for (std::uint64_t e = 0; e < ns; ++e) {
                signs_from_index(law, e, eps);
                endpoints(disp, x, eps, y1, y2);
                s.add(ev.term(y1, y2, power));
            }
        }
        return s;
    });
    CompensatedSum total;
    for (const auto& s : partial)
        total.merge(s);
    terms = points * ns;
    return total;
}

} // namespace

Estimate gap_estimate(const GridFunction& f, const Displacement& disp, const SamplePlan& plan,
                      double power)
{
    check_disp(f, disp);
    if (power <= 0.0)
        power = f.value_p();
    if (plan.exhaustive()) {
        std::uint64_t terms = 0;
        const CompensatedSum s = exhaustive_sum(f, disp, power, terms);
        Estimate e;
        e.mean = s.value() / static_cast<double>(terms);
        e.count = terms;
        e.exhaustive = true;
        return e;
    }
    CounterRng rng = make_stream(plan, "gap:" + to_string(disp));
    const int n = f.dim();
    const int sd = sign_dims(f, disp);
    const SignLaw law = disp.kind == Displacement::Kind::ShiftedSet ? SignLaw::Rademacher : disp.law;
    Evaluation ev(f);
    Coords x(n), y1(n), y2(n);
    std::vector<int> eps(sd);
    Welford w;
    for (std::uint64_t i = 0; i < plan.budget; ++i) {
        random_point(rng, f.modulus(), x);
        random_signs(rng, law, eps);
        endpoints(disp, x, eps, y1, y2);
        w.add(ev.term(y1, y2, power));
    }
    return w.estimate();
}

double gap_moment(const GridFunction& f, const Displacement& disp, const SamplePlan& plan,
                  double power)
{
    return gap_estimate(f, disp, plan, power).mean;
}

Estimate subset_gap_estimate(const GridFunction& f, std::int64_t t, int k, const SamplePlan& plan,
                             double power)
{
    const int n = f.dim();
    if (k < 1 || k > n)
        throw ParameterError("subset size k must lie in [1, n]");
    if (power <= 0.0)
        power = f.value_p();
    if (plan.exhaustive()) {
        CompensatedSum over_sets;
        std::uint64_t sets = 0, total_terms = 0;
        Subset s(k);
        for (int i = 0; i < k; ++i)
            s[i] = i;
        do {
            std::uint64_t terms = 0;
            const CompensatedSum inner =
                exhaustive_sum(f, Displacement::shifted_set(s, t), power, terms);
            over_sets.add(inner.value() / static_cast<double>(terms));
            total_terms += terms;
            ++sets;
        } while (next_combination(s, n));
        Estimate e;
        e.mean = over_sets.value() / static_cast<double>(sets);
        e.count = total_terms;
        e.exhaustive = true;
        return e;
    }
    CounterRng rng = make_stream(plan, "subset-gap");
    Evaluation ev(f);
    Coords x(n), y1(n), y2(n);
    std::vector<int> eps(k);
    Welford w;
    Displacement disp = Displacement::shifted_set({}, t);
    for (std::uint64_t i = 0; i < plan.budget; ++i) {
        disp.set = random_subset(n, k, rng);
        random_point(rng, f.modulus(), x);
        random_signs(rng, SignLaw::Rademacher, eps);
        endpoints(disp, x, eps, y1, y2);
        w.add(ev.term(y1, y2, power));
    }
    return w.estimate();
}

double set_shift_sum(const GridFunction& f, const Subset& s, std::span<const int> eps,
                     std::int64_t t, double power)
{
    const int n = f.dim();
    check_subset(s, n);
    if (static_cast<int>(eps.size()) != n)
        throw ParameterError("sign vector has wrong length");
    if (power <= 0.0)
        power = f.value_p();
    const Torus torus = f.torus();
    if (!torus.enumerable() || torus.size() > kMaxExhaustive)
        throw ParameterError("torus too large for an exhaustive sum");
    Evaluation ev(f);
    Coords x(n, 0), y(n);
    CompensatedSum acc;
    do {
        y = x;
        for (int j : s)
            y[j] += t * eps[j];
        acc.add(ev.term(y, x, power));
    } while (torus.next(x));
    return acc.value();
}

// ---------------------------------------------------------------- geodesics and subsets

std::vector<Coords> geodesic(const Coords& w)
{
    if (w.empty())
        throw ParameterError("geodesic: empty target");
    std::int64_t len = 0;
    for (auto c : w) {
        if (c % 2 == 0)
            throw ParameterError("geodesic: every coordinate must be odd");
        len = std::max(len, c < 0 ? -c : c);
    }
    const std::size_t n = w.size();
    Coords target(n);
    for (std::size_t j = 0; j < n; ++j)
        target[j] = w[j] < 0 ? -w[j] : w[j];
    std::vector<Coords> path;
    path.reserve(static_cast<std::size_t>(len) + 1);
    Coords cur(n, 0);
    path.push_back(cur);
    for (std::int64_t step = 1; step <= len; ++step) {
        if (step % 2 == 1) {
            for (auto& c : cur)
                c += 1;
        } else {
            for (std::size_t j = 0; j < n; ++j)
                cur[j] += cur[j] < target[j] ? 1 : -1;
        }
        path.push_back(cur);
    }
    for (auto& pt : path)
        for (std::size_t j = 0; j < n; ++j)
            if (w[j] < 0)
                pt[j] = -pt[j];
    return path;
}

bool next_combination(Subset& s, int n)
{
    const int k = static_cast<int>(s.size());
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i)
        --i;
    if (i < 0)
        return false;
    ++s[i];
    for (int j = i + 1; j < k; ++j)
        s[j] = s[j - 1] + 1;
    return true;
}

Subset random_subset(int n, int k, CounterRng& rng)
{
    // Floyd's sampling
    Subset s;
    s.reserve(k);
    for (int j = n - k; j < n; ++j) {
        const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
        if (std::find(s.begin(), s.end(), t) == s.end())
            s.push_back(t);
        else
            s.push_back(j);
    }
    std::sort(s.begin(), s.end());
    return s;
}

std::vector<Subset> subset_stream(int n, int k, const SamplePlan& plan, std::string_view purpose)
{
    if (k < 1 || n < 1)
        throw ParameterError("subset_stream: need 1 <= k <= n");
    if (k > n)
        throw ParameterError("subset_stream: k exceeds n");
    std::vector<Subset> out;
    if (plan.subset_mode == PlanMode::Exhaustive) {
        Subset s(k);
        for (int i = 0; i < k; ++i)
            s[i] = i;
        do {
            out.push_back(s);
        } while (next_combination(s, n));
        return out;
    }
    CounterRng rng = make_stream(plan, purpose);
    const std::uint64_t count = plan.subset_count ? plan.subset_count : plan.budget;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
        out.push_back(random_subset(n, k, rng));
    return out;
}

} // namespace xplab
