#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xplab {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Coords = std::vector<std::int64_t>;
using Subset = std::vector<int>;

inline std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// canonical residue r in [0,M) -> symmetric representative in (-M/2, M/2]
inline std::int64_t to_symmetric(std::int64_t r, std::int64_t m)
{
    r = mod(r, m);
    return 2 * r > m ? r - m : r;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t saturating_pow(std::uint64_t base, unsigned exp);
std::uint64_t binomial(unsigned n, unsigned k); // saturating

struct LatticePoint {
    Coords coords;
    std::int64_t modulus = 1;

    LatticePoint() = default;
    LatticePoint(Coords c, std::int64_t m);

    int dim() const { return static_cast<int>(coords.size()); }
    Coords symmetric() const;
    static LatticePoint from_symmetric(const Coords& c, std::int64_t m) { return {c, m}; }
    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-() const;
    bool operator==(const LatticePoint&) const = default;
};

// Row-major index of a point of Z_M^n (first coordinate most significant).
class Torus {
public:
    Torus(std::int64_t modulus, int dim);

    std::int64_t modulus() const { return m_; }
    int dim() const { return n_; }
    std::uint64_t size() const { return size_; } // saturating
    bool enumerable() const { return enumerable_; }

    std::uint64_t index(std::span<const std::int64_t> x) const; // reduces mod M
    void coords(std::uint64_t idx, std::span<std::int64_t> out) const;
    // advance x (canonical coords) to the next point in row-major order; false after the last
    bool next(std::span<std::int64_t> x) const;

private:
    std::int64_t m_;
    int n_;
    std::uint64_t size_;
    bool enumerable_;
};

// Sign patterns. Index bit i set means eps_i = -1. ThreeLetter uses base-3 digits 0,1,2 -> -1,0,+1.
enum class SignLaw { Rademacher, ThreeLetter };

std::uint64_t sign_count(SignLaw law, int n);
void signs_from_index(SignLaw law, std::uint64_t idx, std::span<int> out);

class GridFunction {
public:
    using Evaluator = std::function<void(std::span<const std::int64_t>, std::span<double>)>;

    GridFunction() = default;
    static GridFunction from_table(std::int64_t modulus, int n, int d, double value_p,
                                   std::vector<double> values);
    static GridFunction from_evaluator(std::int64_t modulus, int n, int d, double value_p,
                                       Evaluator eval);

    std::int64_t modulus() const { return m_; }
    int dim() const { return n_; }
    int value_dim() const { return d_; }
    double value_p() const { return p_; }
    bool has_table() const { return !table_.empty(); }
    bool has_evaluator() const { return static_cast<bool>(eval_); }
    const std::vector<double>& table() const { return table_; }
    Torus torus() const { return Torus(m_, n_); }

    // x may hold any integers; they are reduced mod M.
    void eval(std::span<const std::int64_t> x, std::span<double> out) const;
    const double* at_index(std::uint64_t idx) const { return table_.data() + idx * d_; }

    GridFunction tabulated() const;
    GridFunction with_value_p(double p) const;
    // max abs difference between table and evaluator (both must be present)
    double mode_mismatch() const;

private:
    std::int64_t m_ = 1;
    int n_ = 0;
    int d_ = 1;
    double p_ = 2.0;
    std::vector<double> table_;
    Evaluator eval_;
};

// sum_i |a_i - b_i|^p, raised to power/p
double diff_norm_pow(const double* a, const double* b, int d, double p, double power);
double norm_pow(const double* a, int d, double p, double power);

enum class PlanMode { Exhaustive, MonteCarlo };

struct SamplePlan {
    PlanMode mode = PlanMode::Exhaustive;
    std::uint64_t budget = 1000000;
    std::uint64_t seed = 0;
    PlanMode subset_mode = PlanMode::Exhaustive;
    std::uint64_t subset_count = 0;

    bool exhaustive() const { return mode == PlanMode::Exhaustive; }
    bool operator==(const SamplePlan&) const = default;
};

SamplePlan make_sample_plan(std::int64_t modulus, int n, int k, std::uint64_t budget,
                            std::uint64_t seed);
std::string to_string(PlanMode m);

// Counter-based generator: output i is a mix of (key, i). One stream per (plan, purpose).
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) : key_(key) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()();
    double uniform();                        // [0,1)
    std::uint64_t below(std::uint64_t n);    // [0,n)
    double normal();
    std::uint64_t counter() const { return ctr_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

CounterRng make_stream(std::uint64_t seed, std::string_view purpose);
inline CounterRng make_stream(const SamplePlan& plan, std::string_view purpose)
{
    return make_stream(plan.seed, purpose);
}

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }
    void merge(const CompensatedSum& o)
    {
        add(o.sum_);
        add(o.comp_);
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t count = 0;
    bool exhaustive = true;
};

struct Displacement {
    enum class Kind { Edge, Diagonal, SymmetricDiagonal, ShiftedSet, FixedShift };
    Kind kind = Kind::Diagonal;
    int j = 0;
    Subset set;
    std::int64_t t = 1;
    Coords shift;
    SignLaw law = SignLaw::Rademacher;

    static Displacement edge(int j) { return {Kind::Edge, j, {}, 1, {}, SignLaw::Rademacher}; }
    static Displacement diagonal(SignLaw law = SignLaw::Rademacher)
    {
        return {Kind::Diagonal, 0, {}, 1, {}, law};
    }
    static Displacement symmetric_diagonal()
    {
        return {Kind::SymmetricDiagonal, 0, {}, 1, {}, SignLaw::Rademacher};
    }
    static Displacement shifted_set(Subset s, std::int64_t t)
    {
        return {Kind::ShiftedSet, 0, std::move(s), t, {}, SignLaw::Rademacher};
    }
    static Displacement fixed_shift(Coords v)
    {
        return {Kind::FixedShift, 0, {}, 1, std::move(v), SignLaw::Rademacher};
    }
};

std::string to_string(const Displacement& d);

// Mean of ||f(x+delta) - f(x')||_{value_p}^{power} over uniform (x, eps); power <= 0 means value_p.
Estimate gap_estimate(const GridFunction& f, const Displacement& disp, const SamplePlan& plan,
                      double power = 0.0);
double gap_moment(const GridFunction& f, const Displacement& disp, const SamplePlan& plan,
                  double power = 0.0);

// Average over |S| = k of the ShiftedSet(S, t) moment (exhaustive or joint (S, x, eps) draws).
Estimate subset_gap_estimate(const GridFunction& f, std::int64_t t, int k, const SamplePlan& plan,
                             double power = 0.0);

// Plain sums over the whole torus (no normalisation), always exhaustive.
// sum_x ||f(x + t*eps_S) - f(x)||^power for a fixed sign vector (length n, entries +-1)
double set_shift_sum(const GridFunction& f, const Subset& s, std::span<const int> eps,
                     std::int64_t t, double power = 0.0);

std::vector<Coords> geodesic(const Coords& w);

std::vector<Subset> subset_stream(int n, int k, const SamplePlan& plan,
                                  std::string_view purpose = "subsets");
Subset random_subset(int n, int k, CounterRng& rng); // sorted
bool next_combination(Subset& s, int n);             // lexicographic successor

void set_thread_limit(int threads);
int thread_limit();

} // namespace xplab
