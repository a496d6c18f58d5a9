#pragma once

#include "xplab/lattice.hpp"
#include "xplab/operators.hpp"
#include "xplab/report.hpp"

#include <functional>
#include <span>
#include <vector>

namespace xplab {

using VectorList = std::vector<std::vector<double>>;

// A plan that always enumerates (used by the sum-form lemmas).
SamplePlan exhaustive_plan();

// Mean over |S| = k and eps in {-1,1}^n of value(c), where c_j = eps_j for j in S and 0 otherwise.
// value receives the coefficient vector (length n).
using SignValue = std::function<double(const std::vector<double>&)>;
Estimate subset_sign_average(int n, int k, const SamplePlan& plan, const SignValue& value,
                             std::string_view purpose);
// Mean over eps in {-1,1}^n of value(eps).
Estimate sign_average(int n, const SamplePlan& plan, const SignValue& value,
                      std::string_view purpose);

// Sign-sum sides shared by the vector and matrix X_p reports (value(c) = ||sum_j c_j a_j||^p).
struct XpSides {
    double subsets = 0.0; // mean over |S| = k and signs
    double subsets_se = 0.0;
    double rademacher = 0.0; // mean over all signs
};
XpSides xp_sides(int n, int k, const SamplePlan& plan, const SignValue& value);

InequalityReport metric_xp_report(const GridFunction& f, int k, const SamplePlan& plan);
InequalityReport reverse_metric_xp_report(const GridFunction& f, int k, const SamplePlan& plan);

enum class LinearMode { Rademacher, SquareFunction };
InequalityReport linear_xp_report(const VectorList& a, int k, double p, const SamplePlan& plan,
                                  LinearMode mode = LinearMode::Rademacher);
InequalityReport linear_xp_report(const std::vector<double>& a, int k, double p,
                                  const SamplePlan& plan, LinearMode mode = LinearMode::Rademacher);
InequalityReport reverse_linear_xp_report(const VectorList& a, int k, double p,
                                          const SamplePlan& plan);
InequalityReport reverse_linear_xp_report(const std::vector<double>& a, int k, double p,
                                          const SamplePlan& plan);

struct SmoothnessKind {
    enum class Tag { Enflo, BMW, Pisier };
    Tag tag = Tag::Enflo;
    double r = 2.0; // Enflo exponent
    double q = 2.0; // BMW type
    double p = 2.0; // BMW / Pisier exponent

    static SmoothnessKind enflo(double r) { return {Tag::Enflo, r, 2.0, 2.0}; }
    static SmoothnessKind bmw(double q, double p) { return {Tag::BMW, 2.0, q, p}; }
    static SmoothnessKind pisier(double p) { return {Tag::Pisier, 2.0, 2.0, p}; }
};
InequalityReport smoothness_report(const HypercubeFunction& h, const SmoothnessKind& kind);

enum class CotypeVariant { ThreeLetter, Rademacher };
InequalityReport cotype_report(const GridFunction& f, double s, CotypeVariant variant,
                               const SamplePlan& plan);

InequalityReport convolution_probe(const GridFunction& f, double p);
// Minimises the beta bound of convolution_probe over seeded random f : Z_m^n -> [-1,1].
InequalityReport convolution_search(std::int64_t m, int n, double p, int trials,
                                    std::uint64_t seed);

// g(x)_j = exp(pi i x_j / m) on Z_{2m}^n as a 2n-dimensional real vector with the l_2 value norm.
GridFunction exponential_embedding(std::int64_t m, int n);
InequalityReport scaling_witness_report(std::int64_t m, int n, int k, double p,
                                        const SamplePlan& plan);

InequalityReport displacement_report(const GridFunction& f, const Subset& s, std::int64_t radius,
                                     double p);
// sum_x d(f(x+eps_S), f(x))^p  vs  |S|^{p-1} sum_{j in S} sum_x d(f(x+e_j), f(x))^p
InequalityReport set_gradient_report(const GridFunction& f, const Subset& s,
                                     std::span<const int> eps, double p);
// sum_{eps,x} d(f(x), f(x+2 eps_S))^p  vs  2^p sum_{eps,x} d(f(x), f(x+eps))^p
InequalityReport doubled_shift_report(const GridFunction& f, const Subset& s, double p);

// Seeded random table with entries uniform in [-1,1].
GridFunction random_grid_function(std::int64_t m, int n, int d, double p, std::uint64_t seed,
                                  std::string_view purpose = "random-grid-function");
HypercubeFunction random_hypercube_function(int n, int d, double p, std::uint64_t seed);

} // namespace xplab
