#pragma once

#include "xplab/inequalities.hpp"
#include "xplab/lattice.hpp"
#include "xplab/report.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace xplab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Spectrum {
    Vector values;  // descending
    Matrix vectors; // columns are orthonormal eigenvectors
    int sweeps = 0;
};

// Cyclic Jacobi on the upper triangle of a; stops when the off-diagonal Frobenius norm is at most
// 1e-13 * ||a||_F. Throws NumericalError after 100 sweeps.
Spectrum eigen_sym(const Matrix& a);

class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& a); // the upper triangle is mirrored

    static SymMatrix identity(int d);
    static SymMatrix diagonal(const Vector& diag);

    int order() const { return static_cast<int>(a_.rows()); }
    const Matrix& matrix() const { return a_; }
    const Vector& eigenvalues() const { return spec_.values; }
    const Matrix& eigenvectors() const { return spec_.vectors; }
    double max_eigenvalue() const;
    double min_eigenvalue() const;
    bool psd() const { return psd_; }
    double trace() const { return a_.trace(); }

    // Spectral power. q = 0 gives the identity. Non-integer q clips eigenvalues in
    // [-1e-12 lambda_max, 0) to zero and rejects anything more negative.
    Matrix power(double q) const;

    SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(Matrix(a_ + o.a_)); }

private:
    Matrix a_;
    Spectrum spec_;
    bool psd_ = true;
};

double psd_tolerance(const Vector& eigenvalues);

double schatten_norm(const Matrix& a, double p);
double schatten_norm(const SymMatrix& a, double p);
double trace_power(const SymMatrix& a, double q);
double trace_mixed(const SymMatrix& a, const SymMatrix& b, double q); // tr(A^q B)

struct TraceKind {
    enum class Tag { MainQge1, Qlt1, LambdaFamily, Holder, LiebThirring, OpConvex };
    Tag tag = Tag::MainQge1;
    double r = 1.0;           // Lieb-Thirring exponent
    double theta = 1.0;       // operator-convexity exponent
    std::optional<double> s;  // operator-convexity weight; default is the trace-level optimizer
    std::vector<double> a;    // Holder exponents a_0..a_{k-1}
    std::vector<double> b;    // Holder exponents b_1..b_k

    static TraceKind of(Tag t)
    {
        TraceKind k;
        k.tag = t;
        return k;
    }
    static TraceKind main_qge1() { return of(Tag::MainQge1); }
    static TraceKind qlt1() { return of(Tag::Qlt1); }
    static TraceKind lambda_family() { return of(Tag::LambdaFamily); }
    static TraceKind holder(std::vector<double> a, std::vector<double> b)
    {
        TraceKind k = of(Tag::Holder);
        k.a = std::move(a);
        k.b = std::move(b);
        return k;
    }
    static TraceKind lieb_thirring(double r)
    {
        TraceKind k = of(Tag::LiebThirring);
        k.r = r;
        return k;
    }
    static TraceKind op_convex(double theta, std::optional<double> s = std::nullopt)
    {
        TraceKind k = of(Tag::OpConvex);
        k.theta = theta;
        k.s = s;
        return k;
    }
};

std::string to_string(TraceKind::Tag tag);

// q is the main exponent; Lieb-Thirring and OpConvex ignore it (they use r and theta).
InequalityReport trace_inequality_report(const SymMatrix& a, const SymMatrix& b, double q,
                                         const TraceKind& kind);

struct Counterexample {
    Matrix a, b;
    Vector w;
    double form = 0.0;           // <(K(A^q + B^q) - (A+B)^q) w, w>
    double min_eigenvalue = 0.0; // of K(A^q + B^q) - (A+B)^q
    double closed_form = 0.0;    // -s^6 - 3 s^8 + (K-1) s^10 (meaningful at q = 4)
};

Counterexample psd_counterexample(double s, double q, double k);

// G with standard normal entries, A = G G^T / d; a nonempty profile replaces the spectrum.
SymMatrix random_psd(int d, CounterRng& rng, const std::vector<double>& profile = {});
Matrix random_gaussian(int rows, int cols, CounterRng& rng);

InequalityReport schatten_xp_report(const std::vector<Matrix>& a, int k, double p,
                                    const SamplePlan& plan);
InequalityReport psd_xp_report(const std::vector<SymMatrix>& b, int k, double q,
                               const std::optional<SamplePlan>& plan = std::nullopt);
InequalityReport khinchine_report(const std::vector<Matrix>& a, double p, const SamplePlan& plan);

// Dense CSV (one row per line) and JSON list-of-rows.
Matrix matrix_from_csv(const std::string& text);
std::string matrix_to_csv(const Matrix& a);
Json to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

} // namespace xplab
