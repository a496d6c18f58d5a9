#pragma once

#include "xplab/inequalities.hpp"
#include "xplab/report.hpp"

#include <span>
#include <vector>

namespace xplab {

// (int_0^{2 pi} ||cos(t) u - sin(t) v||_p^p dt)^{1/p} by the periodic trapezoid rule. The node
// count is doubled (up to 2^17) until two successive values agree to 1e-10 relative.
double complexification_norm(std::span<const double> u, std::span<const double> v, double p,
                             int nodes = 512);

// int_0^{2 pi} |cos t|^p dt, adaptive Gauss-Kronrod to 1e-12.
double circular_moment(double p);

// The displayed Gamma-ratio constant 4 sqrt(pi) Gamma(p/2+1/2)/Gamma(p/2+1).
double circular_moment_displayed(double p);

// lhs = quadrature value, rhs = displayed constant; extras.ratio = displayed / quadrature.
InequalityReport circular_moment_report(double p);

// ||(u,v)||^p for l_p^d values: circular_moment(p) * sum_i (u_i^2 + v_i^2)^{p/2}.
double complexified_norm_pow(std::span<const double> u, std::span<const double> v, double p,
                             double moment);

// lhs = sum_delta ||sum_j a_j delta_j z_j||_p^p, rhs = max_j |a_j|^p * sum_delta ||sum_j delta_j z_j||_p^p
InequalityReport contraction_check(const std::vector<double>& a, const VectorList& z, double p,
                                   const SamplePlan& plan);

// Runs the metric-to-linear argument on f_delta(x) = sum_j delta_j exp(pi i x_j/m) (z_j, 0) over
// Z_{2m}^n. lhs = (2/pi)^{2p} gamma * linear lhs, rhs_terms = linear right-hand side, where gamma is
// the best constant of the metric inequality averaged over delta. Intermediate bounds are extras.
InequalityReport bridge_report(const VectorList& z, std::int64_t m, int k, double p,
                               const SamplePlan& plan);

} // namespace xplab
