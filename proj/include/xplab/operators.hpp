#pragma once

#include "xplab/lattice.hpp"

#include <cstdint>
#include <vector>

namespace xplab {

// Box supports on Z_M^n, M divisible by 4, R odd with R <= M/2. Offsets are symmetric.
struct BoxAverageKind {
    enum class Tag { DS, A, Bj, DeltaT };
    Tag tag = Tag::A;
    Subset set; // S for DS, T for DeltaT
    int j = 0;  // Bj
    std::int64_t radius = 1;

    static BoxAverageKind ds(Subset s, std::int64_t r) { return {Tag::DS, std::move(s), 0, r}; }
    static BoxAverageKind a(std::int64_t r) { return {Tag::A, {}, 0, r}; }
    static BoxAverageKind bj(int j, std::int64_t r) { return {Tag::Bj, {}, j, r}; }
    static BoxAverageKind delta_t(Subset t, std::int64_t r) { return {Tag::DeltaT, std::move(t), 0, r}; }
};

std::vector<Coords> box_support(int n, const BoxAverageKind& kind);
GridFunction box_average(const GridFunction& f, const BoxAverageKind& kind);

struct EdgeAverageKind {
    enum class Tag { Ej, CalEj, CalE, Tj };
    Tag tag = Tag::CalE;
    int j = 0;

    static EdgeAverageKind e(int j) { return {Tag::Ej, j}; }
    static EdgeAverageKind cal_e(int j) { return {Tag::CalEj, j}; }
    static EdgeAverageKind cal_e_all() { return {Tag::CalE, 0}; }
    static EdgeAverageKind t(int j) { return {Tag::Tj, j}; }
};

// Each operator is an average over offsets; the offset multiset (with multiplicity) is returned.
std::vector<Coords> edge_support(int n, const EdgeAverageKind& kind);
GridFunction edge_average(const GridFunction& f, const EdgeAverageKind& kind);

// Averages f over x + offsets (offsets with multiplicity); f must be tabulable.
GridFunction average_over(const GridFunction& f, const std::vector<Coords>& offsets);

// h : {-1,1}^n -> R^d. Index bit i set means eps_i = -1 (so eps = +1...+1 is index 0).
struct HypercubeFunction {
    int n = 0;
    int d = 1;
    double value_p = 2.0;
    std::vector<double> values; // 2^n * d

    HypercubeFunction() = default;
    HypercubeFunction(int n_, int d_, double p_, std::vector<double> v);

    std::uint64_t size() const { return std::uint64_t(1) << n; }
    const double* at(std::uint64_t idx) const { return values.data() + idx * d; }
    double* at(std::uint64_t idx) { return values.data() + idx * d; }
    static int sign(std::uint64_t idx, int i) { return (idx >> i) & 1 ? -1 : 1; }
    std::uint64_t flip(std::uint64_t idx, int j) const { return idx ^ (std::uint64_t(1) << j); }
    std::uint64_t antipode(std::uint64_t idx) const { return idx ^ (size() - 1); }
};

HypercubeFunction rademacher_projection(const HypercubeFunction& h);

// W_y(x) = exp(pi i <x,y> / (4m)) on Z_{8m}^n, stored as (re, im) with value_p = 2.
GridFunction character(const LatticePoint& y);

// Max over eps of || Rad(h^x)(eps) - (1/2) sum_j eps_j [T_j f(x+2e_j) - T_j f(x-2e_j)] ||,
// h^x(eps) = f(x+2eps) - f(x); modulus must be divisible by 8.
double rad_identity_residual(const GridFunction& f, const LatticePoint& x);

} // namespace xplab
