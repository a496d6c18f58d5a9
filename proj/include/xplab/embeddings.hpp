#pragma once

#include "xplab/lattice.hpp"
#include "xplab/report.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace xplab {

using Point = std::vector<double>;
using PointList = std::vector<Point>;

struct EmbeddingResult {
    PointList source;
    PointList image;
    double source_p = 2.0;
    double image_p = 2.0;
    double expansion = 0.0;   // max image/source distance ratio
    double contraction = 0.0; // min ratio (the scale witness s)
    double distortion = 1.0;
    bool infinite_expansion = false; // coincident sources with distinct images
    std::uint64_t pairs = 0;
};

double lp_distance(std::span<const double> a, std::span<const double> b, double p);

// (sqrt(n) x, n^{1/q} x); the target norm is rosenthal_norm.
Point rosenthal_embed(std::span<const double> x, double q);
// (||u||_p^p + ||v||_2^p)^{1/p} for an image (u, v) of length 2n
double rosenthal_norm(std::span<const double> image, double p);
// n^{p/2} s^{1-p/q} + n^{p/q} s^{p/2-p/q}: p-th power of the image norm of a flat unit vector on s coordinates
double rosenthal_objective(double n, double s, double q, double p);

struct RosenthalDistortion {
    double distortion = 1.0;
    std::int64_t s_star = 1; // support size minimising the objective
    std::int64_t s_max = 1;  // support size maximising it
    double exponent = 0.0;   // (p-q)(q-2)/(q^2(p-2))
    double asymptotic = 1.0; // n^exponent
};

RosenthalDistortion rosenthal_distortion(std::int64_t n, double q, double p);

using Metric = std::function<double(const Point&, const Point&)>;

EmbeddingResult distortion(const PointList& source, double q, const PointList& image, double p);
EmbeddingResult distortion(const PointList& source, const Metric& source_metric,
                           const PointList& image, const Metric& image_metric);

// Realises the (2/q)-snowflake of a Euclidean point list in l_2^N by double centering.
PointList schoenberg_embed(const PointList& points, double q);

// h_m^n(x) = (a_m(x_1), b_m(x_1), ..., a_m(x_n), b_m(x_n))
std::vector<std::int64_t> grid_round_map(std::span<const std::int64_t> x, std::int64_t m);

double psi(double p, double q, double t);
double theta(double p, double q);

struct GridBounds {
    double exponent = 0.0;      // (p-q)(q-2)/(q^2(p-2))
    double lower_shape = 0.0;   // min{m^{q(p-2)/(q(p-2)+p-q)}, n}^exponent
    double upper_shape = 0.0;   // min{n^exponent, m^{1-2/q}}
    double transition = 0.0;    // n^{(p-q)/(q(p-2))}
    double theta = 0.0;
    double theta_lower = 0.0;   // q/p
    double theta_upper = 0.0;   // 1 - (p-q)(q-2)/(2p^3)
    double psi_at_theta = 0.0;
};

GridBounds grid_bounds(double m, double n, double q, double p);

// {0..m}^n in row-major order
PointList integer_grid(int m, int n);

enum class GridEmbedding { Rosenthal, Schoenberg };

EmbeddingResult composite_grid_distortion(int m, int n, double q, double p, GridEmbedding which,
                                          std::uint64_t max_points = 4096);

Json to_json(const EmbeddingResult& r);
std::string points_to_csv(const PointList& pts);
PointList points_from_csv(const std::string& text);

} // namespace xplab
