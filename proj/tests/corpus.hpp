#pragma once

// Frozen seeded instances whose implied constants are pinned in data/regression_corpus.json.

#include "xplab/inequalities.hpp"
#include "xplab/schatten.hpp"

#include <string>
#include <utility>
#include <vector>

namespace corpus {

using Entry = std::pair<std::string, xplab::InequalityReport>;

inline std::vector<Entry> build()
{
    using namespace xplab;
    std::vector<Entry> out;
    const auto name = [](std::string base, std::initializer_list<double> xs) {
        for (double x : xs)
            base += "_" + format_double(x);
        return base;
    };

    struct Grid {
        std::int64_t m;
        int n, k;
        double p;
    };
    std::uint64_t seed = 100;
    for (const Grid g : {Grid{1, 2, 1, 2.0}, Grid{1, 3, 2, 3.0}, Grid{2, 2, 1, 4.0}, Grid{1, 4, 2, 2.0}})
        for (int rep = 0; rep < 2; ++rep) {
            const auto f = random_grid_function(4 * g.m, g.n, 1, g.p, seed++, "corpus:metric");
            out.emplace_back(name("metric_xp", {double(g.m), double(g.n), double(g.k), g.p, double(rep)}),
                             metric_xp_report(f, g.k, exhaustive_plan()));
        }
    for (const Grid g : {Grid{1, 2, 1, 2.0}, Grid{1, 3, 1, 3.0}, Grid{1, 2, 2, 4.0}})
        for (int rep = 0; rep < 2; ++rep) {
            const auto f = random_grid_function(8 * g.m, g.n, 1, g.p, seed++, "corpus:reverse");
            out.emplace_back(name("reverse_metric_xp", {double(g.m), double(g.n), double(g.k), g.p, double(rep)}),
                             reverse_metric_xp_report(f, g.k, exhaustive_plan()));
        }
    for (double p : {1.0, 2.0, 3.0}) {
        const auto f2 = random_grid_function(8, 2, 1, p, seed++, "corpus:displacement");
        out.emplace_back(name("displacement", {8, 2, 1, p}), displacement_report(f2, {0, 1}, 1, p));
        out.emplace_back(name("displacement", {8, 2, 3, p}), displacement_report(f2, {1}, 3, p));
        const auto f3 = random_grid_function(4, 3, 1, p, seed++, "corpus:displacement");
        out.emplace_back(name("displacement", {4, 3, 1, p}), displacement_report(f3, {0, 2}, 1, p));
    }
    for (double p : {2.0, 3.0})
        for (auto [m, n] : {std::pair{6, 2}, std::pair{5, 2}, std::pair{3, 3}, std::pair{6, 1}}) {
            const auto f = random_grid_function(m, n, 1, p, seed++, "corpus:convolution");
            out.emplace_back(name("convolution_probe", {double(m), double(n), p}), convolution_probe(f, p));
        }
    for (double q : {1.5, 2.0, 3.0})
        for (int k : {1, 2, 3}) {
            auto rng = make_stream(seed++, "corpus:psd");
            std::vector<SymMatrix> b;
            for (int j = 0; j < 6; ++j)
                b.push_back(random_psd(3, rng));
            out.emplace_back(name("psd_xp", {q, double(k)}), psd_xp_report(b, k, q));
        }
    return out;
}

} // namespace corpus
