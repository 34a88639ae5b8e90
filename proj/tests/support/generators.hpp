#pragma once

// Deterministic scenario generators shared by the unit and acceptance
// suites. The raw-bits uniform keeps streams identical across standard
// libraries.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "temple/profile.hpp"
#include "temple/system.hpp"
#include "temple/tracking.hpp"

namespace testgen {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
    }
};

inline temple::WVec grid_state(Rng& rng, const temple::SystemSpec& sys,
                               temple::GridLevel grid) {
    const double q = grid.spacing();
    temple::WVec w(static_cast<std::size_t>(sys.n));
    for (int i = 0; i < sys.n; ++i) {
        const long long lo = static_cast<long long>(std::ceil(sys.gamma.lo[i] / q));
        const long long hi = static_cast<long long>(std::floor(sys.gamma.hi[i] / q));
        const long long pick =
            lo + static_cast<long long>(rng.uniform() *
                                        static_cast<double>(hi - lo + 1)) %
                     (hi - lo + 1);
        w[static_cast<std::size_t>(i)] = static_cast<double>(pick) * q;
    }
    return w;
}

inline std::vector<double> sorted_positions(Rng& rng, double a, double b,
                                            int count, double min_gap) {
    std::vector<double> xs;
    for (int k = 0; k < count; ++k) xs.push_back(rng.range(a, b));
    std::sort(xs.begin(), xs.end());
    std::vector<double> kept;
    double prev = a;
    for (double x : xs) {
        if (x - prev >= min_gap && b - x >= min_gap) {
            kept.push_back(x);
            prev = x;
        }
    }
    return kept;
}

inline temple::Profile random_grid_profile(Rng& rng,
                                           const temple::SystemSpec& sys,
                                           temple::GridLevel grid, double a,
                                           double b, int max_cells,
                                           double min_gap) {
    auto breaks = sorted_positions(rng, a, b, rng.integer(0, max_cells - 1),
                                   min_gap);
    std::vector<temple::WVec> vals;
    for (std::size_t k = 0; k <= breaks.size(); ++k) {
        vals.push_back(grid_state(rng, sys, grid));
    }
    return temple::Profile(a, b, std::move(breaks), std::move(vals));
}

// Per-invariant non-increasing profile with continuous values: a member of
// the attainability sets for every rho.
inline temple::Profile random_downward_profile(Rng& rng,
                                               const temple::SystemSpec& sys,
                                               double a, double b,
                                               int max_cells) {
    auto breaks = sorted_positions(rng, a, b, rng.integer(0, max_cells - 1),
                                   (b - a) / (4.0 * max_cells));
    const std::size_t cells = breaks.size() + 1;
    std::vector<temple::WVec> vals(cells,
                                   temple::WVec(static_cast<std::size_t>(sys.n)));
    for (int i = 0; i < sys.n; ++i) {
        const double span = sys.gamma.hi[i] - sys.gamma.lo[i];
        double v = sys.gamma.hi[i] - rng.range(0.0, 0.2 * span);
        for (std::size_t k = 0; k < cells; ++k) {
            vals[k][static_cast<std::size_t>(i)] = v;
            v = std::max(sys.gamma.lo[i], v - rng.range(0.0, 0.35 * span));
        }
    }
    return temple::Profile(a, b, std::move(breaks), std::move(vals));
}

inline temple::BoundaryControl random_control(Rng& rng,
                                              const temple::SystemSpec& sys,
                                              temple::GridLevel grid,
                                              double tau, int max_jumps,
                                              double min_gap) {
    temple::BoundaryControl c =
        temple::BoundaryControl::constant(grid_state(rng, sys, grid));
    auto times = sorted_positions(rng, 0.0, 0.9 * tau,
                                  rng.integer(0, max_jumps), min_gap);
    for (double t : times) {
        if (t <= 0) continue;
        c.append(t, grid_state(rng, sys, grid));
    }
    return c;
}

// Small scenario: few cells, jumps of at most two quanta per invariant, so
// the seeded field carries only a handful of fronts.
inline temple::Profile small_scenario_profile(Rng& rng,
                                              const temple::SystemSpec& sys,
                                              temple::GridLevel grid, double a,
                                              double b) {
    const double q = grid.spacing();
    auto breaks = sorted_positions(rng, a, b, rng.integer(1, 3),
                                   (b - a) / 16.0);
    std::vector<temple::WVec> vals;
    temple::WVec w = grid_state(rng, sys, grid);
    for (int i = 0; i < sys.n; ++i) {
        w[static_cast<std::size_t>(i)] =
            std::clamp(w[static_cast<std::size_t>(i)], sys.gamma.lo[i] + 4 * q,
                       sys.gamma.hi[i] - 4 * q);
    }
    vals.push_back(w);
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        temple::WVec next = vals.back();
        const int comp = rng.integer(0, sys.n - 1);
        const int quanta = rng.integer(-2, 2);
        next[static_cast<std::size_t>(comp)] += quanta * q;
        next[static_cast<std::size_t>(comp)] =
            std::clamp(next[static_cast<std::size_t>(comp)],
                       sys.gamma.lo[comp], sys.gamma.hi[comp]);
        vals.push_back(next);
    }
    return temple::Profile(a, b, std::move(breaks), std::move(vals));
}

// Exact integral of one invariant over [a,b].
inline double integral(const temple::Profile& p, int comp) {
    double total = 0;
    double x = p.a();
    for (std::size_t k = 0; k < p.cell_count(); ++k) {
        const double next =
            (k < p.breakpoints().size()) ? p.breakpoints()[k] : p.b();
        total += p.values()[k][static_cast<std::size_t>(comp)] * (next - x);
        x = next;
    }
    return total;
}

}  // namespace testgen
