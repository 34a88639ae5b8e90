#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace temple {

// Invariant-coordinate or conserved-coordinate vector. Systems here are
// small (n = 2..4), so a plain vector keeps the interfaces simple.
using WVec = std::vector<double>;

// Axis-aligned invariant box: w_i in [lo[i], hi[i]].
struct Box {
    WVec lo;
    WVec hi;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const WVec& w, double tol = 0.0) const {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (w[i] < lo[i] - tol || w[i] > hi[i] + tol) return false;
        }
        return true;
    }
};

// Dyadic value grid: admissible invariant values are integer multiples of
// 2^-nu. Multiples of the spacing are exactly representable in double, so
// grid states can be compared with ==.
struct GridLevel {
    int nu = 1;

    double spacing() const { return std::ldexp(1.0, -nu); }

    // Nearest grid value with the floor-on-ties rule: a value exactly
    // halfway between two grid points takes the lower one.
    double snap(double v) const {
        const double q = spacing();
        const double f = std::floor(v / q) * q;
        return (v <= f + q / 2) ? f : f + q;
    }

    // Snap into the grid restricted to [lo, hi].
    double snap_clamped(double v, double lo, double hi) const {
        const double q = spacing();
        double s = snap(v);
        const double lo_grid = std::ceil(lo / q) * q;
        const double hi_grid = std::floor(hi / q) * q;
        if (s < lo_grid) s = lo_grid;
        if (s > hi_grid) s = hi_grid;
        return s;
    }

    bool on_grid(double v, double tol = 0.0) const {
        const double q = spacing();
        const double r = std::round(v / q);
        return std::abs(v - r * q) <= tol;
    }

    // Signed number of quanta between two grid values.
    long long quanta_between(double from, double to) const {
        return std::llround((to - from) / spacing());
    }
};

}  // namespace temple
