#include "temple/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "temple/errors.hpp"

namespace temple {

Profile::Profile(double a, double b, std::vector<double> breaks,
                 std::vector<WVec> values)
    : a_(a), b_(b) {
    if (!(a < b)) {
        throw Error(ErrorCode::DomainMismatch, "profile interval is empty");
    }
    if (values.size() != breaks.size() + 1) {
        throw Error(ErrorCode::BadInput,
                    "profile needs one value per cell (breaks + 1)");
    }
    double prev = a;
    for (double x : breaks) {
        if (!(x > prev) || !(x < b)) {
            throw Error(ErrorCode::BadInput,
                        "breakpoints must be strictly increasing inside (a,b)");
        }
        prev = x;
    }
    const std::size_t n = values.empty() ? 0 : values[0].size();
    for (const auto& v : values) {
        if (v.size() != n) {
            throw Error(ErrorCode::BadInput, "inconsistent value dimensions");
        }
    }

    // Normalize: drop breakpoints whose two sides agree in every invariant.
    breaks_.reserve(breaks.size());
    values_.reserve(values.size());
    values_.push_back(values[0]);
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        if (values[k + 1] == values_.back()) continue;
        breaks_.push_back(breaks[k]);
        values_.push_back(values[k + 1]);
    }
}

Profile Profile::constant(double a, double b, WVec value) {
    return Profile(a, b, {}, {std::move(value)});
}

const WVec& Profile::value_at(double x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

std::vector<double> Profile::partition(int invariant) const {
    std::vector<double> pts{a_};
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
        if (values_[k][invariant] != values_[k + 1][invariant]) {
            pts.push_back(breaks_[k]);
        }
    }
    pts.push_back(b_);
    return pts;
}

Profile quantize(const Profile& profile, GridLevel grid, const Box& gamma,
                 const QuantizeOptions& opts) {
    const int n = profile.dim();
    const double q = grid.spacing();

    for (const auto& v : profile.values()) {
        if (!gamma.contains(v, 1e-12)) {
            std::ostringstream os;
            os << "profile value outside the invariant box";
            throw Error(ErrorCode::OutOfDomain, os.str());
        }
    }

    // Step 1: round every cell value onto the grid inside Gamma.
    std::vector<WVec> snapped;
    snapped.reserve(profile.cell_count());
    for (const auto& v : profile.values()) {
        WVec s(n);
        for (int i = 0; i < n; ++i) {
            s[i] = grid.snap_clamped(v[i], gamma.lo[i], gamma.hi[i]);
        }
        snapped.push_back(std::move(s));
    }

    // Step 2: split multi-quantum upward steps into unit staircases packed
    // against the jump inside the left cell.
    const double default_width = 0.8 * q * (profile.b() - profile.a());
    const double stair = opts.stair_width.value_or(default_width);

    std::vector<double> out_breaks;
    std::vector<WVec> out_values;
    out_values.push_back(snapped[0]);

    const auto& breaks = profile.breakpoints();
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        const WVec& left = out_values.back();
        const WVec& right = snapped[k + 1];
        const double x = breaks[k];
        const double cell_lo = (k == 0) ? profile.a() : breaks[k - 1];

        long long m = 0;  // largest upward step among the invariants
        for (int i = 0; i < n; ++i) {
            m = std::max(m, grid.quanta_between(left[i], right[i]));
        }
        if (m <= 1) {
            out_breaks.push_back(x);
            out_values.push_back(right);
            continue;
        }

        const double width =
            std::min(stair, (x - cell_lo) / (2.0 * static_cast<double>(m)));
        WVec step = left;
        for (long long l = 1; l < m; ++l) {
            for (int i = 0; i < n; ++i) {
                // Each invariant walks toward its target, upward moves one
                // quantum per stair, downward moves resolved at the jump.
                if (step[i] < right[i]) step[i] += q;
            }
            out_breaks.push_back(x - static_cast<double>(m - l) * width);
            out_values.push_back(step);
        }
        out_breaks.push_back(x);
        out_values.push_back(right);
    }

    return Profile(profile.a(), profile.b(), std::move(out_breaks),
                   std::move(out_values));
}

Profile snap_values(const Profile& profile, GridLevel grid, const Box& gamma) {
    std::vector<WVec> vals;
    vals.reserve(profile.cell_count());
    for (const auto& v : profile.values()) {
        if (!gamma.contains(v, 1e-12)) {
            throw Error(ErrorCode::OutOfDomain,
                        "profile value outside the invariant box");
        }
        WVec s(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            s[i] = grid.snap_clamped(v[i], gamma.lo[i], gamma.hi[i]);
        }
        vals.push_back(std::move(s));
    }
    return Profile(profile.a(), profile.b(), profile.breakpoints(),
                   std::move(vals));
}

bool on_grid(const Profile& profile, GridLevel grid, double tol) {
    for (const auto& v : profile.values()) {
        for (double w : v) {
            if (!grid.on_grid(w, tol)) return false;
        }
    }
    return true;
}

bool profiles_match(const Profile& x, const Profile& y, double pos_tol) {
    if (x.a() != y.a() || x.b() != y.b()) return false;
    if (x.cell_count() != y.cell_count()) return false;
    for (std::size_t k = 0; k < x.breakpoints().size(); ++k) {
        if (std::abs(x.breakpoints()[k] - y.breakpoints()[k]) > pos_tol) {
            return false;
        }
    }
    return x.values() == y.values();
}

double l1_distance(const Profile& p1, const Profile& p2) {
    if (p1.a() != p2.a() || p1.b() != p2.b()) {
        throw Error(ErrorCode::DomainMismatch,
                    "profiles live on different intervals");
    }
    if (p1.dim() != p2.dim()) {
        throw Error(ErrorCode::DomainMismatch, "profile dimensions differ");
    }

    std::vector<double> grid;
    grid.reserve(p1.breakpoints().size() + p2.breakpoints().size() + 2);
    grid.push_back(p1.a());
    std::merge(p1.breakpoints().begin(), p1.breakpoints().end(),
               p2.breakpoints().begin(), p2.breakpoints().end(),
               std::back_inserter(grid));
    grid.push_back(p1.b());

    double total = 0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double len = grid[k + 1] - grid[k];
        if (len <= 0) continue;
        const WVec& v1 = p1.value_at(grid[k]);
        const WVec& v2 = p2.value_at(grid[k]);
        double diff = 0;
        for (int c = 0; c < p1.dim(); ++c) diff += std::abs(v1[c] - v2[c]);
        total += diff * len;
    }
    return total;
}

double total_variation(const Profile& profile, int invariant) {
    double tv = 0;
    for (std::size_t k = 0; k + 1 < profile.cell_count(); ++k) {
        tv += std::abs(profile.values()[k + 1][invariant] -
                       profile.values()[k][invariant]);
    }
    return tv;
}

}  // namespace temple
