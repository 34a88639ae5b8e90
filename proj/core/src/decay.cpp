#include "temple/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "temple/errors.hpp"

namespace temple {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Partition of [a,b] induced by one invariant together with the cell
// values: points[m] .. points[m+1] carries value vals[m].
struct InvariantPartition {
    std::vector<double> points;
    std::vector<double> vals;
};

InvariantPartition invariant_partition(const Profile& p, int i) {
    InvariantPartition ip;
    ip.points.push_back(p.a());
    ip.vals.push_back(p.values()[0][i]);
    for (std::size_t k = 0; k < p.breakpoints().size(); ++k) {
        const double v = p.values()[k + 1][i];
        if (v != ip.vals.back()) {
            ip.points.push_back(p.breakpoints()[k]);
            ip.vals.push_back(v);
        }
    }
    ip.points.push_back(p.b());
    return ip;
}

}  // namespace

KRhoReport check_k_rho(const Profile& profile, double rho, int p, KMode mode) {
    if (!(rho > 0)) {
        throw Error(ErrorCode::BadInput, "rho must be positive");
    }
    const double a = profile.a();
    const double b = profile.b();
    const double slack = (mode == KMode::Grid) ? 5.0 : 1.0;

    KRhoReport report;
    report.min_rho = 0;

    for (int i = 0; i < profile.dim(); ++i) {
        const auto ip = invariant_partition(profile, i);
        const std::size_t M = ip.vals.size();  // number of cells
        const bool positive_family = (i >= p);

        auto consider = [&](double x, double y, double delta) {
            if (delta <= 0) return;
            const double geom = positive_family ? (x - a) : (b - y);
            if (geom <= 0) return;  // bound is vacuous at the entry boundary
            const double need = delta * geom / (slack * (y - x));
            if (need > report.min_rho) {
                report.min_rho = need;
                report.worst = KRhoWitness{i, x, y, delta / (y - x),
                                           slack * rho / geom};
            }
        };

        if (mode == KMode::Continuum) {
            // Any upward interior jump makes the difference quotient blow
            // up between points straddling it.
            for (std::size_t m = 0; m + 1 < M; ++m) {
                if (ip.vals[m + 1] > ip.vals[m]) {
                    report.min_rho = kInf;
                    report.worst =
                        KRhoWitness{i, ip.points[m + 1], ip.points[m + 1],
                                    kInf, 0};
                }
            }
            if (report.min_rho == kInf) continue;
        }

        if (mode == KMode::Grid) {
            // Right-continuous values at the partition points themselves;
            // the value at b is the last cell's.
            for (std::size_t h = 0; h + 1 < ip.points.size(); ++h) {
                for (std::size_t k = h + 1; k < ip.points.size(); ++k) {
                    const double vh = ip.vals[std::min(h, M - 1)];
                    const double vk = ip.vals[std::min(k, M - 1)];
                    consider(ip.points[h], ip.points[k], vk - vh);
                }
            }
        } else {
            // One-sided limits: x approaches the partition point from the
            // left cell, y from the right cell. Pairs of distinct interior
            // partition points.
            for (std::size_t h = 1; h + 1 < ip.points.size(); ++h) {
                for (std::size_t k = h + 1; k + 1 < ip.points.size(); ++k) {
                    consider(ip.points[h], ip.points[k],
                             ip.vals[k] - ip.vals[h - 1]);
                }
            }
        }
    }

    report.member = (report.min_rho <= rho);
    return report;
}

double rho_for_time(double tau_bar, double C, double a, double b) {
    if (!(tau_bar > 0)) {
        throw Error(ErrorCode::BadInput, "tau_bar must be positive");
    }
    const double L = b - a;
    return C * L * (L + tau_bar) / tau_bar;
}

OleinikReport oleinik_report(const Trajectory& traj, const SystemSpec& sys,
                             const DecayConstants& constants, GridLevel grid,
                             int n_nu, int probe_count) {
    const double q = grid.spacing();
    const double C = constants.oleinik_C;

    OleinikReport report;
    report.pass = true;
    report.required_C = 0;
    report.worst_margin = kInf;
    report.slack = n_nu * q;
    const double slack_time = std::max(n_nu, 1) * q;

    double a = 0, b = 1;
    if (!traj.snapshots.empty()) {
        a = traj.snapshots.front().a();
        b = traj.snapshots.front().b();
    }

    auto consider = [&](int family, double t, double x, double y,
                        double increment, double beta, double slack,
                        bool time_probe) {
        if (increment <= 0 || beta <= 0) return;
        const double bound = C * beta + slack;
        const double margin = bound - increment;
        if (margin < report.worst_margin) {
            report.worst_margin = margin;
            report.worst =
                OleinikPairWitness{family, t, x, y, increment, bound,
                                   time_probe};
        }
        if (margin < 0) report.pass = false;
        const double need = (increment - slack) / beta;
        if (need > report.required_C) report.required_C = need;
    };

    // Space pairs at every positive snapshot time.
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const double t = traj.snapshot_times[s];
        if (!(t > 0)) continue;  // bound degenerates at t = 0
        const Profile& prof = traj.snapshots[s];
        for (int i = 0; i < sys.n; ++i) {
            const auto ip = invariant_partition(prof, i);
            const bool positive_family = (i >= sys.p);
            for (std::size_t h = 1; h + 1 < ip.points.size(); ++h) {
                for (std::size_t k = h + 1; k + 1 < ip.points.size(); ++k) {
                    const double x = ip.points[h];
                    const double y = ip.points[k];
                    const double inc = ip.vals[k] - ip.vals[h - 1];
                    const double lg = positive_family
                                          ? std::log((y - a) / (x - a))
                                          : std::log((b - x) / (b - y));
                    consider(i, t, x, y, inc, (y - x) / t + lg,
                             report.slack, false);
                }
            }
        }
    }

    // Time sections along interior probe lines.
    for (int j = 1; j <= probe_count; ++j) {
        const double x = a + j * (b - a) / (probe_count + 1);
        for (std::size_t s1 = 0; s1 < traj.snapshots.size(); ++s1) {
            const double t1 = traj.snapshot_times[s1];
            if (!(t1 > 0)) continue;
            for (std::size_t s2 = s1 + 1; s2 < traj.snapshots.size(); ++s2) {
                const double t2 = traj.snapshot_times[s2];
                if (!(t2 > t1)) continue;
                const WVec& w1 = traj.snapshots[s1].value_at(x);
                const WVec& w2 = traj.snapshots[s2].value_at(x);
                for (int i = 0; i < sys.n; ++i) {
                    const bool positive_family = (i >= sys.p);
                    const double geom = positive_family ? (x - a) : (b - x);
                    const double beta =
                        (t2 - t1) / geom + std::log(t2 / t1);
                    consider(i, t2, t1, t2, w2[i] - w1[i], beta, slack_time,
                             true);
                }
            }
        }
    }

    if (report.worst_margin == kInf) report.worst_margin = 0;
    return report;
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

namespace {

// Self-contained uniform generator so calibration output is reproducible
// across standard libraries.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
    }
};

WVec random_grid_state(Rng& rng, const SystemSpec& sys, GridLevel grid) {
    const double q = grid.spacing();
    WVec w(static_cast<std::size_t>(sys.n));
    for (int i = 0; i < sys.n; ++i) {
        const long long lo =
            static_cast<long long>(std::ceil(sys.gamma.lo[i] / q));
        const long long hi =
            static_cast<long long>(std::floor(sys.gamma.hi[i] / q));
        const long long pick =
            lo + static_cast<long long>(rng.uniform() *
                                        static_cast<double>(hi - lo + 1)) %
                     (hi - lo + 1);
        w[static_cast<std::size_t>(i)] = static_cast<double>(pick) * q;
    }
    return w;
}

Profile random_grid_profile(Rng& rng, const SystemSpec& sys, GridLevel grid,
                            double a, double b, int max_cells) {
    const int cells = 1 + rng.integer(0, max_cells - 1);
    const double min_gap = (b - a) / (4.0 * max_cells);
    std::vector<double> breaks;
    for (int k = 0; k < cells - 1; ++k) {
        breaks.push_back(rng.range(a, b));
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> kept;
    double prev = a;
    for (double x : breaks) {
        if (x - prev >= min_gap && b - x >= min_gap) {
            kept.push_back(x);
            prev = x;
        }
    }
    std::vector<WVec> vals;
    for (std::size_t k = 0; k <= kept.size(); ++k) {
        vals.push_back(random_grid_state(rng, sys, grid));
    }
    return Profile(a, b, std::move(kept), std::move(vals));
}

BoundaryControl random_control(Rng& rng, const SystemSpec& sys, GridLevel grid,
                               double tau, int max_jumps) {
    BoundaryControl c = BoundaryControl::constant(random_grid_state(rng, sys, grid));
    const int jumps = rng.integer(0, max_jumps);
    const double min_gap = tau / (4.0 * std::max(1, max_jumps));
    std::vector<double> times;
    for (int k = 0; k < jumps; ++k) times.push_back(rng.range(0.05 * tau, 0.9 * tau));
    std::sort(times.begin(), times.end());
    double prev = 0;
    for (double t : times) {
        if (t - prev < min_gap) continue;
        c.append(t, random_grid_state(rng, sys, grid));
        prev = t;
    }
    return c;
}

// Sampled extrema of d(lambda_i)/d(w_i) over Gamma.
std::pair<double, double> slope_range(const SystemSpec& sys, int res = 17) {
    double lo = kInf, hi = 0;
    std::vector<int> idx(static_cast<std::size_t>(sys.n), 0);
    std::size_t total = 1;
    for (int i = 0; i < sys.n; ++i) total *= static_cast<std::size_t>(res);
    for (std::size_t s = 0; s < total; ++s) {
        WVec w(static_cast<std::size_t>(sys.n));
        for (int i = 0; i < sys.n; ++i) {
            const double frac =
                static_cast<double>(idx[static_cast<std::size_t>(i)]) / (res - 1);
            w[static_cast<std::size_t>(i)] =
                sys.gamma.lo[i] + frac * (sys.gamma.hi[i] - sys.gamma.lo[i]);
        }
        for (int i = 0; i < sys.n; ++i) {
            const double span = sys.gamma.hi[i] - sys.gamma.lo[i];
            const double h = span / (4.0 * (res - 1));
            WVec wp = w, wm = w;
            wp[static_cast<std::size_t>(i)] =
                std::min(w[static_cast<std::size_t>(i)] + h, sys.gamma.hi[i]);
            wm[static_cast<std::size_t>(i)] =
                std::max(w[static_cast<std::size_t>(i)] - h, sys.gamma.lo[i]);
            const double d = (sys.eigenvalue(i, wp) - sys.eigenvalue(i, wm)) /
                             (wp[static_cast<std::size_t>(i)] -
                              wm[static_cast<std::size_t>(i)]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        for (int i = 0; i < sys.n; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < res) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return {lo, hi};
}

}  // namespace

DecayConstants calibrate_constants(const SystemSpec& sys,
                                   const CalibrationOptions& opts) {
    if (opts.trials <= 0) {
        throw Error(ErrorCode::CalibrationFailure, "no calibration trials");
    }
    auto report = validate_system(sys, 9);
    if (!report.pass || !report.bounds) {
        throw Error(ErrorCode::CalibrationFailure,
                    "system hypotheses fail; cannot calibrate");
    }
    const auto [slope_lo, slope_hi] = slope_range(sys);
    if (!(slope_lo > 0)) {
        throw Error(ErrorCode::CalibrationFailure,
                    "non-positive eigenvalue slope");
    }
    const double C_anchor = 2.0 / slope_lo;
    const double C1_anchor = slope_hi;

    Rng rng(opts.seed);
    const double L = opts.b - opts.a;
    const double crossing = L / report.bounds->lambda_min;

    std::vector<double> per_nu_fit(
        static_cast<std::size_t>(opts.nu_range.second + 1), 0.0);
    double c_fit = 0;
    double c1_fit = 0;

    for (int trial = 0; trial < opts.trials; ++trial) {
        const int nu = rng.integer(opts.nu_range.first, opts.nu_range.second);
        const GridLevel grid{nu};
        const double tau = crossing * rng.range(1.0, 3.0);

        Profile initial = random_grid_profile(rng, sys, grid, opts.a, opts.b,
                                              opts.max_cells);
        BoundaryControl ua =
            random_control(rng, sys, grid, tau, opts.max_control_jumps);
        BoundaryControl ub =
            random_control(rng, sys, grid, tau, opts.max_control_jumps);

        std::vector<double> snaps{0.3 * tau, 0.6 * tau, 0.85 * tau, tau};
        Trajectory traj =
            run_forward(sys, initial, ua, ub, grid, tau, snaps);

        const auto shocks = traj.data_shocks_per_family;
        const int n_nu =
            *std::max_element(shocks.begin(), shocks.end());
        // required_C is independent of the constant handed in.
        auto rep = oleinik_report(traj, sys, DecayConstants{1.0, 1.0, 1.0},
                                  grid, n_nu);
        c_fit = std::max(c_fit, rep.required_C);
        per_nu_fit[static_cast<std::size_t>(nu)] =
            std::max(per_nu_fit[static_cast<std::size_t>(nu)], rep.required_C);
        c1_fit = std::max(c1_fit, traj.max_spread_rate);
    }

    // A fit that keeps growing as the grid refines means the estimates do
    // not hold uniformly in nu.
    const double lo_fit = per_nu_fit[static_cast<std::size_t>(opts.nu_range.first)];
    const double hi_fit = per_nu_fit[static_cast<std::size_t>(opts.nu_range.second)];
    if (hi_fit > 4.0 * std::max(lo_fit, C_anchor)) {
        throw Error(ErrorCode::CalibrationFailure,
                    "required constant grows with grid refinement");
    }

    const double C = std::max(C_anchor, 2.0 * c_fit);
    const double C1 = std::max(C1_anchor, 2.0 * c1_fit);
    return DecayConstants::make(C, C1, report.bounds->lambda_min);
}

}  // namespace temple
