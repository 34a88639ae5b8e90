#include "temple/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "temple/errors.hpp"

namespace temple {

namespace {

std::string format_w(const WVec& w) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ", ";
        os << w[i];
    }
    os << ")";
    return os.str();
}

// Tensor grid over the invariant box, `res` samples per axis.
std::vector<WVec> sample_box(const Box& box, int res) {
    const int n = box.dim();
    std::vector<WVec> out;
    std::vector<int> idx(n, 0);
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (int i = 0; i < n; ++i) t *= static_cast<std::size_t>(res);
        return t;
    }();
    out.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        WVec w(n);
        for (int i = 0; i < n; ++i) {
            const double s = static_cast<double>(idx[i]) / (res - 1);
            w[i] = box.lo[i] + s * (box.hi[i] - box.lo[i]);
        }
        out.push_back(std::move(w));
        for (int i = 0; i < n; ++i) {
            if (++idx[i] < res) break;
            idx[i] = 0;
        }
    }
    return out;
}

}  // namespace

SystemSpec make_diagonal_affine(const WVec& c0, const WVec& c1, int p,
                                const Box& gamma, std::string name) {
    SystemSpec sys;
    sys.n = static_cast<int>(c0.size());
    sys.p = p;
    sys.gamma = gamma;
    sys.name = std::move(name);
    sys.to_w = [](const WVec& u) { return u; };
    sys.from_w = [](const WVec& w) { return w; };
    sys.eigenvalue = [c0, c1](int i, const WVec& w) {
        return c0[i] + c1[i] * w[i];
    };
    sys.flux = [c0, c1](const WVec& u) {
        WVec f(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            f[i] = c0[i] * u[i] + c1[i] * u[i] * u[i] / 2;
        }
        return f;
    };
    return sys;
}

SystemSpec make_diag2() {
    return make_diagonal_affine({-1.0, 1.0}, {0.25, 0.25}, 1,
                                Box{{-1.0, -1.0}, {1.0, 1.0}}, "diag2");
}

ValidationReport validate_system(const SystemSpec& sys, int grid_resolution) {
    if (grid_resolution < 2) {
        throw Error(ErrorCode::BadInput, "grid_resolution must be >= 2");
    }
    for (int i = 0; i < sys.n; ++i) {
        if (!(sys.gamma.lo[i] < sys.gamma.hi[i])) {
            std::ostringstream os;
            os << "invariant box degenerate on axis " << i + 1 << ": ["
               << sys.gamma.lo[i] << ", " << sys.gamma.hi[i] << "]";
            throw Error(ErrorCode::InvalidDomain, os.str());
        }
    }

    ValidationReport report;
    const auto samples = sample_box(sys.gamma, grid_resolution);

    // Per-family speed ranges over the sample grid.
    std::vector<double> lam_lo(sys.n, std::numeric_limits<double>::infinity());
    std::vector<double> lam_hi(sys.n, -std::numeric_limits<double>::infinity());
    std::vector<WVec> lam_lo_w(sys.n), lam_hi_w(sys.n);
    for (const auto& w : samples) {
        for (int i = 0; i < sys.n; ++i) {
            const double l = sys.eigenvalue(i, w);
            if (l < lam_lo[i]) { lam_lo[i] = l; lam_lo_w[i] = w; }
            if (l > lam_hi[i]) { lam_hi[i] = l; lam_hi_w[i] = w; }
        }
    }

    {  // SH1: sup lambda_i < inf lambda_{i+1} across all of Gamma
        HypothesisCheck c{"strict-hyperbolicity", true, ""};
        for (int i = 0; i + 1 < sys.n; ++i) {
            if (!(lam_hi[i] < lam_lo[i + 1])) {
                c.pass = false;
                std::ostringstream os;
                os << "lambda_" << i + 1 << format_w(lam_hi_w[i]) << " = "
                   << lam_hi[i] << " >= lambda_" << i + 2
                   << format_w(lam_lo_w[i + 1]) << " = " << lam_lo[i + 1];
                c.detail = os.str();
                break;
            }
        }
        report.checks.push_back(c);
    }

    {  // speed splitting: lambda_p < 0 < lambda_{p+1}
        HypothesisCheck c{"speed-splitting", true, ""};
        for (int i = 0; i < sys.n && c.pass; ++i) {
            const bool want_negative = sys.negative_family(i);
            const double bad = want_negative ? lam_hi[i] : -lam_lo[i];
            if (bad >= 0) {
                c.pass = false;
                std::ostringstream os;
                os << "lambda_" << i + 1 << " has sign violation at "
                   << format_w(want_negative ? lam_hi_w[i] : lam_lo_w[i])
                   << " (value "
                   << (want_negative ? lam_hi[i] : lam_lo[i]) << ")";
                c.detail = os.str();
            }
        }
        report.checks.push_back(c);
    }

    {  // genuine nonlinearity: d lambda_i / d w_i > 0 (finite differences)
        HypothesisCheck c{"genuine-nonlinearity", true, ""};
        for (const auto& w : samples) {
            for (int i = 0; i < sys.n; ++i) {
                const double span = sys.gamma.hi[i] - sys.gamma.lo[i];
                const double h = span / (4.0 * (grid_resolution - 1));
                WVec wp = w, wm = w;
                wp[i] = std::min(w[i] + h, sys.gamma.hi[i]);
                wm[i] = std::max(w[i] - h, sys.gamma.lo[i]);
                const double d =
                    (sys.eigenvalue(i, wp) - sys.eigenvalue(i, wm)) /
                    (wp[i] - wm[i]);
                if (!(d > 0)) {
                    c.pass = false;
                    std::ostringstream os;
                    os << "d lambda_" << i + 1 << " / d w_" << i + 1 << " = "
                       << d << " at " << format_w(w);
                    c.detail = os.str();
                    break;
                }
            }
            if (!c.pass) break;
        }
        report.checks.push_back(c);
    }

    {  // chart round trip from_w(to_w(u)) = u on sampled u in Gamma
        HypothesisCheck c{"chart-round-trip", true, ""};
        for (const auto& w : samples) {
            const WVec u = sys.from_w(w);
            const WVec w2 = sys.to_w(u);
            for (int i = 0; i < sys.n; ++i) {
                if (std::abs(w2[i] - w[i]) > 1e-12) {
                    c.pass = false;
                    std::ostringstream os;
                    os << "round trip error " << std::abs(w2[i] - w[i])
                       << " at w = " << format_w(w);
                    c.detail = os.str();
                    break;
                }
            }
            if (!c.pass) break;
        }
        report.checks.push_back(c);
    }

    double lmin = std::numeric_limits<double>::infinity();
    double lmax = 0;
    for (int i = 0; i < sys.n; ++i) {
        lmin = std::min({lmin, std::abs(lam_lo[i]), std::abs(lam_hi[i])});
        lmax = std::max({lmax, std::abs(lam_lo[i]), std::abs(lam_hi[i])});
    }
    {
        HypothesisCheck c{"speed-bounds", lmin > 0, ""};
        if (!c.pass) c.detail = "minimum characteristic speed is zero";
        report.checks.push_back(c);
    }

    report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const HypothesisCheck& c) { return c.pass; });
    if (report.pass) report.bounds = SpeedBounds{lmin, lmax};
    return report;
}

double rh_speed(const SystemSpec& sys, int family0, const WVec& w_left,
                const WVec& w_right) {
    int differing = -1;
    for (int i = 0; i < sys.n; ++i) {
        if (w_left[i] != w_right[i]) {
            if (differing >= 0) {
                throw Error(ErrorCode::NotElementaryWave,
                            "states differ in more than one invariant");
            }
            differing = i;
        }
    }
    if (differing < 0) {
        throw Error(ErrorCode::ZeroJump, "coincident Riemann states");
    }
    if (differing != family0) {
        std::ostringstream os;
        os << "jump is in invariant " << differing + 1 << ", not "
           << family0 + 1;
        throw Error(ErrorCode::NotElementaryWave, os.str());
    }

    const WVec ul = sys.from_w(w_left);
    const WVec ur = sys.from_w(w_right);
    const WVec fl = sys.flux(ul);
    const WVec fr = sys.flux(ur);

    // Largest-denominator conserved component for a well-conditioned ratio.
    int k = 0;
    double best = 0;
    for (int i = 0; i < sys.n; ++i) {
        const double d = std::abs(ur[i] - ul[i]);
        if (d > best) { best = d; k = i; }
    }
    return (fr[k] - fl[k]) / (ur[k] - ul[k]);
}

}  // namespace temple
