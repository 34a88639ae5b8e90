#include "temple/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "temple/errors.hpp"
#include "temple/riemann.hpp"

namespace temple {

double horizon(const SpeedBounds& bounds, double a, double b) {
    if (!(b >= a)) {
        throw Error(ErrorCode::BadInput, "interval end precedes start");
    }
    return 4.0 * (b - a) / bounds.lambda_min;
}

namespace {

void require_rarefcond(const Profile& target, GridLevel grid) {
    const double q = grid.spacing();
    const auto& vals = target.values();
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
        for (std::size_t i = 0; i < vals[k].size(); ++i) {
            const double up = vals[k + 1][i] - vals[k][i];
            if (up > q + 1e-12) {
                std::ostringstream os;
                os << "target jumps upward by " << up << " in invariant "
                   << i + 1 << " at x = " << target.breakpoints()[k]
                   << "; quantize the target first";
                throw Error(ErrorCode::NotBackwardSolvable, os.str());
            }
        }
    }
}

}  // namespace

BackwardResult backward_phase(const SystemSpec& sys, const SpeedBounds& bounds,
                              const DecayConstants& constants,
                              const Profile& target_q, double tau,
                              GridLevel grid, const EngineOptions& opts) {
    if (!on_grid(target_q, grid)) {
        throw Error(ErrorCode::GridMismatch, "target is not on the value grid");
    }
    require_rarefcond(target_q, grid);
    {
        auto rep = check_k_rho(target_q, constants.rho_prime, sys.p, KMode::Grid);
        if (!rep.member) {
            std::ostringstream os;
            os << "target violates the grid decay bounds at rho' = "
               << constants.rho_prime << " (needs rho >= " << rep.min_rho
               << ", invariant " << rep.worst.family + 1 << " between x = "
               << rep.worst.x << " and y = " << rep.worst.y << ")";
            throw Error(ErrorCode::NotAttainable, os.str());
        }
    }

    const double a = target_q.a();
    const double b = target_q.b();
    const double T = horizon(bounds, a, b);
    if (!(tau > T)) {
        throw Error(ErrorCode::HorizonTooShort,
                    "final time must exceed the flush horizon");
    }

    // Seed the reversed-time field with the backward Riemann fans of the
    // target's jumps.
    std::vector<Front> fronts;
    for (std::size_t k = 0; k < target_q.breakpoints().size(); ++k) {
        auto fan = solve_backward_riemann(sys, target_q.values()[k],
                                          target_q.values()[k + 1], grid,
                                          target_q.breakpoints()[k]);
        for (auto& f : fan) fronts.push_back(std::move(f));
    }

    WaveEngine eng(sys, grid, a, b, -1.0, opts);
    eng.set_resolver([&sys, grid](const WVec& wl, const WVec& wr, double x0) {
        return solve_backward_riemann(sys, wl, wr, grid, x0);
    });

    struct ExitRecord {
        double clock;
        Side side;
        WVec outer;  // forward-control value from this jump on
    };
    std::vector<ExitRecord> exits;
    eng.set_exit_hook([&exits](double clock, Side side,
                               const std::vector<Front>& group) {
        exits.push_back(ExitRecord{
            clock, side,
            side == Side::Left ? group.front().w_left : group.back().w_right});
    });

    eng.seed(std::move(fronts), target_q.values().front(),
             target_q.values().back());

    const double clock_end = tau - 0.75 * T;
    std::vector<double> diag_clocks;
    for (int j = 0; j <= 4; ++j) diag_clocks.push_back(j * T / 16.0);
    auto rr = eng.run(clock_end, diag_clocks);

    if (!eng.fronts().empty()) {
        throw Error(ErrorCode::HorizonTooShort,
                    "backward fronts failed to clear the domain");
    }

    BackwardResult result;
    result.omega = eng.left_state();

    result.tail_a = BoundaryControl{{0.75 * T}, {result.omega}};
    result.tail_b = BoundaryControl{{0.75 * T}, {result.omega}};
    for (auto it = exits.rbegin(); it != exits.rend(); ++it) {
        auto& ctl = (it->side == Side::Left) ? result.tail_a : result.tail_b;
        ctl.append(tau - it->clock, it->outer);
    }

    // Diagnostics with forward-time labels (ascending).
    result.backward.tau = tau;
    for (auto cit = diag_clocks.rbegin(); cit != diag_clocks.rend(); ++cit) {
        result.backward.snapshot_times.push_back(tau - *cit);
    }
    result.backward.snapshots.assign(rr.profiles.rbegin(), rr.profiles.rend());
    for (auto eit = rr.events.rbegin(); eit != rr.events.rend(); ++eit) {
        Event ev = *eit;
        ev.time = tau - ev.time;
        result.backward.events.push_back(std::move(ev));
    }
    for (const auto& seg : rr.segments) {
        result.backward.segments.push_back(FrontSegment{
            tau - seg.t1, seg.x1, tau - seg.t0, seg.x0, seg.family, seg.kind});
    }
    result.backward.wave_count_ok = rr.wave_count_ok;
    result.backward.tv_ok = true;  // not meaningful under time reversal
    result.backward.data_shocks_per_family.assign(
        static_cast<std::size_t>(sys.n), 0);
    return result;
}

ForwardStaging forward_phase(const SystemSpec& sys, const SpeedBounds& bounds,
                             const Profile& initial_q, const WVec& omega,
                             GridLevel grid, const EngineOptions& opts) {
    if (!on_grid(initial_q, grid)) {
        throw Error(ErrorCode::GridMismatch,
                    "initial data is not on the value grid");
    }
    const double a = initial_q.a();
    const double b = initial_q.b();
    const double T = horizon(bounds, a, b);

    const WVec trace_a = initial_q.values().front();
    const WVec trace_b = initial_q.values().back();

    // Stage 1: frozen controls; every front crosses out within T/4.
    Trajectory flush = run_forward(sys, initial_q, BoundaryControl::constant(trace_a),
                                   BoundaryControl::constant(trace_b), grid,
                                   T / 4.0, {}, opts);
    const Profile& at_quarter = flush.final_profile();
    if (at_quarter.cell_count() != 1) {
        throw std::logic_error("field not constant after the initial flush");
    }
    const WVec omega_prime = at_quarter.values()[0];

    WVec omega_tilde(static_cast<std::size_t>(sys.n));
    for (int i = 0; i < sys.n; ++i) {
        omega_tilde[static_cast<std::size_t>(i)] =
            sys.negative_family(i) ? omega[static_cast<std::size_t>(i)]
                                   : omega_prime[static_cast<std::size_t>(i)];
    }

    ForwardStaging staging;
    staging.omega_prime = omega_prime;
    staging.omega_tilde = omega_tilde;

    staging.control_a = BoundaryControl::constant(trace_a);
    staging.control_a.append(T / 2.0, omega);

    staging.control_b = BoundaryControl::constant(trace_b);
    staging.control_b.append(T / 4.0, omega_tilde);
    staging.control_b.append(0.75 * T, omega);
    return staging;
}

SynthesisPlan synthesize(const SystemSpec& sys, const Profile& initial,
                         const Profile& target, double tau, GridLevel grid,
                         const DecayConstants& constants,
                         const EngineOptions& opts) {
    if (initial.a() != target.a() || initial.b() != target.b()) {
        throw Error(ErrorCode::DomainMismatch,
                    "initial and target intervals differ");
    }
    auto vr = validate_system(sys, 17);
    if (!vr.pass || !vr.bounds) {
        throw Error(ErrorCode::BadInput, "system hypotheses fail");
    }
    const double a = initial.a();
    const double b = initial.b();
    const double T = horizon(*vr.bounds, a, b);
    if (!(tau > T)) {
        std::ostringstream os;
        os << "tau = " << tau << " does not exceed the horizon T = " << T;
        throw Error(ErrorCode::HorizonTooShort, os.str());
    }

    {
        auto rep = check_k_rho(target, constants.rho_prime, sys.p,
                               KMode::Continuum);
        if (!rep.member) {
            const double rho_outer =
                rho_for_time(T, constants.oleinik_C, a, b);
            const bool indeterminate = rep.min_rho <= rho_outer;
            std::ostringstream os;
            os << (indeterminate
                       ? "indeterminate: target lies between rho' and rho(T)"
                       : "not attainable: target violates the decay bounds "
                         "for every rho")
               << " (invariant " << rep.worst.family + 1 << " between x = "
               << rep.worst.x << " and y = " << rep.worst.y << ")";
            throw Error(ErrorCode::NotAttainable, os.str());
        }
    }

    const Profile initial_q = snap_values(initial, grid, sys.gamma);
    const Profile target_q = quantize(target, grid, sys.gamma);

    auto bw = backward_phase(sys, *vr.bounds, constants, target_q, tau, grid,
                             opts);
    auto fs = forward_phase(sys, *vr.bounds, initial_q, bw.omega, grid, opts);

    SynthesisPlan plan{T,
                       tau,
                       grid,
                       bw.omega,
                       fs.omega_prime,
                       fs.omega_tilde,
                       fs.control_a,
                       fs.control_b,
                       target_q,
                       constants};

    // Splice the backward tail behind the staging; both sides hold omega
    // across the gap, so the duplicate segment at (3/4)T collapses.
    for (std::size_t k = 0; k < bw.tail_a.times.size(); ++k) {
        plan.control_a.append(bw.tail_a.times[k], bw.tail_a.values[k]);
    }
    for (std::size_t k = 0; k < bw.tail_b.times.size(); ++k) {
        plan.control_b.append(bw.tail_b.times[k], bw.tail_b.values[k]);
    }
    return plan;
}

}  // namespace temple
