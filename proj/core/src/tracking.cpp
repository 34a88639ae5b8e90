#include "temple/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "temple/errors.hpp"

namespace temple {

// ---------------------------------------------------------------------------
// BoundaryControl
// ---------------------------------------------------------------------------

const WVec& BoundaryControl::value_at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

std::optional<double> BoundaryControl::next_jump_after(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return std::nullopt;
    return *it;
}

void BoundaryControl::append(double t, WVec value) {
    if (!values.empty() && values.back() == value) return;
    if (!times.empty() && !(t > times.back())) {
        throw Error(ErrorCode::BadInput, "control jump times must increase");
    }
    times.push_back(t);
    values.push_back(std::move(value));
}

void BoundaryControl::snap(GridLevel grid, const Box& gamma) {
    for (auto& v : values) {
        for (int i = 0; i < gamma.dim(); ++i) {
            v[i] = grid.snap_clamped(v[i], gamma.lo[i], gamma.hi[i]);
        }
    }
    // Snapping can make neighbors equal; drop the redundant jumps.
    std::vector<double> t2;
    std::vector<WVec> v2;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!v2.empty() && v2.back() == values[k]) continue;
        t2.push_back(times[k]);
        v2.push_back(values[k]);
    }
    times = std::move(t2);
    values = std::move(v2);
}

// ---------------------------------------------------------------------------
// WaveEngine
// ---------------------------------------------------------------------------

struct WaveEngine::Site {
    double x = 0;
    int boundary = -1;  // -1 interior, 0 left, 1 right
    bool control = false;
};

struct WaveEngine::Batch {
    double time = 0;
    std::vector<Site> sites;  // ascending position
    bool empty() const { return sites.empty(); }
};

WaveEngine::WaveEngine(const SystemSpec& sys, GridLevel grid, double a,
                       double b, double direction, EngineOptions opts)
    : sys_(sys), grid_(grid), a_(a), b_(b), dir_(direction), opts_(opts) {}

void WaveEngine::seed(std::vector<Front> fronts, WVec left_state,
                      WVec right_state, double clock0) {
    fronts_ = std::move(fronts);
    anchors_.assign(fronts_.size(), clock0);
    left_state_ = std::move(left_state);
    right_state_ = std::move(right_state);
    clock_ = clock0;
    verify_chaining();
    note_spread_rate();
}

double WaveEngine::pos_at(std::size_t k, double clock) const {
    return fronts_[k].position + motion(fronts_[k]) * (clock - anchors_[k]);
}

void WaveEngine::verify_chaining() const {
    if (fronts_.empty()) {
        if (left_state_ != right_state_) {
            throw std::logic_error("empty field with distinct ambient states");
        }
        return;
    }
    if (fronts_.front().w_left != left_state_ ||
        fronts_.back().w_right != right_state_) {
        throw std::logic_error("field ends do not chain to the ambient states");
    }
    for (std::size_t k = 0; k + 1 < fronts_.size(); ++k) {
        if (fronts_[k].w_right != fronts_[k + 1].w_left) {
            throw std::logic_error("front states do not chain");
        }
    }
}

void WaveEngine::note_spread_rate() {
    if (dir_ < 0) return;
    const double q = grid_.spacing();
    std::vector<int> last(static_cast<std::size_t>(sys_.n), -1);
    for (std::size_t k = 0; k < fronts_.size(); ++k) {
        const int fam = fronts_[k].family;
        const int prev = last[static_cast<std::size_t>(fam)];
        if (prev >= 0 &&
            fronts_[static_cast<std::size_t>(prev)].kind ==
                FrontKind::RarefactionQuantum &&
            fronts_[k].kind == FrontKind::RarefactionQuantum) {
            const double rate =
                (fronts_[k].speed - fronts_[static_cast<std::size_t>(prev)].speed) / q;
            if (rate > max_spread_rate_) max_spread_rate_ = rate;
        }
        last[static_cast<std::size_t>(fam)] = static_cast<int>(k);
    }
}

double WaveEngine::family_tv(int family) const {
    double tv = 0;
    for (const auto& f : fronts_) {
        if (f.family == family) {
            tv += std::abs(f.w_right[family] - f.w_left[family]);
        }
    }
    return tv;
}

void WaveEngine::close_segment(std::size_t k, double T) {
    segments_.push_back(FrontSegment{anchors_[k], fronts_[k].position, T,
                                     pos_at(k, T), fronts_[k].family,
                                     fronts_[k].kind});
}

WaveEngine::Batch WaveEngine::gather_sites(double horizon) const {
    double T = std::numeric_limits<double>::infinity();

    struct Candidate {
        double t;
        Site site;
    };
    std::vector<Candidate> cands;

    for (std::size_t k = 0; k < fronts_.size(); ++k) {
        const double m = motion(fronts_[k]);
        if (m == 0) continue;
        const double target = (m < 0) ? a_ : b_;
        double t = anchors_[k] + (target - fronts_[k].position) / m;
        if (t < clock_) t = clock_;
        cands.push_back({t, Site{target, (m < 0) ? 0 : 1, false}});
        T = std::min(T, t);
    }
    for (std::size_t k = 0; k + 1 < fronts_.size(); ++k) {
        const double mj = motion(fronts_[k]);
        const double mk = motion(fronts_[k + 1]);
        if (!(mj > mk)) continue;
        const double pxj = fronts_[k].position - mj * anchors_[k];
        const double pxk = fronts_[k + 1].position - mk * anchors_[k + 1];
        double t = (pxk - pxj) / (mj - mk);
        if (t < clock_) t = clock_;
        cands.push_back({t, Site{pxj + mj * t, -1, false}});
        T = std::min(T, t);
    }
    if (control_a_) {
        if (auto t = control_a_->next_jump_after(clock_)) {
            cands.push_back({*t, Site{a_, 0, true}});
            T = std::min(T, *t);
        }
    }
    if (control_b_) {
        if (auto t = control_b_->next_jump_after(clock_)) {
            cands.push_back({*t, Site{b_, 1, true}});
            T = std::min(T, *t);
        }
    }

    Batch batch;
    if (cands.empty() || T > horizon + opts_.time_tol) return batch;
    batch.time = T;

    // Merge everything that happens within the time tolerance of the
    // earliest candidate, clustering by location.
    std::vector<Candidate> now;
    for (const auto& c : cands) {
        if (c.t <= T + opts_.time_tol) now.push_back(c);
    }
    std::sort(now.begin(), now.end(), [](const Candidate& l, const Candidate& r) {
        return l.site.x < r.site.x;
    });
    for (const auto& c : now) {
        if (!batch.sites.empty() && batch.sites.back().boundary == c.site.boundary &&
            (c.site.boundary >= 0 ||
             std::abs(batch.sites.back().x - c.site.x) <= opts_.pos_tol)) {
            batch.sites.back().control = batch.sites.back().control || c.site.control;
            continue;
        }
        batch.sites.push_back(c.site);
    }
    return batch;
}

void WaveEngine::process_site(const Site& site, double T,
                              std::vector<Event>& events) {
    Event ev;
    ev.time = T;
    ev.position = site.x;
    ev.pre_fronts = static_cast<int>(fronts_.size());

    const double tv_before = [&] {
        double s = 0;
        for (int i = 0; i < sys_.n; ++i) s += family_tv(i);
        return s;
    }();

    if (site.boundary == 0) {
        // Exiting group is a prefix of the array.
        std::size_t e = 0;
        while (e < fronts_.size() && pos_at(e, T) <= a_ + opts_.pos_tol &&
               motion(fronts_[e]) < 0) {
            ++e;
        }
        std::vector<Front> exited(fronts_.begin(),
                                  fronts_.begin() + static_cast<long>(e));
        if (e > 0) {
            for (std::size_t k = 0; k < e; ++k) close_segment(k, T);
            left_state_ = exited.back().w_right;
            fronts_.erase(fronts_.begin(), fronts_.begin() + static_cast<long>(e));
            anchors_.erase(anchors_.begin(), anchors_.begin() + static_cast<long>(e));
            if (on_exit_) on_exit_(T, Side::Left, exited);
        }
        for (const auto& f : exited) ev.families.push_back(f.family);
        ev.kind = EventKind::BoundaryHit;
        if (site.control) {
            ev.kind = EventKind::ControlJumpLeft;
            const WVec& nv = control_a_->value_at(T);
            auto br = solve_boundary_riemann(sys_, Side::Left, nv, left_state_,
                                             grid_, a_);
            for (const auto& f : br.entering) ev.families.push_back(f.family);
            fronts_.insert(fronts_.begin(), br.entering.begin(),
                           br.entering.end());
            anchors_.insert(anchors_.begin(), br.entering.size(), T);
            left_state_ = br.effective_state;
        }
    } else if (site.boundary == 1) {
        std::size_t e = 0;  // suffix length
        while (e < fronts_.size() &&
               pos_at(fronts_.size() - 1 - e, T) >= b_ - opts_.pos_tol &&
               motion(fronts_[fronts_.size() - 1 - e]) > 0) {
            ++e;
        }
        std::vector<Front> exited(fronts_.end() - static_cast<long>(e),
                                  fronts_.end());
        if (e > 0) {
            for (std::size_t k = fronts_.size() - e; k < fronts_.size(); ++k) {
                close_segment(k, T);
            }
            right_state_ = exited.front().w_left;
            fronts_.erase(fronts_.end() - static_cast<long>(e), fronts_.end());
            anchors_.erase(anchors_.end() - static_cast<long>(e), anchors_.end());
            if (on_exit_) on_exit_(T, Side::Right, exited);
        }
        for (const auto& f : exited) ev.families.push_back(f.family);
        ev.kind = EventKind::BoundaryHit;
        if (site.control) {
            ev.kind = EventKind::ControlJumpRight;
            const WVec& nv = control_b_->value_at(T);
            auto br = solve_boundary_riemann(sys_, Side::Right, nv,
                                             right_state_, grid_, b_);
            for (const auto& f : br.entering) ev.families.push_back(f.family);
            fronts_.insert(fronts_.end(), br.entering.begin(),
                           br.entering.end());
            anchors_.insert(anchors_.end(), br.entering.size(), T);
            right_state_ = br.effective_state;
        }
    } else {
        // Interior interaction: the colliding group is the maximal run of
        // consecutive fronts sitting at the site within tolerance.
        std::size_t lo = 0;
        while (lo < fronts_.size() &&
               pos_at(lo, T) < site.x - opts_.pos_tol) {
            ++lo;
        }
        std::size_t hi = lo;
        while (hi < fronts_.size() &&
               std::abs(pos_at(hi, T) - site.x) <= opts_.pos_tol) {
            ++hi;
        }
        if (hi - lo < 2) return;  // stale candidate, nothing to do

        std::vector<int> in_count(static_cast<std::size_t>(sys_.n), 0);
        for (std::size_t k = lo; k < hi; ++k) {
            ev.families.push_back(fronts_[k].family);
            in_count[static_cast<std::size_t>(fronts_[k].family)]++;
        }
        const WVec A = fronts_[lo].w_left;
        const WVec B = fronts_[hi - 1].w_right;
        for (std::size_t k = lo; k < hi; ++k) close_segment(k, T);
        auto out = resolve_(A, B, site.x);

        std::vector<int> out_count(static_cast<std::size_t>(sys_.n), 0);
        for (const auto& f : out) out_count[static_cast<std::size_t>(f.family)]++;
        for (int i = 0; i < sys_.n; ++i) {
            if (out_count[static_cast<std::size_t>(i)] >
                in_count[static_cast<std::size_t>(i)]) {
                wave_count_ok_ = false;
            }
        }

        fronts_.erase(fronts_.begin() + static_cast<long>(lo),
                      fronts_.begin() + static_cast<long>(hi));
        anchors_.erase(anchors_.begin() + static_cast<long>(lo),
                       anchors_.begin() + static_cast<long>(hi));
        fronts_.insert(fronts_.begin() + static_cast<long>(lo), out.begin(),
                       out.end());
        anchors_.insert(anchors_.begin() + static_cast<long>(lo), out.size(),
                        T);
        ev.kind = EventKind::Interaction;
    }

    ev.post_fronts = static_cast<int>(fronts_.size());
    if (ev.kind == EventKind::Interaction ||
        ev.kind == EventKind::BoundaryHit) {
        double tv_after = 0;
        for (int i = 0; i < sys_.n; ++i) tv_after += family_tv(i);
        if (tv_after > tv_before) tv_ok_ = false;
    }
    events.push_back(std::move(ev));
}

WaveEngine::RunResult WaveEngine::run(double horizon,
                                      const std::vector<double>& snapshot_clocks) {
    RunResult rr;
    std::size_t idx = 0;

    while (true) {
        auto batch = gather_sites(horizon);
        if (batch.empty()) break;
        const double T = batch.time;

        while (idx < snapshot_clocks.size() &&
               snapshot_clocks[idx] < T - opts_.time_tol) {
            rr.profiles.push_back(profile_at(snapshot_clocks[idx]));
            ++idx;
        }

        // Advance positions lazily; the fronts keep their anchors and the
        // sites are processed left to right at the common time T.
        for (const auto& site : batch.sites) {
            process_site(site, T, rr.events);
            if (++events_used_ > opts_.max_events) {
                throw Error(ErrorCode::Runaway,
                            "event count exceeded max_events");
            }
        }
        clock_ = T;
        verify_chaining();
        note_spread_rate();

        while (idx < snapshot_clocks.size() &&
               snapshot_clocks[idx] <= clock_ + opts_.time_tol) {
            rr.profiles.push_back(profile_at(std::max(snapshot_clocks[idx], clock_)));
            ++idx;
        }
    }

    while (idx < snapshot_clocks.size()) {
        rr.profiles.push_back(profile_at(snapshot_clocks[idx]));
        ++idx;
    }

    for (std::size_t k = 0; k < fronts_.size(); ++k) {
        close_segment(k, horizon);
    }
    rr.segments = std::move(segments_);
    rr.max_spread_rate = max_spread_rate_;
    rr.wave_count_ok = wave_count_ok_;
    rr.tv_ok = tv_ok_;
    return rr;
}

std::optional<PendingEvent> WaveEngine::peek(double horizon) const {
    auto batch = gather_sites(horizon);
    if (batch.empty()) return std::nullopt;
    const Site& first = batch.sites.front();
    PendingEvent pe;
    pe.time = batch.time;
    pe.position = first.x;
    if (first.boundary < 0) {
        pe.kind = EventKind::Interaction;
    } else if (first.control) {
        pe.kind = (first.boundary == 0) ? EventKind::ControlJumpLeft
                                        : EventKind::ControlJumpRight;
    } else {
        pe.kind = EventKind::BoundaryHit;
    }
    return pe;
}

Profile WaveEngine::profile_at(double clock) const {
    // Fronts closer than the position tolerance count as one location; the
    // hairline cell between them is dropped and the outer states kept.
    std::vector<double> breaks;
    std::vector<WVec> values;
    values.push_back(left_state_);
    for (std::size_t k = 0; k < fronts_.size(); ++k) {
        double x = pos_at(k, clock);
        if (x <= a_ + opts_.pos_tol) {
            values.back() = fronts_[k].w_right;
            continue;
        }
        if (x >= b_ - opts_.pos_tol) break;
        if (!breaks.empty() && x <= breaks.back() + opts_.pos_tol) {
            values.back() = fronts_[k].w_right;
            continue;
        }
        breaks.push_back(x);
        values.push_back(fronts_[k].w_right);
    }
    return Profile(a_, b_, std::move(breaks), std::move(values));
}

// ---------------------------------------------------------------------------
// Forward flow map
// ---------------------------------------------------------------------------

SimState init_forward(const SystemSpec& sys, const Profile& initial,
                      const BoundaryControl& ua, const BoundaryControl& ub,
                      GridLevel grid) {
    SimState st;
    st.a = initial.a();
    st.b = initial.b();
    st.grid = grid;
    st.control_a = ua;
    st.control_b = ub;

    const WVec trace_a = initial.values().front();
    const WVec trace_b = initial.values().back();

    auto left = solve_boundary_riemann(sys, Side::Left, ua.value_at(0.0),
                                       trace_a, grid, st.a);
    st.left_state = left.effective_state;
    for (auto& f : left.entering) st.fronts.push_back(std::move(f));

    for (std::size_t k = 0; k < initial.breakpoints().size(); ++k) {
        auto fans = solve_riemann(sys, initial.values()[k],
                                  initial.values()[k + 1], grid,
                                  initial.breakpoints()[k]);
        for (auto& f : fans) st.fronts.push_back(std::move(f));
    }

    auto right = solve_boundary_riemann(sys, Side::Right, ub.value_at(0.0),
                                        trace_b, grid, st.b);
    st.right_state = right.effective_state;
    for (auto& f : right.entering) st.fronts.push_back(std::move(f));

    return st;
}

std::optional<PendingEvent> next_event(const SystemSpec& sys,
                                       const SimState& state, double horizon,
                                       const EngineOptions& opts) {
    WaveEngine eng(sys, state.grid, state.a, state.b, +1.0, opts);
    eng.set_controls(&state.control_a, &state.control_b);
    eng.seed(state.fronts, state.left_state, state.right_state, state.time);
    return eng.peek(horizon);
}

std::vector<int> count_data_shocks(const SystemSpec& sys,
                                   const Profile& initial_q,
                                   const BoundaryControl& ua,
                                   const BoundaryControl& ub) {
    std::vector<int> shocks(static_cast<std::size_t>(sys.n), 0);
    const auto& vals = initial_q.values();
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
        for (int i = 0; i < sys.n; ++i) {
            if (vals[k + 1][i] < vals[k][i]) {
                shocks[static_cast<std::size_t>(i)]++;
            }
        }
    }
    // Waves entering at x=a are shocks when the relevant invariant steps
    // upward in time; at x=b when it steps downward. The first transition
    // compares the t=0 control value against the initial boundary trace.
    WVec prev = vals.front();
    for (const auto& v : ua.values) {
        for (int i = sys.p; i < sys.n; ++i) {
            if (v[i] > prev[i]) shocks[static_cast<std::size_t>(i)]++;
        }
        prev = v;
    }
    prev = vals.back();
    for (const auto& v : ub.values) {
        for (int i = 0; i < sys.p; ++i) {
            if (v[i] < prev[i]) shocks[static_cast<std::size_t>(i)]++;
        }
        prev = v;
    }
    return shocks;
}

Trajectory run_forward(const SystemSpec& sys, const Profile& initial,
                       BoundaryControl ua, BoundaryControl ub, GridLevel grid,
                       double tau, std::vector<double> snapshot_times,
                       const EngineOptions& opts) {
    if (!(tau > 0)) {
        throw Error(ErrorCode::BadInput, "tau must be positive");
    }
    for (double t : snapshot_times) {
        if (t < 0 || t > tau) {
            throw Error(ErrorCode::BadInput,
                        "snapshot times must lie in [0, tau]");
        }
    }

    const Profile initial_q = snap_values(initial, grid, sys.gamma);
    ua.snap(grid, sys.gamma);
    ub.snap(grid, sys.gamma);

    std::sort(snapshot_times.begin(), snapshot_times.end());
    snapshot_times.erase(
        std::unique(snapshot_times.begin(), snapshot_times.end()),
        snapshot_times.end());
    if (snapshot_times.empty() || snapshot_times.back() != tau) {
        snapshot_times.push_back(tau);
    }

    SimState st = init_forward(sys, initial_q, ua, ub, grid);

    WaveEngine eng(sys, grid, st.a, st.b, +1.0, opts);
    eng.set_resolver([&sys, grid](const WVec& wl, const WVec& wr, double x0) {
        return solve_riemann(sys, wl, wr, grid, x0);
    });
    eng.set_controls(&ua, &ub);
    eng.seed(std::move(st.fronts), std::move(st.left_state),
             std::move(st.right_state));

    auto rr = eng.run(tau, snapshot_times);

    Trajectory traj;
    traj.tau = tau;
    traj.grid = grid;
    traj.snapshot_times = std::move(snapshot_times);
    traj.snapshots = std::move(rr.profiles);
    traj.events = std::move(rr.events);
    traj.segments = std::move(rr.segments);
    traj.data_shocks_per_family = count_data_shocks(sys, initial_q, ua, ub);
    traj.max_spread_rate = rr.max_spread_rate;
    traj.wave_count_ok = rr.wave_count_ok;
    traj.tv_ok = rr.tv_ok;
    return traj;
}

}  // namespace temple
