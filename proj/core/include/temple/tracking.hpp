#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "temple/profile.hpp"
#include "temple/riemann.hpp"
#include "temple/system.hpp"

namespace temple {

// Piecewise constant boundary data: value_at is right-continuous and
// times[0] is the start of the first segment (0 for forward runs).
struct BoundaryControl {
    std::vector<double> times;
    std::vector<WVec> values;

    static BoundaryControl constant(WVec value) {
        return BoundaryControl{{0.0}, {std::move(value)}};
    }

    const WVec& value_at(double t) const;
    std::optional<double> next_jump_after(double t) const;

    // Append a segment starting at t; skipped when the value repeats.
    void append(double t, WVec value);

    // Snap all values onto the grid restricted to gamma.
    void snap(GridLevel grid, const Box& gamma);
};

enum class EventKind {
    Interaction,      // two or more fronts meet in the interior
    BoundaryHit,      // fronts leave the domain, no wave generated
    ControlJumpLeft,  // boundary datum at x=a jumps (merged with a
                      // simultaneous boundary hit when one occurs)
    ControlJumpRight,
};

struct Event {
    double time = 0;
    EventKind kind = EventKind::Interaction;
    double position = 0;
    std::vector<int> families;  // 0-based families of the fronts involved
    int pre_fronts = 0;         // field-wide front count before the event
    int post_fronts = 0;
};

struct EngineOptions {
    std::size_t max_events = 1'000'000;
    double time_tol = 1e-12;  // events closer than this are simultaneous
    double pos_tol = 1e-12;   // positions closer than this coincide
};

// One straight piece of a front's space-time path, from its birth or last
// interaction to the next event (or the end of the run).
struct FrontSegment {
    double t0 = 0, x0 = 0;
    double t1 = 0, x1 = 0;
    int family = 0;
    FrontKind kind = FrontKind::Shock;
};

struct Trajectory {
    double tau = 0;
    GridLevel grid{1};
    std::vector<double> snapshot_times;
    std::vector<Profile> snapshots;  // parallel to snapshot_times
    std::vector<Event> events;
    std::vector<FrontSegment> segments;  // space-time diagram data
    std::vector<int> data_shocks_per_family;  // N_nu ingredients
    // Max over event-free intervals of the (speed gap)/(spacing) of
    // adjacent same-family rarefaction pairs; the spreading rate observed
    // in this run, to compare against the calibrated C1.
    double max_spread_rate = 0;
    bool wave_count_ok = true;  // per-family count non-increasing at interactions
    bool tv_ok = true;          // total variation non-increasing between control jumps

    const Profile& final_profile() const { return snapshots.back(); }
};

struct SimState {
    double time = 0;
    double a = 0, b = 0;
    GridLevel grid;
    std::vector<Front> fronts;  // position-sorted, chained
    WVec left_state, right_state;
    BoundaryControl control_a, control_b;
};

// State at t=0: interior Riemann problems at the breakpoints of `initial`
// plus the boundary Riemann problems restricted to entering fronts.
// Requires data already on the grid (run_forward snaps beforehand).
SimState init_forward(const SystemSpec& sys, const Profile& initial,
                      const BoundaryControl& ua, const BoundaryControl& ub,
                      GridLevel grid);

struct PendingEvent {
    double time = 0;
    EventKind kind = EventKind::Interaction;
    double position = 0;
};

// Earliest upcoming event (collision, boundary exit, or control jump), or
// none if nothing happens before `horizon`. Ties at distinct locations
// resolve left to right.
std::optional<PendingEvent> next_event(const SystemSpec& sys,
                                       const SimState& state, double horizon,
                                       const EngineOptions& opts = {});

// The forward flow map: snap data to the grid, seed the field, and run the
// event loop to `tau`, sampling profiles at the requested times (a final
// snapshot at tau is always included). Throws Error(Runaway) past the
// event cap.
Trajectory run_forward(const SystemSpec& sys, const Profile& initial,
                       BoundaryControl ua, BoundaryControl ub, GridLevel grid,
                       double tau, std::vector<double> snapshot_times,
                       const EngineOptions& opts = {});

// Shocks per family present in the (already snapped) initial and boundary
// data, including the waves generated where the t=0 boundary values meet
// the initial traces.
std::vector<int> count_data_shocks(const SystemSpec& sys,
                                   const Profile& initial_q,
                                   const BoundaryControl& ua,
                                   const BoundaryControl& ub);

// Event pump shared by the forward flow and the backward construction.
// Direction +1 advances physical time; direction -1 runs the same kinetics
// with time reversed (clock = tau - t), which the control synthesizer uses
// with the backward Riemann resolver.
class WaveEngine {
  public:
    using Resolver = std::function<std::vector<Front>(
        const WVec& w_left, const WVec& w_right, double x0)>;
    using ExitHook = std::function<void(double clock, Side side,
                                        const std::vector<Front>& group)>;

    WaveEngine(const SystemSpec& sys, GridLevel grid, double a, double b,
               double direction, EngineOptions opts = {});

    void set_resolver(Resolver r) { resolve_ = std::move(r); }
    void set_controls(const BoundaryControl* ua, const BoundaryControl* ub) {
        control_a_ = ua;
        control_b_ = ub;
    }
    void set_exit_hook(ExitHook h) { on_exit_ = std::move(h); }

    // Install the field at the given clock. Fronts must be position-sorted
    // and chained between left_state and right_state.
    void seed(std::vector<Front> fronts, WVec left_state, WVec right_state,
              double clock0 = 0.0);

    struct RunResult {
        std::vector<Event> events;
        std::vector<Profile> profiles;  // at the requested clocks
        std::vector<FrontSegment> segments;
        double max_spread_rate = 0;
        bool wave_count_ok = true;
        bool tv_ok = true;
    };

    RunResult run(double horizon, const std::vector<double>& snapshot_clocks);

    std::optional<PendingEvent> peek(double horizon) const;
    Profile profile_at(double clock) const;

    double clock() const { return clock_; }
    const std::vector<Front>& fronts() const { return fronts_; }
    const WVec& left_state() const { return left_state_; }
    const WVec& right_state() const { return right_state_; }

  private:
    struct Site;   // pending simultaneous-event site
    struct Batch;  // sites sharing the earliest event time

    double motion(const Front& f) const { return dir_ * f.speed; }
    double pos_at(std::size_t k, double clock) const;
    Batch gather_sites(double horizon) const;
    void process_site(const Site& site, double T, std::vector<Event>& events);
    void verify_chaining() const;
    void note_spread_rate();
    double family_tv(int family) const;

    const SystemSpec& sys_;
    GridLevel grid_;
    double a_, b_;
    double dir_;
    EngineOptions opts_;
    Resolver resolve_;
    const BoundaryControl* control_a_ = nullptr;
    const BoundaryControl* control_b_ = nullptr;
    ExitHook on_exit_;

    void close_segment(std::size_t k, double T);

    double clock_ = 0;
    std::vector<Front> fronts_;      // positions valid at anchors_
    std::vector<double> anchors_;    // per-front clock of last re-anchor
    WVec left_state_, right_state_;

    std::vector<FrontSegment> segments_;
    double max_spread_rate_ = 0;
    bool wave_count_ok_ = true;
    bool tv_ok_ = true;
    std::size_t events_used_ = 0;
};

}  // namespace temple
