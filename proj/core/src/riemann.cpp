#include "temple/riemann.hpp"

#include <cmath>
#include <sstream>

#include "temple/errors.hpp"

namespace temple {

namespace {

void require_grid_state(const SystemSpec& sys, const WVec& w, GridLevel grid,
                        const char* role) {
    for (int i = 0; i < sys.n; ++i) {
        if (!grid.on_grid(w[i], 1e-12)) {
            std::ostringstream os;
            os << role << " state has off-grid invariant " << i + 1 << " = "
               << w[i] << " at level " << grid.nu;
            throw Error(ErrorCode::GridMismatch, os.str());
        }
    }
    if (!sys.gamma.contains(w, 1e-12)) {
        std::ostringstream os;
        os << role << " state outside the invariant box";
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
}

Front make_front(const SystemSpec& sys, int family, WVec wl, WVec wr,
                 double x0, FrontKind kind) {
    Front f;
    f.family = family;
    f.speed = rh_speed(sys, family, wl, wr);
    f.w_left = std::move(wl);
    f.w_right = std::move(wr);
    f.position = x0;
    f.kind = kind;
    return f;
}

}  // namespace

std::vector<Front> solve_riemann(const SystemSpec& sys, const WVec& w_left,
                                 const WVec& w_right, GridLevel grid,
                                 double x0) {
    require_grid_state(sys, w_left, grid, "left");
    require_grid_state(sys, w_right, grid, "right");

    const double q = grid.spacing();
    std::vector<Front> fronts;

    // March through the intermediate states: z^i takes the first i
    // invariants from the right state and the rest from the left.
    WVec state = w_left;
    for (int i = 0; i < sys.n; ++i) {
        if (w_right[i] == w_left[i]) continue;
        if (w_right[i] < w_left[i]) {
            WVec next = state;
            next[i] = w_right[i];
            fronts.push_back(
                make_front(sys, i, state, next, x0, FrontKind::Shock));
            state = std::move(next);
        } else {
            const long long steps = grid.quanta_between(w_left[i], w_right[i]);
            for (long long l = 0; l < steps; ++l) {
                WVec next = state;
                next[i] = (l + 1 == steps) ? w_right[i] : state[i] + q;
                fronts.push_back(make_front(sys, i, state, next, x0,
                                            FrontKind::RarefactionQuantum));
                state = std::move(next);
            }
        }
    }
    return fronts;
}

BoundaryResult solve_boundary_riemann(const SystemSpec& sys, Side side,
                                      const WVec& boundary_value,
                                      const WVec& trace, GridLevel grid,
                                      double x_boundary) {
    BoundaryResult result;
    result.effective_state.resize(sys.n);

    std::vector<Front> all;
    if (side == Side::Left) {
        all = solve_riemann(sys, boundary_value, trace, grid, x_boundary);
        for (auto& f : all) {
            if (!sys.negative_family(f.family)) {
                result.entering.push_back(std::move(f));
            }
        }
        for (int i = 0; i < sys.n; ++i) {
            result.effective_state[i] =
                sys.negative_family(i) ? trace[i] : boundary_value[i];
        }
    } else {
        all = solve_riemann(sys, trace, boundary_value, grid, x_boundary);
        for (auto& f : all) {
            if (sys.negative_family(f.family)) {
                result.entering.push_back(std::move(f));
            }
        }
        for (int i = 0; i < sys.n; ++i) {
            result.effective_state[i] =
                sys.negative_family(i) ? boundary_value[i] : trace[i];
        }
    }
    return result;
}

std::vector<Front> solve_backward_riemann(const SystemSpec& sys,
                                          const WVec& w_left,
                                          const WVec& w_right, GridLevel grid,
                                          double x0) {
    require_grid_state(sys, w_left, grid, "left");
    require_grid_state(sys, w_right, grid, "right");

    for (int i = 0; i < sys.n; ++i) {
        if (w_right[i] > w_left[i] &&
            grid.quanta_between(w_left[i], w_right[i]) != 1) {
            std::ostringstream os;
            os << "invariant " << i + 1 << " jumps upward by more than one "
               << "quantum; the terminal data is not backward solvable";
            throw Error(ErrorCode::NotBackwardSolvable, os.str());
        }
    }

    // Decreasing family order: the fastest family sits leftmost at times
    // before the interaction, so fronts come out already sorted by
    // position for the backward evolution.
    std::vector<Front> fronts;
    WVec state = w_left;
    for (int i = sys.n - 1; i >= 0; --i) {
        if (w_right[i] == w_left[i]) continue;
        WVec next = state;
        next[i] = w_right[i];
        const FrontKind kind = (w_right[i] < w_left[i])
                                   ? FrontKind::Shock
                                   : FrontKind::RarefactionQuantum;
        fronts.push_back(make_front(sys, i, state, next, x0, kind));
        state = std::move(next);
    }
    return fronts;
}

}  // namespace temple
