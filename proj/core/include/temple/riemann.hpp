#pragma once

#include <vector>

#include "temple/system.hpp"
#include "temple/types.hpp"

namespace temple {

enum class FrontKind {
    Shock,               // w_i decreases left to right
    RarefactionQuantum,  // w_i increases by exactly one grid spacing
};

// A single traveling discontinuity. w_left and w_right differ exactly in
// invariant `family` (0-based) and the speed satisfies the Rankine-Hugoniot
// relation for that jump.
struct Front {
    int family = 0;
    WVec w_left;
    WVec w_right;
    double position = 0;
    double speed = 0;
    FrontKind kind = FrontKind::Shock;
};

// Quantized solution of the Riemann problem (w_left, w_right), both states
// on the value grid inside Gamma. Emits one shock per decreasing invariant
// and a fan of unit-quantum fronts per increasing invariant, anchored at
// x0 and ordered by family then fan index (which is also ascending speed).
std::vector<Front> solve_riemann(const SystemSpec& sys, const WVec& w_left,
                                 const WVec& w_right, GridLevel grid,
                                 double x0);

enum class Side { Left, Right };

struct BoundaryResult {
    std::vector<Front> entering;  // fronts that move into the domain
    WVec effective_state;         // state just inside the boundary
};

// Restriction of the boundary Riemann problem to the interior. On the left
// boundary the problem (boundary_value, trace) is solved and only fronts
// with positive speed are kept; the effective state carries the boundary
// value's invariants p+1..n and the trace's 1..p. The right boundary is
// symmetric. Entering fronts are anchored at x_boundary.
BoundaryResult solve_boundary_riemann(const SystemSpec& sys, Side side,
                                      const WVec& boundary_value,
                                      const WVec& trace, GridLevel grid,
                                      double x_boundary);

// Fronts whose forward interaction at the anchor produces the terminal
// jump (w_left, w_right). Requires every increasing invariant jump to be
// exactly one quantum; throws Error(NotBackwardSolvable) otherwise.
// Intermediate states traverse families in decreasing order, so the
// returned fronts are ordered left to right as they appear at times before
// the interaction.
std::vector<Front> solve_backward_riemann(const SystemSpec& sys,
                                          const WVec& w_left,
                                          const WVec& w_right, GridLevel grid,
                                          double x0);

}  // namespace temple
