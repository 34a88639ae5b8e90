#pragma once

#include "temple/decay.hpp"
#include "temple/profile.hpp"
#include "temple/system.hpp"
#include "temple/tracking.hpp"

namespace temple {

// Flush horizon T = 4(b-a)/lambda_min: one quarter to empty the initial
// data, one to sweep in the negative families, one for the positive
// families, and one quarter of margin for the backward tail.
double horizon(const SpeedBounds& bounds, double a, double b);

struct SynthesisPlan {
    double T = 0;
    double tau = 0;
    GridLevel grid;
    WVec omega;        // constant state at (3/4)T
    WVec omega_prime;  // constant state after the initial flush
    WVec omega_tilde;  // (omega_1..p, omega'_{p+1}..n)
    BoundaryControl control_a, control_b;  // spliced, on [0, tau]
    Profile target_quantized;
    DecayConstants constants;
};

struct BackwardResult {
    WVec omega;
    BoundaryControl tail_a, tail_b;  // on [(3/4)T, tau], starting at omega
    Trajectory backward;             // diagnostics in forward-time labels
};

// Trace the quantized target backward from t = tau: backward Riemann
// problems at the breakpoints, backward interactions re-solved, fronts
// leaving the domain recorded as forward-time control jumps. Requires the
// target on the grid, inside the grid attainable set at rho', and with
// one-quantum upward jumps; all fronts exit within (b-a)/lambda_min, so
// the field is the constant omega back to (3/4)T. Replaying the returned
// controls forward from omega reproduces the target exactly.
BackwardResult backward_phase(const SystemSpec& sys, const SpeedBounds& bounds,
                              const DecayConstants& constants,
                              const Profile& target_q, double tau,
                              GridLevel grid, const EngineOptions& opts = {});

struct ForwardStaging {
    BoundaryControl control_a, control_b;  // on [0, (3/4)T]
    WVec omega_prime, omega_tilde;
};

// Three-stage preparation: hold the initial traces until T/4 (the data
// flushes out), jump the right control to omega_tilde (negative families
// sweep across by T/2), then the left control to omega (positive families
// sweep across by (3/4)T). The field is constant omega at (3/4)T.
ForwardStaging forward_phase(const SystemSpec& sys, const SpeedBounds& bounds,
                             const Profile& initial_q, const WVec& omega,
                             GridLevel grid, const EngineOptions& opts = {});

// Full synthesis: quantize the target, build the backward tail, stage the
// forward flush toward the discovered omega, and splice the controls
// (both hold omega across any gap). Throws HorizonTooShort when
// tau <= horizon and NotAttainable (with the witness and an
// indeterminate/unattainable classification) when the target fails the
// continuum inequalities at rho'.
SynthesisPlan synthesize(const SystemSpec& sys, const Profile& initial,
                         const Profile& target, double tau, GridLevel grid,
                         const DecayConstants& constants,
                         const EngineOptions& opts = {});

}  // namespace temple
