#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "temple/profile.hpp"
#include "temple/system.hpp"
#include "temple/tracking.hpp"

namespace temple {

// Calibrated decay constants for one system. rho_prime is tied to C1 and
// the minimum speed by definition.
struct DecayConstants {
    double oleinik_C = 0;  // positive-wave decay constant
    double spread_C1 = 0;  // rarefaction-spreading constant
    double rho_prime = 0;  // lambda_min / (6 * C1)

    static DecayConstants make(double C, double C1, double lambda_min) {
        return DecayConstants{C, C1, lambda_min / (6.0 * C1)};
    }
};

enum class KMode {
    Continuum,       // one-sided limits at breakpoints; any upward interior
                     // jump fails for every rho
    Grid,            // quotients between partition points of each invariant
                     // with the factor-5 slack
    PartitionPairs,  // the continuum inequalities restricted to pairs of
                     // distinct partition points (cell-limit values, no
                     // slack); the empirical form used on flow snapshots
};

struct KRhoWitness {
    int family = -1;   // 0-based
    double x = 0, y = 0;
    double quotient = 0;  // observed difference quotient
    double bound = 0;     // allowed value at the tested rho
};

struct KRhoReport {
    bool member = false;
    // Smallest rho for which the profile belongs to the set; 0 when every
    // quotient is non-positive, +inf when an upward jump fails continuum
    // mode outright.
    double min_rho = 0;
    KRhoWitness worst;
};

KRhoReport check_k_rho(const Profile& profile, double rho, int p, KMode mode);

struct OleinikPairWitness {
    int family = -1;
    double t = 0;
    double x = 0, y = 0;   // space pair, or (tau1, tau2) for time probes
    double increment = 0;
    double bound = 0;
    bool time_probe = false;
};

struct OleinikReport {
    bool pass = false;
    // Smallest C that would make every checked inequality hold with the
    // given slack; the margin is bound - increment at the worst pair.
    double required_C = 0;
    double worst_margin = 0;
    double slack = 0;  // N_nu * 2^-nu actually applied to space pairs
    OleinikPairWitness worst;
};

// Decay-estimate check over all snapshots of a trajectory: space pairs per
// family at every snapshot t > 0, plus time sections along interior probe
// lines x = a + k(b-a)/8. N_nu is the max shock count per family in the
// run's data; the time probes use at least one quantum of slack to absorb
// single-front crossings.
OleinikReport oleinik_report(const Trajectory& traj, const SystemSpec& sys,
                             const DecayConstants& constants, GridLevel grid,
                             int n_nu, int probe_count = 7);

// rho(tau_bar) = C (b-a) ((b-a) + tau_bar) / tau_bar, the level at which
// every profile attained at or after tau_bar satisfies the K^rho bounds.
double rho_for_time(double tau_bar, double C, double a, double b);

struct CalibrationOptions {
    double a = 0, b = 1;
    int trials = 100;
    std::pair<int, int> nu_range{4, 6};
    std::uint64_t seed = 0;
    int max_cells = 8;
    int max_control_jumps = 4;
};

// Fit C and C1 from randomized forward runs: the empirical values are the
// smallest constants under which all observed runs satisfy the decay and
// spreading inequalities; the returned constants apply a factor-2 safety
// and never fall below the analytic scalar anchors 2 / inf d(lambda_i)/d w_i
// and sup d(lambda_i)/d w_i. Deterministic for a fixed seed.
DecayConstants calibrate_constants(const SystemSpec& sys,
                                   const CalibrationOptions& opts);

}  // namespace temple
