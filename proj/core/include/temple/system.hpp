#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "temple/types.hpp"

namespace temple {

// A genuinely nonlinear Temple-class system given in Riemann coordinates.
//
// The system is specified by the charts u <-> w, the characteristic speeds
// lambda_i(w), the flux f(u), and the invariant box Gamma. Families are
// indexed 0..n-1 in code; families 0..p-1 have negative speeds (they enter
// at x=b) and families p..n-1 positive speeds (entering at x=a). Instances
// are immutable after construction and safe to share across threads.
struct SystemSpec {
    int n = 0;                                   // number of families
    int p = 0;                                   // 1-based splitting index: families 1..p negative
    std::function<WVec(const WVec&)> to_w;       // chart u -> w
    std::function<WVec(const WVec&)> from_w;     // chart w -> u
    std::function<double(int, const WVec&)> eigenvalue;  // (family0, w) -> speed
    std::function<WVec(const WVec&)> flux;       // f(u)
    Box gamma;                                   // invariant box
    std::string name;

    bool negative_family(int family0) const { return family0 < p; }
};

struct SpeedBounds {
    double lambda_min = 0;  // min |lambda_i| over Gamma, > 0
    double lambda_max = 0;  // max |lambda_i| over Gamma
};

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    std::string detail;  // witnessing sample on failure
};

struct ValidationReport {
    bool pass = false;
    std::vector<HypothesisCheck> checks;
    std::optional<SpeedBounds> bounds;  // set when all checks pass
};

// The shipped reference system: two decoupled convex scalar laws with
// identity charts, lambda_1 = -1 + w1/4, lambda_2 = 1 + w2/4 on [-1,1]^2.
SystemSpec make_diag2();

// Diagonal system with affine speeds lambda_i(w) = c0[i] + c1[i]*w_i,
// identity charts and flux component f_i(u) = c0[i]*u_i + c1[i]*u_i^2/2.
SystemSpec make_diagonal_affine(const WVec& c0, const WVec& c1, int p,
                                const Box& gamma, std::string name = "diagonal");

// Sampled verification of the standing hypotheses: uniform strict
// hyperbolicity across Gamma, speed splitting at the index p, genuine
// nonlinearity (d lambda_i / d w_i > 0, finite differences), and positive
// speed bounds. grid_resolution is the number of samples per invariant
// axis. Throws Error(InvalidDomain) for a degenerate box.
ValidationReport validate_system(const SystemSpec& sys, int grid_resolution);

// Rankine-Hugoniot speed of the elementary i-wave joining w_left, w_right
// (which must differ exactly in invariant `family0`). Computed as the flux
// component ratio over the conserved component with the largest jump; for
// Temple systems the Hugoniot locus is a straight line, so this equals the
// i-th eigenvalue of the averaged Jacobian.
double rh_speed(const SystemSpec& sys, int family0, const WVec& w_left,
                const WVec& w_right);

}  // namespace temple
