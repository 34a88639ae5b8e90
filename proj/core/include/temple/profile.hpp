#pragma once

#include <optional>
#include <vector>

#include "temple/types.hpp"

namespace temple {

// Piecewise constant map [a,b] -> Gamma in Riemann coordinates, stored with
// the right-continuous convention: cell k is [x_k, x_{k+1}) and carries
// values()[k]. Construction normalizes away adjacent cells that are equal
// in every invariant. Profiles are immutable values.
class Profile {
  public:
    // `breaks` are the interior breakpoints (strictly increasing, inside
    // (a,b)); `values` has one entry more than `breaks`.
    Profile(double a, double b, std::vector<double> breaks,
            std::vector<WVec> values);

    static Profile constant(double a, double b, WVec value);

    double a() const { return a_; }
    double b() const { return b_; }
    int dim() const { return values_.empty() ? 0 : static_cast<int>(values_[0].size()); }
    std::size_t cell_count() const { return values_.size(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<WVec>& values() const { return values_; }

    // Value at x (right-continuous; x == b returns the last cell).
    const WVec& value_at(double x) const;

    // Partition of [a,b] induced by invariant i: {a} + breakpoints where
    // w_i jumps + {b}.
    std::vector<double> partition(int invariant) const;

    bool operator==(const Profile& other) const = default;

  private:
    double a_, b_;
    std::vector<double> breaks_;
    std::vector<WVec> values_;
};

// Options for the grid quantizer. An upward step of m > 1 quanta between
// adjacent cells is split into m unit steps on a short staircase placed
// just left of the original jump; `stair_width` is the width of one
// staircase cell before the geometric cap cell_width/(2m) is applied. The
// default 0.8 * spacing * (b-a) keeps the staircase quotients inside the
// grid-mode attainability bounds for the shipped constants.
struct QuantizeOptions {
    std::optional<double> stair_width;
};

// Round a profile onto the value grid (floor on ties, threshold at half
// spacing), clamped into Gamma, and split multi-quantum upward steps so
// that every upward jump between adjacent partition points is exactly one
// quantum. Idempotent on already-conforming profiles. Throws
// Error(OutOfDomain) if a value lies outside Gamma.
Profile quantize(const Profile& profile, GridLevel grid, const Box& gamma,
                 const QuantizeOptions& opts = {});

// Value-only grid projection: rounds cell values without the staircase
// splitting. Flow data is snapped this way (upward multi-quantum jumps in
// initial data are legitimate Riemann data and become fans).
Profile snap_values(const Profile& profile, GridLevel grid, const Box& gamma);

// True when every invariant of every cell lies on the grid.
bool on_grid(const Profile& profile, GridLevel grid, double tol = 1e-12);

// Breakpoints within pos_tol, cell values exactly equal.
bool profiles_match(const Profile& x, const Profile& y, double pos_tol);

// Exact L1 distance over the merged breakpoint set. Components are
// compared in the coordinates the profiles are stored in; for systems with
// identity charts this is also the conserved-coordinate distance.
double l1_distance(const Profile& p1, const Profile& p2);

// Total variation of invariant i: sum of |jump| over breakpoints.
double total_variation(const Profile& profile, int invariant);

}  // namespace temple
