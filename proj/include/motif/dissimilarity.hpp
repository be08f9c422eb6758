#pragma once

#include "motif/curveset.hpp"

#include <optional>

namespace motif {

// Parameters of the Sobolev-like dissimilarity: alpha mixes the level and
// derivative terms, weights scale components, overlap_floor is the minimum
// fraction of the comparison window that must be jointly valid.
struct DistanceParams {
    double alpha = 0.5;
    Eigen::VectorXd weights;  // one positive weight per component; empty = all ones
    double overlap_floor = 0.8;

    void validate(int dims) const;
    Eigen::VectorXd effective_weights(int dims) const;
};

// Minimum number of jointly valid points for a window of length `len` to be
// admissible under `overlap_floor`.
int min_overlap_points(int len, double overlap_floor);

// Squared dissimilarity between window [a_start, a_start+len) of track `a`
// and window [b_start, b_start+len) of track `b`. Rows outside either track
// count as invalid. Returns nullopt when the windows are inadmissible
// (insufficient joint support).
std::optional<double> d_alpha_sq(const Track& a, int a_start, const Track& b, int b_start,
                                 int len, const DistanceParams& p);

// Equal-length full-track convenience overload.
std::optional<double> d_alpha_sq(const Track& a, const Track& b, const DistanceParams& p);

std::optional<double> d_alpha_sq(const Portion& x, const Track& center, const DistanceParams& p);

// Distance profile of a center slid along a curve. Shifts range over
// [first_shift, first_shift + size), covering every placement with enough
// potential overlap; hanging placements at the ends are kept as long as the
// admissibility floor can still be met. Inadmissible entries are NaN.
struct DistanceProfile {
    int first_shift = 0;
    Eigen::VectorXd dist_sq;  // NaN = inadmissible

    int size() const { return static_cast<int>(dist_sq.size()); }
    int shift_at(int i) const { return first_shift + i; }
};

DistanceProfile distance_profile(const Track& curve, const Track& center, const DistanceParams& p);

struct ShiftDist {
    int shift = 0;
    double dist_sq = 0.0;
};

// Admissible minimum of a profile; ties resolved toward the smallest shift.
std::optional<ShiftDist> best_shift(const DistanceProfile& profile);

// Non-squared distance between two tracks, minimizing over the relative
// placements of the shorter inside (and, overlap permitting, hanging off)
// the longer. NaN when no placement is admissible.
double min_slide_distance(const Track& a, const Track& b, const DistanceParams& p);

// Same, but restricted to placements fully inside the longer track.
double min_slide_distance_inside(const Track& a, const Track& b, const DistanceParams& p);

}  // namespace motif
