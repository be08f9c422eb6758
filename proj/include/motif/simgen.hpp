#pragma once

#include "motif/curveset.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace motif {

// Where a motif block lands in a curve's coefficient vector. `knot` indexes
// the block's first coefficient; it may be negative (block hanging off the
// left edge) so a curve can be a window onto a wider pattern.
struct Placement {
    int motif = 0;
    int knot = 0;
};

// Recipe for a synthetic curve set: smooth background plus planted
// coefficient blocks, all sampled from a B-spline basis on a unit grid.
struct ScenarioSpec {
    int order = 3;              // B-spline order n (degree n-1)
    double knot_spacing = 10.0; // T
    double coeff_lo = -15.0;    // background/motif coefficient range [a,b]
    double coeff_hi = 15.0;
    double beta_a = 0.45;       // background coefficient distribution
    double beta_b = 0.45;
    std::vector<Eigen::VectorXd> motifs;         // coefficient blocks, length >= order
    std::vector<std::vector<Placement>> layout;  // one entry per curve
    double sigma = 0.1;                          // coefficient noise sd
    std::optional<std::pair<double, double>> level_shift_range;  // per-occurrence d_m
    int curve_length = 200;  // time units; curves sample length+1 points at step 1
    int n_curves = 20;
    std::uint64_t seed = 0;
    std::vector<int> cluster_of;  // optional ground-truth cluster labels

    void validate() const;
};

struct TruthOccurrence {
    int motif = 0;
    int curve_index = 0;
    std::string curve_id;
    int start = 0;   // grid index
    int length = 0;  // points
};

struct TruthLayout {
    std::vector<TruthOccurrence> occurrences;
    std::vector<Eigen::MatrixXd> motif_values;  // clean sampled shape per motif
    std::vector<std::string> curve_ids;
    std::vector<int> cluster_of;  // empty unless the scenario defines clusters
};

// Evaluates sum_l coeffs[l] * B_l(t) for a uniform B-spline basis of the
// given order with knot spacing T; the basis spans [0, (L-order+1)*T].
Eigen::VectorXd bspline_eval(const Eigen::VectorXd& coeffs, int order, double knot_spacing,
                             const Eigen::VectorXd& t);

std::pair<CurveSet, TruthLayout> generate(const ScenarioSpec& spec);

// Named presets. `l` and `sigma` apply to scenario1/scenario2; comp_a..comp_d
// fix their own lengths and use only `sigma`.
ScenarioSpec preset(const std::string& name, int l, double sigma, std::uint64_t seed);

nlohmann::json truth_to_json(const TruthLayout& t);
TruthLayout truth_from_json(const nlohmann::json& j);
void save_truth(const TruthLayout& t, const std::string& path);
TruthLayout load_truth(const std::string& path);

}  // namespace motif
