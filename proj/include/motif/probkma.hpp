#pragma once

#include "motif/curveset.hpp"
#include "motif/dissimilarity.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <set>
#include <vector>

namespace motif {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class BcAggregation { max, mean, quantile };

struct ProbKmaParams {
    int K = 2;
    std::vector<int> c_min;  // initial center length per cluster, in points
    int c_max = 70;          // elongation cap, in points
    double m = 2.0;          // fuzziness, > 1
    DistanceParams dist;
    double tol = 1e-8;
    int max_iter = 1000;
    BcAggregation bc_aggregation = BcAggregation::max;
    double bc_quantile = 0.5;  // only used when bc_aggregation == quantile
    double elongation_step_frac = 0.25;
    int elongation_max_tries = 10;
    double delta_jmk_frac = 0.05;
    double cleaning_trigger = 100.0;  // elongation+cleaning fire below trigger*tol
    std::uint64_t seed = 0;

    void validate() const;
};

// Cluster center: a track over the center grid. `valid` plays the role of
// the defined-mask (points covered by at least one contributing curve).
struct Center {
    Track track;

    int length() const { return track.points(); }
};

struct Diagnostics {
    // trace indices whose step from the previous entry is exempt from the
    // descent property (elongation and cluster re-seeding events)
    std::set<int> exempt_trace_steps;
    std::vector<int> elongation_iters;
    int reseed_count = 0;
};

struct ProbKmaState {
    Eigen::MatrixXd P;        // K x N memberships, columns sum to 1
    Eigen::MatrixXi S;        // K x N shifts (window start indices)
    Eigen::MatrixXd dists_sq; // K x N attained squared distances
    BoolMatrix dists_admissible;  // false where dists_sq holds a penalty value
    std::vector<Center> centers;
    std::vector<double> objective_trace;
    int iter = 0;
    bool converged = false;
    Eigen::MatrixXi cleaned_P;  // 0/1; empty until cleaning has run
    Diagnostics diag;

    int K() const { return static_cast<int>(P.rows()); }
    int N() const { return static_cast<int>(P.cols()); }
};

// Eq-1 style objective recomputed from scratch at the state's (P, S, centers).
double objective(const CurveSet& cs, const ProbKmaState& st, const ProbKmaParams& p);
double objective_k(const CurveSet& cs, const ProbKmaState& st, const ProbKmaParams& p, int k);

// Seeded initial state: random admissible shifts, Dirichlet memberships,
// centers from the weighted-average update.
ProbKmaState initialize(const CurveSet& cs, const ProbKmaParams& p);

// Gap-aware weighted-average center update at the state's (P, S).
std::vector<Center> update_centers(const CurveSet& cs, const ProbKmaState& st,
                                   const ProbKmaParams& p);

// Best-shift alignment of every curve against every center; updates S,
// dists_sq and the admissibility mask in place.
void align(const CurveSet& cs, ProbKmaState& st, const ProbKmaParams& p);

// Optimal memberships for fixed squared distances.
Eigen::MatrixXd update_memberships(const Eigen::MatrixXd& dists_sq, double m);

double bhattacharyya_k(const Eigen::VectorXd& p_new, const Eigen::VectorXd& p_old);

double stopping_distance(const Eigen::MatrixXd& P_new, const Eigen::MatrixXd& P_old,
                         BcAggregation agg, double q = 0.5);

// One elongation round for cluster k; returns true if the center changed.
bool elongate(const CurveSet& cs, ProbKmaState& st, const ProbKmaParams& p, int k);

// Dichotomize memberships by the order-1/K quantile of all distances.
Eigen::MatrixXi clean(const Eigen::MatrixXd& dists_sq);

ProbKmaState run(const CurveSet& cs, const ProbKmaParams& p);

nlohmann::json state_to_json(const ProbKmaState& st, const CurveSet& cs, const ProbKmaParams& p);
struct StateBundle {
    ProbKmaState state;
    ProbKmaParams params;
    std::vector<std::string> curve_ids;
};
StateBundle state_from_json(const nlohmann::json& j);

}  // namespace motif
