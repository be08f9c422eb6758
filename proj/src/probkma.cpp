#include "motif/probkma.hpp"

#include "motif/stats.hpp"
#include "motif/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace motif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPenaltyFactor = 10.0;

// admissibility of a curve window on its own support (used before any center exists)
bool portion_admissible(const Track& t, int start, int len, const DistanceParams& p) {
    const int n = t.points();
    int n_lvl = 0, n_der = 0;
    for (int i = 0; i < len; ++i) {
        const int u = start + i;
        if (u < 0 || u >= n) continue;
        if (t.valid[u]) ++n_lvl;
        if (t.deriv_valid[u]) ++n_der;
    }
    if (n_lvl < min_overlap_points(len, p.overlap_floor)) return false;
    if (p.alpha > 0.0 && (n_lvl < 2 || n_der < 1)) return false;
    return true;
}

// squared distances of every curve against one center at fixed shifts
void distance_row(const CurveSet& cs, const Center& center, const Eigen::VectorXi& shifts,
                  const DistanceParams& p, Eigen::VectorXd& out, std::vector<bool>& admissible) {
    const int n = cs.size();
    out.resize(n);
    admissible.assign(n, false);
    for (int i = 0; i < n; ++i) {
        auto dsq = d_alpha_sq(cs.curves[i].track, shifts[i], center.track, 0, center.length(), p);
        if (dsq) {
            out[i] = *dsq;
            admissible[i] = true;
        } else {
            out[i] = kNaN;
        }
    }
}

// Inadmissible entries take 10x the largest admissible distance in scope, so
// memberships head to zero without infinities.
void apply_penalty(Eigen::VectorXd& row, const std::vector<bool>& admissible, double scope_max) {
    double mx = scope_max;
    for (int i = 0; i < row.size(); ++i)
        if (admissible[i] && row[i] > mx) mx = row[i];
    const double penalty = mx > 0.0 ? kPenaltyFactor * mx : 1.0;
    for (int i = 0; i < row.size(); ++i)
        if (!admissible[i]) row[i] = penalty;
}

double max_admissible(const Eigen::MatrixXd& dists, const BoolMatrix& mask) {
    double mx = 0.0;
    for (int k = 0; k < dists.rows(); ++k)
        for (int i = 0; i < dists.cols(); ++i)
            if (mask(k, i) && dists(k, i) > mx) mx = dists(k, i);
    return mx;
}

// Eq-12 style center of length `len` for one cluster: pointwise weighted
// average of shifted curves with weights p^m scaled by the inverse size of
// each curve's overlap with the center window. The derivative track uses its
// own overlap counts so the update stays the exact minimizer of the
// discretized objective.
Center build_center(const CurveSet& cs, const Eigen::VectorXd& p_row,
                    const Eigen::VectorXi& shifts, int len, double m) {
    const int d = cs.dims();
    const int n = cs.size();
    Eigen::MatrixXd num_val = Eigen::MatrixXd::Zero(len, d);
    Eigen::VectorXd den_val = Eigen::VectorXd::Zero(len);
    Eigen::MatrixXd num_der = Eigen::MatrixXd::Zero(len, d);
    Eigen::VectorXd den_der = Eigen::VectorXd::Zero(len);

    for (int i = 0; i < n; ++i) {
        const double pm = std::pow(p_row[i], m);
        if (pm <= 0.0) continue;
        const Track& t = cs.curves[i].track;
        const int np = t.points();
        const int s = shifts[i];
        int cnt_val = 0, cnt_der = 0;
        for (int u = 0; u < len; ++u) {
            const int v = s + u;
            if (v < 0 || v >= np) continue;
            if (t.valid[v]) ++cnt_val;
            if (t.deriv_valid[v]) ++cnt_der;
        }
        if (cnt_val > 0) {
            const double w = pm / cnt_val;
            for (int u = 0; u < len; ++u) {
                const int v = s + u;
                if (v < 0 || v >= np || !t.valid[v]) continue;
                num_val.row(u) += w * t.values.row(v);
                den_val[u] += w;
            }
        }
        if (cnt_der > 0) {
            const double w = pm / cnt_der;
            for (int u = 0; u < len; ++u) {
                const int v = s + u;
                if (v < 0 || v >= np || !t.deriv_valid[v]) continue;
                num_der.row(u) += w * t.deriv.row(v);
                den_der[u] += w;
            }
        }
    }

    Center c;
    c.track.values = Eigen::MatrixXd::Constant(len, d, kNaN);
    c.track.deriv = Eigen::MatrixXd::Constant(len, d, kNaN);
    c.track.valid = BoolArray::Constant(len, false);
    c.track.deriv_valid = BoolArray::Constant(len, false);
    for (int u = 0; u < len; ++u) {
        if (den_val[u] > 0.0) {
            c.track.values.row(u) = num_val.row(u) / den_val[u];
            c.track.valid[u] = true;
        }
        if (den_der[u] > 0.0) {
            c.track.deriv.row(u) = num_der.row(u) / den_der[u];
            c.track.deriv_valid[u] = true;
        }
    }
    return c;
}

double objective_row(const Eigen::VectorXd& p_row, const Eigen::VectorXd& dsq_row, double m) {
    double s = 0.0;
    for (int i = 0; i < p_row.size(); ++i) s += std::pow(p_row[i], m) * dsq_row[i];
    return s;
}

// worst-served curve window: the aligned window whose best distance to any
// center is largest; used to re-seed a dead cluster
std::pair<int, int> worst_served_window(const ProbKmaState& st) {
    int worst_i = 0, worst_k = 0;
    double worst = -1.0;
    for (int i = 0; i < st.N(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (int k = 0; k < st.K(); ++k) {
            if (st.dists_sq(k, i) < best) {
                best = st.dists_sq(k, i);
                best_k = k;
            }
        }
        if (best > worst) {
            worst = best;
            worst_i = i;
            worst_k = best_k;
        }
    }
    return {worst_i, worst_k};
}

void reseed_cluster(const CurveSet& cs, ProbKmaState& st, const ProbKmaParams& p, int k) {
    auto [i, src_k] = worst_served_window(st);
    const int len = st.centers[k].length();
    const int start = st.S(src_k, i);
    Center c;
    c.track = window_track(cs.curves[i].track, start, len);
    st.centers[k] = std::move(c);
    st.S(k, i) = start;
    // refresh the whole row against the new center
    Eigen::VectorXd row;
    std::vector<bool> adm;
    distance_row(cs, st.centers[k], st.S.row(k).transpose(), p.dist, row, adm);
    apply_penalty(row, adm, 0.0);
    st.dists_sq.row(k) = row.transpose();
    for (int j = 0; j < st.N(); ++j) st.dists_admissible(k, j) = adm[j];
    st.diag.reseed_count += 1;
}

}  // namespace

void ProbKmaParams::validate() const {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    if (static_cast<int>(c_min.size()) != K)
        throw std::invalid_argument("c_min must have one length per cluster");
    for (int c : c_min) {
        if (c < 2) throw std::invalid_argument("center lengths must be >= 2");
        if (c > c_max) throw std::invalid_argument("c_min must not exceed c_max");
    }
    if (m <= 1.0) throw std::invalid_argument("m must be > 1");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (elongation_step_frac <= 0.0 || elongation_step_frac > 1.0)
        throw std::invalid_argument("elongation_step_frac must be in (0,1]");
    if (delta_jmk_frac < 0.0) throw std::invalid_argument("delta_jmk_frac must be >= 0");
    if (cleaning_trigger <= 0.0) throw std::invalid_argument("cleaning_trigger must be positive");
    if (bc_aggregation == BcAggregation::quantile && (bc_quantile <= 0.0 || bc_quantile >= 1.0))
        throw std::invalid_argument("bc quantile order must be in (0,1)");
}

double objective(const CurveSet& cs, const ProbKmaState& st, const ProbKmaParams& p) {
    double total = 0.0;
    for (int k = 0; k < st.K(); ++k) total += objective_k(cs, st, p, k);
    return total;
}

double objective_k(const CurveSet& cs, const ProbKmaState& st, const ProbKmaParams& p, int k) {
    if (k < 0 || k >= st.K()) throw std::out_of_range("cluster index");
    Eigen::VectorXd row;
    std::vector<bool> adm;
    distance_row(cs, st.centers[k], st.S.row(k).transpose(), p.dist, row, adm);
    apply_penalty(row, adm, max_admissible(st.dists_sq, st.dists_admissible));
    return objective_row(st.P.row(k).transpose(), row, p.m);
}

ProbKmaState initialize(const CurveSet& cs, const ProbKmaParams& p) {
    p.validate();
    p.dist.validate(cs.dims());
    const int K = p.K;
    const int N = cs.size();
    if (N == 0) throw std::invalid_argument("empty curve set");

    Rng rng(derive_seed(p.seed, 0x696e6974));  // dedicated init stream

    ProbKmaState st;
    st.S.resize(K, N);
    st.P.resize(K, N);
    st.dists_sq = Eigen::MatrixXd::Zero(K, N);
    st.dists_admissible = BoolMatrix::Constant(K, N, true);

    // shifts first (cluster-major), then membership columns: the draw order
    // is part of the determinism contract
    for (int k = 0; k < K; ++k) {
        const int len = p.c_min[k];
        for (int i = 0; i < N; ++i) {
            const Track& t = cs.curves[i].track;
            std::vector<int> starts;
            for (int s = 0; s + len <= t.points(); ++s)
                if (portion_admissible(t, s, len, p.dist)) starts.push_back(s);
            if (starts.empty())
                throw std::invalid_argument("curve '" + cs.curves[i].id +
                                            "' has no admissible window of length " +
                                            std::to_string(len));
            st.S(k, i) = starts[rng.uniform_int(static_cast<std::int64_t>(starts.size()))];
        }
    }
    for (int i = 0; i < N; ++i) st.P.col(i) = rng.simplex_uniform(K);

    st.centers = update_centers(cs, st, p);
    return st;
}

std::vector<Center> update_centers(const CurveSet& cs, const ProbKmaState& st,
                                   const ProbKmaParams& p) {
    std::vector<Center> centers(st.K());
    for (int k = 0; k < st.K(); ++k) {
        const int len = st.centers.empty() ? p.c_min[k] : st.centers[k].length();
        centers[k] = build_center(cs, st.P.row(k).transpose(), st.S.row(k).transpose(), len, p.m);
    }
    return centers;
}

void align(const CurveSet& cs, ProbKmaState& st, const ProbKmaParams& p) {
    const int K = st.K();
    const int N = st.N();
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < N; ++i) {
            auto prof = distance_profile(cs.curves[i].track, st.centers[k].track, p.dist);
            auto best = best_shift(prof);
            if (best) {
                st.S(k, i) = best->shift;
                st.dists_sq(k, i) = best->dist_sq;
                st.dists_admissible(k, i) = true;
            } else {
                // no admissible placement: keep the previous shift, mark for penalty
                st.dists_sq(k, i) = kNaN;
                st.dists_admissible(k, i) = false;
            }
        }
    }
    const double mx = max_admissible(st.dists_sq, st.dists_admissible);
    const double penalty = mx > 0.0 ? kPenaltyFactor * mx : 1.0;
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < N; ++i)
            if (!st.dists_admissible(k, i)) st.dists_sq(k, i) = penalty;
}

Eigen::MatrixXd update_memberships(const Eigen::MatrixXd& dists_sq, double m) {
    if (m <= 1.0) throw std::invalid_argument("m must be > 1");
    if ((dists_sq.array() < 0.0).any())
        throw std::invalid_argument("squared distances must be nonnegative");
    const int K = static_cast<int>(dists_sq.rows());
    const int N = static_cast<int>(dists_sq.cols());
    Eigen::MatrixXd P(K, N);
    const double expo = 1.0 / (m - 1.0);
    for (int i = 0; i < N; ++i) {
        int zeros = 0;
        double dmin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
            if (dists_sq(k, i) == 0.0) ++zeros;
            dmin = std::min(dmin, dists_sq(k, i));
        }
        if (zeros > 0) {
            // canonical member of the zero-distance minimizer set: uniform
            // over the zero-distance clusters
            for (int k = 0; k < K; ++k) P(k, i) = dists_sq(k, i) == 0.0 ? 1.0 / zeros : 0.0;
            continue;
        }
        // p_k = (dmin/d_k)^e / sum_l (dmin/d_l)^e -- ratios stay in (0,1]
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            P(k, i) = std::pow(dmin / dists_sq(k, i), expo);
            sum += P(k, i);
        }
        P.col(i) /= sum;
    }
    return P;
}

double bhattacharyya_k(const Eigen::VectorXd& p_new, const Eigen::VectorXd& p_old) {
    if (p_new.size() != p_old.size()) throw std::invalid_argument("size mismatch");
    if ((p_new.array() < 0.0).any() || (p_old.array() < 0.0).any())
        throw std::invalid_argument("membership vectors must be nonnegative");
    const double sn = p_new.sum();
    const double so = p_old.sum();
    if (sn <= 0.0 || so <= 0.0)
        throw std::invalid_argument("degenerate cluster: all-zero membership row");
    double coef = 0.0;
    for (int i = 0; i < p_new.size(); ++i) coef += std::sqrt((p_new[i] / sn) * (p_old[i] / so));
    double bc = -std::log(std::max(coef, 1e-300));
    return bc < 0.0 ? 0.0 : bc;
}

double stopping_distance(const Eigen::MatrixXd& P_new, const Eigen::MatrixXd& P_old,
                         BcAggregation agg, double q) {
    if (P_new.rows() != P_old.rows() || P_new.cols() != P_old.cols())
        throw std::invalid_argument("membership matrices differ in shape");
    std::vector<double> bc;
    bc.reserve(P_new.rows());
    for (int k = 0; k < P_new.rows(); ++k)
        bc.push_back(bhattacharyya_k(P_new.row(k).transpose(), P_old.row(k).transpose()));
    switch (agg) {
        case BcAggregation::max: {
            double mx = 0.0;
            for (double v : bc) mx = std::max(mx, v);
            return mx;
        }
        case BcAggregation::mean:
            return mean_of(bc);
        case BcAggregation::quantile:
            return quantile_type1(bc, q);
    }
    throw std::logic_error("unreachable");
}

bool elongate(const CurveSet& cs, ProbKmaState& st, const ProbKmaParams& p, int k) {
    bool changed = false;
    for (int attempt = 0; attempt < p.elongation_max_tries; ++attempt) {
        const int len = st.centers[k].length();
        if (len >= p.c_max) break;
        const int delta =
            std::max(1, static_cast<int>(std::lround(p.elongation_step_frac * len)));
        const double j_old = objective_row(st.P.row(k).transpose(), st.dists_sq.row(k).transpose(), p.m);
        const double scope_max = max_admissible(st.dists_sq, st.dists_admissible);

        struct Candidate {
            Center center;
            Eigen::VectorXi shifts;
            Eigen::VectorXd dsq;
            std::vector<bool> adm;
            double j = 0.0;
        };
        std::optional<Candidate> best;

        const std::pair<int, int> sides[3] = {{delta, 0}, {0, delta}, {delta, delta}};
        for (auto [dl, dr] : sides) {
            const int new_len = len + dl + dr;
            if (new_len > p.c_max) continue;
            Candidate cand;
            cand.shifts = st.S.row(k).transpose();
            cand.shifts.array() -= dl;  // aligned points keep their correspondence
            cand.center = build_center(cs, st.P.row(k).transpose(), cand.shifts, new_len, p.m);
            distance_row(cs, cand.center, cand.shifts, p.dist, cand.dsq, cand.adm);
            apply_penalty(cand.dsq, cand.adm, scope_max);
            cand.j = objective_row(st.P.row(k).transpose(), cand.dsq, p.m);
            if (cand.j <= (1.0 + p.delta_jmk_frac) * j_old && (!best || cand.j < best->j))
                best = std::move(cand);
        }
        if (!best) break;
        st.centers[k] = std::move(best->center);
        st.S.row(k) = best->shifts.transpose();
        st.dists_sq.row(k) = best->dsq.transpose();
        for (int i = 0; i < st.N(); ++i) st.dists_admissible(k, i) = best->adm[i];
        changed = true;
    }
    return changed;
}

Eigen::MatrixXi clean(const Eigen::MatrixXd& dists_sq) {
    std::vector<double> all;
    all.reserve(dists_sq.size());
    for (int k = 0; k < dists_sq.rows(); ++k)
        for (int i = 0; i < dists_sq.cols(); ++i) all.push_back(dists_sq(k, i));
    const double threshold = quantile_type1(all, 1.0 / static_cast<double>(dists_sq.rows()));
    Eigen::MatrixXi out(dists_sq.rows(), dists_sq.cols());
    for (int k = 0; k < dists_sq.rows(); ++k)
        for (int i = 0; i < dists_sq.cols(); ++i)
            out(k, i) = dists_sq(k, i) <= threshold ? 1 : 0;
    return out;
}

ProbKmaState run(const CurveSet& cs, const ProbKmaParams& p) {
    ProbKmaState st = initialize(cs, p);
    Eigen::MatrixXd prev_P = st.P;

    for (int it = 1; it <= p.max_iter; ++it) {
        st.centers = update_centers(cs, st, p);
        align(cs, st, p);
        Eigen::MatrixXd new_P = update_memberships(st.dists_sq, p.m);

        for (int k = 0; k < st.K(); ++k) {
            if (new_P.row(k).sum() > 0.0) continue;
            st.diag.exempt_trace_steps.insert(static_cast<int>(st.objective_trace.size()));
            reseed_cluster(cs, st, p, k);
            new_P = update_memberships(st.dists_sq, p.m);
        }

        const double bc = stopping_distance(new_P, prev_P, p.bc_aggregation, p.bc_quantile);
        st.P = new_P;
        double j = 0.0;
        for (int k = 0; k < st.K(); ++k) j += objective_row(st.P.row(k).transpose(), st.dists_sq.row(k).transpose(), p.m);
        st.objective_trace.push_back(j);
        st.iter = it;

        bool grew = false;
        if (bc < p.cleaning_trigger * p.tol) {
            for (int k = 0; k < st.K(); ++k) grew |= elongate(cs, st, p, k);
            st.cleaned_P = clean(st.dists_sq);
            if (grew) {
                st.diag.exempt_trace_steps.insert(static_cast<int>(st.objective_trace.size()));
                st.diag.elongation_iters.push_back(it);
            }
        }
        if (!grew && bc < p.tol) {
            st.converged = true;
            break;
        }
        prev_P = st.P;
    }

    st.cleaned_P = clean(st.dists_sq);
    return st;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) {
            double v = m(r, c);
            if (std::isnan(v))
                row.push_back(nullptr);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = j.at(r).at(c).is_null() ? kNaN : j.at(r).at(c).get<double>();
    return m;
}

nlohmann::json center_to_json(const Center& c) {
    nlohmann::json j;
    j["length"] = c.length();
    j["values"] = matrix_to_json(c.track.values);
    j["deriv"] = matrix_to_json(c.track.deriv);
    nlohmann::json defined = nlohmann::json::array();
    nlohmann::json dd = nlohmann::json::array();
    for (int i = 0; i < c.length(); ++i) {
        defined.push_back(static_cast<int>(c.track.valid[i]));
        dd.push_back(static_cast<int>(c.track.deriv_valid[i]));
    }
    j["defined"] = std::move(defined);
    j["deriv_defined"] = std::move(dd);
    return j;
}

Center center_from_json(const nlohmann::json& j) {
    Center c;
    c.track.values = matrix_from_json(j.at("values"));
    c.track.deriv = matrix_from_json(j.at("deriv"));
    const int n = c.track.points();
    c.track.valid = BoolArray::Constant(n, false);
    c.track.deriv_valid = BoolArray::Constant(n, false);
    for (int i = 0; i < n; ++i) {
        c.track.valid[i] = j.at("defined").at(i).get<int>() != 0;
        c.track.deriv_valid[i] = j.at("deriv_defined").at(i).get<int>() != 0;
    }
    return c;
}

nlohmann::json params_to_json(const ProbKmaParams& p) {
    nlohmann::json j;
    j["K"] = p.K;
    j["c_min"] = p.c_min;
    j["c_max"] = p.c_max;
    j["m"] = p.m;
    j["alpha"] = p.dist.alpha;
    j["weights"] = std::vector<double>(p.dist.weights.data(),
                                       p.dist.weights.data() + p.dist.weights.size());
    j["overlap_floor"] = p.dist.overlap_floor;
    j["tol"] = p.tol;
    j["max_iter"] = p.max_iter;
    switch (p.bc_aggregation) {
        case BcAggregation::max: j["bc_aggregation"] = "max"; break;
        case BcAggregation::mean: j["bc_aggregation"] = "mean"; break;
        case BcAggregation::quantile: j["bc_aggregation"] = "quantile"; break;
    }
    j["bc_quantile"] = p.bc_quantile;
    j["elongation_step_frac"] = p.elongation_step_frac;
    j["elongation_max_tries"] = p.elongation_max_tries;
    j["delta_jmk_frac"] = p.delta_jmk_frac;
    j["cleaning_trigger"] = p.cleaning_trigger;
    j["seed"] = p.seed;
    return j;
}

ProbKmaParams params_from_json(const nlohmann::json& j) {
    ProbKmaParams p;
    p.K = j.at("K").get<int>();
    p.c_min = j.at("c_min").get<std::vector<int>>();
    p.c_max = j.at("c_max").get<int>();
    p.m = j.at("m").get<double>();
    p.dist.alpha = j.at("alpha").get<double>();
    auto w = j.at("weights").get<std::vector<double>>();
    p.dist.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<long>(w.size()));
    p.dist.overlap_floor = j.at("overlap_floor").get<double>();
    p.tol = j.at("tol").get<double>();
    p.max_iter = j.at("max_iter").get<int>();
    const std::string agg = j.at("bc_aggregation").get<std::string>();
    p.bc_aggregation = agg == "max"    ? BcAggregation::max
                       : agg == "mean" ? BcAggregation::mean
                                       : BcAggregation::quantile;
    p.bc_quantile = j.at("bc_quantile").get<double>();
    p.elongation_step_frac = j.at("elongation_step_frac").get<double>();
    p.elongation_max_tries = j.at("elongation_max_tries").get<int>();
    p.delta_jmk_frac = j.at("delta_jmk_frac").get<double>();
    p.cleaning_trigger = j.at("cleaning_trigger").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

}  // namespace

nlohmann::json state_to_json(const ProbKmaState& st, const CurveSet& cs, const ProbKmaParams& p) {
    nlohmann::json j;
    j["params"] = params_to_json(p);
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& c : cs.curves) ids.push_back(c.id);
    j["curve_ids"] = std::move(ids);
    j["P"] = matrix_to_json(st.P);
    nlohmann::json S = nlohmann::json::array();
    for (int k = 0; k < st.K(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < st.N(); ++i) row.push_back(st.S(k, i));
        S.push_back(std::move(row));
    }
    j["S"] = std::move(S);
    j["dists_sq"] = matrix_to_json(st.dists_sq);
    nlohmann::json centers = nlohmann::json::array();
    for (const auto& c : st.centers) centers.push_back(center_to_json(c));
    j["centers"] = std::move(centers);
    j["objective_trace"] = st.objective_trace;
    j["iter"] = st.iter;
    j["converged"] = st.converged;
    if (st.cleaned_P.size() > 0) {
        nlohmann::json cp = nlohmann::json::array();
        for (int k = 0; k < st.cleaned_P.rows(); ++k) {
            nlohmann::json row = nlohmann::json::array();
            for (int i = 0; i < st.cleaned_P.cols(); ++i) row.push_back(st.cleaned_P(k, i));
            cp.push_back(std::move(row));
        }
        j["cleaned_P"] = std::move(cp);
    }
    j["diagnostics"] = {{"reseed_count", st.diag.reseed_count},
                        {"elongation_iters", st.diag.elongation_iters},
                        {"exempt_trace_steps",
                         std::vector<int>(st.diag.exempt_trace_steps.begin(),
                                          st.diag.exempt_trace_steps.end())}};
    return j;
}

StateBundle state_from_json(const nlohmann::json& j) {
    StateBundle b;
    b.params = params_from_json(j.at("params"));
    b.curve_ids = j.at("curve_ids").get<std::vector<std::string>>();
    ProbKmaState& st = b.state;
    st.P = matrix_from_json(j.at("P"));
    const auto& S = j.at("S");
    st.S.resize(st.P.rows(), st.P.cols());
    for (int k = 0; k < st.S.rows(); ++k)
        for (int i = 0; i < st.S.cols(); ++i) st.S(k, i) = S.at(k).at(i).get<int>();
    st.dists_sq = matrix_from_json(j.at("dists_sq"));
    st.dists_admissible = BoolMatrix::Constant(st.P.rows(), st.P.cols(), true);
    for (const auto& jc : j.at("centers")) st.centers.push_back(center_from_json(jc));
    st.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    st.iter = j.at("iter").get<int>();
    st.converged = j.at("converged").get<bool>();
    if (j.contains("cleaned_P")) {
        const auto& cp = j.at("cleaned_P");
        st.cleaned_P.resize(st.P.rows(), st.P.cols());
        for (int k = 0; k < st.cleaned_P.rows(); ++k)
            for (int i = 0; i < st.cleaned_P.cols(); ++i)
                st.cleaned_P(k, i) = cp.at(k).at(i).get<int>();
    }
    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        st.diag.reseed_count = d.value("reseed_count", 0);
        st.diag.elongation_iters = d.value("elongation_iters", std::vector<int>{});
        for (int v : d.value("exempt_trace_steps", std::vector<int>{}))
            st.diag.exempt_trace_steps.insert(v);
    }
    return b;
}

}  // namespace motif
