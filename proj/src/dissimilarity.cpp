#include "motif/dissimilarity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace motif {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void DistanceParams::validate(int dims) const {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
    if (overlap_floor <= 0.0 || overlap_floor > 1.0)
        throw std::invalid_argument("overlap_floor must be in (0,1]");
    if (weights.size() != 0) {
        if (weights.size() != dims) throw std::invalid_argument("weights size must equal d");
        if ((weights.array() <= 0.0).any()) throw std::invalid_argument("weights must be positive");
    }
}

Eigen::VectorXd DistanceParams::effective_weights(int dims) const {
    if (weights.size() == 0) return Eigen::VectorXd::Ones(dims);
    return weights;
}

int min_overlap_points(int len, double overlap_floor) {
    // exact-threshold windows stay admissible despite rounding noise
    int k = static_cast<int>(std::ceil(overlap_floor * len - 1e-9));
    if (k < 1) k = 1;
    if (k > len) k = len;
    return k;
}

std::optional<double> d_alpha_sq(const Track& a, int a_start, const Track& b, int b_start,
                                 int len, const DistanceParams& p) {
    const int d = a.dims();
    if (b.dims() != d) throw std::invalid_argument("dimension mismatch");
    if (len < 1) throw std::invalid_argument("window length must be >= 1");
    const Eigen::VectorXd w = p.effective_weights(d);

    const int na = a.points();
    const int nb = b.points();
    Eigen::VectorXd lvl_ssq = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd der_ssq = Eigen::VectorXd::Zero(d);
    int n_lvl = 0;
    int n_der = 0;
    const bool use_deriv = p.alpha > 0.0;

    for (int t = 0; t < len; ++t) {
        const int u = a_start + t;
        const int v = b_start + t;
        const bool in_a = u >= 0 && u < na;
        const bool in_b = v >= 0 && v < nb;
        if (!in_a || !in_b) continue;
        if (a.valid[u] && b.valid[v]) {
            ++n_lvl;
            for (int j = 0; j < d; ++j) {
                const double diff = a.values(u, j) - b.values(v, j);
                lvl_ssq[j] += diff * diff;
            }
        }
        if (use_deriv && a.deriv_valid[u] && b.deriv_valid[v]) {
            ++n_der;
            for (int j = 0; j < d; ++j) {
                const double diff = a.deriv(u, j) - b.deriv(v, j);
                der_ssq[j] += diff * diff;
            }
        }
    }

    const int min_pts = min_overlap_points(len, p.overlap_floor);
    if (n_lvl < min_pts) return std::nullopt;
    if (use_deriv && (n_lvl < 2 || n_der < 1)) return std::nullopt;

    double out = 0.0;
    if (p.alpha < 1.0) out += (1.0 - p.alpha) * w.dot(lvl_ssq) / (d * n_lvl);
    if (use_deriv) out += p.alpha * w.dot(der_ssq) / (d * n_der);
    return out;
}

std::optional<double> d_alpha_sq(const Track& a, const Track& b, const DistanceParams& p) {
    if (a.points() != b.points()) throw std::invalid_argument("track lengths differ");
    return d_alpha_sq(a, 0, b, 0, a.points(), p);
}

std::optional<double> d_alpha_sq(const Portion& x, const Track& center, const DistanceParams& p) {
    if (x.length != center.points()) throw std::invalid_argument("portion/center length mismatch");
    return d_alpha_sq(x.curve->track, x.start, center, 0, x.length, p);
}

DistanceProfile distance_profile(const Track& curve, const Track& center, const DistanceParams& p) {
    const int n = curve.points();
    const int len = center.points();
    const int min_pts = min_overlap_points(len, p.overlap_floor);
    const int pad = len - min_pts;  // how far the center may hang off an end

    DistanceProfile profile;
    profile.first_shift = -pad;
    const int last_shift = n - len + pad;
    const int count = last_shift - profile.first_shift + 1;
    if (count < 1) {
        profile.dist_sq.resize(0);
        return profile;
    }
    profile.dist_sq = Eigen::VectorXd::Constant(count, kNaN);
    for (int i = 0; i < count; ++i) {
        auto dsq = d_alpha_sq(curve, profile.first_shift + i, center, 0, len, p);
        if (dsq) profile.dist_sq[i] = *dsq;
    }
    return profile;
}

std::optional<ShiftDist> best_shift(const DistanceProfile& profile) {
    int best = -1;
    for (int i = 0; i < profile.size(); ++i) {
        const double v = profile.dist_sq[i];
        if (std::isnan(v)) continue;
        if (best < 0 || v < profile.dist_sq[best]) best = i;
    }
    if (best < 0) return std::nullopt;
    return ShiftDist{profile.shift_at(best), profile.dist_sq[best]};
}

namespace {

double min_slide(const Track& a, const Track& b, const DistanceParams& p, bool allow_hang) {
    const Track& longer = a.points() >= b.points() ? a : b;
    const Track& shorter = a.points() >= b.points() ? b : a;
    double best = kNaN;
    if (allow_hang) {
        auto sd = best_shift(distance_profile(longer, shorter, p));
        if (sd) best = sd->dist_sq;
    } else {
        for (int s = 0; s + shorter.points() <= longer.points(); ++s) {
            auto dsq = d_alpha_sq(longer, s, shorter, 0, shorter.points(), p);
            if (dsq && (std::isnan(best) || *dsq < best)) best = *dsq;
        }
    }
    return std::isnan(best) ? best : std::sqrt(best);
}

}  // namespace

double min_slide_distance(const Track& a, const Track& b, const DistanceParams& p) {
    return min_slide(a, b, p, true);
}

double min_slide_distance_inside(const Track& a, const Track& b, const DistanceParams& p) {
    return min_slide(a, b, p, false);
}

}  // namespace motif
