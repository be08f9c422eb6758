#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace motif {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Uniform sampling grid shared by all curves of a set.
struct Grid {
    double step = 1.0;
    double origin = 0.0;
};

// One sampled series: values and a derivative track plus validity masks.
// Gaps are whole-point: a missing point has every component missing, and the
// same rows of `values` and `deriv` are NaN wherever the masks are false.
struct Track {
    Eigen::MatrixXd values;  // n_points x d
    Eigen::MatrixXd deriv;   // n_points x d
    BoolArray valid;         // point has values
    BoolArray deriv_valid;   // point has a derivative estimate

    int points() const { return static_cast<int>(values.rows()); }
    int dims() const { return static_cast<int>(values.cols()); }
};

struct Curve {
    std::string id;
    Track track;

    int points() const { return track.points(); }
    int dims() const { return track.dims(); }
};

struct CurveSet {
    Grid grid;
    std::vector<Curve> curves;

    int dims() const { return curves.empty() ? 0 : curves.front().dims(); }
    int size() const { return static_cast<int>(curves.size()); }
    int index_of(const std::string& id) const;  // -1 if absent
};

// Zero-copy window into a curve. Construction enforces the window to lie
// inside the curve; distance code that slides beyond the ends goes through
// the offset-based kernels instead.
struct Portion {
    const Curve* curve = nullptr;
    int start = 0;
    int length = 0;

    auto values() const { return curve->track.values.middleRows(start, length); }
    auto deriv() const { return curve->track.deriv.middleRows(start, length); }
    auto valid() const { return curve->track.valid.segment(start, length); }
};

enum class CurveFormat { csv_long, json };

CurveSet load_curves(const std::string& path, CurveFormat format);
void save_curves(const CurveSet& cs, const std::string& path, CurveFormat format);

// Linear interpolation across interior gap runs of length <= max_gap.
CurveSet fill_small_gaps(CurveSet cs, int max_gap);

// Central differences at interior points with two valid neighbours,
// one-sided differences at segment edges, missing where no valid neighbour.
CurveSet estimate_derivatives(CurveSet cs);

Portion extract_portion(const Curve& c, int start, int length);

// Materialized window with out-of-range rows marked invalid (NaN values).
// `start` may be negative and `start + length` may exceed the curve.
Track window_track(const Track& t, int start, int length);

// Builds a Track from plain values: all points valid, derivatives absent.
Track make_track(const Eigen::MatrixXd& values);

}  // namespace motif
