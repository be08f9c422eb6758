#include "motif/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motif {

double quantile_type1(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty sample");
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("quantile order must be in (0,1]");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<long>(values.size());
    long idx = static_cast<long>(std::ceil(q * static_cast<double>(n) - 1e-12));
    if (idx < 1) idx = 1;
    if (idx > n) idx = n;
    return values[idx - 1];
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sd_of(const std::vector<double>& values) {
    const double m = mean_of(values);
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size()));
}

}  // namespace motif
