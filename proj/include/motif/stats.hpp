#pragma once

#include <vector>

namespace motif {

// Type-1 empirical quantile (inverse CDF): Q(q) = x_(ceil(q*n)) on the sorted
// sample, 1-based, q in (0,1]. This convention is used everywhere a quantile
// appears so results are bit-reproducible.
double quantile_type1(std::vector<double> values, double q);

double mean_of(const std::vector<double>& values);

// population standard deviation (N denominator)
double sd_of(const std::vector<double>& values);

}  // namespace motif
