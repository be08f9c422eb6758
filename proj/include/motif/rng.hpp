#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace motif {

// Mixes extra words into a base seed so that sub-streams (per run, per curve,
// per (K,c,init) cell) are independent and reproducible.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0, std::uint64_t b = 0,
                          std::uint64_t c = 0);

// Seeded random source. All variate transforms are implemented here rather
// than with std:: distributions, so a stream of draws is a pure function of
// the seed and the documented call order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(derive_seed(seed)) {}

    // uniform on [0, 1) with 53-bit resolution
    double uniform();
    // uniform on [lo, hi)
    double uniform(double lo, double hi);
    // uniform integer in [0, n)
    std::int64_t uniform_int(std::int64_t n);
    // standard normal (Box-Muller, one value per call, no caching)
    double gaussian();
    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }
    // Beta(a, b) via inverse-CDF of the regularized incomplete beta function
    double beta(double a, double b);
    // symmetric Dirichlet(1,...,1): uniform point on the K-simplex
    Eigen::VectorXd simplex_uniform(int k);

private:
    std::mt19937_64 engine_;
};

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (Lentz). Exposed for tests.
double incomplete_beta(double a, double b, double x);

}  // namespace motif
