#include "motif/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace motif {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t x = base;
    std::uint64_t s = splitmix64(x);
    x ^= a + 0x9e3779b97f4a7c15ULL;
    s ^= splitmix64(x);
    x ^= b + 0x7f4a7c159e3779b9ULL;
    s ^= splitmix64(x);
    x ^= c + 0x2545f4914f6cdd1dULL;
    s ^= splitmix64(x);
    return s;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::int64_t Rng::uniform_int(std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    // rejection sampling to avoid modulo bias
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return static_cast<std::int64_t>(v % un);
}

double Rng::gaussian() {
    // Box-Muller; draws two uniforms per value, second coordinate discarded
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // continued fraction for I_x(a,b), modified Lentz
    auto betacf = [](double aa, double bb, double xx) {
        const int max_iter = 300;
        const double eps = 1e-15;
        const double fpmin = 1e-300;
        double qab = aa + bb;
        double qap = aa + 1.0;
        double qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::fabs(d) < fpmin) d = fpmin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= max_iter; ++m) {
            int m2 = 2 * m;
            double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            h *= d * c;
            num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < eps) break;
        }
        return h;
    };

    const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - ln_beta);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(b * std::log(1.0 - x) + a * std::log(x) - ln_beta) * betacf(b, a, 1.0 - x) / b;
}

double Rng::beta(double a, double b) {
    const double u = uniform();
    // invert I_x(a,b) = u by bisection; 80 halvings puts the root well below
    // double-precision spacing on [0,1]
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (incomplete_beta(a, b, mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Eigen::VectorXd Rng::simplex_uniform(int k) {
    if (k <= 0) throw std::invalid_argument("simplex_uniform: k must be positive");
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        v[i] = -std::log(u);
    }
    return v / v.sum();
}

}  // namespace motif
