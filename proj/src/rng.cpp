#include "tlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tlab {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + index * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    // Largest multiple of bound that fits in 64 bits.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::poisson(double lambda) {
    if (lambda < 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("Rng::poisson: rate must be finite and nonnegative");
    if (lambda == 0.0) return 0;
    return lambda < 10.0 ? poisson_inversion(lambda) : poisson_ptrd(lambda);
}

std::int64_t Rng::poisson_inversion(double lambda) {
    double p = std::exp(-lambda);
    double cum = p;
    double u = uniform01();
    std::int64_t k = 0;
    // e^-10 ~ 4.5e-5 keeps the running pmf well inside double range.
    while (u > cum) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cum += p;
        if (k > 2000) break;
    }
    return k;
}

namespace {

// ln k! by Stirling with two correction terms; exact table for k < 10.
double log_factorial(std::int64_t k) {
    static const double table[10] = {
        0.0, 0.0, 0.6931471805599453, 1.791759469228055, 3.1780538303479458,
        4.787491742782046, 6.579251212010101, 8.525161361065415,
        10.60460290274525, 12.801827480081469};
    if (k < 10) return table[k];
    double x = static_cast<double>(k);
    return (x + 0.5) * std::log(x) - x + 0.9189385332046727
         + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x);
}

} // namespace

// Hoermann's PTRD: transformed rejection with a uniform proposal, expected
// O(1) draws per variate for any lambda >= 10.
std::int64_t Rng::poisson_ptrd(double lambda) {
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);

    for (;;) {
        double u;
        double v = uniform01();
        if (v <= 0.86 * vr) {
            u = v / vr - 0.43;
            return static_cast<std::int64_t>(
                std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + lambda + 0.445));
        }
        if (v >= vr) {
            u = uniform01() - 0.5;
        } else {
            u = v / vr - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = uniform01() * vr;
        }
        double us = 0.5 - std::fabs(u);
        if (us < 0.013 && v > us) continue;
        double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.445);
        if (kf < 0.0) continue;
        std::int64_t k = static_cast<std::int64_t>(kf);
        v = v * inv_alpha / (a / (us * us) + b);
        if (std::log(v) <= kf * log_lambda - lambda - log_factorial(k))
            return k;
    }
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
    if (n < 0) throw std::invalid_argument("Rng::binomial: n must be nonnegative");
    if (p < 0.0 || p > 1.0 || !std::isfinite(p))
        throw std::invalid_argument("Rng::binomial: p must lie in [0, 1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);
    // Split into pieces with piece*p <= 500: pmf(0) = (1-p)^piece must not
    // underflow, and it sits above e^{-694} even at p = 1/2.
    std::int64_t total = 0;
    const auto piece = static_cast<std::int64_t>(500.0 / p);
    while (static_cast<double>(n) * p > 500.0) {
        total += binomial_inversion(piece, p);
        n -= piece;
    }
    return total + binomial_inversion(n, p);
}

std::int64_t Rng::binomial_inversion(std::int64_t n, double p) {
    const double q = 1.0 - p;
    const double ratio = p / q;
    double pmf = std::pow(q, static_cast<double>(n));
    double cum = pmf;
    double u = uniform01();
    std::int64_t k = 0;
    while (u > cum && k < n) {
        ++k;
        pmf *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cum += pmf;
    }
    return k;
}

std::vector<std::int32_t> Rng::distinct(std::int32_t n, std::int32_t k) {
    if (k < 0 || k > n) throw std::invalid_argument("Rng::distinct: need 0 <= k <= n");
    std::vector<std::int32_t> out;
    out.reserve(k);
    // Floyd's algorithm: k iterations, no retries, independent of n.
    for (std::int32_t j = n - k; j < n; ++j) {
        std::int32_t v = static_cast<std::int32_t>(below(static_cast<std::uint64_t>(j) + 1));
        if (std::find(out.begin(), out.end(), v) != out.end()) v = j;
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace tlab
