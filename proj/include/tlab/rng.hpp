#pragma once
/*
 * Deterministic random number layer.
 *
 * All randomness in the library flows through Rng so that a (seed, trial
 * index) pair fully determines every sampled object on every platform.
 * std::mt19937_64 is bit-exact across implementations; the distribution
 * helpers below are hand-rolled because the std::*_distribution classes
 * are implementation-defined and would break cross-platform runs.
 */

#include <cstdint>
#include <random>
#include <vector>

namespace tlab {

// Stream splitter: maps a master seed and a stream index to an independent
// seed. SplitMix64 finalizer over master + index * golden gamma; bijective
// in the index for any fixed master, so distinct indices never collide.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound), bound >= 1. Rejection against the
    // largest multiple of bound, so the result is exactly uniform.
    std::uint64_t below(std::uint64_t bound);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    bool bernoulli(double p) { return uniform01() < p; }

    // Poisson(lambda). Sequential CDF inversion below lambda = 10, the
    // transformed-rejection method (PTRD) above; both consume only
    // uniform01() draws.
    std::int64_t poisson(double lambda);

    // Binomial(n, p), exact. Sequential inversion on a chunk; n is split
    // recursively while n*p is large enough to underflow the pmf at 0.
    std::int64_t binomial(std::int64_t n, double p);

    // k distinct values from [0, n), ascending.
    std::vector<std::int32_t> distinct(std::int32_t n, std::int32_t k);

private:
    std::int64_t poisson_inversion(double lambda);
    std::int64_t poisson_ptrd(double lambda);
    std::int64_t binomial_inversion(std::int64_t n, double p);

    std::mt19937_64 engine_;
};

} // namespace tlab
