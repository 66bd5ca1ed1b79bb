#pragma once
/*
 * Trial-loop harness.
 *
 * Monte Carlo experiments are embarrassingly parallel over trials. Each
 * trial gets its own Rng seeded by derive_seed(master, trial), and trial
 * bodies accumulate into integer-count structs merged with operator+=.
 * Integer addition commutes, so the reduced result is identical for any
 * thread count and schedule; --jobs N is bit-equal to --jobs 1 by
 * construction. The serial path is kept as the reference implementation
 * and the OpenMP kernel is checked against it in the tests and compared
 * in bench_parallel.
 */

#include <cstdint>
#include <cstdlib>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tlab/rng.hpp"

namespace tlab {

// Default job count: THRESHOLD_LAB_JOBS if set, else the OpenMP thread
// default, else 1.
inline int default_jobs() {
    if (const char* env = std::getenv("THRESHOLD_LAB_JOBS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Body signature: void(std::int64_t trial, Rng& rng, Counts& acc).
template <class Counts, class Body>
Counts sum_over_trials_serial(std::uint64_t master, std::int64_t trials, Body&& body) {
    Counts acc{};
    for (std::int64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(master, static_cast<std::uint64_t>(t)));
        body(t, rng, acc);
    }
    return acc;
}

template <class Counts, class Body>
Counts sum_over_trials_parallel(std::uint64_t master, std::int64_t trials, int jobs, Body&& body) {
#ifdef _OPENMP
    Counts acc{};
#pragma omp parallel num_threads(jobs)
    {
        Counts local{};
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t t = 0; t < trials; ++t) {
            Rng rng(derive_seed(master, static_cast<std::uint64_t>(t)));
            body(t, rng, local);
        }
#pragma omp critical
        acc += local;
    }
    return acc;
#else
    (void)jobs;
    return sum_over_trials_serial<Counts>(master, trials, std::forward<Body>(body));
#endif
}

template <class Counts, class Body>
Counts sum_over_trials(std::uint64_t master, std::int64_t trials, int jobs, Body&& body) {
    if (jobs <= 1) return sum_over_trials_serial<Counts>(master, trials, std::forward<Body>(body));
    return sum_over_trials_parallel<Counts>(master, trials, jobs, std::forward<Body>(body));
}

} // namespace tlab
