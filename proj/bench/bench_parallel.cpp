// Compares the serial trial loop against the OpenMP one on a realistic
// workload (pur on random Horn formulas) and checks that the reduced
// counts agree exactly.

#include <chrono>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <string>

#include "tlab/constraints.hpp"
#include "tlab/formula.hpp"
#include "tlab/parallel.hpp"
#include "tlab/solver.hpp"

namespace {

struct Hits {
    std::int64_t accepted = 0;
    std::int64_t clauses = 0;
    Hits& operator+=(const Hits& o) {
        accepted += o.accepted;
        clauses += o.clauses;
        return *this;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::int64_t trials = 20000;
    int jobs = tlab::default_jobs();
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--trials") && i + 1 < argc)
            trials = std::stoll(argv[++i]);
        else if (!std::strcmp(argv[i], "--jobs") && i + 1 < argc)
            jobs = std::stoi(argv[++i]);
    }

    tlab::ConstraintSet s = tlab::parse_constraint_set("0 1\n1 0\n1 1\n2 0\n");
    const std::int32_t n = 200;
    const std::int64_t m = 600;
    const std::uint64_t master = 20240601;

    auto body = [&](std::int64_t, tlab::Rng& rng, Hits& acc) {
        tlab::Formula f = tlab::sample_multiset(s, n, m, rng);
        tlab::PurResult r = tlab::pur(f, rng);
        if (r.outcome == tlab::PurOutcome::Accept) ++acc.accepted;
        acc.clauses += static_cast<std::int64_t>(f.clauses.size());
    };

    std::cout << "trials " << trials << ", n " << n << ", m " << m << ", jobs " << jobs << "\n";

    auto t0 = std::chrono::steady_clock::now();
    Hits serial = tlab::sum_over_trials_serial<Hits>(master, trials, body);
    double serial_s = seconds_since(t0);
    std::cout << "serial:   " << serial_s << " s, accepted " << serial.accepted << "\n";

    t0 = std::chrono::steady_clock::now();
    Hits parallel = tlab::sum_over_trials_parallel<Hits>(master, trials, jobs, body);
    double parallel_s = seconds_since(t0);
    std::cout << "parallel: " << parallel_s << " s, accepted " << parallel.accepted << "\n";

    if (serial.accepted != parallel.accepted || serial.clauses != parallel.clauses) {
        std::cout << "MISMATCH between serial and parallel counts\n";
        return 1;
    }
    std::cout << "counts identical, speedup x" << (parallel_s > 0 ? serial_s / parallel_s : 0.0)
              << "\n";
    return 0;
}
