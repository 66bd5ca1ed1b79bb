#pragma once

#include <cstdint>
#include <string>

#include "tlab/constraints.hpp"
#include "tlab/rng.hpp"
#include "tlab/stats.hpp"

namespace tlab {

// QEMPTY(f): probability that the chain Q_0 = q0, Q_{i+1} = Q_i - 1 +
// Poisson(f(i+1)) ever reaches 0.

// Rate schedule f. Either a constant, or the scaled cell polynomial
// scale * P_2(j) with scale = c * k!/delta_k; P_2 comes from a constraint
// set's stats. sum() gives an exact partial sum of f over a step range so
// runs can aggregate many arrivals into one Poisson draw.
class RateFunction {
public:
    static RateFunction constant(double lambda);
    static RateFunction poly_p2(double c, const ConstraintSet& s);

    double value(std::int64_t step) const; // step >= 1
    double sum(std::int64_t from, std::int64_t to) const; // inclusive

    bool is_constant() const { return kind_ == Kind::Constant; }
    double constant_lambda() const;
    std::string describe() const;

private:
    enum class Kind { Constant, PolyP2 };
    Kind kind_ = Kind::Constant;
    double lambda_ = 0.0;
    double scale_ = 0.0;
    ConstraintStats stats_;
};

// CLI grammar: "const:LAMBDA" or "polyP:c,k,delta,SETFILE". The stated k
// and delta must match the stats computed from the file.
RateFunction parse_rate_spec(const std::string& spec);

struct QemptyEstimate {
    double estimate = 0.0;
    Interval ci95;
    std::int64_t trials = 0;
    std::int64_t horizon = 0;
    std::int64_t initial_queue = 1;
    std::int64_t emptied = 0;
};

// One chain; true if it reaches 0 within the horizon. Whenever the queue
// cannot hit zero for the next B steps (B <= Q - 1) the B arrivals are
// drawn as a single Poisson with the summed rate, which leaves the hit
// indicator exactly distributed while making supercritical runs
// logarithmic in the horizon.
bool queue_run_empties(const RateFunction& f, std::int64_t horizon, std::int64_t q0, Rng& rng);

QemptyEstimate qempty_mc(const RateFunction& f, std::int64_t trials, std::int64_t horizon,
                         std::int64_t q0, std::uint64_t seed, int jobs = 1);

// Smallest nonnegative root of s = e^{lambda(s-1)}; equals 1 for
// lambda <= 1. Independent of the chain simulation.
double qempty_fixed_rate(double lambda);

} // namespace tlab
