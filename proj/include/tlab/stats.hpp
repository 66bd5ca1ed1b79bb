#pragma once

#include <cstdint>

namespace tlab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool entirely_above(double x) const { return lo > x; }
    bool entirely_below(double x) const { return hi < x; }
};

// Wilson score interval for a binomial proportion at 95% confidence.
Interval wilson95(std::int64_t successes, std::int64_t trials);

} // namespace tlab
