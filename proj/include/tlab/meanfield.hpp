#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tlab/constraints.hpp"

namespace tlab {

// Mean-field trajectory of the clause cell counts under unit rounds.
//
// Stage t counts down from n, one variable assigned per step.  The state
// tracks normalized weights x_{i,t} (one-positive cells) and y_{i,t}
// (all-negative cells); expected counts are recovered as
//
//   E[P_{i,t}] = i * C(t,i) * x_{i,t},    E[N_{i,t}] = C(t,i) * y_{i,t}.
//
// With that normalization the step is the pure shift
//
//   x_{i,t-1} = x_{i,t} + x_{i+1,t}
//
// (same for y), so after c steps x_{i,n-c} = sum_j C(c, j-i) x_{j,n}.
// Everything is kept in exact rational arithmetic; the recurrence and the
// closed form must agree bit for bit.

using Rational = boost::multiprecision::cpp_rational;

struct MeanFieldState {
    std::int32_t n = 0;
    std::int64_t m = 0;
    std::int32_t k = 0;
    std::int32_t stage_count = 0;
    Rational alpha; // m / universe_size
    // Indexed [c][i] with c = n - t in [0, stage_count], i in [1, k].
    std::vector<std::vector<Rational>> x, y;

    const Rational& x_at(std::int32_t i, std::int32_t t) const;
    const Rational& y_at(std::int32_t i, std::int32_t t) const;
    Rational predicted_p(std::int32_t i, std::int32_t t) const;
    Rational predicted_n(std::int32_t i, std::int32_t t) const;
};

// Runs the recurrence from the exact stage-n initialization
// x_{i,n} = p_i * m / U, y_{i,n} = n_i * m / U.
MeanFieldState mf_trajectory(const ConstraintSet& s, std::int32_t n, std::int64_t m,
                             std::int32_t stage_count);

// Binomial closed form for the same quantity, computed independently of
// the recurrence.
Rational mf_closed_form_x(const MeanFieldState& st, std::int32_t i, std::int32_t t);
Rational mf_closed_form_y(const MeanFieldState& st, std::int32_t i, std::int32_t t);

// One-step matrix A acting on (x_1, ..., x_k): identity plus upper shift,
// A[i][j] = [j == i] + [j == i + 1] (0-based).
std::vector<std::vector<std::uint64_t>> mf_step_matrix(std::int32_t k);

// P_i(c) = sum_{j >= i} C(c, j - i) * p_j: the limiting cell profile after
// c steps, up to one common scale factor. poly_q is the all-negative
// analogue over the n_j indicators.
std::uint64_t poly_p(const ConstraintStats& stats, std::int32_t i, std::int64_t c);
std::uint64_t poly_q(const ConstraintStats& stats, std::int32_t i, std::int64_t c);

// Exact rational binomial C(t, i); zero when i > t.
Rational rational_binom(std::int32_t t, std::int32_t i);

// Rows "t,i,predicted_P,predicted_N", stages descending.
std::string mf_to_csv(const MeanFieldState& st);

} // namespace tlab
