#include "tlab/meanfield.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

#include "tlab/formula.hpp"

namespace tlab {

namespace {

void check_index(const MeanFieldState& st, std::int32_t i, std::int32_t t) {
    if (i < 1 || i > st.k) throw std::out_of_range("mean field: cell index out of range");
    if (t > st.n || t < st.n - st.stage_count)
        throw std::out_of_range("mean field: stage outside the computed trajectory");
}

} // namespace

const Rational& MeanFieldState::x_at(std::int32_t i, std::int32_t t) const {
    check_index(*this, i, t);
    return x[static_cast<std::size_t>(n - t)][static_cast<std::size_t>(i)];
}

const Rational& MeanFieldState::y_at(std::int32_t i, std::int32_t t) const {
    check_index(*this, i, t);
    return y[static_cast<std::size_t>(n - t)][static_cast<std::size_t>(i)];
}

Rational MeanFieldState::predicted_p(std::int32_t i, std::int32_t t) const {
    return i * rational_binom(t, i) * x_at(i, t);
}

Rational MeanFieldState::predicted_n(std::int32_t i, std::int32_t t) const {
    return rational_binom(t, i) * y_at(i, t);
}

MeanFieldState mf_trajectory(const ConstraintSet& s, std::int32_t n, std::int64_t m,
                             std::int32_t stage_count) {
    if (m < 0) throw std::invalid_argument("mean field: clause count must be nonnegative");
    if (stage_count < 0 || stage_count > n)
        throw std::invalid_argument("mean field: stage count must lie in [0, n]");
    ConstraintStats stats = compute_stats(s);
    Rational u = Rational(universe_size(s, n));

    MeanFieldState st;
    st.n = n;
    st.m = m;
    st.k = stats.k;
    st.stage_count = stage_count;
    st.alpha = Rational(m) / u;

    std::size_t cells = static_cast<std::size_t>(st.k) + 2; // slot k+1 stays zero
    st.x.assign(static_cast<std::size_t>(stage_count) + 1, std::vector<Rational>(cells, 0));
    st.y = st.x;
    for (std::int32_t i = 1; i <= st.k; ++i) {
        st.x[0][static_cast<std::size_t>(i)] = stats.p[static_cast<std::size_t>(i)] * st.alpha;
        st.y[0][static_cast<std::size_t>(i)] = stats.n[static_cast<std::size_t>(i)] * st.alpha;
    }
    for (std::int32_t c = 1; c <= stage_count; ++c) {
        auto sc = static_cast<std::size_t>(c);
        for (std::int32_t i = 1; i <= st.k; ++i) {
            auto si = static_cast<std::size_t>(i);
            st.x[sc][si] = st.x[sc - 1][si] + st.x[sc - 1][si + 1];
            st.y[sc][si] = st.y[sc - 1][si] + st.y[sc - 1][si + 1];
        }
    }
    return st;
}

namespace {

Rational closed_form(const std::vector<Rational>& start, std::int32_t k, std::int32_t i,
                     std::int32_t c) {
    Rational acc = 0;
    for (std::int32_t j = i; j <= k; ++j)
        acc += rational_binom(c, j - i) * start[static_cast<std::size_t>(j)];
    return acc;
}

} // namespace

Rational mf_closed_form_x(const MeanFieldState& st, std::int32_t i, std::int32_t t) {
    check_index(st, i, t);
    return closed_form(st.x[0], st.k, i, st.n - t);
}

Rational mf_closed_form_y(const MeanFieldState& st, std::int32_t i, std::int32_t t) {
    check_index(st, i, t);
    return closed_form(st.y[0], st.k, i, st.n - t);
}

std::vector<std::vector<std::uint64_t>> mf_step_matrix(std::int32_t k) {
    if (k < 1) throw std::invalid_argument("mean field: k must be positive");
    std::vector<std::vector<std::uint64_t>> a(static_cast<std::size_t>(k),
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(k), 0));
    for (std::int32_t i = 0; i < k; ++i) {
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        if (i + 1 < k) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] = 1;
    }
    return a;
}

namespace {

std::uint64_t poly_sum(const std::vector<int>& bits, std::int32_t k, std::int32_t i,
                       std::int64_t c, const char* who) {
    if (i < 1 || i > k) throw std::out_of_range(std::string(who) + ": cell index out of range");
    if (c < 0) throw std::invalid_argument(std::string(who) + ": step count must be nonnegative");
    std::uint64_t acc = 0;
    for (std::int32_t j = i; j <= k; ++j) {
        if (!bits[static_cast<std::size_t>(j)]) continue;
        std::uint64_t term = binom_u64(c, j - i);
        if (acc > UINT64_MAX - term) throw std::overflow_error(std::string(who) + ": overflow");
        acc += term;
    }
    return acc;
}

} // namespace

std::uint64_t poly_p(const ConstraintStats& stats, std::int32_t i, std::int64_t c) {
    return poly_sum(stats.p, stats.k, i, c, "poly_p");
}

std::uint64_t poly_q(const ConstraintStats& stats, std::int32_t i, std::int64_t c) {
    return poly_sum(stats.n, stats.k, i, c, "poly_q");
}

Rational rational_binom(std::int32_t t, std::int32_t i) {
    if (i < 0 || t < 0) return 0;
    if (i > t) return 0;
    Rational acc = 1;
    for (std::int32_t j = 0; j < i; ++j) {
        acc *= t - j;
        acc /= j + 1;
    }
    return acc;
}

std::string mf_to_csv(const MeanFieldState& st) {
    std::ostringstream out;
    out << "t,i,predicted_P,predicted_N\n";
    out.precision(17);
    for (std::int32_t t = st.n; t >= st.n - st.stage_count; --t)
        for (std::int32_t i = 1; i <= st.k; ++i)
            out << t << ',' << i << ',' << st.predicted_p(i, t).convert_to<double>() << ','
                << st.predicted_n(i, t).convert_to<double>() << '\n';
    return out.str();
}

} // namespace tlab
