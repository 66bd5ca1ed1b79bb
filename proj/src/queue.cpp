#include "tlab/queue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tlab/parallel.hpp"

namespace tlab {

namespace {

double binom_double(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    double acc = 1.0;
    for (std::int64_t j = 0; j < k; ++j) acc = acc * static_cast<double>(n - j) / static_cast<double>(j + 1);
    return acc;
}

} // namespace

RateFunction RateFunction::constant(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("rate: lambda must be finite and nonnegative");
    RateFunction f;
    f.kind_ = Kind::Constant;
    f.lambda_ = lambda;
    return f;
}

RateFunction RateFunction::poly_p2(double c, const ConstraintSet& s) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("rate: c must be finite and nonnegative");
    ConstraintStats stats = compute_stats(s);
    if (stats.k < 2) throw std::invalid_argument("rate: P_2 schedule needs max arity >= 2");
    double k_factorial = 1.0;
    for (int i = 2; i <= stats.k; ++i) k_factorial *= i;
    RateFunction f;
    f.kind_ = Kind::PolyP2;
    f.scale_ = c * k_factorial / stats.delta_k;
    f.stats_ = std::move(stats);
    return f;
}

double RateFunction::value(std::int64_t step) const {
    if (step < 1) throw std::invalid_argument("rate: step index starts at 1");
    if (kind_ == Kind::Constant) return lambda_;
    double p2 = 0.0;
    for (int i = 2; i <= stats_.k; ++i)
        if (stats_.p[static_cast<std::size_t>(i)]) p2 += binom_double(step, i - 2);
    return scale_ * p2;
}

double RateFunction::sum(std::int64_t from, std::int64_t to) const {
    if (from < 1 || to < from) throw std::invalid_argument("rate: bad summation range");
    if (kind_ == Kind::Constant) return lambda_ * static_cast<double>(to - from + 1);
    if (to - from < 128) {
        double acc = 0.0;
        for (std::int64_t j = from; j <= to; ++j) acc += value(j);
        return acc;
    }
    // Hockey stick: sum_{j=a}^{b} C(j, d) = C(b+1, d+1) - C(a, d+1).
    double acc = 0.0;
    for (int i = 2; i <= stats_.k; ++i)
        if (stats_.p[static_cast<std::size_t>(i)])
            acc += binom_double(to + 1, i - 1) - binom_double(from, i - 1);
    return scale_ * acc;
}

double RateFunction::constant_lambda() const {
    if (kind_ != Kind::Constant) throw std::logic_error("rate: not a constant schedule");
    return lambda_;
}

std::string RateFunction::describe() const {
    std::ostringstream out;
    out.precision(17);
    if (kind_ == Kind::Constant) {
        out << "const:" << lambda_;
    } else {
        out << "polyP(scale=" << scale_ << ",k=" << stats_.k << ")";
    }
    return out.str();
}

RateFunction parse_rate_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("rate spec: expected \"const:LAMBDA\" or \"polyP:c,k,delta,SETFILE\"");
    std::string head = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (head == "const") {
        std::size_t used = 0;
        double lambda = 0.0;
        try {
            lambda = std::stod(rest, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("rate spec: bad lambda \"" + rest + "\"");
        }
        if (used != rest.size()) throw std::invalid_argument("rate spec: bad lambda \"" + rest + "\"");
        return RateFunction::constant(lambda);
    }
    if (head == "polyP") {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos)
                throw std::invalid_argument("rate spec: polyP needs c,k,delta,SETFILE");
            parts.push_back(rest.substr(pos, comma - pos));
            pos = comma + 1;
        }
        parts.push_back(rest.substr(pos));
        double c = 0.0;
        long k = 0, delta = 0;
        try {
            std::size_t used = 0;
            c = std::stod(parts[0], &used);
            if (used != parts[0].size()) throw std::invalid_argument("");
            used = 0;
            k = std::stol(parts[1], &used, 10);
            if (used != parts[1].size()) throw std::invalid_argument("");
            used = 0;
            delta = std::stol(parts[2], &used, 10);
            if (used != parts[2].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("rate spec: bad polyP parameters \"" + rest + "\"");
        }
        ConstraintSet s = load_constraint_set(parts[3]);
        ConstraintStats stats = compute_stats(s);
        if (stats.k != k)
            throw std::invalid_argument("rate spec: stated k does not match the set file");
        if (stats.delta_k != delta)
            throw std::invalid_argument("rate spec: stated delta does not match the set file");
        return RateFunction::poly_p2(c, s);
    }
    throw std::invalid_argument("rate spec: unknown kind \"" + head + "\"");
}

bool queue_run_empties(const RateFunction& f, std::int64_t horizon, std::int64_t q0, Rng& rng) {
    std::int64_t q = q0;
    std::int64_t t = 0;
    while (t < horizon) {
        if (q == 0) return true;
        if (q > horizon - t) return false; // at most one departure per step
        std::int64_t block = std::min(std::max<std::int64_t>(q - 1, 1), horizon - t);
        q += rng.poisson(f.sum(t + 1, t + block)) - block;
        t += block;
    }
    return q == 0;
}

QemptyEstimate qempty_mc(const RateFunction& f, std::int64_t trials, std::int64_t horizon,
                         std::int64_t q0, std::uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("qempty_mc: trials must be >= 1");
    if (horizon < 1) throw std::invalid_argument("qempty_mc: horizon must be >= 1");
    if (q0 < 0) throw std::invalid_argument("qempty_mc: q0 must be >= 0");

    struct Counts {
        std::int64_t emptied = 0;
        Counts& operator+=(const Counts& o) {
            emptied += o.emptied;
            return *this;
        }
    };
    Counts total = sum_over_trials<Counts>(seed, trials, jobs,
                                           [&](std::int64_t, Rng& rng, Counts& acc) {
                                               if (queue_run_empties(f, horizon, q0, rng)) ++acc.emptied;
                                           });

    QemptyEstimate est;
    est.trials = trials;
    est.horizon = horizon;
    est.initial_queue = q0;
    est.emptied = total.emptied;
    est.estimate = static_cast<double>(total.emptied) / static_cast<double>(trials);
    est.ci95 = wilson95(total.emptied, trials);
    return est;
}

double qempty_fixed_rate(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("qempty_fixed_rate: lambda must be finite and nonnegative");
    if (lambda <= 1.0) return 1.0;
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double next = std::exp(lambda * (s - 1.0));
        if (std::abs(next - s) < 1e-12) return next;
        s = next;
    }
    return s;
}

} // namespace tlab
