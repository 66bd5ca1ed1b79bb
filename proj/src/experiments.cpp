#include "tlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tlab/parallel.hpp"

namespace tlab {

const char* to_string(Decider d) {
    return d == Decider::Oracle ? "oracle" : "pur";
}

const char* to_string(Model m) {
    return m == Model::Multiset ? "multiset" : "constprob";
}

const char* to_string(TrendVerdict v) {
    switch (v) {
    case TrendVerdict::SharpTrend: return "SharpTrend";
    case TrendVerdict::CoarseTrend: return "CoarseTrend";
    case TrendVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(CaseKind k) {
    switch (k) {
    case CaseKind::Case1: return "Case1";
    case CaseKind::Case2: return "Case2";
    case CaseKind::Case3: return "Case3";
    }
    return "?";
}

namespace {

constexpr std::int64_t kProbeTrialCap = 20000;
constexpr std::int64_t kPredictionTrials = 100000;

struct DecideContext {
    Decider decider = Decider::Pur;
    bool binary = false; // every template arity <= 2
    std::int32_t oracle_var_cap = kOracleDefaultVarCap;
    std::string property = "sat";
};

DecideContext make_decide_context(const ConstraintSet& s, std::int32_t n, Decider decider,
                                  std::int32_t oracle_var_cap) {
    DecideContext ctx;
    ctx.decider = decider;
    ctx.binary = s.max_arity() <= 2;
    ctx.oracle_var_cap = oracle_var_cap;
    if (decider == Decider::Oracle) {
        if (!ctx.binary && n > oracle_var_cap) {
            std::ostringstream msg;
            msg << "oracle decider needs n <= " << oracle_var_cap
                << " unless every template has arity <= 2 (got n = " << n << ", max arity = "
                << s.max_arity() << "); use the pur decider for Horn sets at scale";
            throw std::invalid_argument(msg.str());
        }
        ctx.property = "sat";
    } else {
        ctx.property = is_horn(s) ? "sat" : "pur-accepts";
    }
    return ctx;
}

bool decide_formula(const DecideContext& ctx, const Formula& f, Rng& rng) {
    if (ctx.decider == Decider::Oracle) {
        if (ctx.binary) return sat2_scc(f);
        return oracle_sat(f, ctx.oracle_var_cap);
    }
    return pur(f, rng).outcome == PurOutcome::Accept;
}

struct HitCount {
    std::int64_t hits = 0;
    HitCount& operator+=(const HitCount& o) {
        hits += o.hits;
        return *this;
    }
};

std::int64_t multiset_m(double control, std::int32_t n, int k) {
    double m = control * std::pow(static_cast<double>(n), k - 1);
    if (!(m >= 0) || m > 9e15) throw std::invalid_argument("density gives an unusable clause count");
    return std::llround(m);
}

} // namespace

CurveResult sat_curve(const ConstraintSet& s, std::int32_t n, const std::vector<double>& controls,
                      std::int64_t trials, Decider decider, Model model, std::uint64_t seed,
                      int jobs, std::int32_t oracle_var_cap) {
    if (trials < 1) throw std::invalid_argument("sat_curve: trials must be >= 1");
    if (controls.empty()) throw std::invalid_argument("sat_curve: empty control grid");
    DecideContext ctx = make_decide_context(s, n, decider, oracle_var_cap);
    int k = s.max_arity();

    CurveResult result;
    result.property = ctx.property;
    for (std::size_t ci = 0; ci < controls.size(); ++ci) {
        double control = controls[ci];
        std::int64_t m = model == Model::Multiset ? multiset_m(control, n, k) : 0;
        if (model == Model::ConstProb && !(control >= 0.0 && control <= 1.0))
            throw std::invalid_argument("sat_curve: p must lie in [0, 1]");
        std::uint64_t point_seed = derive_seed(seed, static_cast<std::uint64_t>(ci));
        HitCount total = sum_over_trials<HitCount>(
            point_seed, trials, jobs, [&](std::int64_t, Rng& rng, HitCount& acc) {
                Formula f = model == Model::Multiset ? sample_multiset(s, n, m, rng)
                                                     : sample_const_prob(s, n, control, rng);
                if (decide_formula(ctx, f, rng)) ++acc.hits;
            });
        CurvePoint point;
        point.control = control;
        point.trials = trials;
        point.estimate = static_cast<double>(total.hits) / static_cast<double>(trials);
        point.ci95 = wilson95(total.hits, trials);
        result.points.push_back(point);
    }
    return result;
}

namespace {

struct Probe {
    double p = 0.0;
    double estimate = 0.0;
    Interval ci;
    std::int64_t trials = 0;
};

class ProbeRunner {
public:
    ProbeRunner(const ConstraintSet& s, std::int32_t n, const DecideContext& ctx,
                std::int64_t base_trials, std::uint64_t seed, int jobs)
        : s_(s), n_(n), ctx_(ctx), base_trials_(base_trials), seed_(seed), jobs_(jobs) {}

    // Measures the curve at p, doubling the trial count while the interval
    // straddles the target, up to the cap. Every batch draws from a fresh
    // derived stream so reruns are deterministic.
    Probe run(double p, double target) {
        std::int64_t taken = 0;
        std::int64_t hits = 0;
        std::int64_t want = base_trials_;
        Probe probe;
        probe.p = p;
        for (;;) {
            std::int64_t batch = want - taken;
            HitCount got = sum_over_trials<HitCount>(
                derive_seed(seed_, counter_++), batch, jobs_,
                [&](std::int64_t, Rng& rng, HitCount& acc) {
                    Formula f = sample_const_prob(s_, n_, p, rng);
                    if (decide_formula(ctx_, f, rng)) ++acc.hits;
                });
            hits += got.hits;
            taken = want;
            probe.trials = taken;
            probe.estimate = static_cast<double>(hits) / static_cast<double>(taken);
            probe.ci = wilson95(hits, taken);
            if (!probe.ci.contains(target) || taken >= std::max(kProbeTrialCap, base_trials_))
                break;
            want = std::min(taken * 2, std::max(kProbeTrialCap, base_trials_));
        }
        check_monotone(probe);
        history_.push_back(probe);
        return probe;
    }

private:
    // The curve is nonincreasing in p. Flag probe pairs whose intervals
    // separate the wrong way by more than their own widths; plain 95%
    // overlap tests false-alarm too often across dozens of probes.
    void check_monotone(const Probe& probe) const {
        for (const Probe& old : history_) {
            const Probe& lo_p = old.p < probe.p ? old : probe;
            const Probe& hi_p = old.p < probe.p ? probe : old;
            if (lo_p.p == hi_p.p) continue;
            double slack =
                0.5 * ((lo_p.ci.hi - lo_p.ci.lo) + (hi_p.ci.hi - hi_p.ci.lo));
            if (hi_p.ci.lo > lo_p.ci.hi + slack) {
                std::ostringstream msg;
                msg << "threshold_points: non-monotone estimates beyond noise: Pr[" << lo_p.p
                    << "] in [" << lo_p.ci.lo << ", " << lo_p.ci.hi << "] vs Pr[" << hi_p.p
                    << "] in [" << hi_p.ci.lo << ", " << hi_p.ci.hi << "]";
                throw std::runtime_error(msg.str());
            }
        }
    }

    const ConstraintSet& s_;
    std::int32_t n_;
    const DecideContext& ctx_;
    std::int64_t base_trials_;
    std::uint64_t seed_;
    int jobs_;
    std::uint64_t counter_ = 0;
    std::vector<Probe> history_;
};

struct Located {
    double point = 0.0;
    Interval bracket;
};

// Bisection for the p where the curve crosses target, inside [lo, hi]
// with Pr[lo] >= target >= Pr[hi]. Bracket moves only on one-sided CI
// evidence, so the returned bracket stays conservative.
Located bisect_target(ProbeRunner& runner, double target, double lo, double hi) {
    double point = 0.0;
    bool straddled = false;
    auto finish = [&](double fallback) -> Located {
        double p = straddled ? std::min(std::max(point, lo), hi) : fallback;
        return {p, {lo, hi}};
    };
    for (;;) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= 0.01 * mid) return finish(mid);
        Probe probe = runner.run(mid, target);
        if (probe.ci.lo > target) {
            lo = mid;
            continue;
        }
        if (probe.ci.hi < target) {
            hi = mid;
            continue;
        }
        // The interval straddles the target at the trial cap: mid sits
        // within probe resolution of the crossing. Keep it as the located
        // point and tighten the bracket from the quarter points, which lie
        // outside the noise band once the bracket is this small.
        point = mid;
        straddled = true;
        bool moved = false;
        for (double q : {0.5 * (lo + mid), 0.5 * (mid + hi)}) {
            Probe side = runner.run(q, target);
            if (side.ci.lo > target && q > lo) {
                lo = q;
                moved = true;
            } else if (side.ci.hi < target && q < hi) {
                hi = q;
                moved = true;
            }
        }
        if (!moved) return finish(mid);
    }
}

} // namespace

WidthReport threshold_points(const ConstraintSet& s, std::int32_t n, double epsilon,
                             Decider decider, std::int64_t trials, std::uint64_t seed, int jobs,
                             std::int32_t oracle_var_cap) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("threshold_points: epsilon must lie in (0, 1/2)");
    if (trials < 1) throw std::invalid_argument("threshold_points: trials must be >= 1");
    if (is_0valid(s) || is_1valid(s))
        throw std::invalid_argument(
            "threshold_points: set is 0-valid or 1-valid, the curve never leaves 1");
    DecideContext ctx = make_decide_context(s, n, decider, oracle_var_cap);
    ProbeRunner runner(s, n, ctx, trials, seed, jobs);

    // Upper anchor: grow p until the curve is below the lowest target.
    // p = 0 gives the empty formula, so 0 is always a valid lower anchor.
    double u = static_cast<double>(universe_size(s, n));
    double anchor = std::min(1.0, static_cast<double>(n) / u);
    for (;;) {
        Probe probe = runner.run(anchor, epsilon);
        if (probe.ci.hi < epsilon || probe.ci.contains(epsilon)) break;
        if (anchor >= 1.0)
            throw std::runtime_error(
                "threshold_points: curve stays above epsilon across the whole p range");
        anchor = std::min(1.0, anchor * 4.0);
    }

    WidthReport report;
    report.n = n;
    report.epsilon = epsilon;
    Located low = bisect_target(runner, 1.0 - epsilon, 0.0, anchor);
    Located half = bisect_target(runner, 0.5, low.bracket.lo, anchor);
    Located high = bisect_target(runner, epsilon, half.bracket.lo, anchor);
    report.p_eps = low.point;
    report.p_half = half.point;
    report.p_one_minus_eps = high.point;
    report.p_eps_bracket = low.bracket;
    report.p_half_bracket = half.bracket;
    report.p_one_minus_eps_bracket = high.bracket;
    report.width_ratio = (high.point - low.point) / half.point;
    double denom_hi = std::max(half.bracket.lo, 1e-300);
    report.ratio_interval = {
        std::max(0.0, high.bracket.lo - low.bracket.hi) / std::max(half.bracket.hi, 1e-300),
        std::max(0.0, high.bracket.hi - low.bracket.lo) / denom_hi};
    return report;
}

TrendResult sharpness_trend(const ConstraintSet& s, const std::vector<std::int32_t>& n_list,
                            double epsilon, Decider decider, std::int64_t trials,
                            std::uint64_t seed, int jobs) {
    if (n_list.size() < 3)
        throw std::invalid_argument("sharpness_trend: need at least 3 sizes");
    if (!std::is_sorted(n_list.begin(), n_list.end()) ||
        std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
        throw std::invalid_argument("sharpness_trend: sizes must be strictly increasing");

    TrendResult result;
    for (std::size_t i = 0; i < n_list.size(); ++i)
        result.reports.push_back(threshold_points(s, n_list[i], epsilon, decider, trials,
                                                  derive_seed(seed, static_cast<std::uint64_t>(i)),
                                                  jobs));

    bool strictly_falling = true;
    for (std::size_t i = 1; i < result.reports.size(); ++i)
        if (!(result.reports[i].width_ratio < result.reports[i - 1].width_ratio))
            strictly_falling = false;
    const WidthReport& first = result.reports.front();
    const WidthReport& last = result.reports.back();
    bool separated = last.ratio_interval.hi < first.ratio_interval.lo;
    // A vanishing relative width must do more than drift downward: coarse
    // sets also creep toward their limiting ratio. Demand a genuine
    // collapse (more than halving) backed by disjoint first/last intervals.
    bool collapsed = last.width_ratio < 0.5 * first.width_ratio;

    if (strictly_falling && separated && collapsed)
        result.verdict = TrendVerdict::SharpTrend;
    else if (!collapsed)
        result.verdict = TrendVerdict::CoarseTrend;
    else
        result.verdict = TrendVerdict::Inconclusive;
    return result;
}

namespace {

void check_case_hypothesis(CaseKind kind, const ConstraintStats& stats) {
    bool has_p = false, has_n = false;
    for (int j = 2; j <= stats.k; ++j) {
        if (stats.p[static_cast<std::size_t>(j)]) has_p = true;
        if (stats.n[static_cast<std::size_t>(j)]) has_n = true;
    }
    switch (kind) {
    case CaseKind::Case1:
        if (!has_p)
            throw std::invalid_argument("Case 1 hypothesis fails: no p_j = 1 with j >= 2");
        if (!has_n)
            throw std::invalid_argument("Case 1 hypothesis fails: no n_j = 1 with j >= 2");
        break;
    case CaseKind::Case2:
        if (!has_p)
            throw std::invalid_argument("Case 2 hypothesis fails: no p_j = 1 with j >= 2");
        if (has_n)
            throw std::invalid_argument("Case 2 hypothesis fails: some n_j = 1 with j >= 2");
        break;
    case CaseKind::Case3:
        if (!has_n)
            throw std::invalid_argument("Case 3 hypothesis fails: no n_j = 1 with j >= 2");
        if (has_p)
            throw std::invalid_argument("Case 3 hypothesis fails: some p_j = 1 with j >= 2");
        break;
    }
}

} // namespace

CaseReport case_theorem_check(CaseKind kind, const ConstraintSet& s, double c, std::int32_t n,
                              std::int64_t trials, std::int64_t horizon, std::uint64_t seed,
                              int jobs) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("case check: c must be positive");
    if (trials < 1) throw std::invalid_argument("case check: trials must be >= 1");
    if (horizon < 1) throw std::invalid_argument("case check: horizon must be >= 1");
    ConstraintStats stats = compute_stats(s);
    check_case_hypothesis(kind, stats);

    int k = stats.k;
    double exponent = kind == CaseKind::Case3
                          ? static_cast<double>(k - 1) + 1.0 / static_cast<double>(k + 1)
                          : static_cast<double>(k - 1);
    double m_real = c * std::pow(static_cast<double>(n), exponent);
    if (!(m_real >= 0) || m_real > 9e15)
        throw std::invalid_argument("case check: clause count out of range");
    std::int64_t m = std::llround(m_real);

    CaseReport report;
    report.kind = kind;
    report.c = c;
    report.n = n;
    report.m = m;
    report.trials = trials;

    HitCount accepts = sum_over_trials<HitCount>(
        derive_seed(seed, 1), trials, jobs, [&](std::int64_t, Rng& rng, HitCount& acc) {
            Formula f = sample_multiset(s, n, m, rng);
            if (pur(f, rng).outcome == PurOutcome::Accept) ++acc.hits;
        });
    report.empirical = static_cast<double>(accepts.hits) / static_cast<double>(trials);
    report.ci95 = wilson95(accepts.hits, trials);

    double k_factorial = 1.0;
    for (int i = 2; i <= k; ++i) k_factorial *= i;

    if (kind == CaseKind::Case3) {
        double pred = std::exp(-std::pow(c, k + 1) * std::pow(k_factorial, k));
        report.predicted_q0_one = pred;
        report.predicted_seeded = pred;
    } else {
        RateFunction f_rate = RateFunction::poly_p2(c, s);
        double qe1 =
            qempty_mc(f_rate, kPredictionTrials, horizon, 1, derive_seed(seed, 2), jobs).estimate;

        // Queue seeded with the sample's initial positive-unit count:
        // Binomial(m, u1/U) where u1 counts positive-unit instances.
        double u = static_cast<double>(universe_size(s, n));
        double p_unit = s.contains(0, 1) ? static_cast<double>(n) / u : 0.0;
        HitCount seeded = sum_over_trials<HitCount>(
            derive_seed(seed, 3), kPredictionTrials, jobs,
            [&](std::int64_t, Rng& rng, HitCount& acc) {
                std::int64_t q0 = rng.binomial(m, p_unit);
                if (queue_run_empties(f_rate, horizon, q0, rng)) ++acc.hits;
            });
        double qe_seeded =
            static_cast<double>(seeded.hits) / static_cast<double>(kPredictionTrials);

        if (kind == CaseKind::Case1) {
            report.predicted_q0_one = qe1;
        } else {
            double e0 = std::exp(-c * k_factorial / stats.delta_k);
            report.predicted_q0_one = e0 + (1.0 - e0) * qe1;
        }
        report.predicted_seeded = qe_seeded;
    }
    report.matched_q0_one = std::abs(report.empirical - report.predicted_q0_one) <= report.match_tol;
    report.matched_seeded = std::abs(report.empirical - report.predicted_seeded) <= report.match_tol;
    return report;
}

std::vector<PredictorPoint> endpoint_predictor_study(const ConstraintSet& s, std::int32_t n,
                                                     const std::vector<double>& controls,
                                                     std::int64_t trials, Model model,
                                                     std::uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("predictor study: trials must be >= 1");
    if (controls.empty()) throw std::invalid_argument("predictor study: empty control grid");
    bool has_success = n <= kOracleDefaultVarCap;
    int k = s.max_arity();

    struct Counts {
        std::int64_t endpoint_sat = 0;
        std::int64_t correct = 0;
        Counts& operator+=(const Counts& o) {
            endpoint_sat += o.endpoint_sat;
            correct += o.correct;
            return *this;
        }
    };

    std::vector<PredictorPoint> out;
    for (std::size_t ci = 0; ci < controls.size(); ++ci) {
        double control = controls[ci];
        std::int64_t m = model == Model::Multiset ? multiset_m(control, n, k) : 0;
        if (model == Model::ConstProb && !(control >= 0.0 && control <= 1.0))
            throw std::invalid_argument("predictor study: p must lie in [0, 1]");
        Counts total = sum_over_trials<Counts>(
            derive_seed(seed, static_cast<std::uint64_t>(ci)), trials, jobs,
            [&](std::int64_t, Rng& rng, Counts& acc) {
                Formula f = model == Model::Multiset ? sample_multiset(s, n, m, rng)
                                                     : sample_const_prob(s, n, control, rng);
                EndpointPrediction ep = endpoint_predictor(f);
                if (ep.predicted_sat) {
                    ++acc.endpoint_sat;
                    if (has_success) ++acc.correct; // an endpoint witnesses satisfiability
                } else if (has_success && !oracle_sat(f)) {
                    ++acc.correct;
                }
            });
        PredictorPoint point;
        point.control = control;
        point.trials = trials;
        point.has_success_rate = has_success;
        point.lower_bound = static_cast<double>(total.endpoint_sat) / static_cast<double>(trials);
        point.lower_ci = wilson95(total.endpoint_sat, trials);
        if (has_success) {
            point.success_rate = static_cast<double>(total.correct) / static_cast<double>(trials);
            point.success_ci = wilson95(total.correct, trials);
        }
        out.push_back(point);
    }
    return out;
}

double endpoint_analytic_p_half(const ConstraintSet& s, std::int32_t n, bool one_endpoint) {
    std::uint64_t falsified = 0;
    for (const auto& t : s.templates()) {
        bool hits = one_endpoint ? t.b == 0 : t.a == 0;
        if (hits) falsified += template_count(t, n);
    }
    if (falsified == 0)
        throw std::invalid_argument("endpoint half point: the endpoint satisfies every clause");
    return -std::expm1(-std::log(2.0) / static_cast<double>(falsified));
}

std::vector<MeanFieldComparison> mean_field_comparison(const ConstraintSet& s, std::int32_t n,
                                                       std::int64_t m, std::int32_t max_offset,
                                                       std::int64_t trials, std::uint64_t seed,
                                                       int jobs) {
    if (max_offset < 0 || max_offset >= n)
        throw std::invalid_argument("mean field comparison: offset must lie in [0, n)");
    if (trials < 1) throw std::invalid_argument("mean field comparison: trials must be >= 1");
    if (s.max_arity() < 2)
        throw std::invalid_argument("mean field comparison: needs templates of arity >= 2");
    MeanFieldState traj = mf_trajectory(s, n, m, max_offset);

    struct Counts {
        std::vector<std::int64_t> alive, sum_p2, sum_n2;
        void ensure(std::size_t size) {
            if (alive.empty()) {
                alive.assign(size, 0);
                sum_p2.assign(size, 0);
                sum_n2.assign(size, 0);
            }
        }
        Counts& operator+=(const Counts& o) {
            if (o.alive.empty()) return *this;
            ensure(o.alive.size());
            for (std::size_t i = 0; i < o.alive.size(); ++i) {
                alive[i] += o.alive[i];
                sum_p2[i] += o.sum_p2[i];
                sum_n2[i] += o.sum_n2[i];
            }
            return *this;
        }
    };

    std::size_t slots = static_cast<std::size_t>(max_offset) + 1;
    Counts total = sum_over_trials<Counts>(
        seed, trials, jobs, [&](std::int64_t, Rng& rng, Counts& acc) {
            acc.ensure(slots);
            Formula f = sample_multiset(s, n, m, rng);
            PurTrace trace = pur_trace(f, rng, max_offset + 1);
            for (const auto& st : trace.stages) {
                std::int32_t c = n - st.t;
                if (c < 0 || c > max_offset) continue;
                auto sc = static_cast<std::size_t>(c);
                ++acc.alive[sc];
                if (st.p_count.size() > 2) {
                    acc.sum_p2[sc] += st.p_count[2];
                    acc.sum_n2[sc] += st.n_count[2];
                }
            }
        });
    total.ensure(slots);

    std::vector<MeanFieldComparison> out;
    for (std::int32_t c = 0; c <= max_offset; ++c) {
        auto sc = static_cast<std::size_t>(c);
        MeanFieldComparison row;
        row.stage_offset = c;
        row.observed_traces = total.alive[sc];
        if (total.alive[sc] > 0) {
            row.empirical_p2 = static_cast<double>(total.sum_p2[sc]) /
                               static_cast<double>(total.alive[sc]);
            row.empirical_n2 = static_cast<double>(total.sum_n2[sc]) /
                               static_cast<double>(total.alive[sc]);
        }
        row.predicted_p2 = traj.predicted_p(2, n - c).convert_to<double>();
        row.predicted_n2 = traj.predicted_n(2, n - c).convert_to<double>();
        out.push_back(row);
    }
    return out;
}

} // namespace tlab
