#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "tlab/experiments.hpp"
#include "tlab/parallel.hpp"

using namespace tlab;

namespace {

ConstraintSet make(std::vector<ClauseTemplate> ts) { return ConstraintSet(std::move(ts)); }

} // namespace

// A coarse NP-complete set whose all-negative templates are rarer than its
// all-positive ones: the all-true assignment is the last endpoint to die,
// and the satisfiability threshold sits on its half point, not the
// all-false one.
TEST_CASE("the satisfiability threshold tracks the all-true endpoint") {
    ConstraintSet s = make({{2, 0}, {0, 3}, {2, 2}});

    SUBCASE("exact ground truth at small n") {
        const std::int32_t n = 14;
        double one_half = endpoint_analytic_p_half(s, n, true);   // A = C(14,2) = 91
        double zero_half = endpoint_analytic_p_half(s, n, false); // A = C(14,3) = 364
        REQUIRE(one_half > zero_half);
        WidthReport rep = threshold_points(s, n, 0.25, Decider::Oracle, 500, 424242);
        MESSAGE("p_half ", rep.p_half, " vs all-true half point ", one_half, " (ratio ",
                rep.p_half / one_half, ")");
        // Satisfiability dominates endpoint satisfaction, so the half point
        // cannot sit meaningfully below the endpoint's. Above it there is
        // slack at n = 14 (mixed assignments keep the wide clauses alive
        // well past endpoint death; measured ratio ~3.9), but the location
        // still lives on the all-true scale, far from the all-false one.
        CHECK(rep.p_half > 0.8 * one_half);
        CHECK(rep.p_half < 6.0 * one_half);
        CHECK(rep.p_half > 4.0 * zero_half);
    }

    SUBCASE("endpoint curves separate at large n") {
        const std::int32_t n = 200;
        std::uint64_t a_one = template_count({2, 0}, n);
        std::uint64_t a_zero = template_count({0, 3}, n);
        double p_one = endpoint_analytic_p_half(s, n, true);
        double p_zero = endpoint_analytic_p_half(s, n, false);

        // The two endpoint events depend on disjoint template families, so
        // they are independent and Pr[either] has a closed form.
        double one_at_pzero =
            std::exp(-std::log(2.0) * static_cast<double>(a_one) / static_cast<double>(a_zero));
        double either_at_pzero = 1.0 - 0.5 * (1.0 - one_at_pzero);
        double zero_at_pone =
            std::exp(-std::log(2.0) * static_cast<double>(a_zero) / static_cast<double>(a_one));
        double either_at_pone = 0.5 + 0.5 * zero_at_pone;

        auto points =
            endpoint_predictor_study(s, n, {p_zero, p_one}, 4000, Model::ConstProb, 77001);
        REQUIRE(points.size() == 2);
        CHECK_FALSE(points[0].has_success_rate);
        MESSAGE("lower bound at p_zero ", points[0].lower_bound, " expected ", either_at_pzero);
        MESSAGE("lower bound at p_one ", points[1].lower_bound, " expected ", either_at_pone);
        CHECK(points[0].lower_ci.contains(either_at_pzero));
        CHECK(points[1].lower_ci.contains(either_at_pone));
        // At the all-false half point nearly every sample still has a
        // satisfying endpoint; at the all-true half point only half do.
        CHECK(points[0].lower_bound > 0.95);
        CHECK(points[1].lower_ci.contains(0.5));
    }
}

// Adding 0-valid non-Horn templates to a Horn set cannot break the
// sandwich: the all-false assignment only has to clear the positive
// units, and the Horn core is necessary for satisfiability.
TEST_CASE("a Horn core sandwiches satisfiability") {
    ConstraintSet s = make({{0, 1}, {1, 1}, {1, 2}});
    const std::int32_t n = 12;
    const std::int64_t trials = 1200;
    const std::vector<bool> all_false(static_cast<std::size_t>(n), false);

    std::vector<double> grid = {0.01, 0.03, 0.056, 0.09, 0.15};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double p = grid[gi];
        Rng rng(derive_seed(5150, gi));
        std::int64_t zero_hits = 0;
        std::int64_t violations = 0;
        std::int64_t pur_oracle_mismatches = 0;
        for (std::int64_t t = 0; t < trials; ++t) {
            Formula f = sample_const_prob(s, n, p, rng);
            EndpointPrediction ep = endpoint_predictor(f);
            if (ep.zero_satisfies != satisfies(f, all_false)) ++violations;
            bool is_sat = oracle_sat(f);

            Formula horn_core;
            horn_core.n = n;
            for (const auto& cl : f.clauses) {
                int positives = 0;
                for (const auto& lit : cl)
                    if (!lit.negated) ++positives;
                if (positives <= 1) horn_core.clauses.push_back(cl);
            }
            bool horn_sat = pur(horn_core, rng).outcome == PurOutcome::Accept;
            if (horn_sat != oracle_sat(horn_core)) ++pur_oracle_mismatches;

            if (ep.zero_satisfies && !is_sat) ++violations;
            if (is_sat && !horn_sat) ++violations;
            if (ep.zero_satisfies) ++zero_hits;
        }
        INFO("p = ", p);
        CHECK(violations == 0);
        CHECK(pur_oracle_mismatches == 0);
        // The all-false assignment fails only on positive units, which
        // number n and appear independently. A 3.5 sigma band keeps the
        // five-point sweep's joint false-alarm rate well under 1%.
        double expect = std::pow(1.0 - p, n);
        double band = 3.5 * std::sqrt(expect * (1.0 - expect) / static_cast<double>(trials));
        CHECK(std::abs(static_cast<double>(zero_hits) / static_cast<double>(trials) - expect) <=
              band);
    }
}

TEST_CASE("the parallel trial kernel reproduces the serial reference") {
    ConstraintSet s = make({{0, 1}, {1, 0}, {1, 1}, {2, 0}});
    struct Counts {
        std::int64_t accepts = 0;
        std::int64_t clauses = 0;
        Counts& operator+=(const Counts& o) {
            accepts += o.accepts;
            clauses += o.clauses;
            return *this;
        }
    };
    auto body = [&](std::int64_t, Rng& rng, Counts& acc) {
        Formula f = sample_multiset(s, 100, 300, rng);
        acc.clauses += static_cast<std::int64_t>(f.clauses.size());
        if (pur(f, rng).outcome == PurOutcome::Accept) ++acc.accepts;
    };
    Counts serial = sum_over_trials_serial<Counts>(20240601, 2000, body);
    Counts parallel = sum_over_trials_parallel<Counts>(20240601, 2000, 4, body);
    CHECK(serial.accepts == parallel.accepts);
    CHECK(serial.clauses == parallel.clauses);
    CHECK(serial.clauses == 2000 * 300);
    Counts dispatched = sum_over_trials<Counts>(20240601, 2000, 1, body);
    CHECK(dispatched.accepts == serial.accepts);
}
