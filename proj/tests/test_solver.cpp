#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tlab/formula.hpp"
#include "tlab/solver.hpp"

using namespace tlab;

namespace {

ConstraintSet make(std::vector<ClauseTemplate> ts) { return ConstraintSet(std::move(ts)); }

Formula formula_of(std::int32_t n, std::vector<Clause> clauses) {
    Formula f;
    f.n = n;
    f.clauses = std::move(clauses);
    return f;
}

} // namespace

TEST_CASE("pur on hand-worked formulas") {
    Rng rng(1);

    Formula f = formula_of(1, {{{1, false}}});
    CHECK(pur(f, rng).outcome == PurOutcome::Accept);

    f = formula_of(1, {{{1, false}}, {{1, true}}});
    CHECK(pur(f, rng).outcome == PurOutcome::Reject);

    f = formula_of(2, {{{1, false}}, {{1, true}, {2, false}}, {{2, true}}});
    CHECK(pur(f, rng).outcome == PurOutcome::Reject);

    // No positive unit anywhere: immediate accept at stage n.
    f = formula_of(3, {{{1, true}, {2, true}}, {{2, true}, {3, true}}});
    PurResult r = pur(f, rng);
    CHECK(r.outcome == PurOutcome::Accept);
    CHECK(r.halt_stage == 3);
}

TEST_CASE("oracle on hand-worked formulas") {
    CHECK_FALSE(oracle_sat(formula_of(2, {{{1, false}, {2, false}}, {{1, true}}, {{2, true}}})));
    CHECK(oracle_sat(formula_of(0, {})));
    CHECK(oracle_sat(formula_of(2, {{{1, false}, {2, false}}, {{1, true}, {2, true}}})));
    CHECK_FALSE(oracle_sat(formula_of(1, {{}})));

    CHECK_THROWS_AS(oracle_sat(formula_of(31, {})), std::invalid_argument);
    CHECK_THROWS_AS(oracle_sat(formula_of(2, {{{1, false}, {2, false}}}), 30, 0),
                    std::runtime_error);

    // Any Horn formula without positive units is satisfied by all-zeros.
    ConstraintSet negonly = make({{2, 0}, {1, 0}, {3, 0}});
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        Formula f = sample_multiset(negonly, 10, 20, rng);
        CHECK(oracle_sat(f));
    }
}

TEST_CASE("pur equals the oracle on Horn formulas") {
    const std::vector<ConstraintSet> horn_sets = {
        make({{0, 1}, {1, 0}, {1, 1}, {2, 0}}),
        make({{2, 1}, {3, 0}}),
        make({{0, 1}, {2, 0}, {3, 1}}),
        make({{1, 1}, {2, 0}, {2, 1}}),
    };
    Rng gen(3);
    std::int64_t checked = 0;
    for (std::int64_t round = 0; round < 12000; ++round) {
        const ConstraintSet& s = horn_sets[round % horn_sets.size()];
        std::int32_t n = 5 + std::int32_t(gen.below(16));
        std::int64_t m = std::int64_t(gen.below(61));
        Formula f = sample_multiset(s, n, m, gen);
        Rng solver_rng(derive_seed(99, std::uint64_t(round)));
        bool accepted = pur(f, solver_rng).outcome == PurOutcome::Accept;
        bool sat = oracle_sat(f);
        REQUIRE(accepted == sat);
        ++checked;
    }
    CHECK(checked >= 10000);
}

TEST_CASE("pur rejection implies unsatisfiability on any set") {
    const std::vector<ConstraintSet> sets = {
        make({{3, 0}, {2, 1}, {1, 2}, {0, 3}}),
        make({{2, 0}, {0, 3}, {2, 2}}),
        make({{2, 0}, {1, 1}, {0, 2}, {0, 1}}),
    };
    Rng gen(4);
    std::int64_t rejects = 0;
    for (std::int64_t round = 0; round < 5000; ++round) {
        const ConstraintSet& s = sets[round % sets.size()];
        std::int32_t n = 5 + std::int32_t(gen.below(8));
        std::int64_t m = 10 + std::int64_t(gen.below(70));
        Formula f = sample_multiset(s, n, m, gen);
        Rng solver_rng(derive_seed(100, std::uint64_t(round)));
        if (pur(f, solver_rng).outcome == PurOutcome::Reject) {
            ++rejects;
            CHECK_FALSE(oracle_sat(f));
        }
    }
    CHECK(rejects > 0); // the corpus must actually exercise the branch
}

TEST_CASE("traces: stage arithmetic and Horn cell conservation") {
    ConstraintSet horn = make({{0, 1}, {1, 0}, {1, 1}, {2, 0}});
    Rng gen(5);
    for (int round = 0; round < 300; ++round) {
        std::int32_t n = 5 + std::int32_t(gen.below(12));
        std::int64_t m = std::int64_t(gen.below(50));
        Formula f = sample_multiset(horn, n, m, gen);
        Rng solver_rng(derive_seed(101, std::uint64_t(round)));
        PurTrace tr = pur_trace(f, solver_rng);
        CHECK(tr.completed);
        REQUIRE(!tr.stages.empty());
        CHECK(tr.stages.front().t == n);
        CHECK(tr.stages.back().t == tr.halt_stage);
        // The trace sizes its cell table from the formula, not the set.
        CHECK(tr.k == std::max<std::int32_t>(f.max_clause_size(), 1));

        std::uint64_t prev_total = std::uint64_t(m);
        for (std::size_t idx = 0; idx < tr.stages.size(); ++idx) {
            const PurStage& st = tr.stages[idx];
            CHECK(st.t == n - std::int32_t(idx));
            std::uint64_t total = 0;
            for (std::int32_t i = 1; i <= tr.k; ++i)
                total += st.p_count[std::size_t(i)] + st.n_count[std::size_t(i)];
            // Every Horn clause is one-positive or all-negative, so the
            // cells partition the live clauses: m at the start, then
            // nonincreasing as assignments remove clauses.
            if (idx == 0) CHECK(total == std::uint64_t(m));
            CHECK(total <= prev_total);
            prev_total = total;
        }

        const PurStage& last = tr.stages.back();
        if (tr.outcome == PurOutcome::Accept && tr.completed)
            CHECK(last.p_count[1] == 0);
    }
}

TEST_CASE("trace stage limit truncates early") {
    // Implication chain x1, x̄1 v x2, ..., x̄499 v x500: one positive unit
    // per stage, so the full run would take all 500 stages.
    Formula f;
    f.n = 500;
    f.clauses.push_back({{1, false}});
    for (std::int32_t v = 1; v < f.n; ++v)
        f.clauses.push_back({{v, true}, {v + 1, false}});

    Rng solver_rng(7);
    PurTrace tr = pur_trace(f, solver_rng, 3);
    CHECK_FALSE(tr.completed);
    REQUIRE(tr.stages.size() == 3);
    CHECK(tr.stages.front().t == 500);
    CHECK(tr.stages.back().t == 498);

    Rng full_rng(7);
    PurTrace full = pur_trace(f, full_rng);
    CHECK(full.completed);
    CHECK(full.outcome == PurOutcome::Accept);
    CHECK(full.stages.size() == 501); // stages 500 down to 0
    CHECK(full.halt_stage == 0);
}

TEST_CASE("trace csv layout") {
    Formula f = formula_of(2, {{{1, true}, {2, false}}});
    Rng rng(8);
    PurTrace tr = pur_trace(f, rng);
    std::string csv = trace_to_csv(tr);
    CHECK(csv.substr(0, 12) == "t,i,P_i,N_i\n");
    CHECK(csv.find("2,2,1,0") != std::string::npos); // the one clause sits in P_2
}

TEST_CASE("implication-graph decider on hand-worked formulas") {
    CHECK(sat2_scc(formula_of(2, {{{1, false}, {2, false}}, {{1, true}, {2, true}}})));
    CHECK_FALSE(sat2_scc(formula_of(1, {{{1, false}}, {{1, true}}})));
    CHECK_FALSE(sat2_scc(formula_of(2, {{{1, false}, {2, false}},
                                        {{1, true}, {2, false}},
                                        {{1, false}, {2, true}},
                                        {{1, true}, {2, true}}})));
    CHECK_FALSE(sat2_scc(formula_of(1, {{}})));
    CHECK(sat2_scc(formula_of(3, {})));
    CHECK_THROWS_AS(sat2_scc(formula_of(3, {{{1, false}, {2, false}, {3, false}}})),
                    std::invalid_argument);
}

TEST_CASE("implication-graph decider equals the oracle on binary formulas") {
    const std::vector<ConstraintSet> sets = {
        make({{2, 0}, {1, 1}, {0, 2}}),
        make({{2, 0}, {1, 1}, {0, 2}, {0, 1}, {1, 0}}),
        make({{1, 1}, {0, 2}}),
    };
    Rng gen(9);
    for (std::int64_t round = 0; round < 4000; ++round) {
        const ConstraintSet& s = sets[round % sets.size()];
        std::int32_t n = 3 + std::int32_t(gen.below(10));
        std::int64_t m = std::int64_t(gen.below(40));
        Formula f = sample_multiset(s, n, m, gen);
        CHECK(sat2_scc(f) == oracle_sat(f));
    }
}

TEST_CASE("endpoint predictor") {
    EndpointPrediction e = endpoint_predictor(formula_of(1, {{{1, false}}, {{1, true}}}));
    CHECK_FALSE(e.predicted_sat);

    // Satisfiable formula the predictor misses: both endpoints fail.
    e = endpoint_predictor(formula_of(2, {{{1, false}, {2, false}}, {{1, true}, {2, true}}}));
    CHECK_FALSE(e.zero_satisfies);
    CHECK_FALSE(e.one_satisfies);
    CHECK_FALSE(e.predicted_sat);
    CHECK(oracle_sat(formula_of(2, {{{1, false}, {2, false}}, {{1, true}, {2, true}}})));

    // Formulas from a 0-valid set are always predicted satisfiable, and
    // the prediction is right.
    ConstraintSet zerovalid = make({{1, 1}, {2, 0}, {2, 1}});
    Rng gen(10);
    for (int i = 0; i < 200; ++i) {
        Formula f = sample_multiset(zerovalid, 8, 25, gen);
        e = endpoint_predictor(f);
        CHECK(e.zero_satisfies);
        CHECK(e.predicted_sat);
        CHECK(oracle_sat(f));
    }
}
