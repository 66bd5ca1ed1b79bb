#pragma once
/*
 * Deciders.
 *
 * pur() runs positive unit resolution: while the formula has a positive
 * unit clause, pick one uniformly at random; if its complement is present
 * as a unit clause reject, otherwise assign the variable true and
 * simplify. Accepting means no positive unit clause is left. On Horn
 * formulas accept/reject coincides with satisfiable/unsatisfiable;
 * rejection implies unsatisfiability for every formula.
 *
 * Stages are indexed by the number of unassigned variables, so traces run
 * from t = n downward. P_{i,t} counts live clauses of size i with exactly
 * one positive literal at the start of stage t, N_{i,t} those with none.
 *
 * oracle_sat() is the independent ground truth: exhaustive search with
 * unit-propagation pruning, guarded by a variable cap. sat2_scc() decides
 * formulas of clause size <= 2 exactly at any scale via the implication
 * graph, and is cross-checked against the oracle in the tests.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "tlab/formula.hpp"
#include "tlab/rng.hpp"

namespace tlab {

enum class PurOutcome { Accept, Reject };

struct PurStage {
    std::int32_t t = 0;
    // Index i runs 1..k; slot 0 unused.
    std::vector<std::uint32_t> p_count;
    std::vector<std::uint32_t> n_count;
};

struct PurTrace {
    std::int32_t k = 0;
    PurOutcome outcome = PurOutcome::Accept;
    bool completed = true; // false when the stage limit cut the run short
    std::int32_t halt_stage = 0;
    std::vector<PurStage> stages; // t = n, n-1, ..., halt_stage
};

struct PurResult {
    PurOutcome outcome = PurOutcome::Accept;
    std::int32_t halt_stage = 0;
};

PurResult pur(const Formula& f, Rng& rng);

// stage_limit > 0 stops the run after recording that many stages; the
// trace is then marked incomplete and its outcome is meaningless. Used to
// observe early cell counts at large n without paying for the full run.
PurTrace pur_trace(const Formula& f, Rng& rng, std::int32_t stage_limit = 0);

// One row per (stage, size): "t,i,P_i,N_i".
std::string trace_to_csv(const PurTrace& trace);

inline constexpr std::int32_t kOracleDefaultVarCap = 30;

// Exact satisfiability. var_cap guards against exponential blowup; raise
// it only for instance families known to propagate well. node_budget
// throws instead of hanging when the search degenerates.
bool oracle_sat(const Formula& f, std::int32_t var_cap = kOracleDefaultVarCap,
                std::int64_t node_budget = 50'000'000);

// Satisfiability of formulas whose clauses all have size <= 2, decided
// through strongly connected components of the implication graph.
bool sat2_scc(const Formula& f);

struct EndpointPrediction {
    bool zero_satisfies = false; // all-false assignment works
    bool one_satisfies = false;  // all-true assignment works
    bool predicted_sat = false;  // either endpoint works
};

EndpointPrediction endpoint_predictor(const Formula& f);

} // namespace tlab
