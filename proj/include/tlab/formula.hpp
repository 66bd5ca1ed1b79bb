#pragma once
/*
 * CNF formulas drawn from a constraint set.
 *
 * The clause universe over n variables is every instantiation of every
 * template in S: choose arity() distinct variables, then choose which a
 * of them are negated. Two random models are supported: m independent
 * uniform draws with repetition (a multiset), and independent inclusion
 * of every universe clause with probability p (no duplicates).
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tlab/constraints.hpp"
#include "tlab/rng.hpp"

namespace tlab {

struct Literal {
    std::int32_t var = 0; // 1-based
    bool negated = false;

    auto operator<=>(const Literal&) const = default;
};

// Canonical form: variables strictly increasing, hence distinct.
using Clause = std::vector<Literal>;

struct Formula {
    std::int32_t n = 0;
    std::vector<Clause> clauses;

    std::int32_t max_clause_size() const;
};

// C(n, r) with overflow detection.
std::uint64_t binom_u64(std::int64_t n, std::int64_t r);

ClauseTemplate clause_template(const Clause& c);

// Number of instantiations of one template over n variables.
std::uint64_t template_count(ClauseTemplate t, std::int32_t n);

// Total universe size; requires n >= max arity of S.
std::uint64_t universe_size(const ConstraintSet& s, std::int32_t n);

Formula sample_multiset(const ConstraintSet& s, std::int32_t n, std::int64_t m, Rng& rng);
Formula sample_const_prob(const ConstraintSet& s, std::int32_t n, double p, Rng& rng);

// Shrinks every clause by b0-1 literals, mapping arity-k formulas onto
// narrower ones while preserving satisfiability one way: any assignment
// satisfying the transformed formula satisfies the original.
enum class DeletionMode {
    DropAllPositives, // clauses with few positives lose them all
    KeepLastPositive, // a clause is never stripped of its final positive
};

Formula deletion_transform(const Formula& f, int b0, DeletionMode mode, Rng& rng);

bool satisfies(const Formula& f, const std::vector<bool>& assignment);

// DIMACS CNF. Writer emits canonical clauses; reader accepts 'c' comments
// and requires distinct variables within each clause.
void write_dimacs(const Formula& f, std::ostream& out);
std::string to_dimacs(const Formula& f);
Formula parse_dimacs(std::istream& in);
Formula load_dimacs(const std::string& path);
void save_dimacs(const Formula& f, const std::string& path);

} // namespace tlab
