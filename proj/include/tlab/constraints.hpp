#pragma once
/*
 * Clausal constraint sets.
 *
 * A clause template C_{a,b} stands for disjunctions of a negated plus b
 * positive literals over distinct variables. A constraint set S is a
 * finite set of templates; random formulas draw clauses whose shapes come
 * from S. The classifier below sorts S by the asymptotic behavior of its
 * satisfiability transition: no transition at all (trivial), a coarse
 * transition whose width stays comparable to its location, or a sharp one.
 */

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace tlab {

struct ClauseTemplate {
    int a = 0; // negated literals
    int b = 0; // positive literals

    int arity() const { return a + b; }
    auto operator<=>(const ClauseTemplate&) const = default;
};

class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::vector<ClauseTemplate> templates);

    const std::vector<ClauseTemplate>& templates() const { return templates_; }
    bool contains(int a, int b) const;
    bool empty() const { return templates_.empty(); }
    int max_arity() const; // k
    std::size_t size() const { return templates_.size(); }

    // Polarity mirror: every C_{a,b} becomes C_{b,a}. Classification is
    // invariant under it with 0/1 endpoints swapped.
    ConstraintSet mirrored() const;

private:
    std::vector<ClauseTemplate> templates_; // sorted, unique
};

// Per-arity indicator stats plus the endpoint widths used by the
// classifier. p[i] says whether the one-positive template of arity i is
// in S, n[i] whether the all-negative one is; delta_k weighs the largest
// arity; a0/b0 are the widest all-negative/all-positive templates and
// a_ge1/b_ge1 the widest mixed-polarity occurrences.
struct ConstraintStats {
    int k = 0;
    std::vector<int> p; // index 1..k, p[i] = 1 iff C_{i-1,1} in S
    std::vector<int> n; // index 1..k, n[i] = 1 iff C_{i,0} in S
    int delta_k = 0;    // k*p_k + n_k
    int a0 = 0;         // max a with C_{a,0} in S, 0 if none
    int a_ge1 = 0;      // max a over templates with b >= 1
    int b0 = 0;         // max b with C_{0,b} in S, 0 if none
    int b_ge1 = 0;      // max b over templates with a >= 1
};

enum class ThresholdClass { Trivial, Coarse, Sharp };
enum class SchaeferClass { TrivialP, P, NPComplete };
enum class CorollaryCase { HornCase, NegHornCase, ZeroEndpointCase, OneEndpointCase, None };

const char* to_string(ThresholdClass c);
const char* to_string(SchaeferClass c);
const char* to_string(CorollaryCase c);

// Template-level predicates.
inline bool template_0valid(ClauseTemplate t) { return t.a >= 1; }
inline bool template_1valid(ClauseTemplate t) { return t.b >= 1; }
inline bool template_horn(ClauseTemplate t) { return t.b <= 1; }
inline bool template_neg_horn(ClauseTemplate t) { return t.a <= 1; }

// Set-level predicates: every template satisfies the property.
bool is_0valid(const ConstraintSet& s);
bool is_1valid(const ConstraintSet& s);
bool is_horn(const ConstraintSet& s);
bool is_neg_horn(const ConstraintSet& s);

ConstraintStats compute_stats(const ConstraintSet& s);

struct ThresholdClassification {
    ThresholdClass cls = ThresholdClass::Trivial;
    char rule = 'a'; // which classifier branch decided: 'a', 'b', or 'c'
    // Set if the width comparison ran with an endpoint narrower than 2.
    // Unreachable for well-formed sets (branch 'c' forces a0, b0 >= 2)
    // but kept as a diagnostic.
    bool narrow_endpoint_warning = false;
};

ThresholdClassification classify_threshold(const ConstraintSet& s);
ThresholdClass threshold_class(const ConstraintSet& s);

SchaeferClass schaefer_class_clausal(const ConstraintSet& s);

// Which coarse-transition explanations apply; only valid for Coarse sets.
std::set<CorollaryCase> corollary_case(const ConstraintSet& s);

// Text format: one "a b" pair per line, '#' starts a comment, blank lines
// ignored. Duplicate templates collapse.
ConstraintSet parse_constraint_set(const std::string& text);
ConstraintSet load_constraint_set(const std::string& path);
std::string format_constraint_set(const ConstraintSet& s);

} // namespace tlab
