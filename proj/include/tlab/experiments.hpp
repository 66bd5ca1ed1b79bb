#pragma once
/*
 * Monte Carlo studies over random formulas.
 *
 * Controls: the multiset model sweeps the density c with m =
 * round(c * n^{k-1}); the constant-probability model sweeps p directly.
 *
 * Ground truth: the Oracle decider uses the exhaustive solver when
 * n <= 30 and the implication-graph decider for all-binary sets at any n.
 * The Pur decider equals satisfiability only on Horn sets; elsewhere the
 * measured property is "PUR accepts" and results are labeled so.
 *
 * Width reports follow the convention that the satisfiability curve
 * decreases in the control: p_eps is the low edge where the curve passes
 * 1 - eps, p_one_minus_eps the high edge where it passes eps, so
 * p_eps <= p_half <= p_one_minus_eps and the relative width
 * (p_one_minus_eps - p_eps) / p_half is nonnegative.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "tlab/constraints.hpp"
#include "tlab/formula.hpp"
#include "tlab/meanfield.hpp"
#include "tlab/queue.hpp"
#include "tlab/solver.hpp"
#include "tlab/stats.hpp"

namespace tlab {

enum class Decider { Oracle, Pur };
enum class Model { Multiset, ConstProb };

const char* to_string(Decider d);
const char* to_string(Model m);

struct CurvePoint {
    double control = 0.0;
    double estimate = 0.0;
    Interval ci95;
    std::int64_t trials = 0;
};

struct CurveResult {
    std::vector<CurvePoint> points;
    std::string property; // "sat" or "pur-accepts"
};

// oracle_var_cap raises the exhaustive-solver guard past its default;
// only worth it for instance families known to propagate well.
CurveResult sat_curve(const ConstraintSet& s, std::int32_t n, const std::vector<double>& controls,
                      std::int64_t trials, Decider decider, Model model, std::uint64_t seed,
                      int jobs = 1, std::int32_t oracle_var_cap = kOracleDefaultVarCap);

struct WidthReport {
    std::int32_t n = 0;
    double epsilon = 0.0;
    double p_eps = 0.0;           // curve passes 1 - eps
    double p_half = 0.0;          // curve passes 1/2
    double p_one_minus_eps = 0.0; // curve passes eps
    double width_ratio = 0.0;
    // Bisection brackets around each located point, and the conservative
    // interval they induce on the ratio.
    Interval p_eps_bracket, p_half_bracket, p_one_minus_eps_bracket;
    Interval ratio_interval;
};

// Bisection over p in the constant-probability model. trials is the
// per-probe starting count; a probe whose interval straddles its target
// doubles it (cap 20000) before the bracket is narrowed around the probe.
WidthReport threshold_points(const ConstraintSet& s, std::int32_t n, double epsilon,
                             Decider decider, std::int64_t trials, std::uint64_t seed,
                             int jobs = 1, std::int32_t oracle_var_cap = kOracleDefaultVarCap);

enum class TrendVerdict { SharpTrend, CoarseTrend, Inconclusive };

const char* to_string(TrendVerdict v);

struct TrendResult {
    TrendVerdict verdict = TrendVerdict::Inconclusive;
    std::vector<WidthReport> reports;
};

// Width ratios across increasing n. SharpTrend needs strictly falling
// point estimates with the last interval fully below the first;
// CoarseTrend needs the last ratio to stay >= 0.5x the first with no such
// separation. The 0.5 factor is a pragmatic constant.
TrendResult sharpness_trend(const ConstraintSet& s, const std::vector<std::int32_t>& n_list,
                            double epsilon, Decider decider, std::int64_t trials,
                            std::uint64_t seed, int jobs = 1);

enum class CaseKind { Case1, Case2, Case3 };

const char* to_string(CaseKind k);

struct CaseReport {
    CaseKind kind = CaseKind::Case1;
    double c = 0.0;
    std::int32_t n = 0;
    std::int64_t m = 0;
    std::int64_t trials = 0;
    double empirical = 0.0; // Pr[PUR accepts]
    Interval ci95;
    // The limit formula evaluated with the queue started at q0 = 1, and
    // the variant whose queue is seeded per trial with the formula's
    // initial positive-unit count, Binomial(m, u1/U). Which one the
    // theorem intends is left open; both are reported.
    double predicted_q0_one = 0.0;
    double predicted_seeded = 0.0;
    bool matched_q0_one = false; // |empirical - prediction| <= match_tol
    bool matched_seeded = false;
    double match_tol = 0.05;
};

// Checks the case hypothesis on S (throws, naming the failed condition),
// sets m by the case's scaling, measures Pr[PUR accepts] over multiset
// samples, and evaluates the limit prediction.
CaseReport case_theorem_check(CaseKind kind, const ConstraintSet& s, double c, std::int32_t n,
                              std::int64_t trials, std::int64_t horizon, std::uint64_t seed,
                              int jobs = 1);

struct PredictorPoint {
    double control = 0.0;
    std::int64_t trials = 0;
    bool has_success_rate = false; // exact ground truth needs n <= 30
    double success_rate = 0.0;     // Pr[predictor output == oracle output]
    Interval success_ci;
    double lower_bound = 0.0; // Pr[an endpoint satisfies], valid at any n
    Interval lower_ci;
};

std::vector<PredictorPoint> endpoint_predictor_study(const ConstraintSet& s, std::int32_t n,
                                                     const std::vector<double>& controls,
                                                     std::int64_t trials, Model model,
                                                     std::uint64_t seed, int jobs = 1);

// Closed form under the constant-probability model: the half point of
// "the all-true (or all-false) assignment satisfies the sample", i.e. the
// p with (1-p)^A = 1/2 where A counts the clause instances that the
// endpoint falsifies.
double endpoint_analytic_p_half(const ConstraintSet& s, std::int32_t n, bool one_endpoint);

struct MeanFieldComparison {
    std::int32_t stage_offset = 0; // c, the stage is t = n - c
    std::int64_t observed_traces = 0;
    double empirical_p2 = 0.0;
    double empirical_n2 = 0.0;
    double predicted_p2 = 0.0;
    double predicted_n2 = 0.0;
};

// Conditional means of the size-2 cells over traces still running at
// stage n - c, c = 0..max_offset, against the exact trajectory.
std::vector<MeanFieldComparison> mean_field_comparison(const ConstraintSet& s, std::int32_t n,
                                                       std::int64_t m, std::int32_t max_offset,
                                                       std::int64_t trials, std::uint64_t seed,
                                                       int jobs = 1);

} // namespace tlab
