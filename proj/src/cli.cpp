#include "tlab/cli.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "tlab/constraints.hpp"
#include "tlab/experiments.hpp"
#include "tlab/formula.hpp"
#include "tlab/meanfield.hpp"
#include "tlab/parallel.hpp"
#include "tlab/queue.hpp"
#include "tlab/report.hpp"
#include "tlab/solver.hpp"
#include "tlab/version.hpp"

namespace tlab {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string set_summary(const ConstraintSet& s) {
    std::ostringstream out;
    bool first = true;
    for (const auto& t : s.templates()) {
        if (!first) out << ';';
        out << t.a << ' ' << t.b;
        first = false;
    }
    return out.str();
}

nlohmann::ordered_json interval_json(const Interval& iv) {
    return nlohmann::ordered_json{{"lo", iv.lo}, {"hi", iv.hi}};
}

// Payload goes to --out when given (atomically), to stdout otherwise.
// Nothing time-dependent is allowed in the document itself.
void emit_document(const RunConfig& cfg, const ReportHeader& header,
                   const std::vector<std::string>& columns,
                   const std::vector<std::vector<std::string>>& rows,
                   const nlohmann::ordered_json& results) {
    std::string doc = cfg.format == "json" ? json_document(header, results)
                                           : csv_document(header, columns, rows);
    if (cfg.out_path.empty()) {
        std::cout << doc;
    } else {
        atomic_write_file(cfg.out_path, doc);
        std::cout << "wrote " << cfg.out_path << '\n';
    }
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
    } else {
        atomic_write_file(cfg.out_path, text);
        std::cout << "wrote " << cfg.out_path << '\n';
    }
}

Decider parse_decider(const std::string& name) {
    if (name == "oracle") return Decider::Oracle;
    if (name == "pur") return Decider::Pur;
    throw std::invalid_argument("unknown decider: " + name);
}

Model parse_model(const std::string& name) {
    if (name == "multiset") return Model::Multiset;
    if (name == "constprob") return Model::ConstProb;
    throw std::invalid_argument("unknown model: " + name);
}

std::string list_to_string(const std::vector<double>& xs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        out << fmt_double(xs[i]);
    }
    return out.str();
}

std::string list_to_string(const std::vector<std::int32_t>& xs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        out << xs[i];
    }
    return out.str();
}

int do_classify(const RunConfig& cfg) {
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    ThresholdClassification cls = classify_threshold(s);
    SchaeferClass schaefer = schaefer_class_clausal(s);
    std::set<CorollaryCase> cases;
    if (cls.cls == ThresholdClass::Coarse) cases = corollary_case(s);
    ConstraintStats stats = compute_stats(s);

    std::string case_names;
    for (CorollaryCase c : cases) {
        if (!case_names.empty()) case_names += ';';
        case_names += to_string(c);
    }
    if (case_names.empty()) case_names = "-";
    std::string p_bits, n_bits;
    for (int i = 1; i <= stats.k; ++i) {
        p_bits += stats.p[static_cast<std::size_t>(i)] ? '1' : '0';
        n_bits += stats.n[static_cast<std::size_t>(i)] ? '1' : '0';
    }

    std::cout << to_string(cls.cls) << " (rule " << cls.rule << ")\n"
              << "schaefer: " << to_string(schaefer) << '\n'
              << "coarse cases: " << case_names << '\n'
              << "k = " << stats.k << ", delta_k = " << stats.delta_k << '\n'
              << "p bits (i = 1..k): " << p_bits << ", n bits: " << n_bits << '\n'
              << "a0 = " << stats.a0 << ", a_ge1 = " << stats.a_ge1 << ", b0 = " << stats.b0
              << ", b_ge1 = " << stats.b_ge1 << '\n';
    if (cls.narrow_endpoint_warning)
        std::cout << "warning: width comparison ran with an endpoint narrower than 2\n";

    if (cfg.out_path.empty()) return 0;

    ReportHeader header{"classify",
                        {{"constraints", cfg.constraints_path}, {"set", set_summary(s)}},
                        cfg.seed};
    std::vector<std::string> columns{"class", "rule",  "schaefer", "cases", "k",
                                     "delta_k", "a0",  "a_ge1",    "b0",    "b_ge1",
                                     "p_bits",  "n_bits"};
    std::vector<std::vector<std::string>> rows{{to_string(cls.cls), std::string(1, cls.rule),
                                                to_string(schaefer), case_names,
                                                std::to_string(stats.k),
                                                std::to_string(stats.delta_k),
                                                std::to_string(stats.a0),
                                                std::to_string(stats.a_ge1),
                                                std::to_string(stats.b0),
                                                std::to_string(stats.b_ge1), p_bits, n_bits}};
    nlohmann::ordered_json results{{"class", to_string(cls.cls)},
                                   {"rule", std::string(1, cls.rule)},
                                   {"schaefer", to_string(schaefer)},
                                   {"cases", case_names},
                                   {"k", stats.k},
                                   {"delta_k", stats.delta_k},
                                   {"a0", stats.a0},
                                   {"a_ge1", stats.a_ge1},
                                   {"b0", stats.b0},
                                   {"b_ge1", stats.b_ge1},
                                   {"p_bits", p_bits},
                                   {"n_bits", n_bits}};
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

int do_generate(const RunConfig& cfg) {
    if ((cfg.m >= 0) == (cfg.p >= 0))
        throw std::invalid_argument("generate: pass exactly one of --m or --p");
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    Rng rng(derive_seed(cfg.seed, 0));
    Formula f = cfg.m >= 0 ? sample_multiset(s, cfg.n, cfg.m, rng)
                           : sample_const_prob(s, cfg.n, cfg.p, rng);
    emit_text(cfg, to_dimacs(f));
    return 0;
}

int do_solve(const RunConfig& cfg) {
    Formula f = load_dimacs(cfg.input_path);
    bool formula_horn = true;
    for (const auto& cl : f.clauses) {
        int positives = 0;
        for (const auto& lit : cl)
            if (!lit.negated) ++positives;
        if (positives > 1) formula_horn = false;
    }

    std::string decider = cfg.decider;
    if (decider == "auto") {
        if (f.max_clause_size() <= 2)
            decider = "sat2";
        else if (f.n <= kOracleDefaultVarCap)
            decider = "oracle";
        else if (formula_horn)
            decider = "pur";
        else
            throw std::invalid_argument(
                "solve: no exact decider applies (n > 30, clauses wider than 2, not Horn); "
                "pick --decider pur to test unit resolution anyway");
    }

    if (decider == "sat2") {
        bool sat = sat2_scc(f);
        std::cout << (sat ? "satisfiable" : "unsatisfiable") << " [sat2]\n";
        return sat ? 10 : 20;
    }
    if (decider == "oracle") {
        bool sat = oracle_sat(f);
        std::cout << (sat ? "satisfiable" : "unsatisfiable") << " [oracle]\n";
        return sat ? 10 : 20;
    }
    Rng rng(derive_seed(cfg.seed, 0));
    PurResult r = pur(f, rng);
    if (r.outcome == PurOutcome::Reject) {
        std::cout << "unsatisfiable [pur reject, stage " << r.halt_stage << "]\n";
        return 20;
    }
    if (formula_horn) {
        std::cout << "satisfiable [pur accept on Horn, stage " << r.halt_stage << "]\n";
        return 10;
    }
    std::cout << "pur-accepts [no satisfiability verdict: input is not Horn]\n";
    return 0;
}

int do_pur_trace(const RunConfig& cfg) {
    Rng rng(derive_seed(cfg.seed, 0));
    Formula f;
    Params params;
    if (!cfg.input_path.empty()) {
        f = load_dimacs(cfg.input_path);
        params.emplace_back("input", cfg.input_path);
    } else {
        if (cfg.constraints_path.empty() || cfg.n <= 0 || cfg.m < 0)
            throw std::invalid_argument("pur-trace: need --input, or --constraints with --n and --m");
        ConstraintSet s = load_constraint_set(cfg.constraints_path);
        f = sample_multiset(s, cfg.n, cfg.m, rng);
        params.emplace_back("constraints", cfg.constraints_path);
        params.emplace_back("set", set_summary(s));
        params.emplace_back("n", std::to_string(cfg.n));
        params.emplace_back("m", std::to_string(cfg.m));
    }
    if (cfg.stages > 0) params.emplace_back("stages", std::to_string(cfg.stages));

    PurTrace trace = pur_trace(f, rng, cfg.stages);
    std::cout << (trace.completed
                      ? trace.outcome == PurOutcome::Accept ? "accepted" : "rejected"
                      : "truncated")
              << " at stage " << trace.halt_stage << '\n';

    ReportHeader header{"pur-trace", params, cfg.seed};
    std::vector<std::string> columns{"t", "i", "P_i", "N_i"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& st : trace.stages)
        for (std::int32_t i = 1; i <= trace.k; ++i)
            rows.push_back({std::to_string(st.t), std::to_string(i),
                            std::to_string(st.p_count[static_cast<std::size_t>(i)]),
                            std::to_string(st.n_count[static_cast<std::size_t>(i)])});

    nlohmann::ordered_json stages_json = nlohmann::ordered_json::array();
    for (const auto& st : trace.stages) {
        nlohmann::ordered_json row{{"t", st.t}};
        row["P"] = std::vector<std::uint32_t>(st.p_count.begin() + 1, st.p_count.end());
        row["N"] = std::vector<std::uint32_t>(st.n_count.begin() + 1, st.n_count.end());
        stages_json.push_back(row);
    }
    nlohmann::ordered_json results{
        {"k", trace.k},
        {"outcome", trace.outcome == PurOutcome::Accept ? "accept" : "reject"},
        {"completed", trace.completed},
        {"halt_stage", trace.halt_stage},
        {"stages", stages_json}};
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

int do_curve(const RunConfig& cfg) {
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    CurveResult curve = sat_curve(s, cfg.n, cfg.controls, cfg.trials, parse_decider(cfg.decider),
                                  parse_model(cfg.model), cfg.seed, cfg.jobs);
    ReportHeader header{"curve",
                        {{"constraints", cfg.constraints_path},
                         {"set", set_summary(s)},
                         {"n", std::to_string(cfg.n)},
                         {"controls", list_to_string(cfg.controls)},
                         {"trials", std::to_string(cfg.trials)},
                         {"decider", cfg.decider},
                         {"model", cfg.model},
                         {"property", curve.property}},
                        cfg.seed};
    std::vector<std::string> columns{"control", "estimate", "ci_lo", "ci_hi", "trials"};
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& pt : curve.points) {
        rows.push_back({fmt_double(pt.control), fmt_double(pt.estimate), fmt_double(pt.ci95.lo),
                        fmt_double(pt.ci95.hi), std::to_string(pt.trials)});
        points.push_back(nlohmann::ordered_json{{"control", pt.control},
                                                {"estimate", pt.estimate},
                                                {"ci95", interval_json(pt.ci95)},
                                                {"trials", pt.trials}});
    }
    nlohmann::ordered_json results{{"property", curve.property}, {"points", points}};
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

std::vector<std::string> width_row(const WidthReport& r) {
    std::vector<std::string> row{std::to_string(r.n),
                                 fmt_double(r.epsilon),
                                 fmt_double(r.p_eps),
                                 fmt_double(r.p_half),
                                 fmt_double(r.p_one_minus_eps),
                                 fmt_double(r.width_ratio)};
    for (const Interval* iv :
         {&r.p_eps_bracket, &r.p_half_bracket, &r.p_one_minus_eps_bracket, &r.ratio_interval}) {
        row.push_back(fmt_double(iv->lo));
        row.push_back(fmt_double(iv->hi));
    }
    return row;
}

const std::vector<std::string> kWidthColumns{
    "n",          "epsilon",    "p_eps",     "p_half",    "p_one_minus_eps",
    "width_ratio", "p_eps_lo",  "p_eps_hi",  "p_half_lo", "p_half_hi",
    "p_one_lo",   "p_one_hi",   "ratio_lo",  "ratio_hi"};

nlohmann::ordered_json width_json(const WidthReport& r) {
    return nlohmann::ordered_json{{"n", r.n},
                                  {"epsilon", r.epsilon},
                                  {"p_eps", r.p_eps},
                                  {"p_half", r.p_half},
                                  {"p_one_minus_eps", r.p_one_minus_eps},
                                  {"width_ratio", r.width_ratio},
                                  {"p_eps_bracket", interval_json(r.p_eps_bracket)},
                                  {"p_half_bracket", interval_json(r.p_half_bracket)},
                                  {"p_one_minus_eps_bracket",
                                   interval_json(r.p_one_minus_eps_bracket)},
                                  {"ratio_interval", interval_json(r.ratio_interval)}};
}

int do_width(const RunConfig& cfg) {
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    WidthReport report = threshold_points(s, cfg.n, cfg.epsilon, parse_decider(cfg.decider),
                                          cfg.trials, cfg.seed, cfg.jobs);
    std::cout << "p_half = " << report.p_half << ", width ratio = " << report.width_ratio << '\n';
    ReportHeader header{"width",
                        {{"constraints", cfg.constraints_path},
                         {"set", set_summary(s)},
                         {"n", std::to_string(cfg.n)},
                         {"epsilon", fmt_double(cfg.epsilon)},
                         {"trials", std::to_string(cfg.trials)},
                         {"decider", cfg.decider}},
                        cfg.seed};
    emit_document(cfg, header, kWidthColumns, {width_row(report)}, width_json(report));
    return 0;
}

int do_trend(const RunConfig& cfg) {
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    TrendResult trend = sharpness_trend(s, cfg.n_list, cfg.epsilon, parse_decider(cfg.decider),
                                        cfg.trials, cfg.seed, cfg.jobs);
    std::cout << to_string(trend.verdict) << '\n';
    ReportHeader header{"trend",
                        {{"constraints", cfg.constraints_path},
                         {"set", set_summary(s)},
                         {"n_list", list_to_string(cfg.n_list)},
                         {"epsilon", fmt_double(cfg.epsilon)},
                         {"trials", std::to_string(cfg.trials)},
                         {"decider", cfg.decider}},
                        cfg.seed};
    std::vector<std::string> columns = kWidthColumns;
    columns.push_back("verdict");
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto& r : trend.reports) {
        auto row = width_row(r);
        row.push_back(to_string(trend.verdict));
        rows.push_back(row);
        reports.push_back(width_json(r));
    }
    nlohmann::ordered_json results{{"verdict", to_string(trend.verdict)}, {"reports", reports}};
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

int do_case_check(const RunConfig& cfg) {
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    CaseKind kind = cfg.case_index == 1   ? CaseKind::Case1
                    : cfg.case_index == 2 ? CaseKind::Case2
                                          : CaseKind::Case3;
    CaseReport report = case_theorem_check(kind, s, cfg.c, cfg.n, cfg.trials, cfg.horizon,
                                           cfg.seed, cfg.jobs);
    std::cout << to_string(kind) << ": empirical " << report.empirical << ", predicted(q0=1) "
              << report.predicted_q0_one << ", predicted(seeded) " << report.predicted_seeded
              << '\n';
    ReportHeader header{"case-check",
                        {{"case", to_string(kind)},
                         {"constraints", cfg.constraints_path},
                         {"set", set_summary(s)},
                         {"c", fmt_double(cfg.c)},
                         {"n", std::to_string(cfg.n)},
                         {"trials", std::to_string(cfg.trials)},
                         {"horizon", std::to_string(cfg.horizon)}},
                        cfg.seed};
    std::vector<std::string> columns{"case",      "c",           "n",
                                     "m",         "trials",      "empirical",
                                     "ci_lo",     "ci_hi",       "predicted_q0_one",
                                     "predicted_seeded", "matched_q0_one", "matched_seeded",
                                     "match_tol"};
    std::vector<std::vector<std::string>> rows{
        {to_string(report.kind), fmt_double(report.c), std::to_string(report.n),
         std::to_string(report.m), std::to_string(report.trials), fmt_double(report.empirical),
         fmt_double(report.ci95.lo), fmt_double(report.ci95.hi),
         fmt_double(report.predicted_q0_one), fmt_double(report.predicted_seeded),
         report.matched_q0_one ? "1" : "0", report.matched_seeded ? "1" : "0",
         fmt_double(report.match_tol)}};
    nlohmann::ordered_json results{{"case", to_string(report.kind)},
                                   {"c", report.c},
                                   {"n", report.n},
                                   {"m", report.m},
                                   {"trials", report.trials},
                                   {"empirical", report.empirical},
                                   {"ci95", interval_json(report.ci95)},
                                   {"predicted_q0_one", report.predicted_q0_one},
                                   {"predicted_seeded", report.predicted_seeded},
                                   {"matched_q0_one", report.matched_q0_one},
                                   {"matched_seeded", report.matched_seeded},
                                   {"match_tol", report.match_tol}};
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

int do_predictor_study(const RunConfig& cfg) {
    ConstraintSet s = load_constraint_set(cfg.constraints_path);
    auto points = endpoint_predictor_study(s, cfg.n, cfg.controls, cfg.trials,
                                           parse_model(cfg.model), cfg.seed, cfg.jobs);
    ReportHeader header{"predictor-study",
                        {{"constraints", cfg.constraints_path},
                         {"set", set_summary(s)},
                         {"n", std::to_string(cfg.n)},
                         {"controls", list_to_string(cfg.controls)},
                         {"trials", std::to_string(cfg.trials)},
                         {"model", cfg.model}},
                        cfg.seed};
    std::vector<std::string> columns{"control",     "trials",     "lower_bound", "lower_lo",
                                     "lower_hi",    "has_success", "success_rate", "success_lo",
                                     "success_hi"};
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const auto& pt : points) {
        rows.push_back({fmt_double(pt.control), std::to_string(pt.trials),
                        fmt_double(pt.lower_bound), fmt_double(pt.lower_ci.lo),
                        fmt_double(pt.lower_ci.hi), pt.has_success_rate ? "1" : "0",
                        fmt_double(pt.success_rate), fmt_double(pt.success_ci.lo),
                        fmt_double(pt.success_ci.hi)});
        nlohmann::ordered_json row{{"control", pt.control},
                                   {"trials", pt.trials},
                                   {"lower_bound", pt.lower_bound},
                                   {"lower_ci", interval_json(pt.lower_ci)},
                                   {"has_success_rate", pt.has_success_rate}};
        if (pt.has_success_rate) {
            row["success_rate"] = pt.success_rate;
            row["success_ci"] = interval_json(pt.success_ci);
        }
        results.push_back(row);
    }
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

int do_qempty(const RunConfig& cfg) {
    RateFunction rate = parse_rate_spec(cfg.rate_spec);
    QemptyEstimate est = qempty_mc(rate, cfg.trials, cfg.horizon, cfg.q0, cfg.seed, cfg.jobs);
    std::cout << "estimate " << est.estimate << " [" << est.ci95.lo << ", " << est.ci95.hi
              << "]";
    if (rate.is_constant()) std::cout << ", fixed point " << qempty_fixed_rate(rate.constant_lambda());
    std::cout << '\n';
    ReportHeader header{"qempty",
                        {{"rate", cfg.rate_spec},
                         {"trials", std::to_string(cfg.trials)},
                         {"horizon", std::to_string(cfg.horizon)},
                         {"q0", std::to_string(cfg.q0)}},
                        cfg.seed};
    std::vector<std::string> columns{"estimate", "ci_lo", "ci_hi", "trials", "horizon", "q0",
                                     "emptied"};
    std::vector<std::vector<std::string>> rows{
        {fmt_double(est.estimate), fmt_double(est.ci95.lo), fmt_double(est.ci95.hi),
         std::to_string(est.trials), std::to_string(est.horizon),
         std::to_string(est.initial_queue), std::to_string(est.emptied)}};
    nlohmann::ordered_json results{{"estimate", est.estimate},
                                   {"ci95", interval_json(est.ci95)},
                                   {"trials", est.trials},
                                   {"horizon", est.horizon},
                                   {"q0", est.initial_queue},
                                   {"emptied", est.emptied}};
    emit_document(cfg, header, columns, rows, results);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"threshold laboratory for random clausal formulas"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_jobs = true) {
        sub->add_option("--seed", cfg.seed, "master seed (default: drawn once and echoed)");
        sub->add_option("--out", cfg.out_path, "output file (default: stdout)");
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        if (with_jobs)
            sub->add_option("--jobs", cfg.jobs, "worker threads (default: THRESHOLD_LAB_JOBS or all cores)");
    };

    CLI::App* classify = app.add_subcommand("classify", "classify a constraint set");
    classify->add_option("--constraints", cfg.constraints_path, "constraint set file")
        ->required();
    add_common(classify, false);

    CLI::App* generate = app.add_subcommand("generate", "sample one random formula as DIMACS");
    generate->add_option("--constraints", cfg.constraints_path)->required();
    generate->add_option("--n", cfg.n, "variables")->required()->check(CLI::PositiveNumber);
    generate->add_option("--m", cfg.m, "multiset model: clause count")->check(CLI::NonNegativeNumber);
    generate->add_option("--p", cfg.p, "constant-probability model: inclusion probability")
        ->check(CLI::Range(0.0, 1.0));
    add_common(generate, false);

    CLI::App* solve = app.add_subcommand("solve", "decide one DIMACS formula");
    solve->add_option("--input", cfg.input_path, "DIMACS file")->required();
    solve->add_option("--decider", cfg.decider, "decision procedure (default: auto)")
        ->check(CLI::IsMember({"auto", "oracle", "pur", "sat2"}));
    solve->add_option("--seed", cfg.seed, "seed for pur's random unit choices");

    CLI::App* ptrace = app.add_subcommand("pur-trace", "cell-count trace of one pur run");
    ptrace->add_option("--input", cfg.input_path, "DIMACS file");
    ptrace->add_option("--constraints", cfg.constraints_path, "sample from this set instead");
    ptrace->add_option("--n", cfg.n)->check(CLI::PositiveNumber);
    ptrace->add_option("--m", cfg.m)->check(CLI::NonNegativeNumber);
    ptrace->add_option("--stages", cfg.stages, "record at most this many stages")
        ->check(CLI::NonNegativeNumber);
    add_common(ptrace, false);

    CLI::App* curve = app.add_subcommand("curve", "satisfiability curve over a control grid");
    curve->add_option("--constraints", cfg.constraints_path)->required();
    curve->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
    curve->add_option("--controls", cfg.controls, "comma-separated control values")
        ->required()
        ->delimiter(',');
    curve->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber)->capture_default_str();
    curve->add_option("--decider", cfg.decider, "oracle or pur")
        ->check(CLI::IsMember({"oracle", "pur"}))
        ->capture_default_str();
    curve->add_option("--model", cfg.model, "multiset (control = density) or constprob (control = p)")
        ->check(CLI::IsMember({"multiset", "constprob"}))
        ->capture_default_str();
    add_common(curve);

    CLI::App* width = app.add_subcommand("width", "threshold location and relative width");
    width->add_option("--constraints", cfg.constraints_path)->required();
    width->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
    width->add_option("--epsilon", cfg.epsilon)->check(CLI::Range(1e-6, 0.499999))
        ->capture_default_str();
    width->add_option("--trials", cfg.trials, "per-probe starting trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    width->add_option("--decider", cfg.decider)->check(CLI::IsMember({"oracle", "pur"}))
        ->capture_default_str();
    add_common(width);

    CLI::App* trend = app.add_subcommand("trend", "width-ratio trend across sizes");
    trend->add_option("--constraints", cfg.constraints_path)->required();
    trend->add_option("--n-list", cfg.n_list, "comma-separated sizes")
        ->delimiter(',')
        ->capture_default_str();
    trend->add_option("--epsilon", cfg.epsilon)->check(CLI::Range(1e-6, 0.499999))
        ->capture_default_str();
    trend->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber)->capture_default_str();
    trend->add_option("--decider", cfg.decider)->check(CLI::IsMember({"oracle", "pur"}))
        ->capture_default_str();
    add_common(trend);

    CLI::App* case_check = app.add_subcommand("case-check", "limit-theorem check for one case");
    case_check->add_option("--case", cfg.case_index, "1, 2, or 3")
        ->required()
        ->check(CLI::Range(1, 3));
    case_check->add_option("--constraints", cfg.constraints_path)->required();
    case_check->add_option("--c", cfg.c, "density constant")->required()
        ->check(CLI::PositiveNumber);
    case_check->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
    case_check->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber)
        ->capture_default_str();
    case_check->add_option("--horizon", cfg.horizon)->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(case_check);

    CLI::App* predictor = app.add_subcommand("predictor-study", "endpoint predictor vs ground truth");
    predictor->add_option("--constraints", cfg.constraints_path)->required();
    predictor->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
    predictor->add_option("--controls", cfg.controls)->required()->delimiter(',');
    predictor->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber)
        ->capture_default_str();
    predictor->add_option("--model", cfg.model)->check(CLI::IsMember({"multiset", "constprob"}))
        ->capture_default_str();
    add_common(predictor);

    CLI::App* qempty = app.add_subcommand("qempty", "queue-emptying probability");
    qempty->add_option("--rate", cfg.rate_spec, "const:LAMBDA or polyP:c,k,delta,SETFILE")
        ->required();
    qempty->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber)->capture_default_str();
    qempty->add_option("--horizon", cfg.horizon)->check(CLI::PositiveNumber)
        ->capture_default_str();
    qempty->add_option("--q0", cfg.q0, "initial queue size")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_common(qempty);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    CLI::App* active = app.get_subcommands().front();
    cfg.command = active->get_name();
    if (cfg.command == "solve" && active->count("--decider") == 0) cfg.decider = "auto";
    cfg.seed_given = active->count("--seed") > 0;
    if (!cfg.seed_given) {
        std::random_device rd;
        cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    if (cfg.jobs <= 0) cfg.jobs = default_jobs();
    if (cfg.command == "trend" && cfg.n_list.empty()) cfg.n_list = {100, 400, 1600};

    auto started = std::chrono::steady_clock::now();
    int status = 0;
    try {
        if (cfg.command == "classify")
            status = do_classify(cfg);
        else if (cfg.command == "generate")
            status = do_generate(cfg);
        else if (cfg.command == "solve")
            status = do_solve(cfg);
        else if (cfg.command == "pur-trace")
            status = do_pur_trace(cfg);
        else if (cfg.command == "curve")
            status = do_curve(cfg);
        else if (cfg.command == "width")
            status = do_width(cfg);
        else if (cfg.command == "trend")
            status = do_trend(cfg);
        else if (cfg.command == "case-check")
            status = do_case_check(cfg);
        else if (cfg.command == "predictor-study")
            status = do_predictor_study(cfg);
        else if (cfg.command == "qempty")
            status = do_qempty(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    // Timing is for the terminal only; output files must be reproducible.
    std::cout << "# seed = " << cfg.seed << ", runtime_s = " << seconds << '\n';
    return status;
}

} // namespace tlab
