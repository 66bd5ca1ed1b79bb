#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlab/cli.hpp"

namespace {

struct RunOutcome {
    int code = 0;
    std::string out;
    std::string err;
};

// Runs the CLI in-process with captured streams. Every run that should be
// reproducible passes --seed; without it the tool draws one from the OS.
RunOutcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "threshold-lab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());

    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    int code = tlab::run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

// Plain throws, not assertions: the fixture constructor runs before main,
// where doctest's context does not exist yet.
void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f.good()) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// Everything before the trailing "# seed = ..., runtime_s = ..." line,
// which carries wall-clock time and is not part of the payload.
std::string payload(const std::string& out) {
    auto pos = out.rfind("# seed = ");
    return pos == std::string::npos ? out : out.substr(0, pos);
}

const char* kTwoSatFile = "cli_tmp_2sat.cset";
const char* kHornFile = "cli_tmp_horn.cset";
const char* kSingleFile = "cli_tmp_single.cset";

struct Fixtures {
    Fixtures() {
        write_file(kTwoSatFile, "2 0\n1 1\n0 2\n");
        write_file(kHornFile, "0 1\n1 0\n1 1\n2 0\n");
        write_file(kSingleFile, "1 1\n");
    }
};
const Fixtures kFixtures;

} // namespace

TEST_CASE("a subcommand is required") {
    RunOutcome r = run({});
    CHECK(r.code != 0);
    RunOutcome help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(contains(help.out, "classify"));
    CHECK(contains(help.out, "qempty"));
    RunOutcome bad = run({"classify", "--nope"});
    CHECK(bad.code != 0);
    RunOutcome bad_format = run({"classify", "--constraints", kTwoSatFile, "--format", "xml"});
    CHECK(bad_format.code != 0);
}

TEST_CASE("classify prints the verdict and explains it") {
    RunOutcome sharp = run({"classify", "--constraints", kTwoSatFile});
    CHECK(sharp.code == 0);
    CHECK(contains(sharp.out, "Sharp (rule c)"));
    CHECK(contains(sharp.out, "schaefer: P")); // width-2 clauses: bijunctive
    CHECK(contains(sharp.out, "coarse cases: -"));
    CHECK(contains(sharp.out, "a0 = 2, a_ge1 = 1, b0 = 2, b_ge1 = 1"));

    RunOutcome coarse = run({"classify", "--constraints", kHornFile});
    CHECK(coarse.code == 0);
    CHECK(contains(coarse.out, "Coarse (rule b)"));
    CHECK(contains(coarse.out, "coarse cases: HornCase"));

    RunOutcome trivial = run({"classify", "--constraints", kSingleFile});
    CHECK(trivial.code == 0);
    CHECK(contains(trivial.out, "Trivial (rule a)"));

    RunOutcome missing = run({"classify", "--constraints", "cli_tmp_nonexistent.cset"});
    CHECK(missing.code == 1);
    CHECK(contains(missing.err, "error: "));
}

TEST_CASE("classify emits a parseable json document") {
    const char* out_path = "cli_tmp_classify.json";
    RunOutcome r = run({"classify", "--constraints", kTwoSatFile, "--format", "json", "--out",
                        out_path, "--seed", "5"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, std::string("wrote ") + out_path));
    nlohmann::json doc = nlohmann::json::parse(read_file(out_path));
    CHECK(doc["tool"] == "threshold-lab");
    CHECK(doc["command"] == "classify");
    CHECK(doc["seed"] == 5);
    CHECK(doc["results"]["class"] == "Sharp");
    CHECK(doc["results"]["rule"] == "c");
    CHECK(doc["results"]["k"] == 2);
    CHECK(doc["results"]["delta_k"] == 3);
    std::remove(out_path);
}

TEST_CASE("generate needs exactly one sampling model") {
    RunOutcome neither = run({"generate", "--constraints", kTwoSatFile, "--n", "10"});
    CHECK(neither.code == 1);
    CHECK(contains(neither.err, "error: generate: pass exactly one of --m or --p"));
    RunOutcome both = run({"generate", "--constraints", kTwoSatFile, "--n", "10", "--m", "3",
                           "--p", "0.1"});
    CHECK(both.code == 1);
}

TEST_CASE("generate writes dimacs deterministically") {
    RunOutcome empty = run({"generate", "--constraints", kTwoSatFile, "--n", "10", "--m", "0",
                            "--seed", "1"});
    CHECK(empty.code == 0);
    CHECK(payload(empty.out) == "p cnf 10 0\n");

    RunOutcome a = run({"generate", "--constraints", kTwoSatFile, "--n", "10", "--m", "5",
                        "--seed", "9"});
    RunOutcome b = run({"generate", "--constraints", kTwoSatFile, "--n", "10", "--m", "5",
                        "--seed", "9"});
    CHECK(a.code == 0);
    CHECK(contains(a.out, "p cnf 10 5\n"));
    CHECK(payload(a.out) == payload(b.out));
    RunOutcome c = run({"generate", "--constraints", kTwoSatFile, "--n", "10", "--m", "5",
                        "--seed", "10"});
    CHECK(payload(a.out) != payload(c.out));

    const char* out_path = "cli_tmp_gen.cnf";
    RunOutcome to_file = run({"generate", "--constraints", kTwoSatFile, "--n", "10", "--m", "5",
                              "--seed", "9", "--out", out_path});
    CHECK(to_file.code == 0);
    CHECK(read_file(out_path) == payload(a.out));
    std::remove(out_path);
}

TEST_CASE("solve reports through its exit code") {
    const char* path = "cli_tmp_solve.cnf";

    write_file(path, "p cnf 2 2\n-1 2 0\n-2 0\n");
    RunOutcome sat = run({"solve", "--input", path});
    CHECK(sat.code == 10);
    CHECK(contains(sat.out, "satisfiable [sat2]"));

    write_file(path, "p cnf 1 2\n1 0\n-1 0\n");
    RunOutcome unsat = run({"solve", "--input", path});
    CHECK(unsat.code == 20);
    CHECK(contains(unsat.out, "unsatisfiable [sat2]"));

    write_file(path, "p cnf 3 2\n1 2 3 0\n-1 -2 0\n");
    RunOutcome oracle = run({"solve", "--input", path});
    CHECK(oracle.code == 10);
    CHECK(contains(oracle.out, "satisfiable [oracle]"));

    write_file(path, "p cnf 3 1\n1 2 3 0\n");
    RunOutcome pur_accept = run({"solve", "--input", path, "--decider", "pur", "--seed", "4"});
    CHECK(pur_accept.code == 0);
    CHECK(contains(pur_accept.out, "pur-accepts [no satisfiability verdict: input is not Horn]"));

    write_file(path, "p cnf 1 2\n1 0\n-1 0\n");
    RunOutcome pur_reject = run({"solve", "--input", path, "--decider", "pur", "--seed", "4"});
    CHECK(pur_reject.code == 20);
    CHECK(contains(pur_reject.out, "unsatisfiable [pur reject"));

    write_file(path, "p cnf 2 2\n-1 2 0\n1 0\n");
    RunOutcome pur_horn = run({"solve", "--input", path, "--decider", "pur", "--seed", "4"});
    CHECK(pur_horn.code == 10);
    CHECK(contains(pur_horn.out, "satisfiable [pur accept on Horn"));

    write_file(path, "p cnf 31 1\n1 2 3 0\n");
    RunOutcome stuck = run({"solve", "--input", path});
    CHECK(stuck.code == 1);
    CHECK(contains(stuck.err, "no exact decider applies"));

    write_file(path, "p cnf 3 1\n1 2 3 0\n");
    RunOutcome wide_sat2 = run({"solve", "--input", path, "--decider", "sat2"});
    CHECK(wide_sat2.code == 1);

    RunOutcome gone = run({"solve", "--input", "cli_tmp_nonexistent.cnf"});
    CHECK(gone.code == 1);
    std::remove(path);
}

TEST_CASE("pur-trace walks a unit chain to acceptance") {
    const char* path = "cli_tmp_trace.cnf";
    write_file(path, "p cnf 2 2\n1 0\n-1 2 0\n");
    const char* out_path = "cli_tmp_trace.json";
    RunOutcome r = run({"pur-trace", "--input", path, "--seed", "3", "--format", "json", "--out",
                        out_path});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "accepted at stage 0"));
    nlohmann::json doc = nlohmann::json::parse(read_file(out_path));
    CHECK(doc["results"]["outcome"] == "accept");
    CHECK(doc["results"]["completed"] == true);
    CHECK(doc["results"]["halt_stage"] == 0);
    CHECK(doc["results"]["stages"].size() == 3);
    CHECK(doc["results"]["stages"][0]["t"] == 2);

    const char* csv_path = "cli_tmp_trace.csv";
    RunOutcome c = run({"pur-trace", "--input", path, "--seed", "3", "--out", csv_path});
    REQUIRE(c.code == 0);
    std::string csv = read_file(csv_path);
    CHECK(contains(csv, "# command = pur-trace\n"));
    CHECK(contains(csv, "t,i,P_i,N_i\n"));

    RunOutcome neither = run({"pur-trace", "--seed", "3"});
    CHECK(neither.code == 1);
    CHECK(contains(neither.err, "pur-trace: need --input, or --constraints with --n and --m"));
    std::remove(path);
    std::remove(out_path);
    std::remove(csv_path);
}

TEST_CASE("pur-trace can sample its own input") {
    RunOutcome r = run({"pur-trace", "--constraints", kHornFile, "--n", "20", "--m", "40",
                        "--seed", "8", "--stages", "3"});
    CHECK(r.code == 0);
    bool ends = contains(r.out, "accepted at stage") || contains(r.out, "rejected at stage") ||
                contains(r.out, "truncated at stage");
    CHECK(ends);
}

TEST_CASE("curve output is seed-reproducible and job-count independent") {
    const char* path_a = "cli_tmp_curve_a.csv";
    const char* path_b = "cli_tmp_curve_b.csv";
    std::vector<std::string> base = {"curve", "--constraints", kTwoSatFile,  "--n",     "10",
                                     "--controls", "0.5,1.5", "--trials",   "200",     "--decider",
                                     "oracle",     "--model", "multiset",   "--seed",  "7"};

    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    REQUIRE(run(with({"--out", path_a, "--jobs", "1"})).code == 0);
    REQUIRE(run(with({"--out", path_b, "--jobs", "8"})).code == 0);
    std::string a = read_file(path_a);
    CHECK(a == read_file(path_b));
    CHECK(contains(a, "# tool = threshold-lab 0.1.0\n"));
    CHECK(contains(a, "# command = curve\n"));
    CHECK(contains(a, "# seed = 7\n"));
    CHECK(contains(a, "control,estimate,ci_lo,ci_hi,trials\n"));
    CHECK_FALSE(contains(a, "jobs"));
    CHECK_FALSE(contains(a, "runtime"));

    REQUIRE(run(with({"--out", path_b})).code == 0);
    CHECK(a == read_file(path_b));

    REQUIRE(run({"curve", "--constraints", kTwoSatFile, "--n", "10", "--controls", "0.5,1.5",
                 "--trials", "200", "--seed", "8", "--out", path_b})
                .code == 0);
    CHECK(a != read_file(path_b));
    std::remove(path_a);
    std::remove(path_b);
}

TEST_CASE("curve labels the pur property on non-Horn sets") {
    const char* out_path = "cli_tmp_curve.json";
    RunOutcome r = run({"curve", "--constraints", kTwoSatFile, "--n", "50", "--controls", "0.5",
                        "--trials", "100", "--decider", "pur", "--seed", "2", "--format", "json",
                        "--out", out_path});
    REQUIRE(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(read_file(out_path));
    CHECK(doc["params"]["property"] == "pur-accepts");
    CHECK(doc["results"]["property"] == "pur-accepts");
    CHECK(doc["results"]["points"].size() == 1);
    double est = doc["results"]["points"][0]["estimate"].get<double>();
    CHECK(est >= 0.0);
    CHECK(est <= 1.0);
    std::remove(out_path);
}

TEST_CASE("width locates an ordered crossing triple") {
    const char* out_path = "cli_tmp_width.csv";
    RunOutcome r = run({"width", "--constraints", kTwoSatFile, "--n", "10", "--epsilon", "0.25",
                        "--trials", "200", "--decider", "oracle", "--seed", "13", "--out",
                        out_path});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "p_half = "));
    CHECK(contains(r.out, "width ratio = "));
    std::string csv = read_file(out_path);
    CHECK(contains(csv, "n,epsilon,p_eps,p_half,p_one_minus_eps,width_ratio"));
    std::remove(out_path);
}

TEST_CASE("qempty agrees with the constant-rate fixed point") {
    const char* out_path = "cli_tmp_qempty.json";
    RunOutcome r = run({"qempty", "--rate", "const:2", "--trials", "20000", "--horizon", "3000",
                        "--q0", "1", "--seed", "42", "--format", "json", "--out", out_path});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "fixed point"));
    nlohmann::json doc = nlohmann::json::parse(read_file(out_path));
    double est = doc["results"]["estimate"].get<double>();
    CHECK(std::abs(est - 0.203187869980) < 0.015);
    CHECK(doc["results"]["trials"] == 20000);
    CHECK(doc["results"]["q0"] == 1);
    std::remove(out_path);

    RunOutcome poly = run({"qempty", "--rate", std::string("polyP:3,2,3,") + kHornFile,
                           "--trials", "2000", "--horizon", "1000", "--seed", "6"});
    CHECK(poly.code == 0);
    CHECK_FALSE(contains(poly.out, "fixed point"));

    RunOutcome bad = run({"qempty", "--rate", "linear:2", "--trials", "10", "--seed", "6"});
    CHECK(bad.code == 1);
}

TEST_CASE("case-check reports both predictions") {
    const char* set_path = "cli_tmp_case2.cset";
    write_file(set_path, "1 0\n1 1\n");
    const char* out_path = "cli_tmp_case2.json";
    RunOutcome r = run({"case-check", "--case", "2", "--constraints", set_path, "--c", "2",
                        "--n", "100", "--trials", "200", "--horizon", "2000", "--seed", "3",
                        "--format", "json", "--out", out_path});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "Case2: empirical 1"));
    nlohmann::json doc = nlohmann::json::parse(read_file(out_path));
    CHECK(doc["results"]["empirical"] == 1.0);
    CHECK(doc["results"]["predicted_seeded"] == 1.0);
    CHECK(doc["results"]["matched_seeded"] == true);
    CHECK(doc["results"]["matched_q0_one"] == false);

    RunOutcome wrong = run({"case-check", "--case", "1", "--constraints", set_path, "--c", "2",
                            "--n", "100", "--seed", "3"});
    CHECK(wrong.code == 1);
    CHECK(contains(wrong.err, "Case 1 hypothesis fails"));
    std::remove(set_path);
    std::remove(out_path);
}

TEST_CASE("predictor-study omits the success rate when no oracle fits") {
    const char* out_path = "cli_tmp_pred.json";
    RunOutcome r = run({"predictor-study", "--constraints", kTwoSatFile, "--n", "40",
                        "--controls", "0.5,1.0", "--trials", "150", "--seed", "12", "--format",
                        "json", "--out", out_path});
    REQUIRE(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(read_file(out_path));
    REQUIRE(doc["results"].size() == 2);
    CHECK(doc["results"][0]["has_success_rate"] == false);
    CHECK_FALSE(doc["results"][0].contains("success_rate"));
    std::remove(out_path);

    RunOutcome small = run({"predictor-study", "--constraints", kTwoSatFile, "--n", "12",
                            "--controls", "0.5", "--trials", "150", "--seed", "12", "--format",
                            "json", "--out", out_path});
    REQUIRE(small.code == 0);
    nlohmann::json small_doc = nlohmann::json::parse(read_file(out_path));
    CHECK(small_doc["results"][0]["has_success_rate"] == true);
    CHECK(small_doc["results"][0].contains("success_rate"));
    std::remove(out_path);
}

TEST_CASE("a seed is drawn and echoed when none is given") {
    RunOutcome r = run({"classify", "--constraints", kTwoSatFile});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "# seed = "));
    CHECK(contains(r.out, "runtime_s = "));
}
