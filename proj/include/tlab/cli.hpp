#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tlab {

// Resolved command line. One struct serves every subcommand; unused
// fields keep their defaults. The seed is always resolved (drawn once
// from the system when absent) and echoed into every output.
struct RunConfig {
    std::string command;
    std::string constraints_path;
    std::string input_path;
    std::string out_path;
    std::string format = "csv";
    std::string rate_spec;
    std::string decider = "oracle";
    std::string model = "multiset";
    std::vector<double> controls;
    std::vector<std::int32_t> n_list;
    std::int32_t n = 0;
    std::int64_t m = -1;
    std::int64_t trials = 1000;
    std::int64_t horizon = 10000;
    std::int64_t q0 = 1;
    std::int32_t stages = 0;
    int case_index = 0;
    int jobs = 0;
    double p = -1.0;
    double c = 0.0;
    double epsilon = 0.25;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

// Parses, dispatches, writes outputs. Returns the process exit status;
// solve additionally uses the SAT-solver convention 10/20 for
// satisfiable/unsatisfiable verdicts.
int run_cli(int argc, const char* const* argv);

} // namespace tlab
