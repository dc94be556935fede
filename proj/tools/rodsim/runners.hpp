#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rodsim/scenario.hpp"

namespace rodsim::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kSchema = 2, kNonConvergence = 3 };

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::string scenario_label;
    bool deterministic = false;
    int convergence = 0;  // number of mesh levels; 0 = single run
    int jobs = 1;
};

struct RunOutcome {
    int exit_code = kOk;
    std::string message;
    std::vector<std::string> files;
};

// Runs a parsed scenario and writes results.csv, report.json and, for the
// dynamic mode, trajectory.csv into opt.out_dir. Throws SchemaError for
// option combinations the scenario cannot honor.
RunOutcome run_scenario(const Scenario& sc, const RunOptions& opt);

}  // namespace rodsim::cli
