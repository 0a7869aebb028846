#pragma once
#include "tnsched/model.hpp"
#include "tnsched/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace tnsched {

// Subcommand entry points, testable without a process boundary: arguments
// come pre-parsed, documents go to `out`, diagnostics and timings to `err`.
// Exit codes: 0 = feasible result, 2 = no feasible result (infeasible /
// no solution / memory or time cap / generation failure), 1 = input error.

struct SolveArgs {
    std::string instance_path;
    std::string method = "full";   // full | iterative | genetic | combined | oracle
    std::string config_path;       // optional solver-config JSON
    std::string output_path;       // also write the document here
    std::optional<double> tau;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iterations;
    std::optional<int> population;
    std::optional<int> chromosome_size;
    std::optional<int> rules_per_individual;
    std::optional<int> mutations;
    std::optional<double> survival_ratio;
    std::optional<int> max_generations;
    double memory_cap_mb = 0.0;    // 0 = unlimited
    double timeout_s = 0.0;        // 0 = no deadline
    int verbosity = 0;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);

struct GenerateArgs {
    int machines = 0;
    int tasks_per_machine = 0;
    int rule_count = 0;
    int conditions_min = 1;
    int conditions_max = 2;
    std::uint64_t seed = 1;
    std::string output_path;       // empty = document to `out`
};

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);

struct VerifyArgs {
    std::string instance_path;
    std::string assignment_path;
    std::string output_path;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
    std::string suite = "small";   // small | paper-iterative | paper-genetic | paper-combined
    std::string method;            // empty = suite default
    int jobs = 1;
    int limit = 0;                 // keep only the first N cases (0 = all)
    std::uint64_t seed = 1;
    std::optional<double> tau;
    double memory_cap_mb = 0.0;
    double timeout_s = 0.0;        // per case
    std::string output_path;       // empty = CSV to `out`
};

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

} // namespace tnsched
