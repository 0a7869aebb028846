#include "tnsched/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Tensor-network solver for task assignment under conditional rules"};
    app.require_subcommand(1);

    tnsched::SolveArgs solve;
    CLI::App* s = app.add_subcommand("solve", "Solve an instance file");
    s->add_option("instance", solve.instance_path, "instance JSON file")->required();
    s->add_option("--method", solve.method, "full | iterative | genetic | combined | oracle")
        ->check(CLI::IsMember({"full", "iterative", "genetic", "combined", "oracle"}));
    s->add_option("--config", solve.config_path, "solver config JSON file");
    s->add_option("--tau", solve.tau, "damping constant (default 10)");
    s->add_option("--seed", solve.seed, "random seed for genetic/combined (default 1)");
    s->add_option("--max-iterations", solve.max_iterations,
                  "iterative: candidate evaluations budget (default 100)");
    s->add_option("--population", solve.population, "genetic: population size (default 10)");
    s->add_option("--chromosome-size", solve.chromosome_size,
                  "genetic: active tasks per machine (default 2)");
    s->add_option("--rules-per-individual", solve.rules_per_individual,
                  "genetic: phenotype size (default 6)");
    s->add_option("--mutations", solve.mutations, "genetic: mutations per child (default 1)");
    s->add_option("--survival-ratio", solve.survival_ratio,
                  "genetic: surviving fraction per generation (default 1/3)");
    s->add_option("--max-generations", solve.max_generations,
                  "genetic: generation budget (default 25)");
    s->add_option("--memory-cap-mb", solve.memory_cap_mb,
                  "abort when contraction exceeds this many MiB (0 = unlimited)");
    s->add_option("--timeout-s", solve.timeout_s, "wall-clock budget in seconds (0 = none)");
    s->add_option("--output", solve.output_path, "also write the result document here");
    s->add_flag("-v,--verbose", solve.verbosity,
                "-v: per-generation records; -vv: per-machine trace (stderr)");

    tnsched::GenerateArgs gen;
    CLI::App* g = app.add_subcommand("generate", "Generate a random instance");
    g->add_option("-m,--machines", gen.machines, "machine count")->required();
    g->add_option("-p,--tasks-per-machine", gen.tasks_per_machine, "tasks per machine")
        ->required();
    g->add_option("-r,--rules", gen.rule_count, "rule count")->required();
    g->add_option("--conditions-min", gen.conditions_min, "min conditions per rule (default 1)");
    g->add_option("--conditions-max", gen.conditions_max, "max conditions per rule (default 2)");
    g->add_option("--seed", gen.seed, "random seed (default 1)");
    g->add_option("--output", gen.output_path, "instance file path (default: stdout)");

    tnsched::VerifyArgs verify;
    CLI::App* v = app.add_subcommand("verify", "Check an assignment against an instance");
    v->add_option("instance", verify.instance_path, "instance JSON file")->required();
    v->add_option("assignment", verify.assignment_path, "assignment JSON file")->required();
    v->add_option("--output", verify.output_path, "also write the report document here");

    tnsched::BenchArgs bench;
    CLI::App* b = app.add_subcommand("bench", "Run a seeded benchmark suite");
    b->add_option("--suite", bench.suite,
                  "small | paper-iterative | paper-genetic | paper-combined");
    b->add_option("--method", bench.method, "override the suite's solver method");
    b->add_option("--jobs", bench.jobs, "parallel workers (default 1)");
    b->add_option("--limit", bench.limit, "run only the first N cases (0 = all)");
    b->add_option("--seed", bench.seed, "suite seed (default 1)");
    b->add_option("--tau", bench.tau, "damping constant override");
    b->add_option("--memory-cap-mb", bench.memory_cap_mb, "per-case memory cap (MiB)");
    b->add_option("--timeout-s", bench.timeout_s, "per-case time budget (seconds)");
    b->add_option("--output", bench.output_path, "CSV file path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;   // input errors are exit 1; --help stays 0
    }

    if (s->parsed()) return tnsched::cmd_solve(solve, std::cout, std::cerr);
    if (g->parsed()) return tnsched::cmd_generate(gen, std::cout, std::cerr);
    if (v->parsed()) return tnsched::cmd_verify(verify, std::cout, std::cerr);
    if (b->parsed()) return tnsched::cmd_bench(bench, std::cout, std::cerr);
    return 1;
}
