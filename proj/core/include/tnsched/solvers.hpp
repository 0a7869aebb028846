#pragma once
#include "tnsched/engine.hpp"
#include "tnsched/model.hpp"
#include "tnsched/rng.hpp"

#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace tnsched {

// Shared knobs for the high-level solvers.
struct SolverOptions {
    std::size_t memory_limit_bytes = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    ContractionStats* stats = nullptr;
    const TaskMask* banned = nullptr;   // task filter (genetic chromosomes, CLI)
    std::function<void(const DeterminationStep&)> trace;
};

// Per-machine argmin of the scaled times over allowed tasks, ties to the
// lowest task index.  Returned in original machine numbering.
Assignment unrestricted_minimum(const NormalizedInstance& norm, const TaskMask* banned = nullptr);

struct IterativeConfig {
    int max_iterations = 100;
    double tau = 10.0;
};

struct IterativeResult {
    std::optional<Assignment> assignment;   // nullopt = no solution found
    double cost = std::numeric_limits<double>::infinity();
    int iterations = 0;                     // candidate evaluations, including the free minimum
    std::vector<int> injected_rules;        // instance rule indices, in injection order
};

// Start from the rule-free minimum; while the candidate violates rules,
// inject the lowest-index violated rule together with the rules condensable
// into the same layer, and re-solve over the active subset.
IterativeResult solve_iterative(const Instance& inst, const IterativeConfig& cfg,
                                const SolverOptions& opts = {});

struct GeneticConfig {
    int population = 10;
    int active_tasks_per_machine = 2;
    int rules_per_individual = 6;
    int mutations_per_child = 1;
    double survival_ratio = 1.0 / 3.0;
    int max_generations = 25;
    int crossover_swaps = 1;
    double tau = 10.0;
    std::uint64_t seed = 1;
};

// Candidate sub-problem: which tasks each machine may use and which rules
// are enforced during its evaluation.
struct Individual {
    std::vector<std::vector<int>> chromosomes;  // sorted active tasks per machine
    std::vector<int> phenotype;                 // sorted instance rule indices
    std::optional<Assignment> result;
    double cost = std::numeric_limits<double>::infinity();
    bool feasible_globally = false;

    bool same_genome(const Individual& o) const {
        return chromosomes == o.chromosomes && phenotype == o.phenotype;
    }
};

struct GenerationRecord {
    int generation = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    int feasible_count = 0;   // individuals whose result satisfies every rule
};

struct RankedSolution {
    Assignment assignment;
    double cost = 0.0;
};

struct GeneticResult {
    std::vector<RankedSolution> solutions;  // distinct, globally feasible, best first
    int generations = 0;
    int best_generation = -1;               // generation that first reached the best cost
    std::vector<GenerationRecord> history;
};

// Variation operators (exposed for direct testing).
std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b,
                                            int swaps, Rng& rng);
Individual mutate(const Individual& ind, int mutations, const Instance& inst, Rng& rng);
// Drops phenotype rules no longer condition-supported by the chromosomes and
// refills up to `quota` with random supported, mutually compatible rules.
void repair_rules(Individual& ind, const Instance& inst, int quota, Rng& rng);

// Evaluates a genome: solves the instance restricted to the chromosome tasks
// under the phenotype rules only, then scores the result against the full
// instance.  mode: 0 = full network solve, 1 = iterative.
void evaluate_individual(Individual& ind, const Instance& inst, const GeneticConfig& cfg,
                         const SolverOptions& opts, int mode,
                         const IterativeConfig* iter_cfg = nullptr);

GeneticResult solve_genetic(const Instance& inst, const GeneticConfig& cfg,
                            const SolverOptions& opts = {},
                            const std::function<void(const GenerationRecord&)>& on_generation = {});

// Genetic search whose individuals are evaluated with the iterative solver
// (supports more rules per individual at the same memory budget).
GeneticResult solve_combined(const Instance& inst, const GeneticConfig& cfg,
                             const IterativeConfig& iter_cfg, const SolverOptions& opts = {},
                             const std::function<void(const GenerationRecord&)>& on_generation = {});

} // namespace tnsched
