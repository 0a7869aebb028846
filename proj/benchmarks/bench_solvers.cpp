// End-to-end solver benchmarks at the working scales: full network decode,
// rule-injecting iterative search and the genetic wrapper.
#include "tnsched/casegen.hpp"
#include "tnsched/engine.hpp"
#include "tnsched/oracle.hpp"
#include "tnsched/solvers.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace tnsched;

Instance make_instance(int machines, int tasks, int rules, std::uint64_t seed,
                       int conditions = 2) {
    GenSpec spec;
    spec.machines = machines;
    spec.tasks_per_machine = tasks;
    spec.rule_count = rules;
    spec.conditions_max = conditions;
    spec.seed = seed;
    return generate_instance(spec);
}

void BM_SolveFull(benchmark::State& state) {
    // machine-count sweep at a rule density the dense decode can carry;
    // beyond that the boundary grows exponentially (the iterative solver's
    // reason to exist)
    const Instance inst =
        make_instance(static_cast<int>(state.range(0)), 10, 10, 0x5eed);
    const NormalizedInstance norm = normalize(inst);
    for (auto _ : state) {
        Assignment x = solve_full(norm);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_SolveFull)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_SolveIterative(benchmark::State& state) {
    const Instance inst =
        make_instance(10, 10, static_cast<int>(state.range(0)), 0x5eed);
    for (auto _ : state) {
        IterativeResult res = solve_iterative(inst, {});
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_SolveIterative)->Arg(30)->Arg(100);

void BM_SolveGenetic(benchmark::State& state) {
    // dense-rule family: 1000 three-condition rules over 10x10
    const Instance inst = make_instance(10, 10, 1000, 0x5eed, 3);
    GeneticConfig cfg;
    cfg.seed = 42;
    for (auto _ : state) {
        GeneticResult res = solve_genetic(inst, cfg);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_SolveGenetic);

void BM_SolveCombined(benchmark::State& state) {
    const Instance inst = make_instance(10, 10, 1000, 0x5eed, 3);
    GeneticConfig cfg;
    cfg.seed = 42;
    for (auto _ : state) {
        GeneticResult res = solve_combined(inst, cfg, {});
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_SolveCombined);

void BM_OracleEnumeration(benchmark::State& state) {
    // 10^6-state exhaustive reference, the acceptance-scale oracle call
    const Instance inst = make_instance(6, 10, 30, 0x5eed);
    for (auto _ : state) {
        OracleReport rep = brute_force(inst);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_OracleEnumeration);

} // namespace

BENCHMARK_MAIN();
