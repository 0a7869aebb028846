// Contraction-path benchmarks: layer compilation, boundary folding and
// marginal extraction across instance sizes.
#include "tnsched/casegen.hpp"
#include "tnsched/engine.hpp"
#include "tnsched/layers.hpp"
#include "tnsched/tensor.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace tnsched;

Instance make_instance(int machines, int tasks, int rules, std::uint64_t seed) {
    GenSpec spec;
    spec.machines = machines;
    spec.tasks_per_machine = tasks;
    spec.rule_count = rules;
    spec.seed = seed;
    return generate_instance(spec);
}

void BM_CompileLayers(benchmark::State& state) {
    const Instance inst =
        make_instance(10, 10, static_cast<int>(state.range(0)), 0xbe7c0de);
    for (auto _ : state) {
        auto layers = compile_all(inst, 10.0);
        benchmark::DoNotOptimize(layers);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompileLayers)->Arg(10)->Arg(30)->Arg(100)->Arg(300);

void BM_FullContract(benchmark::State& state) {
    const Instance inst =
        make_instance(static_cast<int>(state.range(0)), 10, 10, 0xbe7c0de);
    const EvolvedState st = build_state(normalize(inst), 10.0);
    const std::vector<SiteColumn> columns = network_columns(st, -1);
    for (auto _ : state) {
        auto result = full_contract(columns);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_FullContract)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_Marginal(benchmark::State& state) {
    const Instance inst =
        make_instance(static_cast<int>(state.range(0)), 10, 10, 0xbe7c0de);
    const EvolvedState st = build_state(normalize(inst), 10.0);
    const int middle = inst.machine_count() / 2;
    for (auto _ : state) {
        auto amplitudes = marginal(st, middle);
        benchmark::DoNotOptimize(amplitudes);
    }
}
BENCHMARK(BM_Marginal)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_BasisProbe(benchmark::State& state) {
    const Instance inst = make_instance(5, 4, 6, 0xbe7c0de);
    const std::vector<RuleLayer> layers = compile_all(inst, 10.0);
    std::vector<SiteColumn> columns(inst.machine_count());
    for (int i = 0; i < inst.machine_count(); ++i) {
        columns[i].machine = i;
        columns[i].input.assign(inst.task_count(i), 1.0);
        for (const RuleLayer& layer : layers) {
            const DenseTensor* site = layer.site(i);
            if (site) columns[i].sites.emplace_back(*site);
            else      columns[i].sites.emplace_back(std::nullopt);
        }
    }
    const std::vector<int> x(inst.machine_count(), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_operator_to_basis(columns, x));
    }
}
BENCHMARK(BM_BasisProbe);

} // namespace

BENCHMARK_MAIN();
