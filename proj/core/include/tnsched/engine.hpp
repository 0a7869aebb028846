#pragma once
#include "tnsched/layers.hpp"
#include "tnsched/model.hpp"
#include "tnsched/tensor.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace tnsched {

// One machine got fixed during solve_full (emitted via EngineOptions::trace).
struct DeterminationStep {
    int position = 0;            // chain position that was just decided
    int task = 0;
    bool forced = false;         // decided by rule simplification, not a marginal
    int rules_remaining = 0;
    std::size_t boundary_peak = 0;
};

struct EngineOptions {
    double tau = 10.0;
    std::size_t memory_limit_bytes = 0;   // 0 = unlimited
    std::optional<std::chrono::steady_clock::time_point> deadline;
    ContractionStats* stats = nullptr;
    std::function<void(const DeterminationStep&)> trace;
};

// Imaginary-time-evolved product state plus the rules still in play.
// Everything here lives in chain-position numbering.
struct EvolvedState {
    NormalizedInstance norm;
    double tau = 10.0;
    std::vector<std::vector<double>> vectors;  // exp(-tau*That), banned tasks zeroed
    std::vector<Rule> rules;                   // shrinks as machines get fixed
    std::map<int, int> fixed;                  // position -> task
};

// Throws InfeasibleError when a machine has every task banned.
EvolvedState build_state(const NormalizedInstance& norm, double tau,
                         const TaskMask* banned = nullptr);

// Unnormalized task distribution of the unfixed machine at `position`:
// entry j sums rule-layer weights times evolution weights over all
// assignments of the remaining machines with this one pinned to j.
// Throws InfeasibleError when every entry is zero.
std::vector<double> marginal(const EvolvedState& st, int position,
                             const EngineOptions& opts = {});

// Largest-amplitude task, ties to the lowest index.
int argmax_task(const std::vector<double>& amplitudes);

// Residual weight left behind when a triggered soft rule collapses: the
// target machine keeps only `tasks`, each scaled by exp(-tau*extra_cost).
struct SoftRestriction {
    int machine = 0;
    std::vector<int> tasks;
    double extra_cost = 0.0;
};

// Effects of pinning `machine` to `task` on a rule set.
struct SimplifyOutcome {
    std::vector<Rule> rules;                    // surviving / rewritten rules
    std::vector<std::pair<int, int>> forced;    // machine -> task, now mandatory
    std::vector<std::pair<int, int>> banned;    // machine/task combinations now impossible
    std::vector<SoftRestriction> soft;
};

// Rewrites rules under x[machine] = task:
//  - rules conditioning on `machine` with another task are dropped
//  - matching conditions are removed; a rule left with no conditions either
//    forces its target (hard, singleton), restricts it (hard, set) or turns
//    into a soft restriction
//  - rules targeting `machine` are dropped when satisfied, otherwise their
//    condition combination becomes an exclusion rule (or a banned task)
//  - finally any rule whose conditions are all inside fixed_so_far with
//    matching values collapses the same way
// task_counts is needed to build complement task sets for exclusion rules.
SimplifyOutcome simplify_rules(const std::vector<Rule>& rules, int machine, int task,
                               const std::map<int, int>& fixed_so_far,
                               const std::vector<int>& task_counts);

// Pins position -> task and cascades simplification (forced assignments are
// processed recursively).  Throws InfeasibleError on contradictions.
void fix_machine(EvolvedState& st, int position, int task,
                 const EngineOptions& opts = {});

// Machine-by-machine decoding: repeatedly take the lowest unfixed position,
// pick its marginal argmax, fix it and simplify, recompiling the remaining
// network each round.  Returns the assignment in original machine numbering.
Assignment solve_full(const NormalizedInstance& norm, const EngineOptions& opts = {},
                      const TaskMask* banned = nullptr);

// The network columns for the current remaining machines (exposed for tests
// and diagnostics).  open_position = -1 traces everything.
std::vector<SiteColumn> network_columns(const EvolvedState& st, int open_position,
                                        const EngineOptions& opts = {});

} // namespace tnsched
