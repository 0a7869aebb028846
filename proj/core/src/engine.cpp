#include "tnsched/engine.hpp"
#include "tnsched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace tnsched {

EvolvedState build_state(const NormalizedInstance& norm, double tau, const TaskMask* banned) {
    EvolvedState st;
    st.norm = norm;
    st.tau = tau;
    st.rules = norm.base.rules;
    const int m = norm.machine_count();
    st.vectors.resize(m);
    for (int pos = 0; pos < m; ++pos) {
        const int orig = norm.permutation[pos];
        const int P = norm.task_count(pos);
        st.vectors[pos].resize(P);
        bool any = false;
        for (int j = 0; j < P; ++j) {
            const bool blocked = banned && banned->banned(orig, j);
            st.vectors[pos][j] = blocked ? 0.0 : std::exp(-tau * norm.scaled_times[pos][j]);
            any = any || !blocked;
        }
        if (!any)
            throw InfeasibleError("machine " + std::to_string(orig) + " has every task banned");
    }
    return st;
}

std::vector<SiteColumn> network_columns(const EvolvedState& st, int open_position,
                                        const EngineOptions& opts) {
    (void)opts;
    // Chain over the machines not yet fixed, compacted to 0..k-1.
    std::vector<int> remaining;
    const int m = st.norm.machine_count();
    std::vector<int> compact(m, -1);
    for (int pos = 0; pos < m; ++pos) {
        if (st.fixed.count(pos)) continue;
        compact[pos] = static_cast<int>(remaining.size());
        remaining.push_back(pos);
    }
    if (remaining.empty()) throw ShapeError("no machines left to contract");

    Instance sub;
    sub.times.reserve(remaining.size());
    for (int pos : remaining) sub.times.push_back(st.norm.base.times[pos]);
    sub.rules = st.rules;
    for (Rule& rule : sub.rules) {
        for (auto& c : rule.conditions) {
            if (compact[c.machine] < 0)
                throw ShapeError("rule still references a fixed machine");
            c.machine = compact[c.machine];
        }
        if (compact[rule.target_machine] < 0)
            throw ShapeError("rule still targets a fixed machine");
        rule.target_machine = compact[rule.target_machine];
    }

    const std::vector<RuleLayer> layers = compile_all(sub, st.tau);
    std::vector<SiteColumn> columns(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        SiteColumn& col = columns[i];
        col.machine = remaining[i];
        col.input = st.vectors[remaining[i]];
        col.sites.reserve(layers.size());
        for (const RuleLayer& L : layers) {
            const DenseTensor* site = L.site(static_cast<int>(i));
            if (site) col.sites.emplace_back(*site);
            else      col.sites.emplace_back(std::nullopt);
        }
        col.top.kind = Plug::Kind::Trace;
    }
    if (open_position >= 0) {
        if (compact[open_position] < 0) throw ShapeError("open machine is already fixed");
        columns[compact[open_position]].top.kind = Plug::Kind::Open;
    }
    return columns;
}

std::vector<double> marginal(const EvolvedState& st, int position, const EngineOptions& opts) {
    if (st.fixed.count(position)) throw ShapeError("marginal of a fixed machine");
    const std::vector<SiteColumn> columns = network_columns(st, position, opts);
    ContractionOptions copts;
    copts.memory_limit_bytes = opts.memory_limit_bytes;
    copts.stats = opts.stats;
    const ContractionResult res = full_contract(columns, copts);
    bool all_zero = true;
    for (double v : res.values)
        if (v != 0.0) { all_zero = false; break; }
    if (all_zero)
        throw InfeasibleError("marginal vanished: no assignment satisfies the active rules");
    return res.values;
}

int argmax_task(const std::vector<double>& amplitudes) {
    int best = 0;
    for (int j = 1; j < static_cast<int>(amplitudes.size()); ++j)
        if (std::abs(amplitudes[j]) > std::abs(amplitudes[best])) best = j;
    return best;
}

namespace {

// The condition combination `conds` may never hold: rewrite it as a rule
// excluding the last conditioned machine's value (or ban the task outright).
void add_exclusion(std::vector<Rule::Condition> conds, SimplifyOutcome& out,
                   const std::vector<int>& task_counts) {
    while (!conds.empty()) {
        auto last = std::max_element(conds.begin(), conds.end(),
                                     [](const auto& a, const auto& b) { return a.machine < b.machine; });
        const int machine = last->machine;
        const int task = last->task;
        if (task_counts[machine] == 1) {
            // single-task machine: the condition always holds, exclude the rest
            conds.erase(last);
            continue;
        }
        if (conds.size() == 1) {
            out.banned.emplace_back(machine, task);
            return;
        }
        Rule ex;
        ex.target_machine = machine;
        for (int t = 0; t < task_counts[machine]; ++t)
            if (t != task) ex.target_tasks.push_back(t);
        conds.erase(last);
        ex.conditions = std::move(conds);
        out.rules.push_back(std::move(ex));
        return;
    }
    throw InfeasibleError("a rule excludes an already-fixed combination");
}

// A rule whose conditions all hold collapses onto its target machine.
void collapse_rule(const Rule& rule, SimplifyOutcome& out, const std::vector<int>& task_counts) {
    if (rule.extra_cost) {
        // soft: restrict to the allowed set and remember the weight
        for (int t = 0; t < task_counts[rule.target_machine]; ++t)
            if (!std::binary_search(rule.target_tasks.begin(), rule.target_tasks.end(), t))
                out.banned.emplace_back(rule.target_machine, t);
        out.soft.push_back({rule.target_machine, rule.target_tasks, *rule.extra_cost});
    } else if (rule.target_tasks.size() == 1) {
        out.forced.emplace_back(rule.target_machine, rule.target_tasks.front());
    } else {
        for (int t = 0; t < task_counts[rule.target_machine]; ++t)
            if (!std::binary_search(rule.target_tasks.begin(), rule.target_tasks.end(), t))
                out.banned.emplace_back(rule.target_machine, t);
    }
}

} // namespace

SimplifyOutcome simplify_rules(const std::vector<Rule>& rules, int machine, int task,
                               const std::map<int, int>& fixed_so_far,
                               const std::vector<int>& task_counts) {
    SimplifyOutcome out;
    for (const Rule& rule : rules) {
        const auto cond = std::find_if(rule.conditions.begin(), rule.conditions.end(),
                                       [&](const auto& c) { return c.machine == machine; });
        if (cond != rule.conditions.end()) {
            if (cond->task != task) continue;                    // can never trigger: drop
            if (rule.conditions.size() > 1) {                    // condition is now always true
                Rule rest = rule;
                rest.conditions.erase(rest.conditions.begin() +
                                      (cond - rule.conditions.begin()));
                out.rules.push_back(std::move(rest));
            } else {
                collapse_rule(rule, out, task_counts);           // sole condition held
            }
        } else if (rule.target_machine == machine) {
            if (std::binary_search(rule.target_tasks.begin(), rule.target_tasks.end(), task))
                continue;                                        // target already satisfied
            add_exclusion(rule.conditions, out, task_counts);    // conditions must not all hold
        } else {
            out.rules.push_back(rule);
        }
    }

    // Rules whose conditions are all pinned (and matching) collapse too.
    auto value_of = [&](int mach) -> int {
        if (mach == machine) return task;
        auto it = fixed_so_far.find(mach);
        return it == fixed_so_far.end() ? -1 : it->second;
    };
    std::vector<Rule> kept;
    kept.reserve(out.rules.size());
    for (Rule& rule : out.rules) {
        bool all_match = true;
        for (const auto& c : rule.conditions)
            if (value_of(c.machine) != c.task) { all_match = false; break; }
        if (all_match) collapse_rule(rule, out, task_counts);
        else kept.push_back(std::move(rule));
    }
    out.rules = std::move(kept);
    return out;
}

void fix_machine(EvolvedState& st, int position, int task, const EngineOptions& opts) {
    std::vector<int> task_counts(st.norm.machine_count());
    for (int i = 0; i < st.norm.machine_count(); ++i) task_counts[i] = st.norm.task_count(i);

    std::deque<std::pair<int, int>> queue;
    auto pin = [&](int pos, int t, bool forced) {
        auto it = st.fixed.find(pos);
        if (it != st.fixed.end()) {
            if (it->second != t)
                throw InfeasibleError("machine at position " + std::to_string(pos) +
                                      " forced to two different tasks");
            return;
        }
        if (st.vectors[pos][t] == 0.0)
            throw InfeasibleError("machine at position " + std::to_string(pos) +
                                  " forced onto a banned task");
        st.fixed[pos] = t;
        queue.emplace_back(pos, t);
        if (forced && opts.trace) {
            DeterminationStep step;
            step.position = pos;
            step.task = t;
            step.forced = true;
            step.rules_remaining = static_cast<int>(st.rules.size());
            opts.trace(step);
        }
    };

    pin(position, task, false);
    while (!queue.empty()) {
        const auto [f, v] = queue.front();
        queue.pop_front();
        SimplifyOutcome out = simplify_rules(st.rules, f, v, st.fixed, task_counts);
        st.rules = std::move(out.rules);
        for (const auto& [mach, t] : out.banned) {
            auto it = st.fixed.find(mach);
            if (it != st.fixed.end()) {
                if (it->second == t)
                    throw InfeasibleError("rules exclude the task already fixed at position " +
                                          std::to_string(mach));
                continue;
            }
            st.vectors[mach][t] = 0.0;
            bool any = false;
            for (double x : st.vectors[mach]) any = any || x != 0.0;
            if (!any)
                throw InfeasibleError("rules banned every task at position " + std::to_string(mach));
        }
        for (const SoftRestriction& s : out.soft) {
            const double w = std::exp(-st.tau * s.extra_cost);
            for (int t : s.tasks) st.vectors[s.machine][t] *= w;
        }
        for (const auto& [mach, t] : out.forced) pin(mach, t, true);
    }
}

Assignment solve_full(const NormalizedInstance& norm, const EngineOptions& opts,
                      const TaskMask* banned) {
    EvolvedState st = build_state(norm, opts.tau, banned);
    const int m = norm.machine_count();
    for (int pos = 0; pos < m; ++pos) {
        if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
            throw TimeLimitError("solve exceeded its deadline");
        if (st.fixed.count(pos)) continue;

        ContractionStats step_stats;
        EngineOptions step_opts = opts;
        step_opts.stats = &step_stats;
        const std::vector<double> amp = marginal(st, pos, step_opts);
        if (opts.stats) {
            opts.stats->record_boundary(step_stats.max_boundary_elems);
            opts.stats->record_intermediate(step_stats.max_intermediate_elems);
        }
        const int t = argmax_task(amp);
        if (opts.trace) {
            DeterminationStep step;
            step.position = pos;
            step.task = t;
            step.forced = false;
            step.rules_remaining = static_cast<int>(st.rules.size());
            step.boundary_peak = step_stats.max_boundary_elems;
            opts.trace(step);
        }
        fix_machine(st, pos, t, opts);
    }

    Assignment out(m, -1);
    for (const auto& [pos, t] : st.fixed) out[norm.permutation[pos]] = t;
    return out;
}

} // namespace tnsched
