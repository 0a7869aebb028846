#include "tnsched/casegen.hpp"
#include "tnsched/errors.hpp"

#include <algorithm>
#include <string>

namespace tnsched {

namespace {

bool same_conditions(const Rule& a, const Rule& b) {
    if (a.conditions.size() != b.conditions.size()) return false;
    for (std::size_t i = 0; i < a.conditions.size(); ++i)
        if (a.conditions[i].machine != b.conditions[i].machine ||
            a.conditions[i].task != b.conditions[i].task)
            return false;
    return true;
}

} // namespace

Instance generate_instance(const GenSpec& spec) {
    if (spec.machines < 1) throw ValidationError("machine count must be positive");
    if (spec.tasks_per_machine < 1) throw ValidationError("tasks per machine must be positive");
    if (spec.rule_count < 0) throw ValidationError("rule count must be non-negative");
    if (spec.conditions_min < 1 || spec.conditions_max < spec.conditions_min)
        throw ValidationError("conditions range must satisfy 1 <= min <= max");
    if (spec.rule_count > 0 && spec.machines < spec.conditions_min + 1)
        throw ValidationError("need at least conditions+1 machines to place a rule");

    Rng rng(spec.seed);
    Instance inst;
    inst.times.assign(spec.machines, std::vector<double>(spec.tasks_per_machine, 0.0));
    for (auto& row : inst.times)
        for (double& t : row) t = uniform_unit(rng);

    const int cond_max = std::min(spec.conditions_max, spec.machines - 1);
    const int cond_min = std::min(spec.conditions_min, cond_max);
    const long long budget = 1000LL * (spec.rule_count + 1);
    long long attempts = 0;

    while (static_cast<int>(inst.rules.size()) < spec.rule_count) {
        if (++attempts > budget)
            throw GenerationError("rejection budget exhausted after " + std::to_string(attempts - 1) +
                                  " draws; cannot place " + std::to_string(spec.rule_count) +
                                  " compatible rules");
        Rule rule;
        rule.target_machine = static_cast<int>(uniform_below(rng, spec.machines));
        const int n_cond = uniform_int(rng, cond_min, cond_max);
        for (int pick : sample_distinct(rng, spec.machines - 1, n_cond)) {
            // skip the target machine when mapping the draw to a machine index
            const int machine = pick >= rule.target_machine ? pick + 1 : pick;
            rule.conditions.push_back(
                {machine, static_cast<int>(uniform_below(rng, spec.tasks_per_machine))});
        }
        std::sort(rule.conditions.begin(), rule.conditions.end(),
                  [](const Rule::Condition& a, const Rule::Condition& b) {
                      return a.machine < b.machine;
                  });
        rule.target_tasks = {static_cast<int>(uniform_below(rng, spec.tasks_per_machine))};

        bool rejected = false;
        for (const Rule& prior : inst.rules) {
            if (prior.target_machine != rule.target_machine) continue;
            if (!same_conditions(prior, rule)) continue;
            rejected = true;    // contradictory pair or exact duplicate
            break;
        }
        if (!rejected) inst.rules.push_back(std::move(rule));
    }
    return inst;
}

} // namespace tnsched
