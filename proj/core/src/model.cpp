#include "tnsched/model.hpp"
#include "tnsched/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace tnsched {

void validate(const Instance& inst) {
    const int m = inst.machine_count();
    if (m == 0) throw ValidationError("instance has no machines");
    for (int i = 0; i < m; ++i)
        if (inst.times[i].empty())
            throw ValidationError("machine " + std::to_string(i) + " has no tasks");

    for (std::size_t r = 0; r < inst.rules.size(); ++r) {
        const Rule& rule = inst.rules[r];
        const std::string tag = "rule " + std::to_string(r) + ": ";
        if (rule.conditions.empty()) throw ValidationError(tag + "no conditions");
        if (rule.target_machine < 0 || rule.target_machine >= m)
            throw ValidationError(tag + "target machine out of range");
        std::set<int> seen;
        for (const auto& c : rule.conditions) {
            if (c.machine < 0 || c.machine >= m)
                throw ValidationError(tag + "condition machine out of range");
            if (c.task < 0 || c.task >= inst.task_count(c.machine))
                throw ValidationError(tag + "condition task out of range");
            if (!seen.insert(c.machine).second)
                throw ValidationError(tag + "duplicate condition machine " + std::to_string(c.machine));
            if (c.machine == rule.target_machine)
                throw ValidationError(tag + "condition on the target machine");
        }
        if (rule.target_tasks.empty()) throw ValidationError(tag + "empty target task set");
        for (int t : rule.target_tasks)
            if (t < 0 || t >= inst.task_count(rule.target_machine))
                throw ValidationError(tag + "target task out of range");
        if (!std::is_sorted(rule.target_tasks.begin(), rule.target_tasks.end()) ||
            std::adjacent_find(rule.target_tasks.begin(), rule.target_tasks.end()) != rule.target_tasks.end())
            throw ValidationError(tag + "target tasks must be sorted and distinct");
        if (rule.extra_cost && *rule.extra_cost < 0.0)
            throw ValidationError(tag + "negative extra cost");
    }
}

double cost(const Instance& inst, const Assignment& tasks) {
    if (static_cast<int>(tasks.size()) != inst.machine_count())
        throw ValidationError("assignment length does not match machine count");
    double total = 0.0;
    for (int i = 0; i < inst.machine_count(); ++i) {
        if (tasks[i] < 0 || tasks[i] >= inst.task_count(i))
            throw ValidationError("assignment task out of range on machine " + std::to_string(i));
        total += inst.times[i][tasks[i]];
    }
    return total;
}

std::vector<int> check_rules(const Instance& inst, const Assignment& tasks) {
    std::vector<int> violated;
    for (std::size_t r = 0; r < inst.rules.size(); ++r) {
        const Rule& rule = inst.rules[r];
        bool triggered = true;
        for (const auto& c : rule.conditions)
            if (tasks[c.machine] != c.task) { triggered = false; break; }
        if (!triggered) continue;
        if (!std::binary_search(rule.target_tasks.begin(), rule.target_tasks.end(),
                                tasks[rule.target_machine]))
            violated.push_back(static_cast<int>(r));
    }
    return violated;
}

std::vector<int> order_machines(const Instance& inst) {
    const int m = inst.machine_count();
    std::vector<int> counts(m, 0);
    for (const Rule& rule : inst.rules) {
        for (const auto& c : rule.conditions) counts[c.machine]++;
        counts[rule.target_machine]++;
    }
    std::vector<int> sorted(m);
    std::iota(sorted.begin(), sorted.end(), 0);
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        if (counts[a] != counts[b]) return counts[a] < counts[b];
        return a > b;
    });
    // Deal sorted machines to alternating chain ends, left end first, so the
    // highest-participation machine lands centermost.
    std::vector<int> perm(m, -1);
    int left = 0, right = m - 1;
    for (int k = 0; k < m; ++k) {
        if (k % 2 == 0) perm[left++] = sorted[k];
        else            perm[right--] = sorted[k];
    }
    return perm;
}

Instance permute(const Instance& inst, const std::vector<int>& perm) {
    const int m = inst.machine_count();
    if (static_cast<int>(perm.size()) != m)
        throw ValidationError("permutation length does not match machine count");
    std::vector<int> pos = invert_permutation(perm);
    Instance out;
    out.times.resize(m);
    for (int p = 0; p < m; ++p) out.times[p] = inst.times[perm[p]];
    out.rules = inst.rules;
    for (Rule& rule : out.rules) {
        for (auto& c : rule.conditions) c.machine = pos[c.machine];
        rule.target_machine = pos[rule.target_machine];
    }
    return out;
}

std::vector<int> invert_permutation(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size(), -1);
    for (std::size_t p = 0; p < perm.size(); ++p) {
        if (perm[p] < 0 || perm[p] >= static_cast<int>(perm.size()) || inv[perm[p]] != -1)
            throw ValidationError("not a permutation");
        inv[perm[p]] = static_cast<int>(p);
    }
    return inv;
}

NormalizedInstance normalize(const Instance& inst) {
    validate(inst);
    NormalizedInstance norm;
    norm.permutation = order_machines(inst);
    norm.base = permute(inst, norm.permutation);

    const int m = norm.base.machine_count();
    norm.c_min = 0.0;
    norm.c_max = 0.0;
    std::vector<double> lo(m), hi(m);
    for (int i = 0; i < m; ++i) {
        const auto& row = norm.base.times[i];
        lo[i] = *std::min_element(row.begin(), row.end());
        hi[i] = *std::max_element(row.begin(), row.end());
        norm.c_min += lo[i];
        norm.c_max += hi[i];
    }
    const double span = norm.c_max - norm.c_min;
    norm.scaled_times.resize(m);
    for (int i = 0; i < m; ++i) {
        norm.scaled_times[i].resize(norm.base.times[i].size());
        for (std::size_t j = 0; j < norm.base.times[i].size(); ++j) {
            norm.scaled_times[i][j] =
                span == 0.0 ? 0.0 : (2.0 * norm.base.times[i][j] - (lo[i] + hi[i])) / span;
        }
    }
    return norm;
}

double normalized_cost(const NormalizedInstance& norm, const Assignment& original_tasks) {
    const std::vector<int> pos = invert_permutation(norm.permutation);
    double total = 0.0;
    for (std::size_t i = 0; i < original_tasks.size(); ++i)
        total += norm.scaled_times[pos[i]][original_tasks[i]];
    return total;
}

std::string describe_rule(const Rule& rule) {
    std::ostringstream os;
    os << "if ";
    for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
        if (i) os << " & ";
        os << "m" << rule.conditions[i].machine << "=t" << rule.conditions[i].task;
    }
    os << " then m" << rule.target_machine << " in {";
    for (std::size_t i = 0; i < rule.target_tasks.size(); ++i) {
        if (i) os << ",";
        os << rule.target_tasks[i];
    }
    os << "}";
    if (rule.extra_cost) os << " +cost " << *rule.extra_cost;
    return os.str();
}

} // namespace tnsched
