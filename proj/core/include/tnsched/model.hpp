#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tnsched {

// One task index per machine.
using Assignment = std::vector<int>;

// Conditional assignment rule: if every condition (machine, task) holds, the
// target machine must run one of target_tasks.  A rule with extra_cost keeps
// the same constraint but additionally scales the amplitude of assignments
// that trigger it by exp(-tau * extra_cost).
struct Rule {
    struct Condition {
        int machine = 0;
        int task = 0;
        friend bool operator==(const Condition&, const Condition&) = default;
    };
    std::vector<Condition> conditions;        // distinct machines, never the target
    int target_machine = 0;
    std::vector<int> target_tasks;            // sorted, non-empty
    std::optional<double> extra_cost;         // absent = hard rule

    friend bool operator==(const Rule&, const Rule&) = default;
};

// times[i][j] = execution time of task j on machine i (jagged: machines may
// offer different task counts).
struct Instance {
    std::vector<std::vector<double>> times;
    std::vector<Rule> rules;

    int machine_count() const { return static_cast<int>(times.size()); }
    int task_count(int machine) const { return static_cast<int>(times[machine].size()); }
};

// Throws ValidationError on structural problems (bad indices, empty task
// lists, duplicate condition machines, conditions on the target machine...).
void validate(const Instance& inst);

// Total execution time of an assignment.
double cost(const Instance& inst, const Assignment& tasks);

// Indices of rules violated by the assignment: all conditions hold but the
// target machine's task is outside target_tasks.
std::vector<int> check_rules(const Instance& inst, const Assignment& tasks);
inline bool feasible(const Instance& inst, const Assignment& tasks) {
    return check_rules(inst, tasks).empty();
}

// Chain order for the tensor network: machines sorted by ascending
// rule-participation count (ties: descending machine index), then dealt to
// alternating ends of the chain starting at the left, so the most constrained
// machine ends up centermost.  Returns the position -> machine map.
std::vector<int> order_machines(const Instance& inst);

// Rewrites times and rule indices so that position p holds machine perm[p].
Instance permute(const Instance& inst, const std::vector<int>& perm);

// Instance prepared for imaginary-time evolution: machines reordered and
// times affinely rescaled so every total cost lies in [-1, 1].
struct NormalizedInstance {
    Instance base;                              // already permuted
    std::vector<std::vector<double>> scaled_times;
    std::vector<int> permutation;               // position -> original machine
    double c_min = 0.0;                         // sum of per-machine minima
    double c_max = 0.0;                         // sum of per-machine maxima

    int machine_count() const { return base.machine_count(); }
    int task_count(int position) const { return base.task_count(position); }
};

// order_machines + per-entry rescale 2*(t - (min+max)/2) / (c_max - c_min).
// Degenerate c_max == c_min maps every entry to 0.
NormalizedInstance normalize(const Instance& inst);

// Scaled total cost of an assignment given in *original* machine numbering.
double normalized_cost(const NormalizedInstance& norm, const Assignment& original_tasks);

// position -> machine map inverted to machine -> position.
std::vector<int> invert_permutation(const std::vector<int>& perm);

// Per-machine forbidden-task mask (task filtering for solvers).
class TaskMask {
public:
    TaskMask() = default;
    explicit TaskMask(const Instance& inst) {
        banned_.resize(inst.times.size());
        for (std::size_t i = 0; i < inst.times.size(); ++i)
            banned_[i].assign(inst.times[i].size(), 0);
    }
    bool banned(int machine, int task) const {
        return !banned_.empty() && banned_[machine][task] != 0;
    }
    void ban(int machine, int task) { banned_[machine][task] = 1; }
    bool empty() const { return banned_.empty(); }
    int allowed_count(int machine) const {
        if (banned_.empty()) return -1;
        int n = 0;
        for (auto b : banned_[machine]) n += (b == 0);
        return n;
    }

private:
    std::vector<std::vector<std::uint8_t>> banned_;
};

std::string describe_rule(const Rule& rule);

} // namespace tnsched
