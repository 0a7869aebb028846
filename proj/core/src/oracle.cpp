#include "tnsched/oracle.hpp"
#include "tnsched/errors.hpp"

#include <cmath>
#include <limits>

namespace tnsched {
namespace {

std::uint64_t state_space_size(const Instance& inst, std::uint64_t cap) {
    std::uint64_t n = 1;
    for (int i = 0; i < inst.machine_count(); ++i) {
        n *= static_cast<std::uint64_t>(inst.task_count(i));
        if (n > cap)
            throw ValidationError("state space exceeds brute-force guard of " + std::to_string(cap));
    }
    return n;
}

// Odometer-style enumeration; returns false once the space is exhausted.
bool advance(Assignment& x, const Instance& inst) {
    for (int i = inst.machine_count() - 1; i >= 0; --i) {
        if (++x[i] < inst.task_count(i)) return true;
        x[i] = 0;
    }
    return false;
}

} // namespace

OracleReport brute_force(const Instance& inst, std::uint64_t max_states) {
    validate(inst);
    state_space_size(inst, max_states);

    OracleReport rep;
    double second_cost = std::numeric_limits<double>::infinity();
    Assignment x(inst.machine_count(), 0);
    do {
        if (!check_rules(inst, x).empty()) continue;
        const double c = cost(inst, x);
        rep.feasible_count++;
        if (!rep.best) {
            rep.best = x;
            rep.best_cost = c;
            rep.optima_count = 1;
        } else if (c < rep.best_cost) {
            second_cost = rep.best_cost;
            rep.best = x;
            rep.best_cost = c;
            rep.optima_count = 1;
        } else if (c == rep.best_cost) {
            rep.optima_count++;       // enumeration order is lexicographic, so
                                      // rep.best stays the smallest optimum
        } else if (c < second_cost) {
            second_cost = c;
        }
    } while (advance(x, inst));

    if (rep.best) {
        // Report the gap on the normalized scale so thresholds are
        // instance-size independent.
        const NormalizedInstance norm = normalize(inst);
        const double span = norm.c_max - norm.c_min;
        if (std::isinf(second_cost) || span == 0.0)
            rep.runner_up_gap = std::numeric_limits<double>::infinity();
        else
            rep.runner_up_gap = 2.0 * (second_cost - rep.best_cost) / span;
    }
    return rep;
}

std::vector<double> brute_force_marginal(const Instance& inst, double tau, int machine,
                                         std::uint64_t max_states) {
    validate(inst);
    state_space_size(inst, max_states);
    if (machine < 0 || machine >= inst.machine_count())
        throw ValidationError("marginal machine out of range");

    const NormalizedInstance norm = normalize(inst);
    std::vector<double> out(inst.task_count(machine), 0.0);
    Assignment x(inst.machine_count(), 0);
    do {
        double weight = 1.0;
        for (const Rule& rule : inst.rules) {
            bool triggered = true;
            for (const auto& c : rule.conditions)
                if (x[c.machine] != c.task) { triggered = false; break; }
            if (!triggered) continue;
            const bool target_ok = std::binary_search(
                rule.target_tasks.begin(), rule.target_tasks.end(), x[rule.target_machine]);
            if (!target_ok) { weight = 0.0; break; }
            if (rule.extra_cost) weight *= std::exp(-tau * *rule.extra_cost);
        }
        if (weight == 0.0) continue;
        out[x[machine]] += weight * std::exp(-tau * normalized_cost(norm, x));
    } while (advance(x, inst));
    return out;
}

} // namespace tnsched
