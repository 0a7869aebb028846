#pragma once
#include "tnsched/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tnsched {

// Exhaustive reference results.  Deliberately naive: enumerates the full
// assignment space so the clever solvers have something honest to be checked
// against.  Guarded to 1e7 states.
struct OracleReport {
    std::optional<Assignment> best;     // lexicographically smallest optimum
    double best_cost = 0.0;             // raw time units
    long long feasible_count = 0;
    long long optima_count = 0;         // assignments matching best_cost exactly
    // Normalized-cost gap between the optimum and the next-best distinct
    // feasible cost; +inf when no runner-up exists.
    double runner_up_gap = 0.0;
};

// Enumerates every assignment, filters by check_rules, tracks the minimum.
// Throws ValidationError when the state space exceeds max_states.
OracleReport brute_force(const Instance& inst, std::uint64_t max_states = 10'000'000);

// Sum over assignments x with x[machine] = j of
//   w(x) * exp(-tau * normalized_cost(x))
// where w(x) is 0 if any rule is violated and otherwise the product of
// exp(-tau * extra_cost) over triggered-and-satisfied soft rules.  This is
// the reference for the tensor-network marginal.
std::vector<double> brute_force_marginal(const Instance& inst, double tau, int machine,
                                         std::uint64_t max_states = 10'000'000);

} // namespace tnsched
