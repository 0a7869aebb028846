#pragma once
#include "tnsched/model.hpp"
#include "tnsched/rng.hpp"

#include <cstdint>

namespace tnsched {

// Parameters for the random instance generator.
struct GenSpec {
    int machines = 0;
    int tasks_per_machine = 0;      // uniform P across machines
    int rule_count = 0;
    int conditions_min = 1;         // conditions per rule drawn from this range
    int conditions_max = 2;         // (capped at machines - 1)
    std::uint64_t seed = 0;
};

// Draws times ~ Uniform(0,1) and `rule_count` single-task conditional rules
// with distinct condition machines.  A draw is rejected when its condition
// set matches an accepted rule's conditions on the same target machine with
// a different task (contradictory pair), or duplicates one exactly.
// Throws GenerationError once the rejection budget is exhausted and
// ValidationError for unrepresentable specs.
Instance generate_instance(const GenSpec& spec);

} // namespace tnsched
