#include "tnsched/casegen.hpp"
#include "tnsched/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tnsched;

namespace {

GenSpec spec_of(int machines, int tasks, int rules, std::uint64_t seed) {
    GenSpec s;
    s.machines = machines;
    s.tasks_per_machine = tasks;
    s.rule_count = rules;
    s.seed = seed;
    return s;
}

} // namespace

TEST_SUITE("casegen") {

TEST_CASE("generation is deterministic in the seed") {
    const GenSpec spec = spec_of(5, 4, 8, 1234);
    const Instance a = generate_instance(spec);
    const Instance b = generate_instance(spec);
    CHECK(a.times == b.times);
    CHECK(a.rules == b.rules);

    GenSpec other = spec;
    other.seed = 1235;
    const Instance c = generate_instance(other);
    CHECK(a.times != c.times);
}

TEST_CASE("generated instances have the requested shape and valid content") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const GenSpec spec = spec_of(6, 3, 10, seed);
        const Instance inst = generate_instance(spec);
        CHECK_NOTHROW(validate(inst));
        REQUIRE(inst.machine_count() == 6);
        for (const auto& row : inst.times) {
            REQUIRE(row.size() == 3);
            for (double t : row) {
                CHECK(t >= 0.0);
                CHECK(t < 1.0);
            }
        }
        REQUIRE(static_cast<int>(inst.rules.size()) == 10);
        for (const Rule& r : inst.rules) {
            CHECK_FALSE(r.extra_cost.has_value());
            REQUIRE(r.target_tasks.size() == 1);
            const int n = static_cast<int>(r.conditions.size());
            CHECK(n >= 1);
            CHECK(n <= 2);
            for (int i = 1; i < n; ++i)
                CHECK(r.conditions[i - 1].machine < r.conditions[i].machine);
            for (const auto& c : r.conditions)
                CHECK(c.machine != r.target_machine);
        }
    }
}

TEST_CASE("no generated rule duplicates or contradicts another") {
    const Instance inst = generate_instance(spec_of(5, 2, 30, 99));
    for (std::size_t i = 0; i < inst.rules.size(); ++i)
        for (std::size_t j = i + 1; j < inst.rules.size(); ++j) {
            const bool same_trigger =
                inst.rules[i].target_machine == inst.rules[j].target_machine &&
                inst.rules[i].conditions == inst.rules[j].conditions;
            CHECK_FALSE(same_trigger);
        }
}

TEST_CASE("the condition range is honoured and capped by the machine count") {
    GenSpec spec = spec_of(8, 3, 40, 7);
    spec.conditions_min = 2;
    spec.conditions_max = 3;
    const Instance inst = generate_instance(spec);
    std::set<std::size_t> sizes;
    for (const Rule& r : inst.rules) {
        sizes.insert(r.conditions.size());
        CHECK(r.conditions.size() >= 2);
        CHECK(r.conditions.size() <= 3);
    }
    CHECK(sizes.size() == 2);   // both lengths show up across 40 rules

    GenSpec capped = spec_of(3, 3, 10, 7);
    capped.conditions_min = 1;
    capped.conditions_max = 5;   // only two other machines exist
    for (const Rule& r : generate_instance(capped).rules)
        CHECK(r.conditions.size() <= 2);
}

TEST_CASE("unrepresentable shapes are rejected up front") {
    CHECK_THROWS_AS(generate_instance(spec_of(0, 3, 0, 1)), ValidationError);
    CHECK_THROWS_AS(generate_instance(spec_of(3, 0, 0, 1)), ValidationError);
    CHECK_THROWS_AS(generate_instance(spec_of(3, 2, -1, 1)), ValidationError);

    GenSpec narrow = spec_of(2, 2, 3, 1);
    narrow.conditions_min = 2;   // needs at least three machines
    CHECK_THROWS_AS(generate_instance(narrow), ValidationError);

    GenSpec bad_range = spec_of(4, 2, 3, 1);
    bad_range.conditions_min = 2;
    bad_range.conditions_max = 1;
    CHECK_THROWS_AS(generate_instance(bad_range), ValidationError);
}

TEST_CASE("an exhausted rule pool stops generation") {
    // Two machines with one task each admit only two distinct rules.
    CHECK_THROWS_AS(generate_instance(spec_of(2, 1, 3, 1)), GenerationError);
    CHECK_NOTHROW(generate_instance(spec_of(2, 1, 2, 1)));
}

TEST_CASE("a rule-free spec needs no conditionable machines") {
    const Instance inst = generate_instance(spec_of(1, 4, 0, 3));
    CHECK(inst.machine_count() == 1);
    CHECK(inst.rules.empty());
}

} // TEST_SUITE
