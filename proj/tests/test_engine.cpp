#include "tnsched/casegen.hpp"
#include "tnsched/engine.hpp"
#include "tnsched/errors.hpp"
#include "tnsched/oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>

using namespace tnsched;
using test::close;
using test::instance_a;

namespace {

Rule hard(std::vector<Rule::Condition> conds, int target, std::vector<int> tasks) {
    Rule r;
    r.conditions = std::move(conds);
    r.target_machine = target;
    r.target_tasks = std::move(tasks);
    return r;
}

// Normalized view with identity ordering and flat times: machine vectors are
// all-ones, so engine behaviour reduces to pure rule algebra.
NormalizedInstance flat_norm(int machines, int tasks, std::vector<Rule> rules) {
    NormalizedInstance norm;
    norm.base.times.assign(machines, std::vector<double>(tasks, 1.0));
    norm.base.rules = std::move(rules);
    norm.scaled_times.assign(machines, std::vector<double>(tasks, 0.0));
    norm.permutation.resize(machines);
    for (int i = 0; i < machines; ++i) norm.permutation[i] = i;
    norm.c_min = norm.c_max = static_cast<double>(machines);
    return norm;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("evolved vectors are the damped scaled times") {
    const NormalizedInstance norm = normalize(instance_a());
    const EvolvedState st = build_state(norm, 10.0);
    REQUIRE(st.vectors.size() == 2);
    for (int pos = 0; pos < 2; ++pos)
        for (int j = 0; j < 2; ++j)
            CHECK(st.vectors[pos][j] ==
                  doctest::Approx(std::exp(-10.0 * norm.scaled_times[pos][j])).epsilon(1e-15));
}

TEST_CASE("banned tasks zero their amplitudes") {
    const Instance inst = instance_a();
    TaskMask mask(inst);
    mask.ban(0, 1);
    const NormalizedInstance norm = normalize(inst);
    const EvolvedState st = build_state(norm, 10.0, &mask);
    const int pos0 = invert_permutation(norm.permutation)[0];
    CHECK(st.vectors[pos0][1] == 0.0);
    CHECK(st.vectors[pos0][0] > 0.0);

    TaskMask all(inst);
    all.ban(1, 0);
    all.ban(1, 1);
    CHECK_THROWS_AS(build_state(norm, 10.0, &all), InfeasibleError);
}

TEST_CASE("marginal reproduces the hand-computed anchor values") {
    const Instance inst = instance_a();
    const NormalizedInstance norm = normalize(inst);
    const EvolvedState st = build_state(norm, 1.0);
    const std::vector<int> inv = invert_permutation(norm.permutation);
    const std::vector<double> m0 = marginal(st, inv[0]);
    CHECK(m0[0] == doctest::Approx(1.2214027581601699).epsilon(1e-14));
    CHECK(m0[1] == doctest::Approx(1.1866101942494242).epsilon(1e-14));
}

TEST_CASE("marginal matches the exhaustive reference on random instances") {
    int compared = 0;
    for (int i = 0; i < 30; ++i) {
        GenSpec spec;
        spec.machines = 3 + i % 3;
        spec.tasks_per_machine = 2 + (i / 3) % 3;
        spec.rule_count = 1 + i % 6;
        spec.seed = 4200 + i;
        const Instance inst = generate_instance(spec);
        if (brute_force(inst).feasible_count == 0) continue;
        const NormalizedInstance norm = normalize(inst);
        const EvolvedState st = build_state(norm, 1.0);
        for (int pos = 0; pos < norm.machine_count(); ++pos) {
            const std::vector<double> got = marginal(st, pos);
            const std::vector<double> want =
                brute_force_marginal(inst, 1.0, norm.permutation[pos]);
            REQUIRE(got.size() == want.size());
            for (std::size_t j = 0; j < got.size(); ++j) {
                CHECK(close(got[j], want[j], 1e-9));
                ++compared;
            }
        }
    }
    CHECK(compared > 200);   // the sweep must not silently degenerate
}

TEST_CASE("marginal includes soft-rule weights") {
    Instance inst = instance_a();
    inst.rules[0].extra_cost = 0.7;
    const NormalizedInstance norm = normalize(inst);
    const EvolvedState st = build_state(norm, 1.0);
    const std::vector<int> inv = invert_permutation(norm.permutation);
    for (int machine = 0; machine < 2; ++machine) {
        const std::vector<double> got = marginal(st, inv[machine]);
        const std::vector<double> want = brute_force_marginal(inst, 1.0, machine);
        for (std::size_t j = 0; j < got.size(); ++j) CHECK(close(got[j], want[j], 1e-12));
    }
}

TEST_CASE("marginal of an infeasible instance reports infeasibility") {
    // whatever machine 0 runs, machine 1 is forced onto two different tasks
    std::vector<Rule> rules = {hard({{0, 0}}, 1, {0}), hard({{0, 0}}, 1, {1}),
                               hard({{0, 1}}, 1, {0}), hard({{0, 1}}, 1, {1})};
    const NormalizedInstance norm = flat_norm(2, 2, rules);
    const EvolvedState st = build_state(norm, 1.0);
    CHECK_THROWS_AS(marginal(st, 0), InfeasibleError);
}

TEST_CASE("argmax prefers the lowest index on ties") {
    CHECK(argmax_task({1.0, 3.0, 2.0}) == 1);
    CHECK(argmax_task({2.0, 2.0, 2.0}) == 0);
    CHECK(argmax_task({0.0, 1.0, 1.0}) == 1);
}

TEST_CASE("simplification drops rules with contradicted conditions") {
    const std::vector<Rule> rules = {hard({{0, 0}, {2, 1}}, 3, {0})};
    const SimplifyOutcome out = simplify_rules(rules, 0, 1, {}, {2, 2, 2, 2});
    CHECK(out.rules.empty());
    CHECK(out.forced.empty());
    CHECK(out.banned.empty());
}

TEST_CASE("simplification strips satisfied conditions") {
    const std::vector<Rule> rules = {hard({{0, 0}, {2, 1}}, 3, {0})};
    const SimplifyOutcome out = simplify_rules(rules, 0, 0, {}, {2, 2, 2, 2});
    REQUIRE(out.rules.size() == 1);
    CHECK(out.rules[0].conditions == std::vector<Rule::Condition>{{2, 1}});
    CHECK(out.rules[0].target_machine == 3);
}

TEST_CASE("a fully matched hard rule forces or restricts its target") {
    SUBCASE("singleton target forces") {
        const std::vector<Rule> rules = {hard({{0, 0}}, 1, {1})};
        const SimplifyOutcome out = simplify_rules(rules, 0, 0, {}, {2, 3});
        CHECK(out.rules.empty());
        REQUIRE(out.forced.size() == 1);
        CHECK(out.forced[0] == std::pair<int, int>{1, 1});
    }
    SUBCASE("set target bans the complement") {
        const std::vector<Rule> rules = {hard({{0, 0}}, 1, {0, 2})};
        const SimplifyOutcome out = simplify_rules(rules, 0, 0, {}, {2, 3});
        CHECK(out.rules.empty());
        CHECK(out.forced.empty());
        REQUIRE(out.banned.size() == 1);
        CHECK(out.banned[0] == std::pair<int, int>{1, 1});
    }
}

TEST_CASE("a fully matched soft rule becomes a weighted restriction") {
    std::vector<Rule> rules = {hard({{0, 0}}, 1, {0, 2})};
    rules[0].extra_cost = 0.25;
    const SimplifyOutcome out = simplify_rules(rules, 0, 0, {}, {2, 4});
    CHECK(out.rules.empty());
    REQUIRE(out.banned.size() == 2);   // tasks 1 and 3 cut
    REQUIRE(out.soft.size() == 1);
    CHECK(out.soft[0].machine == 1);
    CHECK(out.soft[0].tasks == std::vector<int>{0, 2});
    CHECK(out.soft[0].extra_cost == 0.25);
}

TEST_CASE("rules targeting the fixed machine are resolved") {
    SUBCASE("satisfied target drops the rule") {
        const std::vector<Rule> rules = {hard({{2, 1}}, 0, {0, 1})};
        const SimplifyOutcome out = simplify_rules(rules, 0, 1, {}, {3, 2, 2});
        CHECK(out.rules.empty());
        CHECK(out.banned.empty());
    }
    SUBCASE("violated target with one condition bans the trigger") {
        const std::vector<Rule> rules = {hard({{2, 1}}, 0, {0})};
        const SimplifyOutcome out = simplify_rules(rules, 0, 1, {}, {3, 2, 2});
        CHECK(out.rules.empty());
        REQUIRE(out.banned.size() == 1);
        CHECK(out.banned[0] == std::pair<int, int>{2, 1});
    }
    SUBCASE("violated target with two conditions becomes an exclusion rule") {
        const std::vector<Rule> rules = {hard({{1, 0}, {2, 1}}, 0, {0})};
        const SimplifyOutcome out = simplify_rules(rules, 0, 1, {}, {3, 2, 4});
        REQUIRE(out.rules.size() == 1);
        // "if machine 1 runs task 0, machine 2 must avoid task 1"
        CHECK(out.rules[0].conditions == std::vector<Rule::Condition>{{1, 0}});
        CHECK(out.rules[0].target_machine == 2);
        CHECK(out.rules[0].target_tasks == std::vector<int>{0, 2, 3});
    }
}

TEST_CASE("rules whose conditions are all pinned collapse through the map") {
    const std::vector<Rule> rules = {hard({{1, 0}, {3, 1}}, 2, {1})};
    SUBCASE("matching pins force the target") {
        const SimplifyOutcome out = simplify_rules(rules, 1, 0, {{3, 1}}, {2, 2, 2, 2});
        CHECK(out.rules.empty());
        REQUIRE(out.forced.size() == 1);
        CHECK(out.forced[0] == std::pair<int, int>{2, 1});
    }
    SUBCASE("a mismatching pin keeps the rule pending") {
        // dropping happens when machine 3 itself gets pinned, not here
        const SimplifyOutcome out = simplify_rules(rules, 1, 0, {{3, 0}}, {2, 2, 2, 2});
        REQUIRE(out.rules.size() == 1);
        CHECK(out.rules[0].conditions == std::vector<Rule::Condition>{{3, 1}});
        CHECK(out.forced.empty());
    }
}

TEST_CASE("pinning cascades through forced assignments") {
    NormalizedInstance norm = flat_norm(3, 2, {
        hard({{0, 0}}, 1, {1}),
        hard({{1, 1}}, 2, {0}),
    });
    EvolvedState st = build_state(norm, 1.0);
    fix_machine(st, 0, 0);
    CHECK(st.fixed.at(0) == 0);
    CHECK(st.fixed.at(1) == 1);   // forced by the first rule
    CHECK(st.fixed.at(2) == 0);   // forced transitively by the second
    CHECK(st.rules.empty());
}

TEST_CASE("contradictory pins are infeasible") {
    NormalizedInstance norm = flat_norm(3, 2, {
        hard({{0, 0}}, 2, {0}),
        hard({{1, 0}}, 2, {1}),
    });
    EvolvedState st = build_state(norm, 1.0);
    fix_machine(st, 0, 0);
    CHECK_THROWS_AS(fix_machine(st, 1, 0), InfeasibleError);
}

TEST_CASE("solving the anchor instance returns its optimum") {
    const Assignment x = solve_full(normalize(instance_a()));
    CHECK(x == Assignment{0, 0});
}

TEST_CASE("solving honours task masks") {
    const Instance inst = instance_a();
    TaskMask mask(inst);
    mask.ban(0, 0);   // forbid the unconstrained optimum's first choice
    const Assignment x = solve_full(normalize(inst), {}, &mask);
    CHECK(x == Assignment{1, 1});   // best remaining feasible pick
    CHECK(feasible(inst, x));
}

TEST_CASE("solver matches the oracle on unique-optimum instances") {
    int solved = 0;
    for (int i = 0; i < 600 && solved < 40; ++i) {
        GenSpec spec;
        spec.machines = 3 + i % 3;
        spec.tasks_per_machine = 2 + (i / 3) % 3;
        spec.rule_count = 1 + i % 6;
        spec.seed = 7100 + i;
        const Instance inst = generate_instance(spec);
        const OracleReport rep = brute_force(inst);
        if (!rep.best || rep.optima_count != 1 || rep.runner_up_gap < 0.05) continue;
        EngineOptions opts;
        opts.tau = 10.0;
        const Assignment x = solve_full(normalize(inst), opts);
        CHECK(x == *rep.best);
        ++solved;
    }
    CHECK(solved >= 40);
}

TEST_CASE("solving an infeasible instance reports infeasibility") {
    Instance inst;
    inst.times = {{1.0, 2.0}, {2.0, 3.0}};
    inst.rules = {hard({{0, 0}}, 1, {0}), hard({{0, 0}}, 1, {1}),
                  hard({{0, 1}}, 1, {0}), hard({{0, 1}}, 1, {1})};
    CHECK_THROWS_AS(solve_full(normalize(inst)), InfeasibleError);
}

TEST_CASE("memory caps abort the contraction") {
    GenSpec spec;
    spec.machines = 8;
    spec.tasks_per_machine = 3;
    spec.rule_count = 10;
    spec.seed = 99;
    const Instance inst = generate_instance(spec);
    EngineOptions opts;
    opts.memory_limit_bytes = 16;   // absurdly small: two doubles
    CHECK_THROWS_AS(solve_full(normalize(inst), opts), MemoryLimitError);
}

TEST_CASE("expired deadlines abort the solve") {
    EngineOptions opts;
    opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(solve_full(normalize(instance_a()), opts), TimeLimitError);
}

TEST_CASE("solves are deterministic and traced") {
    GenSpec spec;
    spec.machines = 5;
    spec.tasks_per_machine = 3;
    spec.rule_count = 4;
    spec.seed = 31;
    const Instance inst = generate_instance(spec);

    std::vector<DeterminationStep> steps;
    EngineOptions opts;
    opts.trace = [&](const DeterminationStep& s) { steps.push_back(s); };
    ContractionStats stats;
    opts.stats = &stats;
    const Assignment first = solve_full(normalize(inst), opts);
    const Assignment second = solve_full(normalize(inst));
    CHECK(first == second);
    CHECK(steps.size() == 5);   // every machine gets exactly one decision
    CHECK(stats.max_boundary_elems > 0);
    std::vector<bool> seen(5, false);
    for (const auto& s : steps) {
        CHECK(s.position >= 0);
        CHECK(s.position < 5);
        seen[s.position] = true;
    }
    for (bool b : seen) CHECK(b);
}

} // TEST_SUITE
