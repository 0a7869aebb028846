#include "tnsched/errors.hpp"
#include "tnsched/oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace tnsched;
using test::instance_a;

TEST_SUITE("oracle") {

TEST_CASE("brute force finds the feasible optimum") {
    const OracleReport r = brute_force(instance_a());
    REQUIRE(r.best.has_value());
    CHECK(*r.best == Assignment{0, 0});
    CHECK(r.best_cost == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(r.feasible_count == 3);       // (0,1) is cut by the rule
    CHECK(r.optima_count == 1);
    // runner-up is (1,1) at 0.9 raw; normalized gap = 2*(0.9-0.7)/1.0
    CHECK(r.runner_up_gap == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("brute force reports infeasibility with an empty best") {
    Instance inst;
    inst.times = {{1.0}, {2.0, 3.0}};
    Rule r;                      // machine 1 must do a task it cannot do... so
    r.conditions = {{0, 0}};     // force a contradiction via two rules
    r.target_machine = 1;
    r.target_tasks = {0};
    Rule r2 = r;
    r2.target_tasks = {1};
    inst.rules = {r, r2};
    const OracleReport rep = brute_force(inst);
    CHECK_FALSE(rep.best.has_value());
    CHECK(rep.feasible_count == 0);
}

TEST_CASE("brute force prefers the lexicographically smallest optimum") {
    Instance inst;
    inst.times = {{1.0, 1.0}, {2.0, 2.0}};
    const OracleReport r = brute_force(inst);
    REQUIRE(r.best.has_value());
    CHECK(*r.best == Assignment{0, 0});
    CHECK(r.optima_count == 4);
    CHECK(std::isinf(r.runner_up_gap));   // no distinct runner-up cost
}

TEST_CASE("brute force rejects oversized state spaces") {
    Instance big;
    big.times.assign(10, std::vector<double>(10, 1.0));
    CHECK_THROWS_AS(brute_force(big, 1'000'000), ValidationError);
    Instance small;
    small.times.assign(3, std::vector<double>(10, 1.0));
    CHECK_THROWS_AS(brute_force(small, 999), ValidationError);
    CHECK_NOTHROW(brute_force(small, 1000));
}

TEST_CASE("reference marginal matches the hand-computed values") {
    // feasible assignments of the two-machine anchor instance at tau = 1:
    //   (0,0): e^{0.2}, (1,0): e^{-1}, (1,1): e^{-0.2}
    const std::vector<double> m0 = brute_force_marginal(instance_a(), 1.0, 0);
    REQUIRE(m0.size() == 2);
    CHECK(m0[0] == doctest::Approx(1.2214027581601699).epsilon(1e-15));
    CHECK(m0[1] == doctest::Approx(1.1866101942494242).epsilon(1e-15));
    const std::vector<double> m1 = brute_force_marginal(instance_a(), 1.0, 1);
    REQUIRE(m1.size() == 2);
    CHECK(m1[0] == doctest::Approx(std::exp(0.2) + std::exp(-1.0)).epsilon(1e-15));
    CHECK(m1[1] == doctest::Approx(std::exp(-0.2)).epsilon(1e-15));
}

TEST_CASE("reference marginal weights triggered soft rules") {
    Instance inst = instance_a();
    inst.rules[0].extra_cost = 0.5;
    const std::vector<double> m0 = brute_force_marginal(inst, 1.0, 0);
    // (0,0) now carries e^{-0.5}; (0,1) stays excluded
    CHECK(m0[0] == doctest::Approx(std::exp(0.2) * std::exp(-0.5)).epsilon(1e-15));
    CHECK(m0[1] == doctest::Approx(std::exp(-1.0) + std::exp(-0.2)).epsilon(1e-15));
}

TEST_CASE("reference marginal is all-zero for infeasible instances") {
    Instance inst;
    inst.times = {{1.0, 2.0}, {2.0, 3.0}};
    Rule r;
    r.conditions = {{0, 0}};
    r.target_machine = 1;
    r.target_tasks = {0};
    Rule r2 = r;
    r2.target_tasks = {1};
    Rule r3 = r;
    r3.conditions = {{0, 1}};
    Rule r4 = r3;
    r4.target_tasks = {1};
    inst.rules = {r, r2, r3, r4};
    for (double v : brute_force_marginal(inst, 1.0, 0)) CHECK(v == 0.0);
}

} // TEST_SUITE
