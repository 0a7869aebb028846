#include "tnsched/solvers.hpp"
#include "tnsched/errors.hpp"
#include "tnsched/layers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace tnsched {

Assignment unrestricted_minimum(const NormalizedInstance& norm, const TaskMask* banned) {
    const int m = norm.machine_count();
    Assignment out(m, -1);
    for (int pos = 0; pos < m; ++pos) {
        const int orig = norm.permutation[pos];
        int best = -1;
        for (int j = 0; j < norm.task_count(pos); ++j) {
            if (banned && banned->banned(orig, j)) continue;
            if (best < 0 || norm.scaled_times[pos][j] < norm.scaled_times[pos][best]) best = j;
        }
        if (best < 0)
            throw InfeasibleError("machine " + std::to_string(orig) + " has every task banned");
        out[orig] = best;
    }
    return out;
}

namespace {

EngineOptions engine_opts(const SolverOptions& opts, double tau) {
    EngineOptions e;
    e.tau = tau;
    e.memory_limit_bytes = opts.memory_limit_bytes;
    e.deadline = opts.deadline;
    e.stats = opts.stats;
    e.trace = opts.trace;
    return e;
}

void check_deadline(const SolverOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw TimeLimitError("solver exceeded its deadline");
}

} // namespace

IterativeResult solve_iterative(const Instance& inst, const IterativeConfig& cfg,
                                const SolverOptions& opts) {
    validate(inst);
    IterativeResult res;
    const NormalizedInstance norm = normalize(inst);

    // Injection always pulls in the whole condensable group of the violated
    // rule, so plan the grouping once over the ordered chain.
    std::vector<int> group_of(inst.rules.size(), -1);
    std::vector<std::vector<int>> groups;
    for (const auto& bucket : rearrange_rules(norm.base.rules))
        for (const RuleGroup& g : condense(norm.base.rules, bucket, norm.base)) {
            for (int r : g.members) group_of[r] = static_cast<int>(groups.size());
            groups.push_back(g.members);
        }

    std::set<int> active;           // rule indices currently enforced
    Assignment candidate = unrestricted_minimum(norm, opts.banned);
    res.iterations = 1;

    for (;;) {
        const std::vector<int> violated = check_rules(inst, candidate);
        if (violated.empty()) {
            res.assignment = candidate;
            res.cost = cost(inst, candidate);
            return res;
        }
        if (res.iterations >= cfg.max_iterations) return res;   // no solution found
        check_deadline(opts);

        for (int r : groups[group_of[violated.front()]]) {
            active.insert(r);
            res.injected_rules.push_back(r);
        }
        Instance sub;
        sub.times = inst.times;
        for (int r : active) sub.rules.push_back(inst.rules[r]);
        try {
            candidate = solve_full(normalize(sub), engine_opts(opts, cfg.tau), opts.banned);
        } catch (const InfeasibleError&) {
            return res;                                         // active subset already impossible
        }
        res.iterations++;
    }
}

std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b,
                                            int swaps, Rng& rng) {
    Individual ca = a, cb = b;
    ca.result.reset();
    cb.result.reset();
    const int m = static_cast<int>(a.chromosomes.size());
    for (int s = 0; s < swaps; ++s) {
        const int machine = static_cast<int>(uniform_below(rng, m));
        auto& sa = ca.chromosomes[machine];
        auto& sb = cb.chromosomes[machine];
        for (int attempt = 0; attempt < 20; ++attempt) {
            const int ta = sa[uniform_below(rng, sa.size())];
            const int tb = sb[uniform_below(rng, sb.size())];
            if (ta == tb) break;    // trading the same task is a no-op
            // reject swaps that would duplicate a task inside a chromosome
            if (std::binary_search(sa.begin(), sa.end(), tb) ||
                std::binary_search(sb.begin(), sb.end(), ta))
                continue;
            sa.erase(std::find(sa.begin(), sa.end(), ta));
            sb.erase(std::find(sb.begin(), sb.end(), tb));
            sa.insert(std::upper_bound(sa.begin(), sa.end(), tb), tb);
            sb.insert(std::upper_bound(sb.begin(), sb.end(), ta), ta);
            break;
        }
    }
    return {std::move(ca), std::move(cb)};
}

Individual mutate(const Individual& ind, int mutations, const Instance& inst, Rng& rng) {
    Individual out = ind;
    out.result.reset();
    std::vector<int> eligible;   // machines with spare tasks to rotate in
    for (int i = 0; i < inst.machine_count(); ++i)
        if (inst.task_count(i) > static_cast<int>(ind.chromosomes[i].size()))
            eligible.push_back(i);
    if (eligible.empty()) return out;
    for (int s = 0; s < mutations; ++s) {
        const int machine = eligible[uniform_below(rng, eligible.size())];
        auto& set = out.chromosomes[machine];
        const int slot = static_cast<int>(uniform_below(rng, set.size()));
        std::vector<int> spare;
        for (int t = 0; t < inst.task_count(machine); ++t)
            if (!std::binary_search(set.begin(), set.end(), t)) spare.push_back(t);
        const int incoming = spare[uniform_below(rng, spare.size())];
        set.erase(set.begin() + slot);
        set.insert(std::upper_bound(set.begin(), set.end(), incoming), incoming);
    }
    return out;
}

namespace {

bool condition_supported(const Rule& rule, const std::vector<std::vector<int>>& chromosomes) {
    for (const auto& c : rule.conditions)
        if (!std::binary_search(chromosomes[c.machine].begin(), chromosomes[c.machine].end(),
                                c.task))
            return false;
    return true;
}

bool rules_conflict(const Rule& a, const Rule& b) {
    if (a.target_machine != b.target_machine) return false;
    if (a.target_tasks == b.target_tasks) return false;
    auto key = [](const Rule& r) {
        auto c = r.conditions;
        std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) {
            return x.machine != y.machine ? x.machine < y.machine : x.task < y.task;
        });
        return c;
    };
    return key(a) == key(b);
}

} // namespace

void repair_rules(Individual& ind, const Instance& inst, int quota, Rng& rng) {
    std::vector<int> kept;
    for (int r : ind.phenotype)
        if (condition_supported(inst.rules[r], ind.chromosomes)) kept.push_back(r);
    ind.phenotype = kept;

    if (static_cast<int>(ind.phenotype.size()) < quota) {
        std::vector<int> pool;
        for (int r = 0; r < static_cast<int>(inst.rules.size()); ++r) {
            if (std::binary_search(kept.begin(), kept.end(), r)) continue;
            if (!condition_supported(inst.rules[r], ind.chromosomes)) continue;
            pool.push_back(r);
        }
        shuffle_inplace(rng, pool);
        for (int r : pool) {
            if (static_cast<int>(ind.phenotype.size()) >= quota) break;
            bool ok = true;
            for (int other : ind.phenotype)
                if (rules_conflict(inst.rules[r], inst.rules[other])) { ok = false; break; }
            if (ok) ind.phenotype.push_back(r);
        }
    }
    std::sort(ind.phenotype.begin(), ind.phenotype.end());
}

void evaluate_individual(Individual& ind, const Instance& inst, const GeneticConfig& cfg,
                         const SolverOptions& opts, int mode, const IterativeConfig* iter_cfg) {
    Instance sub;
    sub.times = inst.times;
    for (int r : ind.phenotype) sub.rules.push_back(inst.rules[r]);

    TaskMask mask(inst);
    for (int i = 0; i < inst.machine_count(); ++i)
        for (int t = 0; t < inst.task_count(i); ++t) {
            const bool active = std::binary_search(ind.chromosomes[i].begin(),
                                                   ind.chromosomes[i].end(), t);
            if (!active || (opts.banned && opts.banned->banned(i, t))) mask.ban(i, t);
        }

    ind.result.reset();
    ind.cost = std::numeric_limits<double>::infinity();
    ind.feasible_globally = false;
    try {
        Assignment a;
        if (mode == 1) {
            IterativeConfig icfg = iter_cfg ? *iter_cfg : IterativeConfig{};
            if (!iter_cfg) icfg.tau = cfg.tau;
            SolverOptions sub_opts = opts;
            sub_opts.banned = &mask;
            sub_opts.trace = {};
            const IterativeResult r = solve_iterative(sub, icfg, sub_opts);
            if (!r.assignment) return;
            a = *r.assignment;
        } else {
            EngineOptions eopts = engine_opts(opts, cfg.tau);
            eopts.trace = {};
            a = solve_full(normalize(sub), eopts, &mask);
        }
        ind.result = a;
        ind.cost = cost(inst, a);
        ind.feasible_globally = check_rules(inst, a).empty();
    } catch (const InfeasibleError&) {
        // restricted sub-problem admits nothing; the genome scores worst
    }
}

namespace {

Individual random_individual(const Instance& inst, const GeneticConfig& cfg, Rng& rng) {
    Individual ind;
    ind.chromosomes.resize(inst.machine_count());
    for (int i = 0; i < inst.machine_count(); ++i) {
        const int k = std::min(cfg.active_tasks_per_machine, inst.task_count(i));
        ind.chromosomes[i] = sample_distinct(rng, inst.task_count(i), k);
        std::sort(ind.chromosomes[i].begin(), ind.chromosomes[i].end());
    }
    repair_rules(ind, inst, cfg.rules_per_individual, rng);
    return ind;
}

// Ranking: solved before unsolved, globally feasible before infeasible,
// then by cost; stable to keep insertion order deterministic on ties.
bool better_rank(const Individual& a, const Individual& b) {
    if (a.result.has_value() != b.result.has_value()) return a.result.has_value();
    if (a.feasible_globally != b.feasible_globally) return a.feasible_globally;
    return a.cost < b.cost;
}

GeneticResult run_genetic(const Instance& inst, const GeneticConfig& cfg,
                          const IterativeConfig* iter_cfg, const SolverOptions& opts, int mode,
                          const std::function<void(const GenerationRecord&)>& on_generation) {
    validate(inst);
    if (cfg.population < 1) throw ValidationError("population must be positive");
    if (cfg.active_tasks_per_machine < 1)
        throw ValidationError("chromosomes need at least one active task");
    if (cfg.survival_ratio <= 0.0 || cfg.survival_ratio > 1.0)
        throw ValidationError("survival ratio must lie in (0, 1]");

    Rng rng(cfg.seed);
    GeneticResult res;
    std::map<Assignment, double> archive;   // globally feasible results seen so far

    std::vector<Individual> population;
    population.reserve(cfg.population);
    for (int i = 0; i < cfg.population; ++i)
        population.push_back(random_individual(inst, cfg, rng));

    const int survivors_n =
        std::clamp(static_cast<int>(std::ceil(cfg.survival_ratio * cfg.population)), 1,
                   cfg.population);
    double best_cost = std::numeric_limits<double>::infinity();
    std::pair<bool, double> last_key{false, std::numeric_limits<double>::infinity()};
    int stable_generations = 0;

    for (int gen = 0; gen < cfg.max_generations; ++gen) {
        bool timed_out = false;
        try {
            check_deadline(opts);
            for (Individual& ind : population)
                evaluate_individual(ind, inst, cfg, opts, mode, iter_cfg);
        } catch (const TimeLimitError&) {
            timed_out = true;
        }
        if (timed_out) break;
        res.generations = gen + 1;

        std::stable_sort(population.begin(), population.end(), better_rank);
        GenerationRecord rec;
        rec.generation = gen;
        rec.best_cost = population.front().cost;
        for (const Individual& ind : population) {
            if (!ind.feasible_globally) continue;
            rec.feasible_count++;
            archive.emplace(*ind.result, ind.cost);
            if (ind.cost < best_cost) {
                best_cost = ind.cost;
                res.best_generation = gen;
            }
        }
        res.history.push_back(rec);
        if (on_generation) on_generation(rec);

        // convergence: the best-ranked individual's (feasible, cost) key held
        // still for three consecutive generations
        const std::pair<bool, double> key{population.front().feasible_globally,
                                          population.front().cost};
        if (key == last_key) {
            if (++stable_generations >= 3) break;
        } else {
            last_key = key;
            stable_generations = 1;
        }
        if (gen + 1 >= cfg.max_generations) break;

        // next generation: survivors, then mutated crossover children, then
        // mutants of single survivors for any odd slot left over
        std::vector<Individual> next(population.begin(), population.begin() + survivors_n);
        auto add_child = [&](Individual child) {
            child = mutate(child, cfg.mutations_per_child, inst, rng);
            repair_rules(child, inst, cfg.rules_per_individual, rng);
            next.push_back(std::move(child));
        };
        while (static_cast<int>(next.size()) + 1 < cfg.population && survivors_n >= 2) {
            const int i = static_cast<int>(uniform_below(rng, survivors_n));
            int j = static_cast<int>(uniform_below(rng, survivors_n - 1));
            if (j >= i) ++j;
            auto [c1, c2] = crossover(population[i], population[j], cfg.crossover_swaps, rng);
            add_child(std::move(c1));
            add_child(std::move(c2));
        }
        while (static_cast<int>(next.size()) < cfg.population)
            add_child(population[uniform_below(rng, survivors_n)]);
        // deduplicate genomes, then refill with fresh randoms
        std::vector<Individual> unique;
        for (Individual& ind : next) {
            bool dup = false;
            for (const Individual& u : unique)
                if (ind.same_genome(u)) { dup = true; break; }
            if (!dup) unique.push_back(std::move(ind));
        }
        for (int attempt = 0; static_cast<int>(unique.size()) < cfg.population; ++attempt) {
            Individual fresh = random_individual(inst, cfg, rng);
            bool dup = false;
            for (const Individual& u : unique)
                if (fresh.same_genome(u)) { dup = true; break; }
            if (!dup || attempt >= 20 * cfg.population) unique.push_back(std::move(fresh));
        }
        population = std::move(unique);
    }

    for (const auto& [assignment, c] : archive) res.solutions.push_back({assignment, c});
    std::sort(res.solutions.begin(), res.solutions.end(), [](const auto& a, const auto& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.assignment < b.assignment;
    });
    return res;
}

} // namespace

GeneticResult solve_genetic(const Instance& inst, const GeneticConfig& cfg,
                            const SolverOptions& opts,
                            const std::function<void(const GenerationRecord&)>& on_generation) {
    return run_genetic(inst, cfg, nullptr, opts, 0, on_generation);
}

GeneticResult solve_combined(const Instance& inst, const GeneticConfig& cfg,
                             const IterativeConfig& iter_cfg, const SolverOptions& opts,
                             const std::function<void(const GenerationRecord&)>& on_generation) {
    return run_genetic(inst, cfg, &iter_cfg, opts, 1, on_generation);
}

} // namespace tnsched
