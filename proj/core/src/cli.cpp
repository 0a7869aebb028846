#include "tnsched/cli.hpp"
#include "tnsched/casegen.hpp"
#include "tnsched/engine.hpp"
#include "tnsched/errors.hpp"
#include "tnsched/io.hpp"
#include "tnsched/oracle.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace tnsched {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kOracleTractable = 1'000'000;

// Shortest round-trip decimal of a double, shared with the JSON documents so
// CSV and JSON agree byte-for-byte on every number.
std::string fmt(double v) { return nlohmann::json(v).dump(); }

std::uint64_t state_space(const Instance& inst) {
    std::uint64_t n = 1;
    for (int i = 0; i < inst.machine_count(); ++i) {
        const std::uint64_t p = static_cast<std::uint64_t>(inst.task_count(i));
        if (n > std::numeric_limits<std::uint64_t>::max() / p)
            return std::numeric_limits<std::uint64_t>::max();
        n *= p;
    }
    return n;
}

struct MethodOutcome {
    std::optional<Assignment> assignment;
    double cost = 0.0;
    double norm_cost = 0.0;
    bool feasible = false;
    std::vector<int> violated;
    int iterations = 0;                     // iterative / combined
    int generations = 0;                    // genetic / combined
    int best_generation = -1;
    std::vector<RankedSolution> solutions;  // genetic / combined ranking
    long long oracle_feasible = 0;          // oracle bookkeeping
    long long oracle_optima = 0;
    std::size_t max_boundary = 0;
    std::string error;                      // empty = a result was produced
};

struct MethodRequest {
    std::string method = "full";
    double tau = 10.0;
    IterativeConfig icfg;
    GeneticConfig gcfg;
    std::size_t memory_limit_bytes = 0;
    double timeout_s = 0.0;
    std::function<void(const GenerationRecord&)> on_generation;
    std::function<void(const DeterminationStep&)> trace;
};

MethodOutcome run_method(const Instance& inst, const MethodRequest& req) {
    MethodOutcome out;
    ContractionStats stats;
    SolverOptions opts;
    opts.memory_limit_bytes = req.memory_limit_bytes;
    opts.stats = &stats;
    opts.trace = req.trace;
    if (req.timeout_s > 0.0)
        opts.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(req.timeout_s));

    try {
        if (req.method == "full") {
            EngineOptions eopts;
            eopts.tau = req.tau;
            eopts.memory_limit_bytes = opts.memory_limit_bytes;
            eopts.deadline = opts.deadline;
            eopts.stats = &stats;
            eopts.trace = req.trace;
            out.assignment = solve_full(normalize(inst), eopts);
        } else if (req.method == "iterative") {
            const IterativeResult r = solve_iterative(inst, req.icfg, opts);
            out.iterations = r.iterations;
            if (r.assignment)
                out.assignment = r.assignment;
            else
                out.error = "no-solution";
        } else if (req.method == "genetic" || req.method == "combined") {
            const GeneticResult r =
                req.method == "genetic"
                    ? solve_genetic(inst, req.gcfg, opts, req.on_generation)
                    : solve_combined(inst, req.gcfg, req.icfg, opts, req.on_generation);
            out.generations = r.generations;
            out.best_generation = r.best_generation;
            out.solutions = r.solutions;
            if (!r.solutions.empty())
                out.assignment = r.solutions.front().assignment;
            else
                out.error = "no-solution";
        } else if (req.method == "oracle") {
            const OracleReport r = brute_force(inst);
            out.oracle_feasible = r.feasible_count;
            out.oracle_optima = r.optima_count;
            if (r.best)
                out.assignment = r.best;
            else
                out.error = "infeasible";
        } else {
            throw ValidationError("unknown method: " + req.method);
        }
    } catch (const InfeasibleError&) {
        out.error = "infeasible";
    } catch (const MemoryLimitError&) {
        out.error = "memory-limit";
    } catch (const TimeLimitError&) {
        out.error = "time-limit";
    }

    out.max_boundary = stats.max_boundary_elems;
    if (out.assignment) {
        out.cost = cost(inst, *out.assignment);
        out.norm_cost = normalized_cost(normalize(inst), *out.assignment);
        out.violated = check_rules(inst, *out.assignment);
        out.feasible = out.violated.empty();
    }
    return out;
}

ordered_json assignment_json(const std::optional<Assignment>& a) {
    if (!a) return nullptr;
    return ordered_json(*a);
}

void emit_document(const ordered_json& doc, std::ostream& out, const std::string& path) {
    const std::string text = doc.dump(2) + "\n";
    out << text;
    if (!path.empty()) write_file(path, text);
}

} // namespace

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    Instance inst;
    MethodRequest req;
    try {
        inst = load_instance(args.instance_path);
        if (!args.config_path.empty()) load_config(args.config_path, req.icfg, req.gcfg);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    req.method = args.method;
    if (args.tau) {
        req.icfg.tau = *args.tau;
        req.gcfg.tau = *args.tau;
    }
    req.tau = req.icfg.tau;
    if (args.seed) req.gcfg.seed = *args.seed;
    if (args.max_iterations) req.icfg.max_iterations = *args.max_iterations;
    if (args.population) req.gcfg.population = *args.population;
    if (args.chromosome_size) req.gcfg.active_tasks_per_machine = *args.chromosome_size;
    if (args.rules_per_individual) req.gcfg.rules_per_individual = *args.rules_per_individual;
    if (args.mutations) req.gcfg.mutations_per_child = *args.mutations;
    if (args.survival_ratio) req.gcfg.survival_ratio = *args.survival_ratio;
    if (args.max_generations) req.gcfg.max_generations = *args.max_generations;
    req.memory_limit_bytes =
        args.memory_cap_mb > 0.0 ? static_cast<std::size_t>(args.memory_cap_mb * 1048576.0) : 0;
    req.timeout_s = args.timeout_s;
    if (args.verbosity >= 1 && (args.method == "genetic" || args.method == "combined"))
        req.on_generation = [&err](const GenerationRecord& rec) {
            ordered_json line{{"generation", rec.generation},
                              {"best_cost", rec.best_cost},
                              {"feasible_count", rec.feasible_count}};
            err << line.dump() << "\n";
        };
    if (args.verbosity >= 2)
        req.trace = [&err](const DeterminationStep& step) {
            err << "# fixed position=" << step.position << " task=" << step.task
                << " forced=" << (step.forced ? 1 : 0)
                << " rules_remaining=" << step.rules_remaining
                << " boundary_peak=" << step.boundary_peak << "\n";
        };

    const auto t0 = std::chrono::steady_clock::now();
    MethodOutcome o;
    try {
        o = run_method(inst, req);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ordered_json doc;
    doc["method"] = args.method;
    doc["assignment"] = assignment_json(o.assignment);
    doc["cost"] = o.assignment ? ordered_json(o.cost) : ordered_json(nullptr);
    doc["normalized_cost"] = o.assignment ? ordered_json(o.norm_cost) : ordered_json(nullptr);
    doc["feasible"] = o.feasible;
    doc["violated_rules"] = o.violated;
    doc["error"] = o.error.empty() ? ordered_json(nullptr) : ordered_json(o.error);
    ordered_json stats;
    if (args.method == "iterative" || args.method == "combined")
        stats["iterations"] = o.iterations;
    if (args.method == "genetic" || args.method == "combined") {
        stats["generations"] = o.generations;
        stats["best_generation"] = o.best_generation;
    }
    if (args.method == "oracle") {
        stats["feasible_count"] = o.oracle_feasible;
        stats["optima_count"] = o.oracle_optima;
    } else {
        stats["max_boundary_elements"] = o.max_boundary;
    }
    doc["stats"] = std::move(stats);
    if (args.method == "genetic" || args.method == "combined") {
        ordered_json sols = ordered_json::array();
        for (const RankedSolution& s : o.solutions)
            sols.push_back({{"assignment", s.assignment}, {"cost", s.cost}});
        doc["solutions"] = std::move(sols);
    }

    try {
        emit_document(doc, out, args.output_path);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "# method=" << args.method << " wall_time_s=" << std::fixed << std::setprecision(6)
        << wall << "\n";
    return o.feasible ? 0 : 2;
}

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
    GenSpec spec;
    spec.machines = args.machines;
    spec.tasks_per_machine = args.tasks_per_machine;
    spec.rule_count = args.rule_count;
    spec.conditions_min = args.conditions_min;
    spec.conditions_max = args.conditions_max;
    spec.seed = args.seed;

    Instance inst;
    try {
        inst = generate_instance(spec);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const GenerationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string text = instance_to_json(inst);
    try {
        if (args.output_path.empty())
            out << text;
        else
            write_file(args.output_path, text);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "# generated machines=" << spec.machines << " tasks=" << spec.tasks_per_machine
        << " rules=" << spec.rule_count << " conditions=" << spec.conditions_min << ".."
        << std::min(spec.conditions_max, spec.machines - 1) << " seed=" << spec.seed << "\n";
    return 0;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const Instance inst = load_instance(args.instance_path);
        const Assignment x = load_assignment(args.assignment_path, inst);
        const std::vector<int> violated = check_rules(inst, x);

        ordered_json doc;
        doc["assignment"] = x;
        doc["cost"] = cost(inst, x);
        doc["normalized_cost"] = normalized_cost(normalize(inst), x);
        doc["feasible"] = violated.empty();
        doc["violated_rules"] = violated;
        emit_document(doc, out, args.output_path);
        return violated.empty() ? 0 : 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

struct BenchCase {
    int index = 0;
    GenSpec spec;
    std::string method;
};

struct BenchRow {
    BenchCase def;
    MethodOutcome outcome;
    bool has_oracle = false;
    double oracle_cost = 0.0;
    double gap = 0.0;
    double time_s = 0.0;
    std::string error;   // case-level failure (generation, unexpected)
};

std::vector<BenchCase> build_suite(const BenchArgs& args, std::string& default_method) {
    std::vector<BenchCase> cases;
    auto case_seed = [&](int index) {
        return args.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
    };
    if (args.suite == "small") {
        default_method = "full";
        int index = 0;
        for (int m : {3, 4, 5})
            for (int p : {2, 3, 4})
                for (int s = 0; s < 3; ++s) {
                    BenchCase c;
                    c.index = index;
                    c.spec.machines = m;
                    c.spec.tasks_per_machine = p;
                    c.spec.rule_count = 1 + index % 6;
                    c.spec.conditions_min = 1;
                    c.spec.conditions_max = 2;
                    c.spec.seed = case_seed(index);
                    cases.push_back(c);
                    ++index;
                }
    } else if (args.suite == "paper-iterative" || args.suite == "paper-genetic" ||
               args.suite == "paper-combined") {
        const bool iter = args.suite == "paper-iterative";
        default_method = iter ? "iterative" : (args.suite == "paper-genetic" ? "genetic"
                                                                             : "combined");
        for (int index = 0; index < 20; ++index) {
            BenchCase c;
            c.index = index;
            c.spec.machines = 10;
            c.spec.tasks_per_machine = 10;
            c.spec.rule_count = iter ? 30 : 1000;
            // dense rule sets get three conditions each: rarely-firing rules
            // keep a thousand of them simultaneously satisfiable in practice
            c.spec.conditions_min = iter ? 1 : 3;
            c.spec.conditions_max = iter ? 2 : 3;
            c.spec.seed = case_seed(index);
            cases.push_back(c);
        }
    } else {
        throw ValidationError("unknown suite: " + args.suite +
                              " (expected small | paper-iterative | paper-genetic |"
                              " paper-combined)");
    }
    return cases;
}

void run_bench_case(BenchRow& row, const BenchArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Instance inst = generate_instance(row.def.spec);
        MethodRequest req;
        req.method = row.def.method;
        if (args.tau) {
            req.tau = *args.tau;
            req.icfg.tau = *args.tau;
            req.gcfg.tau = *args.tau;
        }
        req.gcfg.seed = row.def.spec.seed;
        req.memory_limit_bytes =
            args.memory_cap_mb > 0.0 ? static_cast<std::size_t>(args.memory_cap_mb * 1048576.0)
                                     : 0;
        req.timeout_s = args.timeout_s;
        row.outcome = run_method(inst, req);

        if (row.outcome.assignment && row.def.method != "oracle" &&
            state_space(inst) <= kOracleTractable) {
            const OracleReport oracle = brute_force(inst, kOracleTractable);
            if (oracle.best) {
                row.has_oracle = true;
                row.oracle_cost = oracle.best_cost;
                const NormalizedInstance norm = normalize(inst);
                row.gap = normalized_cost(norm, *row.outcome.assignment) -
                          normalized_cost(norm, *oracle.best);
            }
        } else if (row.def.method == "oracle" && row.outcome.assignment) {
            row.has_oracle = true;
            row.oracle_cost = row.outcome.cost;
            row.gap = 0.0;
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& ch : msg)
            if (ch == ',' || ch == '\n') ch = ';';
        row.error = msg;
    }
    row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    std::string default_method;
    std::vector<BenchCase> cases;
    try {
        cases = build_suite(args, default_method);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (args.limit > 0 && static_cast<int>(cases.size()) > args.limit)
        cases.resize(args.limit);
    const std::string method = args.method.empty() ? default_method : args.method;
    for (BenchCase& c : cases) c.method = method;

    std::vector<BenchRow> rows(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) rows[i].def = cases[i];

    const int jobs = std::max(1, args.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            run_bench_case(rows[i], args);
        }
    };
    if (jobs == 1 || rows.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::ostringstream csv;
    csv << "suite,case,machines,tasks_per_machine,rules,seed,method,feasible,cost,"
           "normalized_cost,oracle_cost,normalized_gap,iterations,generations,"
           "best_generation,max_boundary_elements,time_s,error\n";
    int feasible_count = 0;
    for (const BenchRow& row : rows) {
        const MethodOutcome& o = row.outcome;
        if (o.feasible) ++feasible_count;
        csv << args.suite << ',' << row.def.index << ',' << row.def.spec.machines << ','
            << row.def.spec.tasks_per_machine << ',' << row.def.spec.rule_count << ','
            << row.def.spec.seed << ',' << row.def.method << ',' << (o.feasible ? 1 : 0) << ','
            << (o.assignment ? fmt(o.cost) : "") << ','
            << (o.assignment ? fmt(o.norm_cost) : "") << ','
            << (row.has_oracle ? fmt(row.oracle_cost) : "") << ','
            << (row.has_oracle ? fmt(row.gap) : "") << ','
            << (row.def.method == "iterative" || row.def.method == "combined"
                    ? std::to_string(o.iterations)
                    : "")
            << ','
            << (row.def.method == "genetic" || row.def.method == "combined"
                    ? std::to_string(o.generations)
                    : "")
            << ','
            << (row.def.method == "genetic" || row.def.method == "combined"
                    ? std::to_string(o.best_generation)
                    : "")
            << ',' << o.max_boundary << ',' << std::fixed << std::setprecision(6) << row.time_s
            << ',' << (row.error.empty() ? o.error : row.error) << "\n";
        csv.unsetf(std::ios::floatfield);
    }

    try {
        if (args.output_path.empty())
            out << csv.str();
        else
            write_file(args.output_path, csv.str());
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "# suite=" << args.suite << " method=" << method << " cases=" << rows.size()
        << " feasible=" << feasible_count << "\n";
    return 0;
}

} // namespace tnsched
