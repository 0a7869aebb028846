#include "tnsched/io.hpp"
#include "tnsched/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tnsched {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

// Convert a nlohmann parse byte offset into "line L, column C" context.
std::string line_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("invalid JSON at " + line_context(text, e.byte) + ": " + e.what());
    }
}

int require_index(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer index");
    const auto n = v.get<long long>();
    if (n < 0) fail(where, "index must be non-negative");
    return static_cast<int>(n);
}

double require_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

} // namespace

Instance parse_instance(const std::string& text) {
    const json doc = parse_text(text);
    if (!doc.is_object()) fail("$", "top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "machines" && key != "rules") fail("$." + key, "unknown key");
    if (!doc.contains("machines")) fail("$", "missing \"machines\"");

    Instance inst;
    const json& machines = doc["machines"];
    if (!machines.is_array() || machines.empty())
        fail("$.machines", "expected a non-empty array of time rows");
    for (std::size_t i = 0; i < machines.size(); ++i) {
        const std::string where = "$.machines[" + std::to_string(i) + "]";
        const json& row = machines[i];
        if (!row.is_array() || row.empty()) fail(where, "expected a non-empty array of times");
        std::vector<double> times;
        times.reserve(row.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            times.push_back(require_number(row[j], where + "[" + std::to_string(j) + "]"));
        inst.times.push_back(std::move(times));
    }

    if (doc.contains("rules")) {
        const json& rules = doc["rules"];
        if (!rules.is_array()) fail("$.rules", "expected an array");
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const std::string where = "$.rules[" + std::to_string(r) + "]";
            const json& jr = rules[r];
            if (!jr.is_object()) fail(where, "expected an object");
            for (const auto& [key, _] : jr.items())
                if (key != "if" && key != "then" && key != "extra_cost")
                    fail(where + "." + key, "unknown key");
            if (!jr.contains("if")) fail(where, "missing \"if\"");
            if (!jr.contains("then")) fail(where, "missing \"then\"");

            Rule rule;
            const json& jif = jr["if"];
            if (!jif.is_array() || jif.empty())
                fail(where + ".if", "expected a non-empty array of [machine, task] pairs");
            for (std::size_t c = 0; c < jif.size(); ++c) {
                const std::string cw = where + ".if[" + std::to_string(c) + "]";
                const json& pair = jif[c];
                if (!pair.is_array() || pair.size() != 2)
                    fail(cw, "expected a [machine, task] pair");
                rule.conditions.push_back(
                    {require_index(pair[0], cw + "[0]"), require_index(pair[1], cw + "[1]")});
            }
            const json& jthen = jr["then"];
            if (!jthen.is_object()) fail(where + ".then", "expected an object");
            for (const auto& [key, _] : jthen.items())
                if (key != "machine" && key != "tasks")
                    fail(where + ".then." + key, "unknown key");
            if (!jthen.contains("machine")) fail(where + ".then", "missing \"machine\"");
            if (!jthen.contains("tasks")) fail(where + ".then", "missing \"tasks\"");
            rule.target_machine = require_index(jthen["machine"], where + ".then.machine");
            const json& jtasks = jthen["tasks"];
            if (!jtasks.is_array() || jtasks.empty())
                fail(where + ".then.tasks", "expected a non-empty array of task indices");
            for (std::size_t t = 0; t < jtasks.size(); ++t)
                rule.target_tasks.push_back(
                    require_index(jtasks[t], where + ".then.tasks[" + std::to_string(t) + "]"));
            if (jr.contains("extra_cost")) {
                const double extra = require_number(jr["extra_cost"], where + ".extra_cost");
                if (extra < 0.0) fail(where + ".extra_cost", "must be non-negative");
                rule.extra_cost = extra;
            }
            inst.rules.push_back(std::move(rule));
        }
    }

    validate(inst);
    return inst;
}

std::string instance_to_json(const Instance& inst) {
    ordered_json doc;
    doc["machines"] = inst.times;
    doc["rules"] = ordered_json::array();
    for (const Rule& rule : inst.rules) {
        ordered_json jr;
        jr["if"] = ordered_json::array();
        for (const auto& c : rule.conditions) jr["if"].push_back({c.machine, c.task});
        jr["then"] = {{"machine", rule.target_machine}, {"tasks", rule.target_tasks}};
        if (rule.extra_cost) jr["extra_cost"] = *rule.extra_cost;
        doc["rules"].push_back(std::move(jr));
    }
    return doc.dump(2) + "\n";
}

Assignment parse_assignment(const std::string& text, const Instance& inst) {
    json doc = parse_text(text);
    std::string where = "$";
    if (doc.is_object()) {
        if (!doc.contains("assignment")) fail("$", "missing \"assignment\"");
        doc = doc["assignment"];
        where = "$.assignment";
    }
    if (!doc.is_array()) fail(where, "expected an array of task indices");
    if (static_cast<int>(doc.size()) != inst.machine_count())
        fail(where, "expected " + std::to_string(inst.machine_count()) + " entries, got " +
                        std::to_string(doc.size()));
    Assignment x;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        const int t = require_index(doc[i], w);
        if (t >= inst.task_count(static_cast<int>(i)))
            fail(w, "task " + std::to_string(t) + " out of range for machine " +
                        std::to_string(i) + " (" +
                        std::to_string(inst.task_count(static_cast<int>(i))) + " tasks)");
        x.push_back(t);
    }
    return x;
}

void apply_config(const std::string& text, IterativeConfig& icfg, GeneticConfig& gcfg) {
    const json doc = parse_text(text);
    if (!doc.is_object()) fail("$", "config must be an object");
    for (const auto& [key, value] : doc.items()) {
        const std::string where = "$." + key;
        if (key == "max_iterations")
            icfg.max_iterations = require_index(value, where);
        else if (key == "tau") {
            icfg.tau = require_number(value, where);
            gcfg.tau = icfg.tau;
        } else if (key == "population")
            gcfg.population = require_index(value, where);
        else if (key == "active_tasks_per_machine")
            gcfg.active_tasks_per_machine = require_index(value, where);
        else if (key == "rules_per_individual")
            gcfg.rules_per_individual = require_index(value, where);
        else if (key == "mutations_per_child")
            gcfg.mutations_per_child = require_index(value, where);
        else if (key == "survival_ratio")
            gcfg.survival_ratio = require_number(value, where);
        else if (key == "max_generations")
            gcfg.max_generations = require_index(value, where);
        else if (key == "crossover_swaps")
            gcfg.crossover_swaps = require_index(value, where);
        else if (key == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                fail(where, "expected an integer seed");
            gcfg.seed = value.get<std::uint64_t>();
        } else
            fail(where, "unknown config key");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
    if (!out.flush()) throw ValidationError("failed writing file: " + path);
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

void save_instance(const Instance& inst, const std::string& path) {
    write_file(path, instance_to_json(inst));
}

Assignment load_assignment(const std::string& path, const Instance& inst) {
    return parse_assignment(read_file(path), inst);
}

void load_config(const std::string& path, IterativeConfig& icfg, GeneticConfig& gcfg) {
    apply_config(read_file(path), icfg, gcfg);
}

} // namespace tnsched
