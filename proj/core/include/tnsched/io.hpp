#pragma once
#include "tnsched/model.hpp"
#include "tnsched/solvers.hpp"

#include <string>

namespace tnsched {

// Instance document: {"machines": [[t00, t01, ...], ...],
//                     "rules": [{"if": [[machine, task], ...],
//                                "then": {"machine": k, "tasks": [a, ...]},
//                                "extra_cost": 0.25}]}
// Indices are 0-based; "extra_cost" marks a soft rule and may be omitted.
// Parse errors carry line:column context; semantic errors carry the JSON path.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Assignment document: either a bare array [t0, t1, ...] or
// {"assignment": [t0, t1, ...]}, validated against the instance shape.
Assignment parse_assignment(const std::string& text, const Instance& inst);
Assignment load_assignment(const std::string& path, const Instance& inst);

// Optional solver config document with any subset of the iterative/genetic
// field names, e.g. {"max_iterations": 50, "population": 20}.  Unknown keys
// are rejected.
void apply_config(const std::string& text, IterativeConfig& icfg, GeneticConfig& gcfg);
void load_config(const std::string& path, IterativeConfig& icfg, GeneticConfig& gcfg);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace tnsched
