#pragma once
#include <stdexcept>
#include <string>

namespace tnsched {

// Bad input data: out-of-range indices, malformed rules, unreadable files.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The constrained problem (or the current sub-problem) admits no assignment.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// A contraction would allocate past the configured memory budget.
struct MemoryLimitError : std::runtime_error {
    explicit MemoryLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cooperative wall-clock deadline hit inside a solver loop.
struct TimeLimitError : std::runtime_error {
    explicit TimeLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal shape mismatch while wiring tensors together (a bug, not bad input).
struct ShapeError : std::logic_error {
    explicit ShapeError(const std::string& msg) : std::logic_error(msg) {}
};

// Random instance generation could not satisfy its constraints.
struct GenerationError : std::runtime_error {
    explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tnsched
