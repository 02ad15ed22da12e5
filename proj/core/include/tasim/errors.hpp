#pragma once

#include <stdexcept>
#include <string>

namespace tasim {

// Invalid or inconsistent user configuration. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested design point cannot sustain the pipeline (e.g. the systolic
// array is too small for a stage-2 job). CLI maps this to exit code 3.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tasim
