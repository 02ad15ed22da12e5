#pragma once

#include <string>
#include <vector>

#include "tasim/workload.hpp"

namespace tasim::presets {

// Named model shapes usable via --preset or "workload": {"preset": ...}.
// Sequence length, adapter count/rank, and precision are defaults a config
// file can override; they are not intrinsic to the model family.
std::vector<std::string> names();
bool exists(const std::string& name);
workload::TransformerConfig make(const std::string& name); // throws ConfigError

} // namespace tasim::presets
