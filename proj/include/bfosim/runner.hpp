#pragma once

// Executes a validated RunConfig and emits trace/summary artifacts.

#include <filesystem>

#include "bfosim/config.hpp"

namespace bfosim {

const char* version_string();

// The seed actually used: the configured one, or a fresh random seed.
std::uint64_t resolve_seed(const RunConfig& config);

struct RunOutcome {
    nlohmann::json summary;
    std::vector<std::filesystem::path> artifacts;
};

// Runs the configured experiment, writing artifacts under
// config.output_dir. The summary echoes the effective config (seed
// included), so any run can be reproduced from its summary alone.
RunOutcome run_experiment(const RunConfig& config);

}  // namespace bfosim
