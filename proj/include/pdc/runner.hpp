#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pdc/config.hpp"

namespace pdc {

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    double grid_scale = 1.0; // multiplies grid sample density
};

// Dispatch one subcommand; writes CSV/JSON artifacts into out_dir and returns
// the process exit status. Module errors land in <out_dir>/error.json and in
// the returned status.
int run_subcommand(const std::string& subcommand, const std::filesystem::path& config_path,
                   const std::filesystem::path& out_dir, const RunOptions& options = {});

// Same, with an already-parsed configuration (used by tests).
int run_subcommand(const std::string& subcommand, const ExperimentConfig& config,
                   const std::filesystem::path& out_dir, const RunOptions& options = {});

} // namespace pdc
