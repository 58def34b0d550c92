#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "swarmring/cli/config_io.hpp"
#include "swarmring/density.hpp"

namespace swarmring::cli {

/// First recorded time at which raw error is at most half its initial value.
std::optional<double> time_to_half(const ErrorSeries& e);

/// Mean of the normalized series over samples with t >= from.
double tail_mean(const ErrorSeries& e, double from);

/// Runs one command, writing config.json, summary.json and per-run files
/// under `out`. Returns the summary. Throws ConfigError / InvalidArgument
/// on bad input and IntegrationDiverged on divergence.
nlohmann::json run_command(Command c, const RunConfig& cfg, const std::filesystem::path& out, bool parallel = false);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitDiverged = 2;

}  // namespace swarmring::cli
