#pragma once

// JSON scenario configuration: parsing with field-named errors, and an echo
// that parses back to the identical configuration.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarmring/errors.hpp"
#include "swarmring/sim.hpp"

namespace swarmring::cli {

enum class Command { regulate, track, proximity, nn_sweep, macro_verify };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

enum class MacroInitial { uniform, target };

struct RunConfig {
    ScenarioConfig scenario;
    std::vector<std::size_t> sweep_k{5, 10, 20};
    MacroInitial macro_initial = MacroInitial::uniform;
    bool macro_control_enabled = true;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// A configuration error; field() is the dotted path of the offending key.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Defaults for a command before the file's keys are applied.
RunConfig command_defaults(Command c);

/// Numbers, or strings such as "pi", "-pi/2", "3*pi/4", "0.25".
double parse_angle_expr(std::string_view text);

/// Applies `doc` on top of command_defaults(c). The target block is
/// required; unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, Command c);
RunConfig load_config(const std::filesystem::path& path, Command c);

/// Every field, explicitly; parse_config(to_json(cfg), c) == cfg.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace swarmring::cli
