#include "swarmring/cli/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

namespace swarmring::cli {

using nlohmann::json;

namespace {

struct CommandEntry {
    Command command;
    std::string_view name;
};

constexpr CommandEntry kCommands[] = {
    {Command::regulate, "regulate"},         {Command::track, "track"},
    {Command::proximity, "proximity"},       {Command::nn_sweep, "nn-sweep"},
    {Command::macro_verify, "macro-verify"},
};

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

// Reads keys out of one JSON object, remembering which were consumed so the
// rest can be reported as unknown.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return obj_.contains(key);
    }

    std::string field(const std::string& key) const { return join(path_, key); }

    Section child(const std::string& key) {
        seen_.insert(key);
        return Section(obj_.at(key), field(key));
    }

    void read(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
    }

    void read_angle(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (v.is_number()) {
            out = v.get<double>();
        } else if (v.is_string()) {
            try {
                out = parse_angle_expr(v.get<std::string>());
            } catch (const InvalidArgument& e) {
                throw ConfigError(field(key), e.what());
            }
        } else {
            throw ConfigError(field(key), "expected a number or an expression such as \"pi/4\"");
        }
    }

    void read(const std::string& key, std::size_t& out) {
        if (!has(key)) return;
        out = to_count(obj_.at(key), field(key));
    }

    void read(const std::string& key, std::uint64_t& out, int) {
        if (!has(key)) return;
        out = to_count(obj_.at(key), field(key));
    }

    void read(const std::string& key, bool& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
        out = v.get<bool>();
    }

    std::string read_string(const std::string& key, std::string fallback) {
        if (!has(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
        return v.get<std::string>();
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    void reject_unknown() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
        }
    }

    static std::uint64_t to_count(const json& v, const std::string& name) {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer()) {
            if (v.get<std::int64_t>() < 0) throw ConfigError(name, "must be non-negative");
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        }
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0 && std::floor(d) == d && d < 9.0e15) return static_cast<std::uint64_t>(d);
        }
        throw ConfigError(name, "expected a non-negative integer");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class Enum, std::size_t N>
Enum lookup(const std::pair<std::string_view, Enum> (&table)[N], const std::string& text, const std::string& field) {
    std::string allowed;
    for (const auto& [name, value] : table) {
        if (name == text) return value;
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    throw ConfigError(field, "unknown value \"" + text + "\" (expected one of: " + allowed + ")");
}

template <class Enum, std::size_t N>
std::string_view name_of(const std::pair<std::string_view, Enum> (&table)[N], Enum value) {
    for (const auto& [name, v] : table) {
        if (v == value) return name;
    }
    return "?";
}

constexpr std::pair<std::string_view, ControlMode> kModes[] = {
    {"centralized", ControlMode::centralized}, {"decentralized", ControlMode::decentralized}};
constexpr std::pair<std::string_view, TopologyKind> kTopologies[] = {
    {"knn", TopologyKind::knn}, {"proximity", TopologyKind::proximity}, {"complete", TopologyKind::complete}};
constexpr std::pair<std::string_view, TargetKind> kTargets[] = {
    {"bimodal", TargetKind::bimodal}, {"monomodal", TargetKind::monomodal}, {"tracking", TargetKind::tracking}};
constexpr std::pair<std::string_view, MacroInitial> kInitials[] = {
    {"uniform", MacroInitial::uniform}, {"target", MacroInitial::target}};

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : InvalidArgument("config field \"" + field + "\": " + message), field_(std::move(field)) {}

Command parse_command(std::string_view name) {
    for (const auto& e : kCommands) {
        if (e.name == name) return e.command;
    }
    throw InvalidArgument("unknown command \"" + std::string(name) + "\"");
}

std::string_view command_name(Command c) {
    for (const auto& e : kCommands) {
        if (e.command == c) return e.name;
    }
    return "?";
}

RunConfig command_defaults(Command c) {
    RunConfig cfg;
    switch (c) {
        case Command::track: cfg.scenario = tracking_preset(); break;
        case Command::proximity: cfg.scenario = proximity_preset(); break;
        default: cfg.scenario = regulation_preset(); break;
    }
    return cfg;
}

double parse_angle_expr(std::string_view text) {
    static const std::regex number(R"(\s*([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)\s*)");
    static const std::regex pi_expr(R"(\s*([+-])?\s*(?:(\d+\.?\d*|\.\d+)\s*\*\s*)?pi\s*(?:/\s*(\d+\.?\d*|\.\d+))?\s*)");
    const std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, number)) return std::stod(m[1].str());
    if (std::regex_match(s, m, pi_expr)) {
        double v = kPi;
        if (m[2].matched) v *= std::stod(m[2].str());
        if (m[3].matched) {
            const double d = std::stod(m[3].str());
            if (d == 0.0) throw InvalidArgument("division by zero in \"" + s + "\"");
            v /= d;
        }
        return (m[1].matched && m[1].str() == "-") ? -v : v;
    }
    throw InvalidArgument("cannot read \"" + s + "\" as an angle (use a number or a form like \"-3*pi/4\")");
}

RunConfig parse_config(const json& doc, Command c) {
    RunConfig cfg = command_defaults(c);
    ScenarioConfig& s = cfg.scenario;
    Section root(doc, "");

    root.read("agents", s.agents);
    root.read("grid_points", s.grid_points);
    root.read("dt", s.dt);
    root.read("horizon", s.horizon);
    root.read("record_every", s.record_every);
    root.read("snapshot_every", s.snapshot_every);
    root.read("seed", s.seed, 0);
    if (root.has("mode")) s.mode = lookup(kModes, root.read_string("mode", ""), "mode");
    root.read("pin_estimates_to_kde", s.pin_estimates_to_kde);

    if (root.has("interaction")) {
        Section sec = root.child("interaction");
        sec.read_angle("length_scale", s.interaction.length_scale);
        sec.reject_unknown();
    }
    if (root.has("smoothing")) {
        Section sec = root.child("smoothing");
        sec.read("h", s.smoothing.h);
        sec.reject_unknown();
    }

    bool floor_given = false;
    if (root.has("control")) {
        Section sec = root.child("control");
        sec.read("k_p", s.gains.k_p);
        floor_given = sec.has("rho_floor");
        sec.read("rho_floor", s.gains.rho_floor);
        sec.read("boundary_term", s.control.boundary_term);
        sec.read("reference_feedforward", s.control.reference_feedforward);
        sec.reject_unknown();
    }
    if (!floor_given) s.gains.rho_floor = default_rho_floor(static_cast<double>(s.agents));

    if (root.has("estimator")) {
        Section sec = root.child("estimator");
        sec.read("alpha", s.estimator.alpha);
        sec.read("sigma_p", s.estimator.sigma_p);
        sec.read("sigma_i", s.estimator.sigma_i);
        sec.read("corun_in_centralized", s.corun_estimator);
        sec.reject_unknown();
    }

    if (root.has("topology")) {
        Section sec = root.child("topology");
        if (sec.has("kind")) s.topology.kind = lookup(kTopologies, sec.read_string("kind", ""), sec.field("kind"));
        sec.read("k", s.topology.k);
        sec.read_angle("eps", s.topology.eps);
        sec.reject_unknown();
    }

    if (!root.has("target")) throw ConfigError("target", "missing required block");
    {
        Section sec = root.child("target");
        if (sec.has("kind")) s.target.kind = lookup(kTargets, sec.read_string("kind", ""), sec.field("kind"));
        if (sec.has("mu") && sec.has("mu1")) throw ConfigError(sec.field("mu"), "give either mu or mu1, not both");
        sec.read_angle("mu", s.target.mu1);
        sec.read_angle("mu1", s.target.mu1);
        sec.read_angle("mu2", s.target.mu2);
        sec.read("kappa", s.target.kappa);
        if (sec.has("mass")) throw ConfigError(sec.field("mass"), "is fixed to the agent count; remove it");
        sec.reject_unknown();
    }
    s.target.mass = static_cast<double>(s.agents);

    if (root.has("sweep")) {
        Section sec = root.child("sweep");
        if (sec.has("k")) {
            const json& list = sec.raw("k");
            if (!list.is_array() || list.empty()) throw ConfigError("sweep.k", "expected a non-empty list of integers");
            cfg.sweep_k.clear();
            for (std::size_t i = 0; i < list.size(); ++i) {
                cfg.sweep_k.push_back(Section::to_count(list[i], "sweep.k[" + std::to_string(i) + "]"));
            }
        }
        sec.reject_unknown();
    }
    if (root.has("macro")) {
        Section sec = root.child("macro");
        if (sec.has("initial")) cfg.macro_initial = lookup(kInitials, sec.read_string("initial", ""), "macro.initial");
        sec.read("control_enabled", cfg.macro_control_enabled);
        sec.reject_unknown();
    }
    root.reject_unknown();

    try {
        validate(s);
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ConfigError(colon == std::string::npos ? std::string("<scenario>") : msg.substr(0, colon),
                          colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
    if (c == Command::nn_sweep) {
        for (std::size_t i = 0; i < cfg.sweep_k.size(); ++i) {
            const std::size_t k = cfg.sweep_k[i];
            if (k < 1 || k >= s.agents) {
                throw ConfigError("sweep.k[" + std::to_string(i) + "]",
                                  "k = " + std::to_string(k) + " must satisfy 1 <= k < agents (" +
                                      std::to_string(s.agents) + ")");
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, Command c) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, c);
}

json to_json(const RunConfig& cfg) {
    const ScenarioConfig& s = cfg.scenario;
    json j;
    j["agents"] = s.agents;
    j["grid_points"] = s.grid_points;
    j["dt"] = s.dt;
    j["horizon"] = s.horizon;
    j["record_every"] = s.record_every;
    j["snapshot_every"] = s.snapshot_every;
    j["seed"] = s.seed;
    j["mode"] = name_of(kModes, s.mode);
    j["pin_estimates_to_kde"] = s.pin_estimates_to_kde;
    j["interaction"] = {{"length_scale", s.interaction.length_scale}};
    j["smoothing"] = {{"h", s.smoothing.h}};
    j["control"] = {{"k_p", s.gains.k_p},
                    {"rho_floor", s.gains.rho_floor},
                    {"boundary_term", s.control.boundary_term},
                    {"reference_feedforward", s.control.reference_feedforward}};
    j["estimator"] = {{"alpha", s.estimator.alpha},
                      {"sigma_p", s.estimator.sigma_p},
                      {"sigma_i", s.estimator.sigma_i},
                      {"corun_in_centralized", s.corun_estimator}};
    j["topology"] = {{"kind", name_of(kTopologies, s.topology.kind)}, {"k", s.topology.k}, {"eps", s.topology.eps}};
    j["target"] = {{"kind", name_of(kTargets, s.target.kind)},
                   {"mu1", s.target.mu1},
                   {"mu2", s.target.mu2},
                   {"kappa", s.target.kappa}};
    j["sweep"] = {{"k", cfg.sweep_k}};
    j["macro"] = {{"initial", name_of(kInitials, cfg.macro_initial)}, {"control_enabled", cfg.macro_control_enabled}};
    return j;
}

}  // namespace swarmring::cli
