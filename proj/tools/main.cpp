#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "swarmring/cli/commands.hpp"
#include "swarmring/cli/config_io.hpp"
#include "swarmring/errors.hpp"

namespace cli = swarmring::cli;

int main(int argc, char** argv) {
    CLI::App app{"Density control of a swarm on the circle"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool parallel = false;

    const struct {
        const char* name;
        const char* help;
    } commands[] = {
        {"regulate", "centralized vs decentralized regulation to a static target"},
        {"track", "centralized vs decentralized tracking of a moving target"},
        {"proximity", "decentralized regulation over a proximity network"},
        {"nn-sweep", "decentralized regulation for each k in sweep.k"},
        {"macro-verify", "closed-loop macroscopic PDE and its error decay rate"},
    };
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", config_path, "JSON scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_flag("--parallel", parallel, "run independent scenarios concurrently");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitInvalid;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const cli::Command command = cli::parse_command(name);
        const cli::RunConfig cfg = cli::load_config(config_path, command);
        const auto summary = cli::run_command(command, cfg, out_dir, parallel);
        std::cout << summary.dump(2) << '\n';
        return cli::kExitOk;
    } catch (const swarmring::IntegrationDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitDiverged;
    } catch (const swarmring::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInvalid;
    }
}
