#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rotdev/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rotdev: rotation sets, deviations, stable sets and pseudo-foliations of torus maps"};
    app.set_version_flag("--version", rotdev::kToolVersion);
    app.require_subcommand(1, 1);

    rotdev::RunOptions opts;
    std::string out = "out";
    for (const char* name : {"rotset", "deviation", "stableset", "foliation", "verify", "render"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "run configuration")->required();
        sub->add_option("--out", out, "output directory")->capture_default_str();
        sub->add_flag("--force", opts.force, "run foliation without a bounded verdict");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // usage errors share the config exit code
        return code == 0 ? 0 : rotdev::kExitConfig;
    }
    opts.subcommand = *rotdev::parse_subcommand(app.get_subcommands().front()->get_name());
    opts.out_dir = out;
    return rotdev::run(opts, std::cerr);
}
