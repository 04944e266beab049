#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "pipedrive/cli_io.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Longitudinal waves in a pipe with dry side friction"};
    app.require_subcommand(1);

    std::string config, out = "out", variant = "auto", exclusion = "on";
    for (const char* name : {"simulate", "analytic", "compare", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--variant", variant,
                        "auto, semi-infinite, finite-rod, rect, generic, "
                        "mechanical-analogue, complex-amplitudes, corrected");
        sub->add_option("--front-exclusion", exclusion, "on|off")->check(CLI::IsMember({"on", "off"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto cmd = pipedrive::parse_command(app.get_subcommands().front()->get_name());
    pipedrive::CommandOptions opt;
    opt.variant = variant;
    opt.front_exclusion = exclusion == "on";
    return pipedrive::run_command(*cmd, config, out, opt, std::cerr);
}
