#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biostab/errors.hpp"
#include "biostab/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Linear stability of thermal phototactic bioconvection in a porous layer"};
    app.set_version_flag("--version", "biostab 0.1.0");

    std::string mode_name;
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    app.add_option("mode", mode_name, "steady | spectrum | neutral | critical | sweep")
        ->required()
        ->check(CLI::IsMember({"steady", "spectrum", "neutral", "critical", "sweep"}));
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--set", sets, "override a config value, key=value or section.key=value");
    app.add_option("--out", out_dir, "output directory (default: current directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : biostab::kExitConfig;
    }

    std::vector<biostab::Override> overrides;
    try {
        for (const std::string& s : sets) overrides.push_back(biostab::parse_override(s));
    } catch (const biostab::ConfigError& e) {
        std::cerr << "biostab: configuration error: " << e.what() << '\n';
        return biostab::kExitConfig;
    }
    std::optional<std::filesystem::path> out;
    if (!out_dir.empty()) out = out_dir;
    return biostab::run(biostab::parse_run_mode(mode_name), config_path, overrides, out, std::cout,
                        std::cerr);
}
