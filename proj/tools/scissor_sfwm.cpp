#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scissor/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Photon-pair generation in a chain of ring resonators"};
    std::string experiment;
    std::string config_path;
    scissor::RunOptions run;
    app.add_option("experiment", experiment,
                   "spectrum | efficiency-vs-n | jsd | fwhm-vs-n | coherence-number")
        ->required();
    app.add_option("--config", config_path, "JSON configuration (defaults when omitted)");
    app.add_option("--out", run.out_dir, "output directory");
    app.add_option("--grid-points", run.grid_points, "points per frequency axis (odd)");
    app.add_flag("--refine", run.refine, "check |beta|^2 against a grid of half the spacing");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto config = config_path.empty() ? scissor::ExperimentConfig{}
                                                : scissor::load_config(config_path);
        for (const auto& w : config.structure.warnings()) std::cerr << "warning: " << w << '\n';
        for (const auto& path : scissor::run_experiment(experiment, config, run))
            std::cout << path << '\n';
    } catch (const scissor::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const scissor::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::range_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
