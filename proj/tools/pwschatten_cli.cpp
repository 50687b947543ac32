#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pwschatten/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Schatten-class and Besov experiments for Paley-Wiener Toeplitz operators"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one experiment");
    std::string experiment, config_path, out_dir = "results";
    std::optional<std::uint64_t> seed;
    run->add_option("experiment", experiment, "experiment name")->required()->check(CLI::IsMember(pws::experiment_names()));
    run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "RNG seed (overrides the config)");

    app.add_subcommand("list", "list experiment names")->callback([] {
        for (const auto& n : pws::experiment_names()) std::cout << n << '\n';
    });

    CLI11_PARSE(app, argc, argv);
    if (!run->parsed()) return 0;

    try {
        pws::json j = pws::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            j = pws::json::parse(in);
        }
        auto cfg = pws::config_from_json(j, experiment);
        cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
        const auto rep = pws::run_experiment(cfg);
        std::cout << rep.summary().dump(2) << '\n';
        return rep.failures.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
