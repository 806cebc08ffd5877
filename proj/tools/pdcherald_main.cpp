#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "pdc/runner.hpp"
#include "pdc/version.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Heralded single-photon source simulator (pulsed Type-I PDC in BBO)"};
    app.set_version_flag("--version", std::string(pdc::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    double grid_scale = 1.0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "override the configured seed")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--grid-scale", grid_scale,
                        "multiply grid sample density (convergence testing)")
            ->check(CLI::PositiveNumber);
    };

    const char* names[] = {"tuning-curve", "acceptance", "spectrum", "budget",
                           "hom",          "rt",         "simulate"};
    const char* descriptions[] = {
        "phase-matching tuning curves for pump center and +/- 1 nm",
        "Gaussian-beam fiber-coupling acceptance report",
        "joint spectrum, filtered heralded marginals and spectrometer scans",
        "conditional-efficiency and heralding-efficiency budget chain",
        "Hong-Ou-Mandel dip of the PDC pair with Gaussian fit",
        "Rarity-Tapster dip of heralded photon vs weak coherent pulse",
        "Monte Carlo trigger/coincidence counting run"};
    for (std::size_t i = 0; i < std::size(names); ++i) {
        add_common(app.add_subcommand(names[i], descriptions[i]));
    }

    CLI11_PARSE(app, argc, argv);

    pdc::RunOptions options;
    if (seed_given) {
        options.seed_override = seed;
    }
    options.grid_scale = grid_scale;
    return pdc::run_subcommand(app.get_subcommands().front()->get_name(), config_path, out_dir,
                               options);
}
