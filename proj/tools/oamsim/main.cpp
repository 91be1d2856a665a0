// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    using namespace oamsim::cli;

    CLI::App app{"Orbital angular momentum antenna-array simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", software_version);

    RunOptions opt;
    std::string out_dir = "out";
    long long seed = 0;
    app.add_option("--out", out_dir, "output directory (created if missing)");
    auto *seed_opt = app.add_option("--seed", seed, "recorded in the manifest; all runs are deterministic");

    std::string config;
    auto *sim = app.add_subcommand("simulate", "field maps and mode analysis for a scenario file");
    sim->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);

    int l_max = 5;
    auto *minel = app.add_subcommand("min-elements", "minimum element count per mode, rule vs sweep");
    minel->add_option("--l-max", l_max, "largest mode")->check(CLI::Range(1, 30));

    std::string placement = "regular";
    double freq = 3e9;
    auto *phone = app.add_subcommand("smartphone", "four-element handset array");
    phone->add_option("--placement", placement, "regular | irregular")->check(CLI::IsMember({"regular", "irregular"}));
    phone->add_option("--freq", freq, "frequency in Hz");

    std::vector<double> snr;
    auto *chan = app.add_subcommand("channel", "mode-basis link channel, crosstalk and capacity");
    chan->add_option("--config", config, "link JSON")->required()->check(CLI::ExistingFile);
    chan->add_option("--snr", snr, "linear SNR values (override the config)");

    auto *mom = app.add_subcommand("momentum", "radiation pressure and angular-momentum flux");
    mom->add_option("--config", config, "momentum JSON")->required()->check(CLI::ExistingFile);

    std::string scenario;
    auto *scen = app.add_subcommand("scenario", "run a built-in scenario");
    scen->add_option("name", scenario, "fig2-modes | fig3-dipoles | table1 | smartphone-3g | smartphone-86g")
        ->required();

    for (auto *sub : {sim, minel, phone, chan, mom, scen})
    {
        sub->add_option("--out", out_dir, "output directory (created if missing)");
        sub->add_option("--seed", seed, "recorded in the manifest");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    opt.out_dir = out_dir;
    bool seeded = seed_opt->count() > 0;
    for (auto *sub : app.get_subcommands())
        seeded = seeded || sub->get_option("--seed")->count() > 0;
    if (seeded)
        opt.seed = seed;

    try
    {
        if (*sim)
            return cmd_simulate(config, opt);
        if (*minel)
            return cmd_min_elements(l_max, opt);
        if (*phone)
            return cmd_smartphone(placement, freq, opt);
        if (*chan)
            return cmd_channel(config, snr, opt);
        if (*mom)
            return cmd_momentum(config, opt);
        if (*scen)
            return cmd_scenario(scenario, opt);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "oamsim: config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const oamsim::Error &e)
    {
        std::cerr << "oamsim: " << oamsim::to_string(e.kind()) << ": " << e.what() << '\n';
        return e.kind() == oamsim::ErrorKind::aliasing || e.kind() == oamsim::ErrorKind::unsupported_model
                   ? exit_config
                   : exit_numeric;
    }
    catch (const std::exception &e)
    {
        std::cerr << "oamsim: " << e.what() << '\n';
        return 1;
    }
    return exit_config;
}
