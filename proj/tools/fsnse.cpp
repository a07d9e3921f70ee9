// fsnse command line tool: simulate, verify, and study the 2D fractional
// stochastic Navier-Stokes system on the torus.

#include <CLI11.hpp>

#include <iostream>

#include "fsnse/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral fractional stochastic Navier-Stokes on the 2D torus"};
    app.require_subcommand(1);

    fsnse::cli::RunOptions run_opts;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int snapshots_flag = 0;
    bool snapshots_given = false;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        cmd->add_option("--config", run_opts.config_path, "configuration file")
            ->required(config_required);
        cmd->add_option("--seed", seed_flag, "noise seed override")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--out", run_opts.out_dir, "output directory");
    };

    CLI::App* c_run = app.add_subcommand("run", "integrate one trajectory");
    add_common(c_run, true);
    c_run->add_option("--snapshots", snapshots_flag, "snapshot every k records")
        ->each([&](const std::string&) { snapshots_given = true; });

    CLI::App* c_verify = app.add_subcommand("verify", "run a property suite");
    std::string suite = "all";
    std::uint64_t vseed = 7001;
    double valpha = 1.5;
    c_verify->add_option("suite", suite, "identities|inequalities|coupling|convergence|all");
    c_verify->add_option("--seed", vseed, "ensemble seed");
    c_verify->add_option("--alpha", valpha, "dissipation exponent for the inequality catalog");

    CLI::App* c_conv = app.add_subcommand("converge", "convergence and moment studies");
    add_common(c_conv, true);

    CLI::App* c_info = app.add_subcommand("info", "print version and config summary");
    std::string info_config;
    c_info->add_option("--config", info_config, "configuration file (optional)");

    CLI11_PARSE(app, argc, argv);

    if (seed_given) run_opts.seed = seed_flag;
    if (snapshots_given) run_opts.snapshots_every = snapshots_flag;

    if (c_run->parsed()) return fsnse::cli::cmd_run(run_opts, std::cout, std::cerr);
    if (c_verify->parsed())
        return fsnse::cli::cmd_verify(suite, vseed, valpha, std::cout, std::cerr);
    if (c_conv->parsed()) return fsnse::cli::cmd_converge(run_opts, std::cout, std::cerr);
    if (c_info->parsed()) return fsnse::cli::cmd_info(info_config, std::cout, std::cerr);
    return 1;
}
