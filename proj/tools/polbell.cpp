#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "polbell/cli/commands.hpp"

namespace {

using polbell::cli::RunConfig;

struct Flags {
    RunConfig cfg;
    std::string config_path;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--seed", f.cfg.seed, "master seed (u64)");
    sub->add_option("--out", f.cfg.out, "output CSV path");
    sub->add_flag("--degrees", f.cfg.degrees, "read angles in degrees");
}

void add_state(CLI::App* sub, Flags& f) {
    sub->add_option("--family", f.cfg.family, "product | entangled");
    sub->add_option("--delta", f.cfg.delta, "product-family phase");
    sub->add_option("--theta", f.cfg.theta, "entangled-family angle");
}

int run(const Flags& f, int (*cmd)(const RunConfig&, std::ostream&, std::ostream&)) {
    RunConfig merged = f.cfg;
    try {
        if (!f.config_path.empty()) merged = polbell::cli::load_config_file(f.config_path).overridden_by(f.cfg);
    } catch (const polbell::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return polbell::cli::kExitUsage;
    }
    try {
        return cmd(merged, std::cout, std::cerr);
    } catch (const polbell::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return polbell::cli::kExitFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical polarization-path Bell simulations"};
    app.require_subcommand(1);
    Flags f;

    auto* prepare = app.add_subcommand("prepare", "prepare a family state and report it");
    add_common(prepare, f);
    add_state(prepare, f);
    prepare->add_option("--via", f.cfg.via, "direct | recipe");

    auto* sweep = app.add_subcommand("sweep", "Bell sweep over one family as CSV");
    add_common(sweep, f);
    sweep->add_option("--family", f.cfg.family, "product | entangled");
    sweep->add_option("--preset", f.cfg.preset, "fig5-left | fig5-right");
    sweep->add_option("--delta1", f.cfg.delta1, "fixed first setting");
    sweep->add_option("--grid-start", f.cfg.grid_start);
    sweep->add_option("--grid-end", f.cfg.grid_end);
    sweep->add_option("--grid-points", f.cfg.grid_points);
    sweep->add_option("--estimator", f.cfg.estimator, "analytic_oracle | stokes_direct | tomography");
    sweep->add_option("--sigma-rel", f.cfg.sigma_rel, "relative detector noise");
    sweep->add_option("--noise-seed", f.cfg.noise_seed);
    sweep->add_option("--repetitions", f.cfg.repetitions);

    auto* tomo = app.add_subcommand("tomography", "simulate intensities and reconstruct Stokes vectors");
    add_common(tomo, f);
    add_state(tomo, f);
    tomo->add_option("--sigma-rel", f.cfg.sigma_rel, "relative detector noise");
    tomo->add_option("--noise-seed", f.cfg.noise_seed);
    tomo->add_option("--repetitions", f.cfg.repetitions);
    tomo->add_option("--in", f.cfg.in, "reconstruct from an intensity CSV");

    auto* lhv = app.add_subcommand("lhv", "local hidden-variable fuzz run");
    add_common(lhv, f);
    lhv->add_option("--samples", f.cfg.samples);
    lhv->add_option("--strategy", f.cfg.strategy, "random | saturating");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    add_common(verify, f);
    verify->add_option("--only", f.cfg.only, "criterion ids to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : polbell::cli::kExitUsage;
    }

    using namespace polbell::cli;
    if (prepare->parsed()) return run(f, cmd_prepare);
    if (sweep->parsed()) return run(f, cmd_sweep);
    if (tomo->parsed()) return run(f, cmd_tomography);
    if (lhv->parsed()) return run(f, cmd_lhv);
    return run(f, cmd_verify);
}
