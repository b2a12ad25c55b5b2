// Command-line front end: price-european, price-american, convergence, table-american.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mpbs/commands.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string scheme;
    int iters = 0;
    bool no_fct = false;
    bool no_iga = false;
    bool no_tot = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "INI run configuration")->required();
    cmd->add_option("--out", f.out, "CSV output path (overrides output.csv)");
    cmd->add_option("--scheme", f.scheme, "upwind or mpdata")
        ->check(CLI::IsMember({"upwind", "mpdata"}));
    cmd->add_option("--iters", f.iters, "MPDATA iterations")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-fct", f.no_fct, "disable the non-oscillatory limiter");
    cmd->add_flag("--no-iga", f.no_iga, "disable the infinite-gauge variant");
    cmd->add_flag("--no-tot", f.no_tot, "disable the third-order terms");
}

mpbs::cli::Overrides overrides_of(const Flags& f) {
    mpbs::cli::Overrides o;
    if (f.scheme == "upwind") o.scheme = mpbs::analysis::Scheme::upwind;
    if (f.scheme == "mpdata") o.scheme = mpbs::analysis::Scheme::mpdata;
    if (f.iters > 0) o.iterations = f.iters;
    o.no_fct = f.no_fct;
    o.no_iga = f.no_iga;
    o.no_tot = f.no_tot;
    if (!f.out.empty()) o.out = f.out;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MPDATA Black-Scholes pricer"};
    app.require_subcommand(1);

    Flags flags;
    std::string axis = "space";
    auto* european = app.add_subcommand("price-european", "price a European instrument");
    auto* american = app.add_subcommand("price-american", "price an American put");
    auto* convergence = app.add_subcommand("convergence", "corridor convergence sweep as CSV");
    auto* table = app.add_subcommand("table-american", "American put error table");
    for (auto* cmd : {european, american, convergence, table}) add_common(cmd, flags);
    convergence->add_option("--axis", axis, "space or time")->check(CLI::IsMember({"space", "time"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mpbs::cli::kConfigError;
    }

    using namespace mpbs::cli;
    return run_guarded(
        [&] {
            const auto config = apply_overrides(mpbs::load_run_config(flags.config), overrides_of(flags));
            if (european->parsed()) {
                price_european_command(config, std::cout);
            } else if (american->parsed()) {
                price_american_command(config, std::cout);
            } else if (convergence->parsed()) {
                convergence_command(config, parse_axis(axis), overrides_of(flags).scheme, std::cout);
            } else {
                table_american_command(config, std::cout);
            }
        },
        std::cerr);
}
