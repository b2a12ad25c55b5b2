#include <doctest.h>

#include <sstream>
#include <string>

#include "mpbs/commands.hpp"
#include "mpbs/config.hpp"
#include "mpbs/errors.hpp"

using namespace mpbs;

namespace {

const char* kCorridor = R"(
# comment line
[instrument]
kind = corridor
lower_strike = 0.0075   ; trailing comment
upper_strike = 0.0175
tenure = 0.5

[market]
r = 0.008
sigma = 0.6
spot = 0.0125

[numerics]
lambda_squared = 2
timesteps = 10
)";

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults and values") {
        const RunConfig cfg = parse(kCorridor);
        CHECK(cfg.instrument.kind == InstrumentKind::corridor);
        CHECK(cfg.instrument.lower_strike == 0.0075);
        CHECK(cfg.instrument.notional == 1.0);
        CHECK(cfg.market.sigma == 0.6);
        CHECK(cfg.timesteps.value() == 10);
        CHECK(cfg.mpdata.n_iterations == 2);
        CHECK(cfg.mpdata.non_oscillatory);
        CHECK(cfg.precision == 12);
        const Resolution r = cfg.resolution();
        CHECK(r.n_t == 10);
    }
    SUBCASE("lists and flags") {
        const RunConfig cfg = parse(std::string(kCorridor) +
                                    "courants = 0.01, 0.02,0.04\nthird_order = no\nboundary = log-linear\n");
        CHECK(cfg.courants == std::vector<double>{0.01, 0.02, 0.04});
        CHECK_FALSE(cfg.mpdata.third_order);
        CHECK(cfg.boundary == Boundary::log_linear);
    }
    SUBCASE("malformed input is a configuration error") {
        CHECK_THROWS_AS(parse("kind = put\n"), ConfigError);
        CHECK_THROWS_AS(parse("[instrument\n"), ConfigError);
        CHECK_THROWS_AS(parse(replace(kCorridor, "sigma = 0.6", "sigma = abc")), ConfigError);
        CHECK_THROWS_AS(parse(replace(kCorridor, "sigma = 0.6", "sigma = -0.6")), ConfigError);
        CHECK_THROWS_AS(parse(replace(kCorridor, "sigma = 0.6", "sigma =")), ConfigError);
        CHECK_THROWS_AS(parse(replace(kCorridor, "sigma = 0.6", "sigmaa = 0.6")), ConfigError);
        CHECK_THROWS_AS(parse(replace(kCorridor, "upper_strike = 0.0175", "upper_strike = 0.005")), ConfigError);
        CHECK_THROWS_AS(parse(replace(kCorridor, "timesteps = 10", "timesteps = 0")), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kCorridor) + "target_courant = 0.01\n"), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kCorridor) + "timesteps = 12\n"), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kCorridor) + "s_min = 0.001\n"), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kCorridor) + "courants = 0.01,,0.02\n"), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kCorridor) + "non_oscillatory = maybe\n"), ConfigError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_run_config("/nonexistent/run.ini"), ConfigError);
    }
}

TEST_CASE("command-line overrides") {
    const RunConfig cfg = parse(kCorridor);
    cli::Overrides o;
    o.scheme = analysis::Scheme::upwind;
    CHECK(cli::apply_overrides(cfg, o).mpdata.n_iterations == 1);
    o = {};
    o.iterations = 3;
    o.no_iga = true;
    const RunConfig three = cli::apply_overrides(cfg, o);
    CHECK(three.mpdata.n_iterations == 3);
    CHECK_FALSE(three.mpdata.infinite_gauge);
    o = {};
    o.iterations = 3;  // infinite gauge still on
    CHECK_THROWS_AS(cli::apply_overrides(cfg, o), ConfigError);
    o = {};
    o.no_fct = o.no_tot = true;
    o.out = "x.csv";
    const RunConfig plain = cli::apply_overrides(cfg, o);
    CHECK_FALSE(plain.mpdata.non_oscillatory);
    CHECK_FALSE(plain.mpdata.third_order);
    CHECK(plain.csv_path->string() == "x.csv");
}

TEST_CASE("command output") {
    SUBCASE("numbers use twelve significant digits") {
        CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333");
        CHECK(cli::format_number(-0.0) == "0");
        CHECK(cli::format_number(2.0) == "2");
    }
    SUBCASE("exit codes") {
        CHECK(cli::exit_code(ErrorKind::config) == 2);
        CHECK(cli::exit_code(ErrorKind::stability) == 3);
        CHECK(cli::exit_code(ErrorKind::numeric) == 4);
        std::ostringstream err;
        CHECK(cli::run_guarded([] {}, err) == 0);
        CHECK(cli::run_guarded([] { throw StabilityError("x"); }, err) == 3);
        CHECK(cli::run_guarded([] { throw NumericError("x"); }, err) == 4);
        CHECK(cli::run_guarded([] { throw ConfigError("x"); }, err) == 2);
    }
    SUBCASE("coarse corridor report echoes the resolution") {
        std::ostringstream report;
        cli::price_european_command(parse(kCorridor), report);
        const std::string text = report.str();
        CHECK(text.find("n_t=10") != std::string::npos);
        CHECK(text.find("lambda2=2") != std::string::npos);
        CHECK(text.find("price_percent:") != std::string::npos);
        CHECK(text.find("satisfied=yes") != std::string::npos);
    }
    SUBCASE("convergence CSV is deterministic and carries slopes") {
        const RunConfig cfg = parse(replace(kCorridor, "timesteps = 10", "target_courant = 0.01"));
        std::ostringstream a, b;
        cli::convergence_command(cfg, cli::Axis::space, std::nullopt, a);
        cli::convergence_command(cfg, cli::Axis::space, std::nullopt, b);
        CHECK(a.str() == b.str());
        CHECK(a.str().rfind("scheme,log2_abscissa,log2_error,n_x,n_t,courant,lambda2\n", 0) == 0);
        CHECK(a.str().find("# slopes,upwind=") != std::string::npos);
    }
    SUBCASE("convergence needs a corridor") {
        std::string text = replace(kCorridor, "kind = corridor", "kind = put\nstrike = 100");
        text = replace(text, "lower_strike = 0.0075   ; trailing comment\n", "");
        text = replace(text, "upper_strike = 0.0175\n", "");
        std::ostringstream out;
        CHECK_THROWS_AS(cli::convergence_command(parse(text), cli::Axis::space, std::nullopt, out), ConfigError);
    }
    SUBCASE("temporal sweep needs a Courant target") {
        std::ostringstream out;
        CHECK_THROWS_AS(cli::convergence_command(parse(kCorridor), cli::Axis::time, std::nullopt, out), ConfigError);
        CHECK(cli::parse_axis("time") == cli::Axis::time);
        CHECK_THROWS_AS(cli::parse_axis("diagonal"), ConfigError);
    }
}
