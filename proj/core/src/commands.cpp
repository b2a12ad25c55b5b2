#include "mpbs/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mpbs/american.hpp"
#include "mpbs/finmodel.hpp"
#include "mpbs/oracles.hpp"

namespace mpbs::cli {

namespace {

using analysis::Scheme;

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out << contents;
    if (!out) throw ConfigError("failed writing " + path.string());
}

std::string on_off(bool b) { return b ? "on" : "off"; }

void describe_options(std::ostream& os, const MpdataOptions& o) {
    if (o.n_iterations == 1) {
        os << "scheme: upwind\n";
        return;
    }
    os << "scheme: mpdata iterations=" << o.n_iterations << " fct=" << on_off(o.non_oscillatory)
       << " iga=" << on_off(o.infinite_gauge) << " tot=" << on_off(o.third_order) << "\n";
}

void describe_run(std::ostream& os, const PricingResult& pr) {
    const Resolution& r = pr.resolution;
    describe_options(os, pr.options);
    os << "grid: n_x=" << r.n_x << " n_t=" << r.n_t << " dx=" << format_number(r.delta_x)
       << " dt=" << format_number(r.delta_t) << " courant=" << format_number(r.courant)
       << " lambda2=" << format_number(r.lambda_squared) << " boundary=" << to_string(pr.boundary)
       << "\n";
    os << "domain: S in [" << format_number(std::exp(r.x_min)) << ", "
       << format_number(std::exp(r.grid().x_max())) << "]\n";
    const StabilityReport& s = pr.stability;
    os << "stability: max_courant=" << format_number(s.max_effective_courant)
       << " worst_case=" << format_number(s.worst_case_courant)
       << " bound=" << format_number(s.bound) << " satisfied=" << (s.satisfied ? "yes" : "no")
       << "\n";
    os << "run: steps=" << pr.stats.steps << " max_courant_seen=" << format_number(pr.stats.max_courant_seen)
       << " max_outflow_seen=" << format_number(pr.stats.max_outflow_seen)
       << " halo_fallbacks=" << pr.stats.halo_fallbacks << "\n";
    for (const auto& w : pr.warnings) os << "warning: " << w << "\n";
}

double analytic_value(const InstrumentSpec& inst, const MarketParams& m, double s) {
    const oracles::AnalyticInputs in{s, inst.strike, m.r, m.sigma, inst.tenure};
    switch (inst.kind) {
        case InstrumentKind::corridor:
            return oracles::corridor_value(s, inst.lower_strike, inst.upper_strike, m.r, m.sigma,
                                           inst.tenure);
        case InstrumentKind::call:
            return oracles::bs_call(in);
        case InstrumentKind::put:
            return oracles::bs_put(in);
        case InstrumentKind::forward:
            return s - inst.strike * std::exp(-m.r * inst.tenure);
        case InstrumentKind::american_put:
            return oracles::bjerksund_stensland_put(in);
    }
    return 0.0;
}

std::string cell_csv(const PricingResult& pr, const InstrumentSpec& inst, const MarketParams& m,
                     int precision) {
    std::ostringstream os;
    os << "x,S,psi_numeric,psi_analytic,error\n";
    const GridSpec grid = pr.resolution.grid();
    for (std::size_t i = 0; i < grid.n_x; ++i) {
        const double x = grid.center(i);
        const double s = std::exp(x);
        const double numeric = pr.solution[static_cast<std::ptrdiff_t>(i)];
        const double exact = analytic_value(inst, m, s);
        os << format_number(x, precision) << ',' << format_number(s, precision) << ','
           << format_number(numeric, precision) << ',' << format_number(exact, precision) << ','
           << format_number(numeric - exact, precision) << '\n';
    }
    return os.str();
}

void require_spot_inside(const RunConfig& cfg, const Resolution& res) {
    const double lo = std::exp(res.x_min);
    const double hi = std::exp(res.grid().x_max());
    if (!(cfg.spot > lo && cfg.spot < hi)) {
        std::ostringstream msg;
        msg << "spot " << cfg.spot << " is outside the domain (" << lo << ", " << hi << ")";
        throw ConfigError(msg.str());
    }
}

SolverControls controls_of(const RunConfig& cfg) { return {cfg.boundary, cfg.allow_unstable}; }

analysis::CorridorStudy corridor_study(const RunConfig& cfg) {
    if (cfg.instrument.kind != InstrumentKind::corridor) {
        throw ConfigError("convergence studies need instrument.kind = corridor");
    }
    analysis::CorridorStudy study;
    study.instrument = cfg.instrument;
    study.market = cfg.market;
    study.domain_sigmas = cfg.domain_sigmas;
    study.mpdata = cfg.mpdata;
    return study;
}

}  // namespace

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config:
            return kConfigError;
        case ErrorKind::stability:
            return kStabilityError;
        case ErrorKind::numeric:
            return kNumericError;
    }
    return kNumericError;
}

RunConfig apply_overrides(RunConfig config, const Overrides& o) {
    if (o.iterations) config.mpdata.n_iterations = *o.iterations;
    if (o.scheme == Scheme::upwind) config.mpdata.n_iterations = 1;
    if (o.scheme == Scheme::mpdata && config.mpdata.n_iterations < 2) config.mpdata.n_iterations = 2;
    if (o.no_fct) config.mpdata.non_oscillatory = false;
    if (o.no_iga) config.mpdata.infinite_gauge = false;
    if (o.no_tot) config.mpdata.third_order = false;
    if (o.out) config.csv_path = *o.out;
    config.validate();
    return config;
}

Axis parse_axis(std::string_view name) {
    if (name == "space") return Axis::space;
    if (name == "time") return Axis::time;
    throw ConfigError("unknown axis '" + std::string(name) + "', expected space or time");
}

std::string format_number(double value, int precision) {
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    return buffer;
}

void write_convergence_csv(std::ostream& out, std::span<const analysis::ConvergencePoint> points,
                           int precision) {
    out << "scheme,log2_abscissa,log2_error,n_x,n_t,courant,lambda2\n";
    for (const auto& p : points) {
        out << analysis::to_string(p.scheme) << ',' << format_number(p.log2_abscissa, precision)
            << ',' << format_number(p.log2_error, precision) << ',' << p.config.n_x << ','
            << p.config.n_t << ',' << format_number(p.config.courant, precision) << ','
            << format_number(p.config.lambda_squared, precision) << '\n';
    }
    out << "# slopes";
    for (Scheme s : {Scheme::upwind, Scheme::mpdata}) {
        std::size_t n = 0;
        for (const auto& p : points) n += p.scheme == s;
        if (n == 0) continue;
        out << ',' << analysis::to_string(s) << '=';
        if (n >= 3) {
            out << format_number(analysis::fit_order(points, s), precision);
        } else {
            out << "nan";
        }
    }
    out << '\n';
}

void price_european_command(const RunConfig& cfg, std::ostream& report) {
    InstrumentSpec inst = cfg.instrument;
    if (inst.kind == InstrumentKind::american_put) {
        throw ConfigError("price-european needs a European instrument; use price-american");
    }
    require_spot_inside(cfg, cfg.resolution());
    const Resolution res = align_to_spot(cfg.resolution(), cfg.spot);
    const PricingResult pr = price_european(inst, cfg.market, res, cfg.mpdata, cfg.spot, controls_of(cfg));
    const double exact = analytic_value(inst, cfg.market, cfg.spot);

    std::string csv;
    if (cfg.csv_path) csv = cell_csv(pr, inst, cfg.market, cfg.precision);

    const int p = cfg.precision;
    report << "instrument: " << to_string(inst.kind);
    if (inst.kind == InstrumentKind::corridor) {
        report << " K1=" << format_number(inst.lower_strike, p) << " K2=" << format_number(inst.upper_strike, p);
    } else {
        report << " K=" << format_number(inst.strike, p);
    }
    report << " T=" << format_number(inst.tenure, p) << " notional=" << format_number(inst.notional, p) << "\n";
    report << "market: r=" << format_number(cfg.market.r, p) << " sigma=" << format_number(cfg.market.sigma, p)
           << " spot=" << format_number(cfg.spot, p) << "\n";
    describe_run(report, pr);
    report << "price: " << format_number(inst.notional * pr.price, p) << "\n";
    report << "analytic: " << format_number(inst.notional * exact, p) << "\n";
    report << "abs_error: " << format_number(inst.notional * std::abs(pr.price - exact), p) << "\n";
    if (inst.kind == InstrumentKind::corridor) {
        report << "price_percent: " << format_number(100.0 * pr.price, p) << "%\n";
    }
    if (cfg.csv_path) write_file(*cfg.csv_path, csv);
}

void price_american_command(const RunConfig& cfg, std::ostream& report) {
    InstrumentSpec inst = cfg.instrument;
    if (inst.kind != InstrumentKind::american_put) {
        throw ConfigError("price-american needs instrument.kind = american_put");
    }
    const Resolution res = cfg.resolution();
    const AmericanResult am = price_american(inst, cfg.market, res, cfg.mpdata, cfg.spot, controls_of(cfg));

    InstrumentSpec european = inst;
    european.kind = InstrumentKind::put;
    const oracles::AnalyticInputs in{cfg.spot, inst.strike, cfg.market.r, cfg.market.sigma, inst.tenure};
    const double bs93 = oracles::bjerksund_stensland_put(in);
    const double bs = oracles::bs_put(in);
    const double tree = oracles::binomial_american_put(in, cfg.binomial_steps);

    std::string csv;
    if (cfg.csv_path) csv = cell_csv(am.pricing, inst, cfg.market, cfg.precision);

    const int p = cfg.precision;
    report << "instrument: american_put K=" << format_number(inst.strike, p)
           << " T=" << format_number(inst.tenure, p) << " notional=" << format_number(inst.notional, p) << "\n";
    report << "market: r=" << format_number(cfg.market.r, p) << " sigma=" << format_number(cfg.market.sigma, p)
           << " spot=" << format_number(cfg.spot, p) << "\n";
    describe_run(report, am.pricing);
    report << "exercise: binding=" << am.totals.exercised << " slack=" << am.totals.continued << "\n";
    report << "price: " << format_number(inst.notional * am.pricing.price, p) << "\n";
    report << "bs93: " << format_number(inst.notional * bs93, p) << "\n";
    report << "binomial(" << cfg.binomial_steps << "): " << format_number(inst.notional * tree, p) << "\n";
    report << "european: " << format_number(inst.notional * bs, p) << "\n";
    report << "intrinsic: " << format_number(inst.notional * payoff(european, cfg.spot), p) << "\n";
    if (cfg.csv_path) write_file(*cfg.csv_path, csv);
}

void convergence_command(const RunConfig& cfg, Axis axis, std::optional<Scheme> only,
                         std::ostream& report) {
    const analysis::CorridorStudy study = corridor_study(cfg);
    analysis::SweepResult sweep;
    if (axis == Axis::space) {
        std::vector<double> courants = cfg.courants;
        if (courants.empty()) courants.assign(std::begin(analysis::kSweepCourants), std::end(analysis::kSweepCourants));
        sweep = analysis::sweep_spatial(cfg.lambda_squared, courants, study);
    } else {
        if (!cfg.target_courant) throw ConfigError("convergence --axis time needs numerics.target_courant");
        std::vector<double> lambdas = cfg.lambdas;
        if (lambdas.empty()) lambdas.assign(std::begin(analysis::kSweepLambdas), std::end(analysis::kSweepLambdas));
        sweep = analysis::sweep_temporal(*cfg.target_courant, lambdas, study);
    }
    std::vector<analysis::ConvergencePoint> points;
    for (const auto& pt : sweep.points) {
        if (!only || pt.scheme == *only) points.push_back(pt);
    }
    for (Scheme s : {Scheme::upwind, Scheme::mpdata}) {
        if (only && s != *only) continue;
        analysis::fit_order(points, s);  // throws ConfigError when too few points survived
    }

    std::ostringstream csv;
    write_convergence_csv(csv, points, cfg.precision);
    for (const auto& f : sweep.flagged) report << "# skipped: " << f << "\n";
    if (cfg.csv_path) {
        write_file(*cfg.csv_path, csv.str());
        report << "wrote " << points.size() << " rows to " << cfg.csv_path->string() << "\n";
    } else {
        report << csv.str();
    }
}

void table_american_command(const RunConfig& cfg, std::ostream& report) {
    if (cfg.instrument.kind != InstrumentKind::american_put) {
        throw ConfigError("table-american needs instrument.kind = american_put");
    }
    analysis::AmericanTableSettings settings;
    settings.strike = cfg.instrument.strike;
    settings.market = cfg.market;
    settings.lambda_squared = cfg.lambda_squared;
    settings.mpdata = cfg.mpdata;
    if (!cfg.table_tenures.empty()) settings.tenures = cfg.table_tenures;
    if (!cfg.table_spots.empty()) settings.spots = cfg.table_spots;
    std::vector<double> courants = cfg.courants;
    if (courants.empty()) courants = {0.02, 0.01, 0.005};

    const auto rows = analysis::american_table(courants, settings);
    const int p = cfg.precision;

    std::ostringstream csv;
    csv << "tenure,spot,courant,n_x,n_t,log2_error,price,bs93,european\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < courants.size(); ++k) {
            csv << format_number(row.tenure, p) << ',' << format_number(row.spot, p) << ','
                << format_number(row.resolutions[k].courant, p) << ',' << row.resolutions[k].n_x << ','
                << row.resolutions[k].n_t << ',' << format_number(row.log2_error[k], p) << ',';
            csv << (k + 1 == courants.size() ? format_number(row.price, p) : std::string("nan")) << ','
                << format_number(row.bs93, p) << ',' << format_number(row.european, p) << '\n';
        }
    }

    char line[256];
    report << "     T     S0";
    for (double c : courants) {
        std::snprintf(line, sizeof line, "  %12s", ("log2E@" + format_number(c, 3)).c_str());
        report << line;
    }
    report << "         f      BS93  European\n";
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%6.2f %6.1f", row.tenure, row.spot);
        report << line;
        for (std::size_t k = 0; k < courants.size(); ++k) {
            std::snprintf(line, sizeof line, "  %12.3f", row.log2_error[k]);
            report << line;
        }
        std::snprintf(line, sizeof line, "  %8.3f  %8.3f  %8.3f\n", row.price, row.bs93, row.european);
        report << line;
    }
    if (cfg.csv_path) write_file(*cfg.csv_path, csv.str());
}

int run_guarded(const std::function<void()>& body, std::ostream& err) {
    try {
        body();
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    }
}

}  // namespace mpbs::cli
