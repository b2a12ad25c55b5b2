#include "mpbs/analysis.hpp"

#include <cmath>
#include <sstream>

#include "mpbs/american.hpp"
#include "mpbs/errors.hpp"
#include "mpbs/oracles.hpp"

namespace mpbs::analysis {

std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::upwind ? "upwind" : "mpdata";
}

double error_measure(const ScalarField& numeric, std::span<const double> analytic,
                     std::size_t n_x, std::size_t n_t) {
    if (n_x == 0 || n_t == 0) throw ConfigError("error measure needs n_x, n_t >= 1");
    const auto psi = numeric.interior();
    if (psi.size() != analytic.size() || psi.size() != n_x) {
        throw ConfigError("error measure: numeric and analytic lengths differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double d = psi[i] - analytic[i];
        sum += d * d;
    }
    return std::sqrt(sum / (static_cast<double>(n_x) * static_cast<double>(n_t)));
}

MpdataOptions scheme_options(Scheme scheme, const MpdataOptions& mpdata) {
    if (scheme == Scheme::mpdata) return mpdata;
    MpdataOptions upwind;
    upwind.n_iterations = 1;
    upwind.epsilon = mpdata.epsilon;
    return upwind;
}

namespace {

Domain study_domain(const CorridorStudy& study) {
    return default_domain(study.instrument, study.market, study.domain_sigmas);
}

std::vector<double> corridor_samples(const CorridorStudy& study, const GridSpec& grid) {
    std::vector<double> out(grid.n_x);
    const InstrumentSpec& c = study.instrument;
    for (std::size_t i = 0; i < grid.n_x; ++i) {
        out[i] = oracles::corridor_value(std::exp(grid.center(i)), c.lower_strike, c.upper_strike,
                                         study.market.r, study.market.sigma, c.tenure);
    }
    return out;
}

// Runs both schemes at one resolution, or flags the configuration.
void add_points(const CorridorStudy& study, const Resolution& res, double abscissa,
                SweepResult& out) {
    if (res.n_t < static_cast<std::size_t>(study.min_steps)) {
        std::ostringstream msg;
        msg << "C=" << res.courant << " lambda2=" << res.lambda_squared << ": n_t=" << res.n_t
            << " below " << study.min_steps;
        out.flagged.push_back(msg.str());
        return;
    }
    for (Scheme scheme : {Scheme::upwind, Scheme::mpdata}) {
        try {
            const double e = corridor_error(study, res, scheme);
            out.points.push_back({abscissa, std::log2(e), scheme, res});
        } catch (const StabilityError& e) {
            out.flagged.push_back(std::string(to_string(scheme)) + ": " + e.what());
        }
    }
}

}  // namespace

double corridor_error(const CorridorStudy& study, const Resolution& resolution, Scheme scheme) {
    const double mid = std::sqrt(study.instrument.lower_strike * study.instrument.upper_strike);
    const PricingResult pr = price_european(study.instrument, study.market, resolution,
                                            scheme_options(scheme, study.mpdata), mid);
    const auto analytic = corridor_samples(study, resolution.grid());
    return error_measure(pr.solution, analytic, resolution.n_x, resolution.n_t);
}

SweepResult sweep_spatial(double lambda_squared, std::span<const double> courants,
                          const CorridorStudy& study) {
    if (courants.empty()) throw ConfigError("spatial sweep needs at least one Courant number");
    SweepResult out;
    for (double c : courants) {
        const Resolution res = size_grid(c, lambda_squared, study.market,
                                         study.instrument.tenure, study_domain(study));
        const StabilityReport st =
            check_stability(make_problem(study.market, res, Boundary::open, false),
                            study.market.sigma);
        if (!st.satisfied) {
            out.flagged.push_back("lambda2=" + std::to_string(lambda_squared) + " unstable");
            continue;
        }
        add_points(study, res, std::log2(res.courant), out);
    }
    return out;
}

SweepResult sweep_temporal(double courant, std::span<const double> lambdas,
                           const CorridorStudy& study) {
    if (lambdas.empty()) throw ConfigError("temporal sweep needs at least one lambda^2");
    SweepResult out;
    for (double l2 : lambdas) {
        const Resolution res =
            size_grid(courant, l2, study.market, study.instrument.tenure, study_domain(study));
        const StabilityReport st =
            check_stability(make_problem(study.market, res, Boundary::open, false),
                            study.market.sigma);
        if (!st.satisfied) {
            out.flagged.push_back("lambda2=" + std::to_string(l2) + " unstable");
            continue;
        }
        add_points(study, res, std::log2(res.lambda_squared), out);
    }
    return out;
}

double fit_order(std::span<const ConvergencePoint> points) {
    if (points.size() < 3) throw ConfigError("order fit needs at least 3 points");
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : points) {
        sx += p.log2_abscissa;
        sy += p.log2_error;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.log2_abscissa - mx) * (p.log2_abscissa - mx);
        sxy += (p.log2_abscissa - mx) * (p.log2_error - my);
    }
    if (sxx == 0.0) throw ConfigError("order fit needs distinct abscissae");
    return sxy / sxx;
}

double fit_order(std::span<const ConvergencePoint> points, Scheme scheme) {
    std::vector<ConvergencePoint> subset;
    for (const auto& p : points) {
        if (p.scheme == scheme) subset.push_back(p);
    }
    return fit_order(subset);
}

std::vector<TableRow> american_table(std::span<const double> courants,
                                     const AmericanTableSettings& settings) {
    if (courants.empty()) throw ConfigError("American table needs at least one Courant target");
    std::vector<TableRow> rows;
    for (double tenure : settings.tenures) {
        const InstrumentSpec put = InstrumentSpec::american_put(settings.strike, tenure);
        for (double spot : settings.spots) {
            TableRow row;
            row.tenure = tenure;
            row.spot = spot;
            const oracles::AnalyticInputs at_spot{spot, settings.strike, settings.market.r,
                                                  settings.market.sigma, tenure};
            row.bs93 = oracles::bjerksund_stensland_put(at_spot);
            row.european = oracles::bs_put(at_spot);

            for (double c : courants) {
                const Resolution res = size_grid(c, settings.lambda_squared, settings.market,
                                                 tenure, kAmericanDomain);
                const AmericanResult am = price_american(put, settings.market, res,
                                                         settings.mpdata, spot);
                const GridSpec grid = am.pricing.resolution.grid();
                std::vector<double> reference(grid.n_x);
                for (std::size_t i = 0; i < grid.n_x; ++i) {
                    reference[i] = oracles::bjerksund_stensland_put(
                        {std::exp(grid.center(i)), settings.strike, settings.market.r,
                         settings.market.sigma, tenure});
                }
                const double e = error_measure(am.pricing.solution, reference, grid.n_x, grid.n_t);
                row.log2_error.push_back(std::log2(e));
                row.resolutions.push_back(am.pricing.resolution);
                row.price = am.pricing.price;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace mpbs::analysis
