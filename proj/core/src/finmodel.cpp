#include "mpbs/finmodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpbs/errors.hpp"

namespace mpbs {

TransportCoefficients transform_params(double r, double sigma) {
    MarketParams params{r, sigma};
    params.validate();
    return {params.u(), params.nu()};
}

void MarketParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("volatility must be positive");
    if (!std::isfinite(r)) throw ConfigError("interest rate must be finite");
}

std::string_view to_string(InstrumentKind kind) {
    switch (kind) {
        case InstrumentKind::corridor: return "corridor";
        case InstrumentKind::call: return "call";
        case InstrumentKind::put: return "put";
        case InstrumentKind::forward: return "forward";
        case InstrumentKind::american_put: return "american_put";
    }
    return "unknown";
}

InstrumentKind parse_instrument_kind(std::string_view name) {
    if (name == "corridor") return InstrumentKind::corridor;
    if (name == "call") return InstrumentKind::call;
    if (name == "put") return InstrumentKind::put;
    if (name == "forward") return InstrumentKind::forward;
    if (name == "american_put" || name == "american-put") return InstrumentKind::american_put;
    throw ConfigError("unknown instrument kind '" + std::string(name) + "'");
}

InstrumentSpec InstrumentSpec::corridor(double k1, double k2, double tenure) {
    InstrumentSpec s;
    s.kind = InstrumentKind::corridor;
    s.lower_strike = k1;
    s.upper_strike = k2;
    s.tenure = tenure;
    return s;
}

InstrumentSpec InstrumentSpec::call(double k, double tenure) {
    InstrumentSpec s;
    s.kind = InstrumentKind::call;
    s.strike = k;
    s.tenure = tenure;
    return s;
}

InstrumentSpec InstrumentSpec::put(double k, double tenure) {
    InstrumentSpec s = call(k, tenure);
    s.kind = InstrumentKind::put;
    return s;
}

InstrumentSpec InstrumentSpec::forward(double k, double tenure) {
    InstrumentSpec s = call(k, tenure);
    s.kind = InstrumentKind::forward;
    return s;
}

InstrumentSpec InstrumentSpec::american_put(double k, double tenure) {
    InstrumentSpec s = call(k, tenure);
    s.kind = InstrumentKind::american_put;
    return s;
}

void InstrumentSpec::validate() const {
    if (!(tenure > 0.0) || !std::isfinite(tenure)) throw ConfigError("tenure must be positive");
    if (!(notional > 0.0) || !std::isfinite(notional)) throw ConfigError("notional must be positive");
    if (kind == InstrumentKind::corridor) {
        if (!(lower_strike > 0.0 && upper_strike > lower_strike)) {
            throw ConfigError("corridor needs K2 > K1 > 0");
        }
    } else if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw ConfigError("strike must be positive");
    }
}

std::vector<double> InstrumentSpec::strikes() const {
    if (kind == InstrumentKind::corridor) return {lower_strike, upper_strike};
    return {strike};
}

double payoff(const InstrumentSpec& instrument, double s) {
    switch (instrument.kind) {
        case InstrumentKind::corridor:
            return std::max(s - instrument.lower_strike, 0.0) -
                   std::max(s - instrument.upper_strike, 0.0);
        case InstrumentKind::call:
            return std::max(s - instrument.strike, 0.0);
        case InstrumentKind::put:
        case InstrumentKind::american_put:
            return std::max(instrument.strike - s, 0.0);
        case InstrumentKind::forward:
            return s - instrument.strike;
    }
    return 0.0;
}

Domain default_domain(const InstrumentSpec& instrument, const MarketParams& params,
                      double width_sigmas) {
    if (instrument.kind == InstrumentKind::american_put) return kAmericanDomain;
    const auto ks = instrument.strikes();
    const double half = width_sigmas * params.sigma * std::sqrt(instrument.tenure);
    return {std::exp(std::log(ks.front()) - half), std::exp(std::log(ks.back()) + half)};
}

Boundary default_boundary(InstrumentKind kind) {
    return kind == InstrumentKind::corridor ? Boundary::open : Boundary::log_linear;
}

namespace {

void validate_domain(Domain domain) {
    if (!(domain.s_min > 0.0 && domain.s_max > domain.s_min) || !std::isfinite(domain.s_max)) {
        throw ConfigError("domain needs 0 < S_min < S_max");
    }
}

Resolution finish_resolution(Resolution res, const MarketParams& params, double tenure,
                             Domain domain, std::size_t n_t) {
    res.n_t = std::max<std::size_t>(n_t, 1);
    res.delta_t = tenure / static_cast<double>(res.n_t);
    res.delta_x = std::sqrt(res.lambda_squared * params.sigma * params.sigma * res.delta_t);
    const double span = std::log(domain.s_max / domain.s_min);
    res.n_x = static_cast<std::size_t>(std::ceil(span / res.delta_x - 1e-9));
    res.x_min = std::log(domain.s_min);
    res.domain = domain;
    res.courant = std::abs(params.u()) * res.delta_t / res.delta_x;
    return res;
}

}  // namespace

Resolution size_grid(double target_courant, double lambda_squared, const MarketParams& params,
                     double tenure, Domain domain) {
    params.validate();
    validate_domain(domain);
    if (!(target_courant > 0.0)) throw ConfigError("target Courant number must be positive");
    if (!(lambda_squared > 0.0)) throw ConfigError("lambda^2 must be positive");
    if (!(tenure > 0.0)) throw ConfigError("tenure must be positive");
    const double speed = std::abs(params.u());
    // r = sigma^2/2 leaves only rounding noise in u
    if (speed <= 1e-12 * std::max(std::abs(params.r), params.sigma * params.sigma)) {
        throw ConfigError("u = r - sigma^2/2 vanishes; Courant targeting is undefined, give n_t instead");
    }

    Resolution res;
    res.target_courant = target_courant;
    res.lambda_squared = lambda_squared;
    const double dx = lambda_squared * params.sigma * params.sigma * target_courant / speed;
    const double dt = target_courant * dx / speed;
    const auto n_t = static_cast<std::size_t>(std::llround(tenure / dt));
    return finish_resolution(res, params, tenure, domain, n_t);
}

Resolution size_grid_steps(std::size_t n_t, double lambda_squared, const MarketParams& params,
                           double tenure, Domain domain) {
    params.validate();
    validate_domain(domain);
    if (n_t == 0) throw ConfigError("need at least one timestep");
    if (!(lambda_squared > 0.0)) throw ConfigError("lambda^2 must be positive");
    if (!(tenure > 0.0)) throw ConfigError("tenure must be positive");
    Resolution res;
    res.lambda_squared = lambda_squared;
    res = finish_resolution(res, params, tenure, domain, n_t);
    res.target_courant = res.courant;
    return res;
}

Resolution align_to_spot(Resolution res, double spot) {
    if (!(spot > res.domain.s_min && spot < res.domain.s_max)) {
        std::ostringstream msg;
        msg << "spot " << spot << " outside the domain (" << res.domain.s_min << ", "
            << res.domain.s_max << ")";
        throw ConfigError(msg.str());
    }
    const double x0 = std::log(spot);
    const double lo = std::log(res.domain.s_min);
    const double hi = std::log(res.domain.s_max);
    // Cells to the left of the spot cell, so that x_min <= ln(S_min).
    const double k = std::ceil((x0 - lo) / res.delta_x - 0.5 - 1e-12);
    res.x_min = x0 - (k + 0.5) * res.delta_x;
    res.n_x = static_cast<std::size_t>(std::ceil((hi - res.x_min) / res.delta_x - 1e-9));
    return res;
}

ScalarField terminal_condition(const InstrumentSpec& instrument, const MarketParams& params,
                               const GridSpec& grid, std::vector<std::string>* warnings) {
    const double discount = std::exp(-params.r * instrument.tenure);
    ScalarField field(grid.n_x);
    auto psi = field.interior();
    for (std::size_t i = 0; i < grid.n_x; ++i) {
        psi[i] = discount * payoff(instrument, std::exp(grid.center(i)));
    }

    if (warnings) {
        const double margin = 2.0 * grid.delta_x;
        for (double k : instrument.strikes()) {
            const double xk = std::log(k);
            if (xk < grid.x_min + margin || xk > grid.x_max() - margin) {
                std::ostringstream msg;
                msg << "strike " << k << " lies within two cells of the domain edge";
                warnings->push_back(msg.str());
            }
        }
    }
    return field;
}

double extract_price(const ScalarField& field, const GridSpec& grid, double spot) {
    if (!(spot > 0.0)) throw ConfigError("spot must be positive");
    const double p = (std::log(spot) - grid.x_min) / grid.delta_x - 0.5;
    const double last = static_cast<double>(grid.n_x) - 1.0;
    const double nearest = std::round(p);
    if (std::abs(p - nearest) < 1e-9 && nearest >= 0.0 && nearest <= last) {
        return field[static_cast<std::ptrdiff_t>(nearest)];
    }
    if (!(p >= 0.0 && p <= last)) {
        std::ostringstream msg;
        msg << "spot " << spot << " is outside the grid interior";
        throw ConfigError(msg.str());
    }
    const auto i = static_cast<std::ptrdiff_t>(std::floor(p));
    const double w = p - static_cast<double>(i);
    return (1.0 - w) * field[i] + w * field[i + 1];
}

TransportProblem make_problem(const MarketParams& params, const Resolution& resolution,
                              Boundary boundary, bool allow_unstable) {
    TransportProblem problem;
    problem.u = params.u();
    problem.nu = params.nu();
    problem.grid = resolution.grid();
    problem.boundary = boundary;
    problem.allow_unstable = allow_unstable;
    return problem;
}

PricingResult price_european(const InstrumentSpec& instrument, const MarketParams& params,
                             const Resolution& resolution, const MpdataOptions& options,
                             double spot, const SolverControls& controls) {
    instrument.validate();
    params.validate();

    PricingResult result;
    result.resolution = resolution;
    result.options = options;
    result.boundary = controls.boundary.value_or(default_boundary(instrument.kind));

    const TransportProblem problem =
        make_problem(params, resolution, result.boundary, controls.allow_unstable);
    problem.validate();
    result.stability = check_stability(problem, params.sigma);
    if (!result.stability.satisfied && !controls.allow_unstable) {
        std::ostringstream msg;
        msg << "stability bound violated: lambda^2 = " << result.stability.lambda_squared
            << ", governing Courant estimate " << result.stability.max_effective_courant
            << " > " << result.stability.bound;
        throw StabilityError(msg.str());
    }

    InstrumentSpec european = instrument;
    if (european.kind == InstrumentKind::american_put) european.kind = InstrumentKind::put;
    result.terminal = terminal_condition(european, params, problem.grid, &result.warnings);
    result.solution = integrate_backward(problem, result.terminal, options, {}, &result.stats);
    result.price = extract_price(result.solution, problem.grid, spot);
    return result;
}

}  // namespace mpbs
