#pragma once

/**
 * @file finmodel.hpp
 * @brief Financial layer: change of variables, payoffs, grid sizing, pricing.
 *
 * The Black-Scholes equation is mapped onto a transport problem through
 *
 *   psi = exp(-r t) f(S, t),  x = ln S,  u = r - sigma^2/2,  nu = -sigma^2/2
 *
 * and solved backward from the discounted payoff at t = T. All internal
 * values are per unit notional.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpbs/mpdata.hpp"
#include "mpbs/transport.hpp"

namespace mpbs {

struct TransportCoefficients {
    double u;
    double nu;
};

/// Throws ConfigError for sigma <= 0.
TransportCoefficients transform_params(double r, double sigma);

struct MarketParams {
    double r = 0.0;
    double sigma = 0.0;

    double u() const { return r - 0.5 * sigma * sigma; }
    double nu() const { return -0.5 * sigma * sigma; }
    void validate() const;
};

enum class InstrumentKind { corridor, call, put, forward, american_put };

std::string_view to_string(InstrumentKind kind);
InstrumentKind parse_instrument_kind(std::string_view name);

struct InstrumentSpec {
    InstrumentKind kind = InstrumentKind::call;
    double strike = 0.0;        // K for single-strike kinds
    double lower_strike = 0.0;  // K1 (corridor)
    double upper_strike = 0.0;  // K2 (corridor)
    double notional = 1.0;
    double tenure = 0.0;        // T in years

    static InstrumentSpec corridor(double k1, double k2, double tenure);
    static InstrumentSpec call(double k, double tenure);
    static InstrumentSpec put(double k, double tenure);
    static InstrumentSpec forward(double k, double tenure);
    static InstrumentSpec american_put(double k, double tenure);

    void validate() const;
    /// Strikes in asset-price units (one or two entries).
    std::vector<double> strikes() const;
};

/// Payoff at expiry per unit notional.
double payoff(const InstrumentSpec& instrument, double s);

struct Domain {
    double s_min = 0.0;
    double s_max = 0.0;
};

/// Half-width of the default European domain, in units of sigma*sqrt(T) in log space.
inline constexpr double kDefaultDomainSigmas = 6.0;

/// [ln K_lo - m sigma sqrt(T), ln K_hi + m sigma sqrt(T)] mapped back to S.
Domain default_domain(const InstrumentSpec& instrument, const MarketParams& params,
                      double width_sigmas = kDefaultDomainSigmas);

/// Domain used for American puts.
inline constexpr Domain kAmericanDomain{0.5, 500.0};

/// Open for the corridor (flat wings), log-linear for everything else.
Boundary default_boundary(InstrumentKind kind);

struct Resolution {
    double target_courant = 0.0;
    double lambda_squared = 0.0;
    double courant = 0.0;  // realized |u| dt / dx
    double delta_x = 0.0;
    double delta_t = 0.0;
    std::size_t n_x = 0;
    std::size_t n_t = 0;
    double x_min = 0.0;  // left edge of cell 0
    Domain domain;

    GridSpec grid() const { return {x_min, delta_x, n_x, delta_t, n_t}; }
};

/**
 * dx = lambda^2 sigma^2 C / |u|, dt = C dx / |u|; then n_t = round(T/dt),
 * dt = T/n_t and dx = sqrt(lambda^2 sigma^2 dt) so lambda^2 is held exactly.
 * Throws ConfigError when u == 0.
 */
Resolution size_grid(double target_courant, double lambda_squared, const MarketParams& params,
                     double tenure, Domain domain);

/// Grid with an explicitly chosen step count at fixed lambda^2 (works for u == 0).
Resolution size_grid_steps(std::size_t n_t, double lambda_squared, const MarketParams& params,
                           double tenure, Domain domain);

/// Shifts the grid left by less than one cell so that a cell centre sits on ln(spot).
Resolution align_to_spot(Resolution resolution, double spot);

/**
 * exp(-rT) * payoff(exp(x_i)) at every cell centre. Appends a warning when a
 * strike lies within two cells of a domain edge.
 */
ScalarField terminal_condition(const InstrumentSpec& instrument, const MarketParams& params,
                               const GridSpec& grid, std::vector<std::string>* warnings = nullptr);

/// psi at ln(spot): the cell value on an exact centre, else linear interpolation.
double extract_price(const ScalarField& field, const GridSpec& grid, double spot);

struct SolverControls {
    std::optional<Boundary> boundary;  // default_boundary(kind) when empty
    bool allow_unstable = false;
};

struct PricingResult {
    double price = 0.0;  // per unit notional
    ScalarField solution;  // t = 0
    ScalarField terminal;  // t = T
    Resolution resolution;
    StabilityReport stability;
    IntegrationStats stats;
    MpdataOptions options;
    Boundary boundary = Boundary::open;
    std::vector<std::string> warnings;
};

/// terminal_condition -> integrate_backward -> extract_price.
PricingResult price_european(const InstrumentSpec& instrument, const MarketParams& params,
                             const Resolution& resolution, const MpdataOptions& options,
                             double spot, const SolverControls& controls = {});

/// Common plumbing for the European and American pipelines.
TransportProblem make_problem(const MarketParams& params, const Resolution& resolution,
                              Boundary boundary, bool allow_unstable);

}  // namespace mpbs
