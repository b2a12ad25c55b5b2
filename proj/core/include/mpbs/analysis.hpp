#pragma once

/**
 * @file analysis.hpp
 * @brief Error measure, convergence sweeps and the American-put table.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mpbs/finmodel.hpp"
#include "mpbs/mpdata.hpp"

namespace mpbs::analysis {

enum class Scheme { upwind, mpdata };

std::string_view to_string(Scheme scheme);

struct ConvergencePoint {
    double log2_abscissa = 0.0;  // log2(C) for spatial sweeps, log2(lambda^2) for temporal ones
    double log2_error = 0.0;
    Scheme scheme = Scheme::mpdata;
    Resolution config;
};

/**
 * E = sqrt( sum_i (numeric_i - analytic_i)^2 / (n_x n_t) ) over the interior
 * cells of `numeric` at t = 0.
 */
double error_measure(const ScalarField& numeric, std::span<const double> analytic,
                     std::size_t n_x, std::size_t n_t);

/// Corridor set-up shared by the convergence sweeps.
struct CorridorStudy {
    InstrumentSpec instrument = InstrumentSpec::corridor(0.0075, 0.0175, 0.5);
    MarketParams market{0.008, 0.6};
    double domain_sigmas = kDefaultDomainSigmas;
    MpdataOptions mpdata{2, true, true, true};
    int min_steps = 4;  // runs with fewer timesteps are excluded
};

/// The MPDATA options of `study`, or a single upwind pass.
MpdataOptions scheme_options(Scheme scheme, const MpdataOptions& mpdata);

struct SweepResult {
    std::vector<ConvergencePoint> points;
    std::vector<std::string> flagged;  // skipped configurations and why
};

/// One run of the study at a given resolution; returns E against the analytic corridor.
double corridor_error(const CorridorStudy& study, const Resolution& resolution, Scheme scheme);

/// Fixed lambda^2, one point per Courant number and scheme.
SweepResult sweep_spatial(double lambda_squared, std::span<const double> courants,
                          const CorridorStudy& study);

/// Fixed target Courant number, one point per lambda^2 and scheme.
SweepResult sweep_temporal(double courant, std::span<const double> lambdas,
                           const CorridorStudy& study);

/// Least-squares slope of log2 E against the abscissa; throws ConfigError with < 3 points.
double fit_order(std::span<const ConvergencePoint> points);
/// Same, restricted to one scheme.
double fit_order(std::span<const ConvergencePoint> points, Scheme scheme);

inline constexpr double kSweepCourants[] = {0.0025, 0.005, 0.01, 0.02};
inline constexpr double kSweepLambdas[] = {2.0, 4.0, 8.0, 16.0};

struct TableRow {
    double tenure = 0.0;
    double spot = 0.0;
    std::vector<double> log2_error;  // one per Courant target
    std::vector<Resolution> resolutions;
    double price = 0.0;  // at the last (finest) Courant target
    double bs93 = 0.0;
    double european = 0.0;
};

struct AmericanTableSettings {
    double strike = 100.0;
    MarketParams market{0.08, 0.2};
    double lambda_squared = 2.0;
    MpdataOptions mpdata{2, true, true, true};
    std::vector<double> tenures{0.25, 0.5, 3.0};
    std::vector<double> spots{80.0, 90.0, 100.0, 110.0, 120.0};
};

/// Prices every (T, S0) pair at every Courant target; E is measured against BS93 over the grid.
std::vector<TableRow> american_table(std::span<const double> courants,
                                     const AmericanTableSettings& settings = {});

}  // namespace mpbs::analysis
