#pragma once

/**
 * @file american.hpp
 * @brief American put as a linear complementarity problem.
 *
 * After every MPDATA step the solution is projected onto the discounted
 * exercise value at the step's destination time:
 *
 *   psi* = MPDATA(psi^n)
 *   R    = (max(psi*, floor(t^{n+1})) - psi*) / dt
 *   psi^{n+1} = psi* + dt R  (= max(psi*, floor) cellwise)
 */

#include <cstddef>

#include "mpbs/finmodel.hpp"
#include "mpbs/mpdata.hpp"

namespace mpbs {

/// Cells where the constraint was binding vs slack in one projection.
struct ComplementarityCount {
    std::size_t exercised = 0;
    std::size_t continued = 0;
};

/// exp(-r t) * max(K - S_i, 0) at every cell centre.
ScalarField exercise_floor(const InstrumentSpec& instrument, const MarketParams& params,
                           const GridSpec& grid, double t);

/// Cellwise max(psi*, floor). Throws ConfigError on mismatched layouts.
ScalarField lcp_step(const ScalarField& psi_star, const ScalarField& floor, double delta_t,
                     ComplementarityCount* count = nullptr);

struct AmericanResult {
    PricingResult pricing;
    ComplementarityCount totals;  // summed over all steps
};

/**
 * Backward integration with the projection applied after every full MPDATA
 * step. The grid is shifted so a cell centre sits on ln(spot); the boundary
 * defaults to log-linear.
 */
AmericanResult price_american(const InstrumentSpec& instrument, const MarketParams& params,
                              const Resolution& resolution, const MpdataOptions& options,
                              double spot, const SolverControls& controls = {});

}  // namespace mpbs
